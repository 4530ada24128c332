//! The additive quotient by the standard cluster on dyadic objects: formal
//! sums, scalar matrices of basic morphisms, and kernels and cokernels
//! computed on the module side.

// matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::band::Obj;
use crate::cluster::{member, ClusterPt};
use crate::equiv::{obj_to_string, string_to_obj};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::strings::{
    basic_graph_map, decompose_rep_split, graph_maps, rep_cokernel, rep_kernel, sum_of_words,
    RepFin, RepMor, StringWord,
};
use crate::walk::{composite_survives, concrete_epsilon, hom_ct_dim, s_eps, support};

type Q = BigRational;

/// A finite direct sum of indecomposables, with cluster summands dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Obj>", into = "Vec<Obj>")]
pub struct SumObj {
    summands: Vec<Obj>,
}

impl From<Vec<Obj>> for SumObj {
    fn from(v: Vec<Obj>) -> SumObj {
        SumObj::new(v)
    }
}

impl From<SumObj> for Vec<Obj> {
    fn from(s: SumObj) -> Vec<Obj> {
        s.summands
    }
}

impl SumObj {
    pub fn new(objs: Vec<Obj>) -> SumObj {
        SumObj {
            summands: objs.into_iter().filter(|o| member(o).is_none()).collect(),
        }
    }

    pub fn zero() -> SumObj {
        SumObj::default()
    }

    pub fn single(x: Obj) -> SumObj {
        SumObj::new(vec![x])
    }

    pub fn summands(&self) -> &[Obj] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Isomorphism: equality as multisets.
    pub fn iso(&self, other: &SumObj) -> bool {
        let mut a = self.summands.clone();
        let mut b = other.summands.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Total size of the supports, i.e. the length of the module.
    pub fn length(&self) -> Result<usize> {
        self.summands.iter().map(|x| Ok(support(x)?.len())).sum()
    }
}

impl fmt::Display for SumObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A morphism of sums: `entries[i][j]` scales the basic map `src_j -> dst_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorQ {
    src: SumObj,
    dst: SumObj,
    entries: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize)]
struct MorQJson {
    src: Vec<Obj>,
    dst: Vec<Obj>,
    entries: Vec<Vec<String>>,
}

impl MorQ {
    /// Checks shapes and that nonzero entries sit on nonzero Hom spaces;
    /// rows and columns of cluster summands are dropped.
    pub fn new(src: Vec<Obj>, dst: Vec<Obj>, entries: Vec<Vec<Q>>) -> Result<MorQ> {
        if entries.len() != dst.len() || entries.iter().any(|r| r.len() != src.len()) {
            return Err(Error::ShapeMismatch(format!(
                "{} targets x {} sources",
                dst.len(),
                src.len()
            )));
        }
        let keep_src: Vec<usize> = (0..src.len())
            .filter(|&j| member(&src[j]).is_none())
            .collect();
        let keep_dst: Vec<usize> = (0..dst.len())
            .filter(|&i| member(&dst[i]).is_none())
            .collect();
        let mut kept = Vec::new();
        for &i in &keep_dst {
            let mut row = Vec::new();
            for &j in &keep_src {
                let c = entries[i][j].clone();
                if !c.is_zero() && hom_ct_dim(&src[j], &dst[i]) == 0 {
                    return Err(Error::NoMorphism(format!("{} -> {}", src[j], dst[i])));
                }
                row.push(c);
            }
            kept.push(row);
        }
        Ok(MorQ {
            src: SumObj::new(src),
            dst: SumObj::new(dst),
            entries: kept,
        })
    }

    pub fn zero(src: &SumObj, dst: &SumObj) -> MorQ {
        MorQ {
            src: src.clone(),
            dst: dst.clone(),
            entries: vec![vec![Q::zero(); src.len()]; dst.len()],
        }
    }

    pub fn identity(x: &SumObj) -> MorQ {
        let mut m = MorQ::zero(x, x);
        for i in 0..x.len() {
            m.entries[i][i] = Q::one();
        }
        m
    }

    /// `c` times the basic map `x -> y`.
    pub fn basic(x: &Obj, y: &Obj, c: Q) -> Result<MorQ> {
        MorQ::new(vec![x.clone()], vec![y.clone()], vec![vec![c]])
    }

    pub fn src(&self) -> &SumObj {
        &self.src
    }

    pub fn dst(&self) -> &SumObj {
        &self.dst
    }

    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.entries[i][j]
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> MorQ {
        MorQ {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = MorQJson {
            src: self.src.summands.clone(),
            dst: self.dst.summands.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect(),
        };
        serde_json::to_value(j).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MorQ> {
        let j: MorQJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = j
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        Q::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad scalar {s:?}")))
                    })
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MorQ::new(j.src, j.dst, entries)
    }
}

impl fmt::Display for MorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// `g . f`. A product of basics survives only when the composite does.
pub fn compose(g: &MorQ, f: &MorQ) -> Result<MorQ> {
    if f.dst != g.src {
        return Err(Error::ShapeMismatch(format!("{} vs {}", f.dst, g.src)));
    }
    let (xs, ys, zs) = (f.src.summands(), f.dst.summands(), g.dst.summands());
    let mut out = MorQ::zero(&f.src, &g.dst);
    for i in 0..zs.len() {
        for k in 0..xs.len() {
            let mut acc = Q::zero();
            for j in 0..ys.len() {
                let (a, b) = (&g.entries[i][j], &f.entries[j][k]);
                if !a.is_zero() && !b.is_zero() && composite_survives(&xs[k], &ys[j], &zs[i]) {
                    acc += a * b;
                }
            }
            out.entries[i][k] = acc;
        }
    }
    Ok(out)
}

pub fn hom_dim(a: &SumObj, b: &SumObj) -> u32 {
    a.summands
        .iter()
        .flat_map(|x| b.summands.iter().map(move |y| hom_ct_dim(x, y)))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_zero: bool,
    pub is_mono: bool,
    pub is_epi: bool,
    pub is_iso: bool,
}

/// The matrix `f` induces on `Hom(tau^-1 S, -)`.
pub fn induced_matrix(f: &MorQ, s: &ClusterPt) -> Result<Mat> {
    let so = s.object();
    let on = |objs: &[Obj]| -> Result<Vec<usize>> {
        let mut v = Vec::new();
        for (i, x) in objs.iter().enumerate() {
            if support(x)?.contains(s) {
                v.push(i);
            }
        }
        Ok(v)
    };
    let cols = on(f.src.summands())?;
    let rows = on(f.dst.summands())?;
    let mut m = Mat::zeros(rows.len(), cols.len());
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            let v = &f.entries[i][j];
            if v.is_zero() {
                continue;
            }
            let (x, y) = (&f.src.summands()[j], &f.dst.summands()[i]);
            let eps = concrete_epsilon([&so, x, y]);
            if composite_survives(&s_eps(s, &eps), x, y) {
                m[(r, c)] = v.clone();
            }
        }
    }
    Ok(m)
}

pub fn classify(f: &MorQ) -> Result<Classification> {
    let mut pts = BTreeSet::new();
    for x in f.src.summands().iter().chain(f.dst.summands()) {
        pts.extend(support(x)?);
    }
    let (mut zero, mut mono, mut epi) = (true, true, true);
    for s in &pts {
        let m = induced_matrix(f, s)?;
        let r = m.rank();
        zero &= r == 0;
        mono &= r == m.cols();
        epi &= r == m.rows();
    }
    Ok(Classification {
        is_zero: zero,
        is_mono: mono,
        is_epi: epi,
        is_iso: mono && epi,
    })
}

/// Module-side picture of a morphism between sums.
struct Modules {
    src_words: Vec<StringWord>,
    dst_words: Vec<StringWord>,
    src: RepFin,
    dst: RepFin,
    src_off: Vec<BTreeMap<ClusterPt, usize>>,
    dst_off: Vec<BTreeMap<ClusterPt, usize>>,
    map: RepMor,
}

fn to_modules(f: &MorQ) -> Result<Modules> {
    let words = |s: &SumObj| {
        s.summands()
            .iter()
            .map(obj_to_string)
            .collect::<Result<Vec<_>>>()
    };
    let src_words = words(&f.src)?;
    let dst_words = words(&f.dst)?;
    let (src, src_off) = sum_of_words(&src_words);
    let (dst, dst_off) = sum_of_words(&dst_words);
    let mut maps: BTreeMap<ClusterPt, Mat> = BTreeMap::new();
    for (i, wi) in dst_words.iter().enumerate() {
        for (j, wj) in src_words.iter().enumerate() {
            let c = &f.entries[i][j];
            if c.is_zero() {
                continue;
            }
            let g = basic_graph_map(wj, wi)?;
            for v in g.vertices(wj) {
                let m = maps
                    .entry(v)
                    .or_insert_with(|| Mat::zeros(dst.dim(v), src.dim(v)));
                m[(dst_off[i][&v], src_off[j][&v])] += c;
            }
        }
    }
    Ok(Modules {
        src_words,
        dst_words,
        src,
        dst,
        src_off,
        dst_off,
        map: RepMor { maps },
    })
}

/// Kernel object and its inclusion.
pub fn kernel(f: &MorQ) -> Result<(SumObj, MorQ)> {
    let md = to_modules(f)?;
    let (k, incl) = rep_kernel(&md.src, &md.dst, &md.map);
    let parts = decompose_rep_split(&k)?;
    let mut objs = Vec::new();
    let mut cols = Vec::new();
    for part in &parts {
        objs.push(string_to_obj(&part.word)?);
        // the summand inside the source, in source coordinates
        let inside: BTreeMap<ClusterPt, Vec<Q>> = part
            .embed
            .iter()
            .map(|(v, e)| {
                let col = Mat::from_cols(e.len(), std::slice::from_ref(e));
                (*v, incl.at(*v, &k, &md.src).mul(&col).col(0))
            })
            .collect();
        let mut col = Vec::new();
        for (j, wj) in md.src_words.iter().enumerate() {
            col.push(read_scalar(&part.word, wj, |v| {
                inside[&v][md.src_off[j][&v]].clone()
            }));
        }
        cols.push(col);
    }
    let entries = (0..f.src.len())
        .map(|j| cols.iter().map(|c| c[j].clone()).collect())
        .collect();
    let inc = MorQ::new(objs, f.src.summands.clone(), entries)?;
    Ok((inc.src.clone(), inc))
}

/// Cokernel object and its projection.
pub fn cokernel(f: &MorQ) -> Result<(SumObj, MorQ)> {
    let md = to_modules(f)?;
    let (c, proj) = rep_cokernel(&md.src, &md.dst, &md.map);
    let parts = decompose_rep_split(&c)?;
    let mut objs = Vec::new();
    let mut rows = Vec::new();
    for part in &parts {
        objs.push(string_to_obj(&part.word)?);
        // projection onto the summand, as row vectors on target coordinates
        let onto: BTreeMap<ClusterPt, Vec<Q>> = part
            .project
            .iter()
            .map(|(v, p)| {
                let row = Mat::from_rows(1, p.len(), p.clone());
                (*v, row.mul(&proj.at(*v, &md.dst, &c)).row(0))
            })
            .collect();
        let mut row = Vec::new();
        for (i, wi) in md.dst_words.iter().enumerate() {
            row.push(read_scalar(wi, &part.word, |v| {
                onto[&v][md.dst_off[i][&v]].clone()
            }));
        }
        rows.push(row);
    }
    let proj = MorQ::new(f.dst.summands.clone(), objs, rows)?;
    Ok((proj.dst.clone(), proj))
}

/// The scalar of a module map `a -> b` on the basic graph map, read at one
/// vertex of its image; zero when there is no graph map.
fn read_scalar(a: &StringWord, b: &StringWord, at: impl Fn(ClusterPt) -> Q) -> Q {
    match graph_maps(a, b).first() {
        Some(g) => at(a.vertices[g.src.0]),
        None => Q::zero(),
    }
}

/// Some `h` with `via . h = g`, if one exists.
pub fn factor_through(g: &MorQ, via: &MorQ) -> Result<Option<MorQ>> {
    if via.dst != g.dst {
        return Err(Error::ShapeMismatch(format!("{} vs {}", via.dst, g.dst)));
    }
    let (zs, ks, xs) = (g.src.summands(), via.src.summands(), g.dst.summands());
    solve_bilinear(
        zs,
        ks,
        xs,
        |a, k, x| {
            // coefficient of h[a][k] in (via . h)[x][k]
            let c = &via.entries[x][a];
            if !c.is_zero() && composite_survives(&zs[k], &ks[a], &xs[x]) {
                c.clone()
            } else {
                Q::zero()
            }
        },
        &g.entries,
    )
    .map(|h| {
        h.map(|e| MorQ {
            src: g.src.clone(),
            dst: via.src.clone(),
            entries: e,
        })
    })
}

/// Some `h` with `h . via = g`, if one exists.
pub fn factor_from(g: &MorQ, via: &MorQ) -> Result<Option<MorQ>> {
    if via.src != g.src {
        return Err(Error::ShapeMismatch(format!("{} vs {}", via.src, g.src)));
    }
    let (ys, cs, zs) = (g.src.summands(), via.dst.summands(), g.dst.summands());
    // unknown h[z][c]; (h . via)[z][y] = sum_c h[z][c] via[c][y]
    let n_unknown = zs.len() * cs.len();
    let slot = |z: usize, c: usize| z * cs.len() + c;
    let mut a = Mat::zeros(zs.len() * ys.len(), n_unknown);
    let mut b = Mat::zeros(zs.len() * ys.len(), 1);
    for z in 0..zs.len() {
        for y in 0..ys.len() {
            let r = z * ys.len() + y;
            b[(r, 0)] = g.entries[z][y].clone();
            for c in 0..cs.len() {
                let v = &via.entries[c][y];
                if hom_ct_dim(&cs[c], &zs[z]) == 1
                    && !v.is_zero()
                    && composite_survives(&ys[y], &cs[c], &zs[z])
                {
                    a[(r, slot(z, c))] = v.clone();
                }
            }
        }
    }
    Ok(a.solve(&b).map(|x| MorQ {
        src: via.dst.clone(),
        dst: g.dst.clone(),
        entries: (0..zs.len())
            .map(|z| (0..cs.len()).map(|c| x[(slot(z, c), 0)].clone()).collect())
            .collect(),
    }))
}

/// Solves `sum_a coef(a, k, x) h[a][k] = target[x][k]` for `h`, with
/// `h[a][k]` allowed only where `Hom(zs[k], ks[a]) != 0`.
fn solve_bilinear(
    zs: &[Obj],
    ks: &[Obj],
    xs: &[Obj],
    coef: impl Fn(usize, usize, usize) -> Q,
    target: &[Vec<Q>],
) -> Result<Option<Vec<Vec<Q>>>> {
    let slot = |a: usize, k: usize| a * zs.len() + k;
    let mut m = Mat::zeros(xs.len() * zs.len(), ks.len() * zs.len());
    let mut b = Mat::zeros(xs.len() * zs.len(), 1);
    for x in 0..xs.len() {
        for k in 0..zs.len() {
            let r = x * zs.len() + k;
            b[(r, 0)] = target[x][k].clone();
            for a in 0..ks.len() {
                if hom_ct_dim(&zs[k], &ks[a]) == 1 {
                    m[(r, slot(a, k))] = coef(a, k, x);
                }
            }
        }
    }
    Ok(m.solve(&b).map(|sol| {
        (0..ks.len())
            .map(|a| {
                (0..zs.len())
                    .map(|k| sol[(slot(a, k), 0)].clone())
                    .collect()
            })
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn m(s: &str) -> Obj {
        s.parse().unwrap()
    }

    fn basic(a: &str, b: &str) -> MorQ {
        MorQ::basic(&m(a), &m(b), Q::one()).unwrap()
    }

    #[test]
    fn composition() {
        let f = basic("M(1/8,1/4)", "M(1/4,3/4)");
        let id = MorQ::identity(f.dst());
        assert_eq!(compose(&id, &f).unwrap(), f);
        // the second factor is already zero in the quotient
        assert_eq!(hom_ct_dim(&m("M(1/8,1/4)"), &m("M(1/2,9/8)")), 0);
        assert!(MorQ::basic(&m("M(1/4,3/4)"), &m("M(1/2,9/8)"), Q::one()).is_err());
        // two nonzero basics whose composite vanishes
        let f1 = basic("M(0,1/4)", "M(1/4,1/4)");
        let g1 = basic("M(1/4,1/4)", "M(1/4,3/4)");
        assert!(compose(&g1, &f1).unwrap().is_zero_matrix());
        let g2 = basic("M(1/4,3/4)", "M(1/4,3/4)").scale(&q(5));
        let fa = f.scale(&q(3));
        assert_eq!(compose(&g2, &fa).unwrap(), f.scale(&q(15)));
        assert!(matches!(compose(&f, &f), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn classification() {
        let x = SumObj::single(m("M(1/8,1/4)"));
        let c = classify(&MorQ::identity(&x)).unwrap();
        assert!(c.is_iso && c.is_mono && c.is_epi && !c.is_zero);
        let c = classify(&basic("M(1/8,1/4)", "M(1/4,3/4)")).unwrap();
        assert!(!c.is_mono && !c.is_epi && !c.is_zero);
        let y = m("M(1/4,3/4)");
        let diag = MorQ::new(
            vec![y.clone()],
            vec![y.clone(), y.clone()],
            vec![vec![q(1)], vec![q(1)]],
        )
        .unwrap();
        let c = classify(&diag).unwrap();
        assert!(c.is_mono && !c.is_epi);
    }

    #[test]
    fn kernels_and_cokernels() {
        let f = basic("M(1/8,1/4)", "M(1/4,3/4)");
        let (k, inc) = kernel(&f).unwrap();
        assert!(k.iso(&SumObj::new(vec![m("M(1/2,9/8)"), m("M(0,1/4)")])));
        assert!(compose(&f, &inc).unwrap().is_zero_matrix());
        assert!(classify(&inc).unwrap().is_mono);
        let (c, proj) = cokernel(&f).unwrap();
        assert!(c.iso(&SumObj::single(m("M(1,3/4)"))));
        assert!(compose(&proj, &f).unwrap().is_zero_matrix());
        assert!(classify(&proj).unwrap().is_epi);

        let x = SumObj::single(m("M(1/8,1/4)"));
        let id = MorQ::identity(&x);
        assert!(kernel(&id).unwrap().0.is_zero());
        assert!(cokernel(&id).unwrap().0.is_zero());
        let y = SumObj::single(m("M(1/4,3/4)"));
        let z = MorQ::zero(&x, &y);
        assert!(kernel(&z).unwrap().0.iso(&x));
        assert!(cokernel(&z).unwrap().0.iso(&y));
    }

    #[test]
    fn hom_dims() {
        let a = SumObj::single(m("M(1/8,1/4)"));
        let b = SumObj::single(m("M(1/4,3/4)"));
        assert_eq!(hom_dim(&a, &b), 1);
        assert_eq!(hom_dim(&b, &a), 0);
        let ab = SumObj::new(vec![m("M(1/8,1/4)"), m("M(1/4,3/4)")]);
        assert!(hom_dim(&ab, &ab) >= 2);
    }

    #[test]
    fn json_round_trip() {
        let f = basic("M(1/8,1/4)", "M(1/4,3/4)").scale(&(q(1) / q(2)));
        let j = f.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"dst":["M(1/4,3/4)"],"entries":[["1/2"]],"src":["M(1/8,1/4)"]}"#
        );
        assert_eq!(MorQ::from_json(&j).unwrap(), f);
        let bad =
            serde_json::json!({"src": ["M(1/4,3/4)"], "dst": ["M(1/8,1/4)"], "entries": [["1"]]});
        assert!(matches!(MorQ::from_json(&bad), Err(Error::NoMorphism(_))));
    }
}
