//! The acceptance checks, each run over the grid of objects whose canonical
//! coordinates are multiples of `1/2^depth`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::band::hom_c_dim;
use crate::band::{compatible, crossing, grid, triangle_complete, Obj, TriangleKind};
use crate::cluster::{member, mutate_standard, ClusterOverlay, ClusterPt};
use crate::equiv::{
    check_outward, coords_to_digits, digits_to_coords, digits_to_point, f_strip, g_extend,
    obj_to_string, string_to_obj, DigitPrefix,
};
use crate::quotient::{
    classify, cokernel, compose, factor_from, factor_through, kernel, MorQ, SumObj,
};
use crate::strings::{hom_dim_strings, StringWord};
use crate::walk::{approximation, composite_nonzero_in_c, support, tau_dims, walk_of};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Grid objects that are not cluster points.
pub fn off_cluster(depth: u32) -> Vec<Obj> {
    grid(depth)
        .into_iter()
        .filter(|o| member(o).is_none())
        .collect()
}

fn obj(s: &str) -> Obj {
    s.parse().expect("literal object")
}

pub const NAMES: [&str; 11] = [
    "hom agreement",
    "bijection round trips",
    "support equals walk interior",
    "approximation exactness",
    "AR duality and four-term sequence",
    "abelianness consequences",
    "mono and epi implies iso",
    "mutation",
    "compatibility equals non-crossing",
    "digit addressing",
    "F after G is the identity",
];

pub fn run(id: u32, depth: u32) -> Outcome {
    let r = match id {
        1 => hom_agreement(depth),
        2 => bijection(depth),
        3 => support_is_walk_interior(depth),
        4 => approximations(depth),
        5 => duality(depth),
        6 => abelian(depth),
        7 => mono_epi_iso(depth),
        8 => mutation(depth),
        9 => non_crossing(depth),
        10 => digits(),
        11 => f_after_g(depth),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed,
        detail,
    }
}

pub fn run_all(depth: u32) -> Vec<Outcome> {
    (1..=11).map(|i| run(i, depth)).collect()
}

fn words(objs: &[Obj]) -> std::result::Result<Vec<StringWord>, String> {
    objs.iter().map(|x| lib(obj_to_string(x))).collect()
}

pub fn hom_agreement(depth: u32) -> Check {
    let objs = off_cluster(depth);
    let ws = words(&objs)?;
    let mut n = 0;
    for (x, wx) in objs.iter().zip(&ws) {
        for (y, wy) in objs.iter().zip(&ws) {
            let a = crate::walk::hom_ct_dim(x, y);
            let b = hom_dim_strings(wx, wy);
            ensure(a == b && b <= 1, || {
                format!("{x} -> {y}: objects {a}, strings {b}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} ordered pairs"))
}

pub fn bijection(depth: u32) -> Check {
    let objs = off_cluster(depth);
    for x in &objs {
        let w = lib(obj_to_string(x))?;
        let back = lib(string_to_obj(&w))?;
        ensure(&back == x, || format!("{x} -> {w} -> {back}"))?;
        let again = lib(obj_to_string(&back))?;
        ensure(again == w, || format!("{w} -> {back} -> {again}"))?;
    }
    Ok(format!("{} objects", objs.len()))
}

pub fn support_is_walk_interior(depth: u32) -> Check {
    let pts = |v: &[(u32, i64)]| -> BTreeSet<ClusterPt> {
        v.iter().map(|&(n, m)| ClusterPt::new(n, m)).collect()
    };
    let s = lib(support(&obj("M(1/4,3/4)")))?;
    ensure(s == pts(&[(0, 0), (1, 0), (1, 1)]), || {
        format!("support(M(1/4,3/4)) = {s:?}")
    })?;
    let s = lib(support(&obj("M(1/8,1/4)")))?;
    ensure(s == pts(&[(0, 0), (1, 1), (1, 3), (2, 1)]), || {
        format!("support(M(1/8,1/4)) = {s:?}")
    })?;
    let objs = off_cluster(depth);
    for x in &objs {
        let w = lib(walk_of(x))?;
        let inner: BTreeSet<ClusterPt> = w.interior().iter().map(|v| v.pt).collect();
        let s = lib(support(x))?;
        ensure(inner == s, || {
            format!("{x}: support {s:?}, walk interior {inner:?}")
        })?;
    }
    Ok(format!("{} objects and both worked values", objs.len()))
}

pub fn approximations(depth: u32) -> Check {
    let objs = off_cluster(depth);
    let cluster = ClusterPt::all_to_depth(depth + 1);
    let mut maps = 0;
    for x in &objs {
        let a = lib(approximation(x))?;
        ensure(a.is_balanced(x), || {
            format!("{x}: coordinates do not balance")
        })?;
        let sinks: Vec<Obj> = a.sinks.iter().map(|(p, _)| p.object()).collect();
        for s in &cluster {
            let so = s.object();
            if hom_c_dim(&so, x) == 0 {
                continue;
            }
            maps += 1;
            let through = sinks.iter().any(|b| {
                hom_c_dim(&so, b) == 1 && hom_c_dim(b, x) == 1 && composite_nonzero_in_c(&so, b, x)
            });
            ensure(through, || format!("{s} -> {x} misses every sink"))?;
        }
    }
    Ok(format!(
        "{} objects, {maps} maps from the cluster",
        objs.len()
    ))
}

pub fn duality(depth: u32) -> Check {
    let objs = off_cluster(depth);
    let cluster = ClusterPt::all_to_depth(depth + 1);
    for x in &objs {
        for s in &cluster {
            let t = lib(tau_dims(s, x))?;
            ensure(t.tau == t.tau_inv, || format!("{s}, {x}: {t:?}"))?;
            ensure(t.alternating_sum() == 0, || format!("{s}, {x}: {t:?}"))?;
        }
    }
    Ok(format!("{} pairs", objs.len() * cluster.len()))
}

/// Every nonzero basic map between grid objects.
pub fn basics(depth: u32) -> Vec<(Obj, Obj)> {
    let objs = off_cluster(depth);
    let mut out = Vec::new();
    for x in &objs {
        for y in &objs {
            if crate::walk::hom_ct_dim(x, y) == 1 {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

/// A deterministic spread of `k` items.
fn sample<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    (0..k).map(|i| v[i * v.len() / k].clone()).collect()
}

fn one() -> BigRational {
    BigRational::one()
}

pub fn abelian(depth: u32) -> Check {
    let f = lib(MorQ::basic(&obj("M(1/8,1/4)"), &obj("M(1/4,3/4)"), one()))?;
    let (k, _) = lib(kernel(&f))?;
    let want = SumObj::new(vec![obj("M(1/2,9/8)"), obj("M(0,1/4)")]);
    ensure(k.iso(&want), || format!("worked kernel {k}"))?;
    let (c, _) = lib(cokernel(&f))?;
    ensure(c.iso(&SumObj::single(obj("M(1,3/4)"))), || {
        format!("worked cokernel {c}")
    })?;

    let all = basics(depth);
    for (x, y) in &all {
        let f = lib(MorQ::basic(x, y, one()))?;
        let (k, inc) = lib(kernel(&f))?;
        let (c, proj) = lib(cokernel(&f))?;
        let tag = || format!("{x} -> {y}");
        ensure(lib(compose(&f, &inc))?.is_zero_matrix(), || {
            format!("{}: f.incl != 0", tag())
        })?;
        ensure(lib(compose(&proj, &f))?.is_zero_matrix(), || {
            format!("{}: proj.f != 0", tag())
        })?;
        ensure(lib(classify(&inc))?.is_mono, || {
            format!("{}: inclusion not mono", tag())
        })?;
        ensure(lib(classify(&proj))?.is_epi, || {
            format!("{}: projection not epi", tag())
        })?;
        let len = |s: &SumObj| lib(s.length()).map(|v| v as i64);
        let ex = len(&k)? - len(&SumObj::single(x.clone()))? + len(&SumObj::single(y.clone()))?
            - len(&c)?;
        ensure(ex == 0, || format!("{}: lengths off by {ex}", tag()))?;
    }

    let objs = off_cluster(depth);
    let picked = sample(&all, 100);
    let mut tests = 0;
    for (x, y) in &picked {
        let f = lib(MorQ::basic(x, y, one()))?;
        let (_, inc) = lib(kernel(&f))?;
        let (_, proj) = lib(cokernel(&f))?;
        for z in &objs {
            if crate::walk::hom_ct_dim(z, x) == 1 {
                let g = lib(MorQ::basic(z, x, one()))?;
                let dies = lib(compose(&f, &g))?.is_zero_matrix();
                let h = lib(factor_through(&g, &inc))?;
                ensure(dies == h.is_some(), || {
                    format!("{z} -> {x} against ker({x} -> {y}): dies {dies}")
                })?;
                if let Some(h) = h {
                    ensure(lib(compose(&inc, &h))? == g, || {
                        format!("{z}: bad factorization")
                    })?;
                }
                tests += 1;
            }
            if crate::walk::hom_ct_dim(y, z) == 1 {
                let g = lib(MorQ::basic(y, z, one()))?;
                let dies = lib(compose(&g, &f))?.is_zero_matrix();
                let h = lib(factor_from(&g, &proj))?;
                ensure(dies == h.is_some(), || {
                    format!("{y} -> {z} against coker({x} -> {y}): dies {dies}")
                })?;
                if let Some(h) = h {
                    ensure(lib(compose(&h, &proj))? == g, || {
                        format!("{z}: bad factorization")
                    })?;
                }
                tests += 1;
            }
        }
    }
    Ok(format!(
        "{} basic maps; {tests} universal-property tests on {} sampled maps",
        all.len(),
        picked.len()
    ))
}

pub fn mono_epi_iso(depth: u32) -> Check {
    let all = basics(depth);
    let mut maps = Vec::new();
    for (x, y) in &all {
        maps.push(lib(MorQ::basic(x, y, one()))?);
    }
    for (x, y) in sample(&all, 100) {
        let f = lib(MorQ::basic(&x, &y, one()))?;
        maps.push(lib(kernel(&f))?.1);
        maps.push(lib(cokernel(&f))?.1);
    }
    let mut isos = 0;
    for f in &maps {
        let c = lib(classify(f))?;
        ensure(c.is_iso == (c.is_mono && c.is_epi), || {
            format!("{f}: inconsistent")
        })?;
        ensure(c.is_zero == f.is_zero_matrix(), || {
            format!("{f}: zero test disagrees")
        })?;
        if c.is_iso {
            isos += 1;
            ensure(f.src().iso(f.dst()), || {
                format!("{f}: mono and epi between {} and {}", f.src(), f.dst())
            })?;
        }
    }
    Ok(format!("{} morphisms, {isos} isomorphisms", maps.len()))
}

pub fn mutation(depth: u32) -> Check {
    let spot = [((0, 0), "M(1/2,1/2)"), ((1, 0), "M(1,3/4)")];
    for ((n, m), want) in spot {
        let got = mutate_standard(&ClusterPt::new(n, m));
        ensure(got == obj(want), || {
            format!("mutating T({n},{m}) gives {got}")
        })?;
    }
    let scan = ClusterPt::all_to_depth(depth + 2);
    let pts = ClusterPt::all_to_depth(depth);
    for v in &pts {
        let x = v.object();
        let (mutated, star) = lib(ClusterOverlay::standard().mutate(&x))?;
        let (back, again) = lib(mutated.mutate(&star))?;
        ensure(again == x && back.is_standard(), || {
            format!("{v}: flip is not an involution")
        })?;
        for u in &scan {
            if u != v {
                let uo = u.object();
                ensure(compatible(&star, &uo), || format!("{v}: {star} meets {u}"))?;
            }
        }
        // the two distinguished triangles X -> A -> B -> TX inside the cluster
        let mut tris = BTreeSet::new();
        for a in &scan {
            for kind in [TriangleKind::Positive, TriangleKind::Negative] {
                if let Ok((b, _)) = triangle_complete(&x, &a.object(), kind) {
                    if let Some(bp) = member(&b) {
                        tris.insert((*a, bp));
                    }
                }
            }
        }
        let corners: BTreeSet<ClusterPt> = tris.iter().flat_map(|&(a, b)| [a, b]).collect();
        ensure(tris.len() == 2 && corners.len() == 4, || {
            format!("{v}: exchange triangles {tris:?}")
        })?;
        let (p, q) = x.ends();
        let (r, s) = star.ends();
        let ends: BTreeSet<_> = [p, q, r, s].into();
        for c in &corners {
            let (e1, e2) = c.object().ends();
            ensure(ends.contains(&e1) && ends.contains(&e2), || {
                format!("{v}: corner {c} is not a side of the flip")
            })?;
        }
        let sup = lib(support(&star))?;
        ensure(sup == [*v].into(), || {
            format!("{v}: support of {star} is {sup:?}")
        })?;
    }
    Ok(format!("{} cluster points", pts.len()))
}

pub fn non_crossing(depth: u32) -> Check {
    let mut objs: Vec<Obj> = ClusterPt::all_to_depth(depth + 1)
        .iter()
        .map(|p| p.object())
        .collect();
    objs.extend(grid(depth));
    objs.sort();
    objs.dedup();
    let mut n = 0;
    let mut crossings = 0;
    for x in &objs {
        for y in &objs {
            if x == y {
                continue;
            }
            let c = crossing(x, y);
            ensure(compatible(x, y) == !c, || format!("{x}, {y}: crossing {c}"))?;
            crossings += usize::from(c);
            n += 1;
        }
    }
    Ok(format!("{n} ordered pairs, {crossings} crossing"))
}

pub fn digits() -> Check {
    let mut n = 0;
    for v in ClusterPt::all_to_depth(2) {
        for len in 0..=10u32 {
            for bits in 0..(1u64 << len) {
                let digits: Vec<u8> = (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect();
                let p = DigitPrefix { v, digits };
                let (a, b) = digits_to_coords(&p);
                let in_cluster = Obj::normal_form(&a, &b).ok().and_then(|o| member(&o));
                ensure(in_cluster.is_some(), || format!("{p} leaves the cluster"))?;
                let w = digits_to_point(&p);
                let back = lib(coords_to_digits(&v, &w, 10))?;
                ensure(back == p, || format!("{p} -> {w} -> {back}"))?;
                for d in [0u8, 1] {
                    if len < 10 {
                        let mut longer = p.clone();
                        longer.digits.push(d);
                        let (a2, b2) = digits_to_coords(&longer);
                        ensure(b2 >= b && a2 <= a, || format!("{longer} is not monotone"))?;
                    }
                }
                let all_ones = len > 0 && p.digits.iter().all(|&d| d == 1);
                ensure(check_outward(&p).is_err() == all_ones, || {
                    format!("{p}: tail check")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} prefixes"))
}

pub fn f_after_g(depth: u32) -> Check {
    let objs = off_cluster(depth);
    let ws = words(&objs)?;
    for (x, w) in objs.iter().zip(&ws) {
        for k in 0..=3 {
            let e = lib(g_extend(w, k))?;
            let back = f_strip(&e);
            ensure(&back == w, || format!("{x}, k={k}: {e} strips to {back}"))?;
        }
    }
    // truncations G_k(w1) approach a limit; string homs against a fixed word
    // settle and agree with the objects of the truncations
    const KMAX: usize = 7;
    let mut latest = 0;
    for w1 in &ws {
        let gs: Vec<StringWord> = (0..=KMAX)
            .map(|k| g_extend(w1, k).map(|g| g.unmarked()))
            .collect::<crate::Result<_>>()
            .map_err(|e| e.to_string())?;
        let os: Vec<Obj> = gs
            .iter()
            .map(|g| lib(string_to_obj(g)))
            .collect::<Result<_, _>>()?;
        for (x2, w2) in objs.iter().zip(&ws) {
            let h: Vec<(u32, u32)> = gs
                .iter()
                .map(|g| (hom_dim_strings(w2, g), hom_dim_strings(g, w2)))
                .collect();
            for k in 0..=KMAX {
                let o = (
                    crate::walk::hom_ct_dim(x2, &os[k]),
                    crate::walk::hom_ct_dim(&os[k], x2),
                );
                ensure(h[k] == o, || {
                    format!("{w1} vs {w2} at k={k}: {:?} vs {o:?}", h[k])
                })?;
            }
            let settle = (0..=KMAX)
                .rev()
                .find(|&k| h[k] != h[KMAX])
                .map_or(0, |k| k + 1);
            latest = latest.max(settle);
        }
    }
    ensure(latest + 3 <= KMAX, || {
        format!("homs still moving at k={latest}")
    })?;
    Ok(format!(
        "{} words, k <= 3; homs settle by k = {latest}",
        ws.len()
    ))
}
