//! The quiver `Q` dual to the standard triangulation, its finite string
//! words and their standard modules, and finite-dimensional representations.
//!
//! A `Q`-arrow `v -> w` exists exactly when there is an irreducible cluster
//! map `w -> v`. Two arrows of the same triangle compose to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cluster::{ClusterPt, Triangle};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Q};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QArrow {
    pub from: ClusterPt,
    pub to: ClusterPt,
    pub tri: Triangle,
}

/// The arrow `from -> to`, if there is one.
pub fn q_arrow(from: ClusterPt, to: ClusterPt) -> Option<QArrow> {
    from.triangles()
        .into_iter()
        .find(|t| t.contains(to) && from != to && t.pred(from) == to)
        .map(|tri| QArrow { from, to, tri })
}

/// The arrow between `a` and `b` in either direction.
pub fn q_edge(a: ClusterPt, b: ClusterPt) -> Option<QArrow> {
    q_arrow(a, b).or_else(|| q_arrow(b, a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowsAt {
    pub incoming: Vec<QArrow>,
    pub outgoing: Vec<QArrow>,
}

pub fn arrows_at(v: ClusterPt) -> ArrowsAt {
    let mut incoming = Vec::new();
    let mut outgoing = Vec::new();
    for tri in v.triangles() {
        outgoing.push(QArrow {
            from: v,
            to: tri.pred(v),
            tri,
        });
        incoming.push(QArrow {
            from: tri.succ(v),
            to: v,
            tri,
        });
    }
    incoming.sort();
    outgoing.sort();
    ArrowsAt { incoming, outgoing }
}

pub fn q_out(v: ClusterPt) -> Vec<ClusterPt> {
    arrows_at(v).outgoing.iter().map(|a| a.to).collect()
}

pub fn q_in(v: ClusterPt) -> Vec<ClusterPt> {
    arrows_at(v).incoming.iter().map(|a| a.from).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `v_i -> v_{i+1}`
    Direct,
    /// `v_i <- v_{i+1}`
    Inverse,
}

impl Letter {
    fn inverse(self) -> Letter {
        match self {
            Letter::Direct => Letter::Inverse,
            Letter::Inverse => Letter::Direct,
        }
    }
}

/// A string `v_1 - v_2 - ... - v_k` in `Q`. Ray markers record that an end
/// is a truncation of an infinite outward ray.
///
/// Equality is up to reversal: a word and its inverse give the same module.
#[derive(Clone, Debug)]
pub struct StringWord {
    pub vertices: Vec<ClusterPt>,
    pub letters: Vec<Letter>,
    pub left_ray: bool,
    pub right_ray: bool,
}

impl PartialEq for StringWord {
    fn eq(&self, other: &StringWord) -> bool {
        let same = |a: &StringWord, b: &StringWord| {
            a.vertices == b.vertices
                && a.letters == b.letters
                && a.left_ray == b.left_ray
                && a.right_ray == b.right_ray
        };
        same(self, other) || same(&self.reversed(), other)
    }
}

impl Eq for StringWord {}

impl StringWord {
    pub fn empty() -> StringWord {
        StringWord {
            vertices: Vec::new(),
            letters: Vec::new(),
            left_ray: false,
            right_ray: false,
        }
    }

    pub fn single(v: ClusterPt) -> StringWord {
        StringWord {
            vertices: vec![v],
            ..StringWord::empty()
        }
    }

    pub fn new(vertices: Vec<ClusterPt>, letters: Vec<Letter>) -> Result<StringWord> {
        let w = StringWord {
            vertices,
            letters,
            left_ray: false,
            right_ray: false,
        };
        w.validate()?;
        Ok(w)
    }

    /// The word through the given vertices, with letters read off `Q`.
    pub fn from_vertices(vertices: Vec<ClusterPt>) -> Result<StringWord> {
        let mut letters = Vec::new();
        for p in vertices.windows(2) {
            if q_arrow(p[0], p[1]).is_some() {
                letters.push(Letter::Direct);
            } else if q_arrow(p[1], p[0]).is_some() {
                letters.push(Letter::Inverse);
            } else {
                return Err(Error::InvalidWord(format!(
                    "{} and {} are not adjacent",
                    p[0], p[1]
                )));
            }
        }
        StringWord::new(vertices, letters)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_marked(&self) -> bool {
        self.left_ray || self.right_ray
    }

    pub fn contains(&self, v: ClusterPt) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: ClusterPt) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// The arrow carried by letter `i`.
    pub fn arrow(&self, i: usize) -> Option<QArrow> {
        let (a, b) = (self.vertices[i], self.vertices[i + 1]);
        match self.letters[i] {
            Letter::Direct => q_arrow(a, b),
            Letter::Inverse => q_arrow(b, a),
        }
    }

    pub fn reversed(&self) -> StringWord {
        StringWord {
            vertices: self.vertices.iter().rev().copied().collect(),
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            left_ray: self.right_ray,
            right_ray: self.left_ray,
        }
    }

    pub fn unmarked(&self) -> StringWord {
        StringWord {
            left_ray: false,
            right_ray: false,
            ..self.clone()
        }
    }

    /// The unmarked subword on positions `i..=j`.
    pub fn sub(&self, i: usize, j: usize) -> StringWord {
        StringWord {
            vertices: self.vertices[i..=j].to_vec(),
            letters: self.letters[i..j].to_vec(),
            left_ray: false,
            right_ray: false,
        }
    }

    /// Reports the first violation of the string conditions.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidWord(m));
        if self.vertices.is_empty() {
            if self.is_marked() || !self.letters.is_empty() {
                return bad("empty word with letters or markers".into());
            }
            return Ok(());
        }
        if self.letters.len() + 1 != self.vertices.len() {
            return bad(format!(
                "{} vertices need {} letters, got {}",
                self.vertices.len(),
                self.vertices.len() - 1,
                self.letters.len()
            ));
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(*v) {
                return bad(format!("vertex {v} repeated"));
            }
        }
        let mut prev: Option<Triangle> = None;
        for i in 0..self.letters.len() {
            let Some(a) = self.arrow(i) else {
                let (p, q) = (self.vertices[i], self.vertices[i + 1]);
                return bad(match self.letters[i] {
                    Letter::Direct => format!("no arrow {p} -> {q}"),
                    Letter::Inverse => format!("no arrow {q} -> {p}"),
                });
            };
            if prev == Some(a.tri) {
                return bad(format!(
                    "letters at {} lie in one triangle",
                    self.vertices[i]
                ));
            }
            prev = Some(a.tri);
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Whether positions `i..=j` form a factor string: the boundary arrows
    /// point out of it.
    pub fn is_factor(&self, i: usize, j: usize) -> bool {
        (i == 0 || self.letters[i - 1] == Letter::Inverse)
            && (j + 1 == self.len() || self.letters[j] == Letter::Direct)
    }

    /// Whether positions `i..=j` form a substring submodule: the boundary
    /// arrows point into it.
    pub fn is_sub(&self, i: usize, j: usize) -> bool {
        (i == 0 || self.letters[i - 1] == Letter::Direct)
            && (j + 1 == self.len() || self.letters[j] == Letter::Inverse)
    }
}

impl fmt::Display for StringWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vertices.is_empty() {
            return write!(f, "0");
        }
        if self.left_ray {
            write!(f, "... ")?;
        }
        write!(f, "{}", self.vertices[0])?;
        for (l, v) in self.letters.iter().zip(&self.vertices[1..]) {
            let c = if *l == Letter::Direct { '>' } else { '<' };
            write!(f, " {c} {v}")?;
        }
        if self.right_ray {
            write!(f, " ...")?;
        }
        Ok(())
    }
}

impl FromStr for StringWord {
    type Err = Error;

    /// `"T(1,0) > T(0,0) < T(1,1)"`; a leading or trailing `...` marks a ray
    /// end; `"0"` is the empty word.
    fn from_str(s: &str) -> Result<StringWord> {
        let mut s = s.trim();
        if s == "0" {
            return Ok(StringWord::empty());
        }
        let left_ray = s.starts_with("...");
        if left_ray {
            s = s[3..].trim_start();
        }
        let right_ray = s.ends_with("...");
        if right_ray {
            s = s[..s.len() - 3].trim_end();
        }
        let mut vertices = Vec::new();
        let mut letters = Vec::new();
        let mut rest = s;
        loop {
            let cut = rest.find(['<', '>']).unwrap_or(rest.len());
            vertices.push(rest[..cut].parse::<ClusterPt>()?);
            if cut == rest.len() {
                break;
            }
            letters.push(if rest.as_bytes()[cut] == b'>' {
                Letter::Direct
            } else {
                Letter::Inverse
            });
            rest = &rest[cut + 1..];
        }
        let w = StringWord {
            vertices,
            letters,
            left_ray,
            right_ray,
        };
        w.validate()?;
        Ok(w)
    }
}

impl Serialize for StringWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StringWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<StringWord, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A graph map `w1 ->> W -> w2`: positions `src.0..=src.1` of `w1` match
/// positions of `w2` starting at `dst_start`, running backwards if
/// `reversed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub src: (usize, usize),
    pub dst_start: usize,
    pub reversed: bool,
}

impl GraphMap {
    /// Positions `(lo, hi)` in the target word.
    pub fn dst(&self) -> (usize, usize) {
        let n = self.src.1 - self.src.0;
        if self.reversed {
            (self.dst_start - n, self.dst_start)
        } else {
            (self.dst_start, self.dst_start + n)
        }
    }

    pub fn vertices(&self, w1: &StringWord) -> Vec<ClusterPt> {
        w1.vertices[self.src.0..=self.src.1].to_vec()
    }
}

/// All graph maps `w1 -> w2`, one per common substring that is a factor of
/// `w1` and a submodule of `w2`.
pub fn graph_maps(w1: &StringWord, w2: &StringWord) -> Vec<GraphMap> {
    let mut out = Vec::new();
    for i in 0..w1.len() {
        let Some(p) = w2.position(w1.vertices[i]) else {
            continue;
        };
        for reversed in [false, true] {
            let mut j = i;
            loop {
                let n = j - i;
                let q = if reversed {
                    p.checked_sub(n)
                } else {
                    Some(p + n)
                };
                let Some(q) = q.filter(|&q| q < w2.len()) else {
                    break;
                };
                if w2.vertices[q] != w1.vertices[j] {
                    break;
                }
                let (lo, hi) = if reversed { (q, p) } else { (p, q) };
                if (n > 0 || !reversed) && w1.is_factor(i, j) && w2.is_sub(lo, hi) {
                    out.push(GraphMap {
                        src: (i, j),
                        dst_start: p,
                        reversed,
                    });
                }
                j += 1;
                if j == w1.len() {
                    break;
                }
            }
        }
    }
    out
}

pub fn hom_dim_strings(w1: &StringWord, w2: &StringWord) -> u32 {
    graph_maps(w1, w2).len() as u32
}

/// The unique graph map `w1 -> w2`.
pub fn basic_graph_map(w1: &StringWord, w2: &StringWord) -> Result<GraphMap> {
    let mut g = graph_maps(w1, w2);
    if g.len() != 1 {
        return Err(Error::NoMorphism(format!(
            "{} graph maps from {w1} to {w2}",
            g.len()
        )));
    }
    Ok(g.pop().unwrap())
}

fn pieces(w: &StringWord, lo: usize, hi: usize) -> Vec<StringWord> {
    let mut out = Vec::new();
    if lo > 0 {
        out.push(w.sub(0, lo - 1));
    }
    if hi + 1 < w.len() {
        out.push(w.sub(hi + 1, w.len() - 1));
    }
    out
}

/// Kernel and cokernel components of the basic map `w1 -> w2`.
pub fn kernel_cokernel_strings(
    w1: &StringWord,
    w2: &StringWord,
) -> Result<(Vec<StringWord>, Vec<StringWord>)> {
    let g = basic_graph_map(w1, w2)?;
    let (lo, hi) = g.dst();
    Ok((pieces(w1, g.src.0, g.src.1), pieces(w2, lo, hi)))
}

/// A finite-dimensional representation of `Q`. Arrows without a stored
/// matrix act by zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepFin {
    dims: BTreeMap<ClusterPt, usize>,
    maps: BTreeMap<(ClusterPt, ClusterPt), Mat>,
}

impl RepFin {
    pub fn new() -> RepFin {
        RepFin::default()
    }

    pub fn dim(&self, v: ClusterPt) -> usize {
        self.dims.get(&v).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn support(&self) -> BTreeSet<ClusterPt> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn set_dim(&mut self, v: ClusterPt, d: usize) {
        if d == 0 {
            self.dims.remove(&v);
        } else {
            self.dims.insert(v, d);
        }
        self.maps.retain(|&(s, t), _| s != v && t != v);
    }

    /// Sets the matrix of the arrow `from -> to`.
    pub fn set_map(&mut self, from: ClusterPt, to: ClusterPt, m: Mat) -> Result<()> {
        if q_arrow(from, to).is_none() {
            return Err(Error::NotAModule(format!("no arrow {from} -> {to}")));
        }
        if (m.rows(), m.cols()) != (self.dim(to), self.dim(from)) {
            return Err(Error::ShapeMismatch(format!(
                "arrow {from} -> {to} needs a {}x{} matrix",
                self.dim(to),
                self.dim(from)
            )));
        }
        if m.rows() > 0 && m.cols() > 0 {
            self.maps.insert((from, to), m);
        }
        Ok(())
    }

    pub fn map(&self, from: ClusterPt, to: ClusterPt) -> Mat {
        self.maps
            .get(&(from, to))
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.dim(to), self.dim(from)))
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&(ClusterPt, ClusterPt), &Mat)> {
        self.maps.iter()
    }

    /// Checks that two consecutive arrows of a triangle compose to zero.
    pub fn check_relations(&self) -> Result<()> {
        for &v in self.dims.keys() {
            for a in arrows_at(v).outgoing {
                let b = QArrow {
                    from: a.to,
                    to: a.tri.pred(a.to),
                    tri: a.tri,
                };
                let c = self.map(b.from, b.to).mul(&self.map(a.from, a.to));
                if !c.is_zero() {
                    return Err(Error::NotAModule(format!(
                        "{} -> {} -> {} does not vanish",
                        a.from, a.to, b.to
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Dimension one on each vertex and the identity on each letter.
pub fn to_rep(w: &StringWord) -> RepFin {
    let mut r = RepFin::new();
    for &v in &w.vertices {
        r.set_dim(v, 1);
    }
    for i in 0..w.letters.len() {
        let a = w.arrow(i).expect("valid word");
        r.set_map(a.from, a.to, Mat::identity(1)).unwrap();
    }
    r
}

/// The direct sum of the standard modules of `words`, with the coordinate of
/// word `i` at each of its vertices.
pub fn sum_of_words(words: &[StringWord]) -> (RepFin, Vec<BTreeMap<ClusterPt, usize>>) {
    let mut dims: BTreeMap<ClusterPt, usize> = BTreeMap::new();
    let mut offsets = Vec::new();
    for w in words {
        let mut off = BTreeMap::new();
        for &v in &w.vertices {
            let d = dims.entry(v).or_insert(0);
            off.insert(v, *d);
            *d += 1;
        }
        offsets.push(off);
    }
    let mut r = RepFin::new();
    for (&v, &d) in &dims {
        r.set_dim(v, d);
    }
    let mut maps: BTreeMap<(ClusterPt, ClusterPt), Mat> = BTreeMap::new();
    for (w, off) in words.iter().zip(&offsets) {
        for i in 0..w.letters.len() {
            let a = w.arrow(i).expect("valid word");
            let m = maps
                .entry((a.from, a.to))
                .or_insert_with(|| Mat::zeros(dims[&a.to], dims[&a.from]));
            m[(off[&a.to], off[&a.from])] = Q::one();
        }
    }
    for ((s, t), m) in maps {
        r.set_map(s, t, m).unwrap();
    }
    (r, offsets)
}

/// A morphism of representations: one matrix per vertex, `dst x src`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepMor {
    pub maps: BTreeMap<ClusterPt, Mat>,
}

impl RepMor {
    pub fn at(&self, v: ClusterPt, src: &RepFin, dst: &RepFin) -> Mat {
        self.maps
            .get(&v)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(dst.dim(v), src.dim(v)))
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(Mat::is_zero)
    }

    pub fn compose(&self, first: &RepMor, a: &RepFin, b: &RepFin, c: &RepFin) -> RepMor {
        let vs: BTreeSet<ClusterPt> = a.support().union(&c.support()).copied().collect();
        RepMor {
            maps: vs
                .into_iter()
                .map(|v| (v, self.at(v, b, c).mul(&first.at(v, a, b))))
                .collect(),
        }
    }

    /// Whether the squares commute on every arrow.
    pub fn is_morphism(&self, src: &RepFin, dst: &RepFin) -> bool {
        let vs: BTreeSet<ClusterPt> = src.support().union(&dst.support()).copied().collect();
        vs.iter().all(|&v| {
            arrows_at(v).outgoing.iter().all(|a| {
                let l = self.at(a.to, src, dst).mul(&src.map(a.from, a.to));
                let r = dst.map(a.from, a.to).mul(&self.at(a.from, src, dst));
                l == r
            })
        })
    }
}

fn restrict(m: &RepFin, basis: &BTreeMap<ClusterPt, Mat>) -> RepFin {
    let mut out = RepFin::new();
    for (&v, b) in basis {
        out.set_dim(v, b.cols());
    }
    for (&(s, t), a) in m.arrows() {
        let (Some(bs), Some(bt)) = (basis.get(&s), basis.get(&t)) else {
            continue;
        };
        if bs.cols() == 0 || bt.cols() == 0 {
            continue;
        }
        let x = bt.solve(&a.mul(bs)).expect("subspace closed under arrows");
        out.set_map(s, t, x).unwrap();
    }
    out
}

/// Vertexwise kernel of `f: src -> dst`, with its inclusion into `src`.
pub fn rep_kernel(src: &RepFin, dst: &RepFin, f: &RepMor) -> (RepFin, RepMor) {
    let mut basis = BTreeMap::new();
    for v in src.support() {
        let k = f.at(v, src, dst).kernel();
        if k.cols() > 0 {
            basis.insert(v, k);
        }
    }
    (restrict(src, &basis), RepMor { maps: basis })
}

/// Vertexwise cokernel of `f: src -> dst`, with its projection from `dst`.
pub fn rep_cokernel(src: &RepFin, dst: &RepFin, f: &RepMor) -> (RepFin, RepMor) {
    let mut proj = BTreeMap::new();
    let mut lift = BTreeMap::new();
    for v in dst.support() {
        let p = f.at(v, src, dst).transpose().kernel().transpose();
        if p.rows() > 0 {
            let r = p.solve(&Mat::identity(p.rows())).expect("full row rank");
            lift.insert(v, r);
            proj.insert(v, p);
        }
    }
    let mut out = RepFin::new();
    for (&v, p) in &proj {
        out.set_dim(v, p.rows());
    }
    for (&(s, t), a) in dst.arrows() {
        let (Some(r), Some(p)) = (lift.get(&s), proj.get(&t)) else {
            continue;
        };
        out.set_map(s, t, p.mul(a).mul(r)).unwrap();
    }
    (out, RepMor { maps: proj })
}

/// All strings supported on `support`, one per reversal class.
pub fn strings_on(support: &BTreeSet<ClusterPt>) -> Vec<StringWord> {
    fn grow(
        path: &mut Vec<ClusterPt>,
        tris: &mut Vec<Triangle>,
        support: &BTreeSet<ClusterPt>,
        out: &mut Vec<Vec<ClusterPt>>,
    ) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        for tri in last.triangles() {
            if tris.last() == Some(&tri) {
                continue;
            }
            for u in tri.v {
                if u == last || !support.contains(&u) || path.contains(&u) {
                    continue;
                }
                path.push(u);
                tris.push(tri);
                grow(path, tris, support, out);
                path.pop();
                tris.pop();
            }
        }
    }
    let mut paths = Vec::new();
    for &v in support {
        grow(&mut vec![v], &mut Vec::new(), support, &mut paths);
    }
    paths
        .into_iter()
        .filter(|p| p.first() <= p.last())
        .map(|p| StringWord::from_vertices(p).expect("paths avoid relations"))
        .collect()
}

/// One indecomposable summand of a representation together with its
/// inclusion and projection, in the original coordinates.
#[derive(Clone, Debug)]
pub struct Summand {
    pub word: StringWord,
    pub embed: BTreeMap<ClusterPt, Vec<Q>>,
    pub project: BTreeMap<ClusterPt, Vec<Q>>,
}

/// Unknowns: one block per vertex of `u`, sized by `m`.
fn layout(u: &StringWord, m: &RepFin) -> (BTreeMap<ClusterPt, usize>, usize) {
    let mut off = BTreeMap::new();
    let mut n = 0;
    for &v in &u.vertices {
        off.insert(v, n);
        n += m.dim(v);
    }
    (off, n)
}

fn letter_arrows(u: &StringWord) -> BTreeSet<(ClusterPt, ClusterPt)> {
    (0..u.letters.len())
        .map(|i| {
            let a = u.arrow(i).unwrap();
            (a.from, a.to)
        })
        .collect()
}

fn incident_arrows(u: &StringWord) -> BTreeSet<QArrow> {
    u.vertices
        .iter()
        .flat_map(|&v| {
            let a = arrows_at(v);
            a.incoming.into_iter().chain(a.outgoing)
        })
        .collect()
}

fn stack(blocks: Vec<Mat>, cols: usize) -> Mat {
    let rows: usize = blocks.iter().map(Mat::rows).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..cols {
                out[(r + i, j)] = b[(i, j)].clone();
            }
        }
        r += b.rows();
    }
    out
}

fn place(m: &mut Mat, r0: usize, c0: usize, block: &Mat, sign: bool) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block[(i, j)].clone();
            m[(r0 + i, c0 + j)] += if sign { v } else { -v };
        }
    }
}

/// Basis of `Hom(U, M)` as stacked vectors `phi_v in M_v`.
fn hom_from_string(u: &StringWord, m: &RepFin) -> Mat {
    let (off, n) = layout(u, m);
    let letters = letter_arrows(u);
    let mut blocks = Vec::new();
    for a in incident_arrows(u) {
        let dt = m.dim(a.to);
        if dt == 0 {
            continue;
        }
        let mut row = Mat::zeros(dt, n);
        if let Some(&o) = off.get(&a.from) {
            place(&mut row, 0, o, &m.map(a.from, a.to), true);
        }
        if letters.contains(&(a.from, a.to)) {
            place(&mut row, 0, off[&a.to], &Mat::identity(dt), false);
        }
        blocks.push(row);
    }
    stack(blocks, n).kernel()
}

/// Basis of `Hom(M, U)` as stacked row vectors `psi_v` on `M_v`.
fn hom_to_string(m: &RepFin, u: &StringWord) -> Mat {
    let (off, n) = layout(u, m);
    let letters = letter_arrows(u);
    let mut blocks = Vec::new();
    for a in incident_arrows(u) {
        let ds = m.dim(a.from);
        if ds == 0 {
            continue;
        }
        let mut row = Mat::zeros(ds, n);
        if let Some(&o) = off.get(&a.to) {
            place(&mut row, 0, o, &m.map(a.from, a.to).transpose(), true);
        }
        if letters.contains(&(a.from, a.to)) {
            place(&mut row, 0, off[&a.from], &Mat::identity(ds), false);
        }
        blocks.push(row);
    }
    stack(blocks, n).kernel()
}

fn block(col: &[Q], off: usize, d: usize) -> Vec<Q> {
    col[off..off + d].to_vec()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Finds a string summand of `m`: `(U, phi, psi)` with `psi phi = 1`.
#[allow(clippy::type_complexity)]
fn split_off(
    m: &RepFin,
) -> Option<(
    StringWord,
    BTreeMap<ClusterPt, Vec<Q>>,
    BTreeMap<ClusterPt, Vec<Q>>,
)> {
    let mut cands = strings_on(&m.support());
    cands.sort_by_key(|w| std::cmp::Reverse(w.len()));
    for u in cands {
        let (off, _) = layout(&u, m);
        let phis = hom_from_string(&u, m);
        if phis.cols() == 0 {
            continue;
        }
        let psis = hom_to_string(m, &u);
        for i in 0..phis.cols() {
            let phi = phis.col(i);
            for j in 0..psis.cols() {
                let psi = psis.col(j);
                let vals: Vec<Q> = u
                    .vertices
                    .iter()
                    .map(|&v| {
                        let d = m.dim(v);
                        dot(&block(&psi, off[&v], d), &block(&phi, off[&v], d))
                    })
                    .collect();
                let lambda = vals[0].clone();
                if lambda.is_zero() || vals.iter().any(|x| x != &lambda) {
                    continue;
                }
                let inv = lambda.recip();
                let mut e = BTreeMap::new();
                let mut p = BTreeMap::new();
                for &v in &u.vertices {
                    let d = m.dim(v);
                    e.insert(v, block(&phi, off[&v], d));
                    p.insert(
                        v,
                        block(&psi, off[&v], d).iter().map(|x| x * &inv).collect(),
                    );
                }
                return Some((u, e, p));
            }
        }
    }
    None
}

/// Splits `m` into string modules, recording inclusions and projections.
pub fn decompose_rep_split(m: &RepFin) -> Result<Vec<Summand>> {
    m.check_relations()?;
    let mut cur = m.clone();
    // columns: current basis in original coordinates
    let mut frame: BTreeMap<ClusterPt, Mat> = m
        .support()
        .into_iter()
        .map(|v| (v, Mat::identity(m.dim(v))))
        .collect();
    let mut found: Vec<(StringWord, BTreeMap<ClusterPt, Vec<Q>>)> = Vec::new();
    while cur.total_dim() > 0 {
        let (u, phi, psi) = split_off(&cur)
            .ok_or_else(|| Error::NotAModule("no string summand on the support".into()))?;
        let mut embed = BTreeMap::new();
        for (&v, col) in &phi {
            let c = Mat::from_cols(col.len(), std::slice::from_ref(col));
            embed.insert(v, frame[&v].mul(&c).col(0));
        }
        found.push((u, embed));
        let mut basis = BTreeMap::new();
        for v in cur.support() {
            let b = match psi.get(&v) {
                Some(row) => Mat::from_rows(1, row.len(), row.clone()).kernel(),
                None => Mat::identity(cur.dim(v)),
            };
            if b.cols() > 0 {
                basis.insert(v, b);
            }
        }
        let next = restrict(&cur, &basis);
        frame = basis.iter().map(|(v, b)| (*v, frame[v].mul(b))).collect();
        cur = next;
    }
    // projections from the inverse of the full change of basis
    let mut project: Vec<BTreeMap<ClusterPt, Vec<Q>>> = vec![BTreeMap::new(); found.len()];
    for v in m.support() {
        let idx: Vec<usize> = (0..found.len())
            .filter(|&i| found[i].1.contains_key(&v))
            .collect();
        let cols: Vec<Vec<Q>> = idx.iter().map(|&i| found[i].1[&v].clone()).collect();
        let inv = Mat::from_cols(m.dim(v), &cols)
            .inverse()
            .expect("summands span each vertex");
        for (r, &i) in idx.iter().enumerate() {
            project[i].insert(v, inv.row(r));
        }
    }
    Ok(found
        .into_iter()
        .zip(project)
        .map(|((word, embed), project)| Summand {
            word,
            embed,
            project,
        })
        .collect())
}

pub fn decompose_rep(m: &RepFin) -> Result<Vec<StringWord>> {
    Ok(decompose_rep_split(m)?
        .into_iter()
        .map(|s| s.word)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn p(n: u32, m: i64) -> ClusterPt {
        ClusterPt::new(n, m)
    }

    fn w(s: &str) -> StringWord {
        s.parse().unwrap()
    }

    #[test]
    fn arrows() {
        let a = arrows_at(p(0, 0));
        let tos: Vec<_> = a.outgoing.iter().map(|x| x.to).collect();
        let froms: Vec<_> = a.incoming.iter().map(|x| x.from).collect();
        assert_eq!(tos, vec![p(1, 1), p(1, 3)]);
        assert_eq!(froms, vec![p(1, 0), p(1, 2)]);
        assert_eq!(q_out(p(1, 0)), vec![p(0, 0), p(2, 7)]);
        assert_eq!(q_in(p(1, 0)), vec![p(1, 3), p(2, 0)]);
        for v in ClusterPt::all_to_depth(5) {
            let a = arrows_at(v);
            assert_eq!((a.incoming.len(), a.outgoing.len()), (2, 2));
            assert_ne!(a.outgoing[0].tri, a.outgoing[1].tri);
        }
    }

    #[test]
    fn validity() {
        assert!(w("T(1,0) > T(0,0) > T(1,1)").is_valid());
        let bad = StringWord {
            vertices: vec![p(1, 3), p(0, 0), p(1, 0)],
            letters: vec![Letter::Direct, Letter::Direct],
            left_ray: false,
            right_ray: false,
        };
        assert!(!bad.is_valid());
        assert_eq!(
            StringWord::from_vertices(vec![p(1, 0), p(0, 0), p(1, 1)]).unwrap(),
            w("T(1,0) > T(0,0) > T(1,1)")
        );
        let around = StringWord {
            vertices: vec![p(0, 0), p(1, 1), p(1, 2)],
            letters: vec![Letter::Direct, Letter::Direct],
            left_ray: false,
            right_ray: false,
        };
        assert!(matches!(around.validate(), Err(Error::InvalidWord(_))));
        assert!(StringWord::single(p(3, 5)).is_valid());
        assert!("T(1,0) > T(1,1)".parse::<StringWord>().is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "T(1,0) > T(0,0) > T(1,1)",
            "T(2,1) < T(1,1) < T(0,0) > T(1,3)",
            "... T(2,7) < T(1,0) > T(0,0) < T(1,2) > T(2,3) ...",
            "T(0,0)",
            "0",
        ] {
            assert_eq!(w(s).to_string(), s);
        }
        let x = w("T(1,0) > T(0,0) > T(1,1)");
        assert_eq!(x, x.reversed());
        assert_eq!(x.reversed().to_string(), "T(1,1) < T(0,0) < T(1,0)");
    }

    #[test]
    fn homs() {
        let a = w("T(2,1) < T(1,1) < T(0,0) > T(1,3)");
        let b = w("T(1,0) > T(0,0) > T(1,1)");
        assert_eq!(hom_dim_strings(&a, &a), 1);
        assert_eq!(hom_dim_strings(&b, &b), 1);
        assert_eq!(hom_dim_strings(&a, &b), 1);
        assert_eq!(hom_dim_strings(&b, &a), 0);
        let g = basic_graph_map(&a, &b).unwrap();
        let mut vs = g.vertices(&a);
        vs.sort();
        assert_eq!(vs, vec![p(0, 0), p(1, 1)]);
    }

    #[test]
    fn kernels_and_cokernels() {
        let a = w("T(2,1) < T(1,1) < T(0,0) > T(1,3)");
        let b = w("T(1,0) > T(0,0) > T(1,1)");
        let (k, c) = kernel_cokernel_strings(&a, &b).unwrap();
        assert_eq!(k, vec![w("T(2,1)"), w("T(1,3)")]);
        assert_eq!(c, vec![w("T(1,0)")]);
        let (k, c) = kernel_cokernel_strings(&a, &a).unwrap();
        assert!(k.is_empty() && c.is_empty());
        // (0,0) is a factor of the middle of b only if both arrows leave it
        assert!(matches!(
            kernel_cokernel_strings(&StringWord::single(p(0, 0)), &b),
            Err(Error::NoMorphism(_))
        ));
    }

    #[test]
    fn decomposition() {
        for s in [
            "T(2,1) < T(1,1) < T(0,0) > T(1,3)",
            "T(1,0) > T(0,0) > T(1,1)",
            "T(0,0)",
        ] {
            assert_eq!(decompose_rep(&to_rep(&w(s))).unwrap(), vec![w(s)]);
        }
        let mut two = RepFin::new();
        two.set_dim(p(0, 0), 2);
        assert_eq!(decompose_rep(&two).unwrap(), vec![w("T(0,0)"), w("T(0,0)")]);
    }

    #[test]
    fn vertexwise_kernel_of_basic_map() {
        let a = w("T(2,1) < T(1,1) < T(0,0) > T(1,3)");
        let b = w("T(1,0) > T(0,0) > T(1,1)");
        let (ra, rb) = (to_rep(&a), to_rep(&b));
        let mut f = RepMor::default();
        for v in [p(0, 0), p(1, 1)] {
            f.maps.insert(v, Mat::identity(1));
        }
        assert!(f.is_morphism(&ra, &rb));
        let (k, incl) = rep_kernel(&ra, &rb, &f);
        assert!(incl.is_morphism(&k, &ra));
        let mut got = decompose_rep(&k).unwrap();
        got.sort_by_key(|x| x.vertices.clone());
        assert_eq!(got, vec![w("T(1,3)"), w("T(2,1)")]);
        let (c, proj) = rep_cokernel(&ra, &rb, &f);
        assert!(proj.is_morphism(&rb, &c));
        assert_eq!(decompose_rep(&c).unwrap(), vec![w("T(1,0)")]);
    }

    #[test]
    fn mixed_basis_decomposes() {
        // (1,0) -> (0,0) with matrix [1 1] on K^2 -> K: a simple plus a string
        let mut r = RepFin::new();
        r.set_dim(p(1, 0), 2);
        r.set_dim(p(0, 0), 1);
        r.set_map(p(1, 0), p(0, 0), Mat::from_rows(1, 2, vec![q(1), q(1)]))
            .unwrap();
        let parts = decompose_rep_split(&r).unwrap();
        let mut words: Vec<_> = parts.iter().map(|s| s.word.clone()).collect();
        words.sort_by_key(|x| x.len());
        assert_eq!(words, vec![w("T(1,0)"), w("T(1,0) > T(0,0)")]);
        for (i, s) in parts.iter().enumerate() {
            for (j, t) in parts.iter().enumerate() {
                for (v, e) in &s.embed {
                    if let Some(pr) = t.project.get(v) {
                        let want = if i == j { q(1) } else { q(0) };
                        assert_eq!(dot(pr, e), want);
                    }
                }
            }
        }
    }

    #[test]
    fn relations_enforced() {
        let a = arrows_at(p(0, 0)).outgoing[0];
        let next = a.tri.pred(a.to);
        let mut r = RepFin::new();
        for v in [a.from, a.to, next] {
            r.set_dim(v, 1);
        }
        r.set_map(a.from, a.to, Mat::identity(1)).unwrap();
        r.set_map(a.to, next, Mat::identity(1)).unwrap();
        assert!(matches!(decompose_rep(&r), Err(Error::NotAModule(_))));
    }
}
