//! The standard cluster: the dyadic triangulation of the disk, seen as points
//! `(m/2^n, 1 + (m-1)/2^n)` of the band or as chords `{(m-1)/2^n, m/2^n}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::band::{hom_c_dim, Obj, Rect, Rep};
use crate::config;
use crate::dyadic::{CircleAngle, Dyadic};
use crate::error::{Error, Result};

/// A point `(n, m)` of the standard cluster, `0 <= m < 2^(n+1)`, `(n,m) != (0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterPt {
    pub n: u32,
    pub m: u64,
}

impl ClusterPt {
    pub fn new(n: u32, m: i64) -> ClusterPt {
        assert!(n < 62, "cluster depth {n} out of range");
        let modulus = 1i64 << (n + 1);
        let m = m.rem_euclid(modulus) as u64;
        if n == 0 {
            ClusterPt { n: 0, m: 0 }
        } else {
            ClusterPt { n, m }
        }
    }

    pub fn depth(&self) -> u32 {
        self.n
    }

    /// The representative `(m/2^n, 1 + (m-1)/2^n)`.
    pub fn standard_rep(&self) -> Rep {
        let m = self.m as i64;
        (
            Dyadic::new(m, self.n),
            &Dyadic::int(1) + &Dyadic::new(m - 1, self.n),
        )
    }

    pub fn object(&self) -> Obj {
        let (x, y) = self.standard_rep();
        Obj::normal_form(&x, &y).expect("cluster points lie in the band")
    }

    pub fn chord(&self) -> Chord {
        Chord { pt: *self }
    }

    /// The two triangles of the triangulation containing this chord.
    pub fn triangles(&self) -> [Triangle; 2] {
        let (n, m) = (self.n, self.m as i64);
        let child = Triangle::oriented([
            *self,
            ClusterPt::new(n + 1, 2 * m - 1),
            ClusterPt::new(n + 1, 2 * m),
        ]);
        let other = if n == 0 {
            Triangle::oriented([*self, ClusterPt::new(1, 1), ClusterPt::new(1, 2)])
        } else if m % 2 == 0 {
            Triangle::oriented([
                *self,
                ClusterPt::new(n - 1, m / 2),
                ClusterPt::new(n, m - 1),
            ])
        } else {
            Triangle::oriented([
                *self,
                ClusterPt::new(n - 1, (m + 1) / 2),
                ClusterPt::new(n, m + 1),
            ])
        };
        [child, other]
    }

    /// Sources of irreducible cluster maps into `self`.
    pub fn in_neighbors(&self) -> Vec<ClusterPt> {
        let mut v: Vec<_> = self.triangles().iter().map(|t| t.pred(*self)).collect();
        v.sort();
        v
    }

    /// Targets of irreducible cluster maps out of `self`.
    pub fn out_neighbors(&self) -> Vec<ClusterPt> {
        let mut v: Vec<_> = self.triangles().iter().map(|t| t.succ(*self)).collect();
        v.sort();
        v
    }

    /// All points of depth at most `k`.
    pub fn all_to_depth(k: u32) -> Vec<ClusterPt> {
        let mut out = vec![ClusterPt::new(0, 0)];
        for n in 1..=k {
            for m in 0..(1i64 << (n + 1)) {
                out.push(ClusterPt::new(n, m));
            }
        }
        out
    }
}

impl fmt::Display for ClusterPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.n, self.m)
    }
}

impl fmt::Debug for ClusterPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ClusterPt {
    type Err = Error;
    fn from_str(s: &str) -> Result<ClusterPt> {
        let bad = || Error::Parse(format!("expected T(n,m), got {s:?}"));
        let inner = s
            .trim()
            .strip_prefix("T(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let n: u32 = a.trim().parse().map_err(|_| bad())?;
        let m: i64 = b.trim().parse().map_err(|_| bad())?;
        if n >= 62 || m < 0 || m >= (1i64 << (n + 1)) || (n == 0 && m == 1) {
            return Err(Error::Parse(format!(
                "{s:?} is not a standard cluster point"
            )));
        }
        Ok(ClusterPt::new(n, m))
    }
}

impl Serialize for ClusterPt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.n, self.m).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClusterPt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ClusterPt, D::Error> {
        let (n, m) = <(u32, i64)>::deserialize(d)?;
        if n >= 62 || m < 0 || m >= (1i64 << (n + 1)) {
            return Err(serde::de::Error::custom("not a cluster point"));
        }
        Ok(ClusterPt::new(n, m))
    }
}

/// A chord of the dyadic triangulation; the dual view of a cluster point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Chord {
    pub pt: ClusterPt,
}

impl Chord {
    pub fn endpoints(&self) -> (CircleAngle, CircleAngle) {
        let (n, m) = (self.pt.n, self.pt.m as i64);
        let a = CircleAngle::new(&Dyadic::new(m - 1, n));
        let b = CircleAngle::new(&Dyadic::new(m, n));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "{{{a}, {b}}}")
    }
}

/// A triangle of the triangulation, stored as the directed 3-cycle of
/// irreducible cluster maps `v[0] -> v[1] -> v[2] -> v[0]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Triangle {
    pub v: [ClusterPt; 3],
}

impl Triangle {
    fn oriented(pts: [ClusterPt; 3]) -> Triangle {
        let [a, b, c] = pts;
        let ab = hom_c_dim(&a.object(), &b.object()) == 1;
        let cyc = if ab { [a, b, c] } else { [a, c, b] };
        // rotate so the smallest vertex is first; the id is then canonical
        let i = (0..3).min_by_key(|&i| cyc[i]).unwrap();
        Triangle {
            v: [cyc[i], cyc[(i + 1) % 3], cyc[(i + 2) % 3]],
        }
    }

    pub fn contains(&self, p: ClusterPt) -> bool {
        self.v.contains(&p)
    }

    fn index(&self, p: ClusterPt) -> usize {
        self.v
            .iter()
            .position(|&q| q == p)
            .expect("vertex of triangle")
    }

    pub fn succ(&self, p: ClusterPt) -> ClusterPt {
        self.v[(self.index(p) + 1) % 3]
    }

    pub fn pred(&self, p: ClusterPt) -> ClusterPt {
        self.v[(self.index(p) + 2) % 3]
    }
}

/// The cluster point isomorphic to `x`, if any.
pub fn member(x: &Obj) -> Option<ClusterPt> {
    let theta = &Dyadic::int(1) - x.delta();
    if theta.num() != &BigInt::from(1) {
        return None;
    }
    let n = theta.exp();
    if n >= 62 {
        return None;
    }
    let m = x.x().scaled_int(n)?;
    let m = m.to_i64()?;
    if n == 0 && m != 0 {
        return None;
    }
    Some(ClusterPt::new(n, m))
}

pub fn member_rep(r: &Rep) -> Option<ClusterPt> {
    Obj::normal_form(&r.0, &r.1).ok().and_then(|o| member(&o))
}

pub fn depth(v: &ClusterPt) -> u32 {
    v.n
}

/// Rejects rectangles whose closure meets `y = x +- 1` in infinitely many
/// cluster points.
fn check_bounded(r: &Rect) -> Result<()> {
    let one = Dyadic::int(1);
    let [l, rt, b, t] = r.open;
    let unbounded = || Err(Error::UnboundedRect(r.to_string()));
    // upper boundary y = x + 1: contact interval of x
    let lo = r.x_lo.clone().max(&r.y_lo - &one);
    let hi = r.x_hi.clone().min(&r.y_hi - &one);
    if lo < hi {
        return unbounded();
    }
    if lo == hi && r.y_hi == &r.x_lo + &one && ((!l && r.y_lo < r.y_hi) || (!t && r.x_lo < r.x_hi))
    {
        return unbounded();
    }
    // lower boundary y = x - 1
    let lo = r.x_lo.clone().max(&r.y_lo + &one);
    let hi = r.x_hi.clone().min(&r.y_hi + &one);
    if lo < hi {
        return unbounded();
    }
    if lo == hi && r.y_lo == &r.x_hi - &one && ((!rt && r.y_lo < r.y_hi) || (!b && r.x_lo < r.x_hi))
    {
        return unbounded();
    }
    Ok(())
}

/// Default scan depth for a rectangle: one more than its largest exponent.
pub fn scan_depth(r: &Rect) -> u32 {
    r.max_exp() + 1
}

/// All cluster points with a representative in `r`, each with that
/// representative. Sorted by first coordinate descending, then second ascending.
pub fn enum_in_rect(r: &Rect) -> Result<Vec<(ClusterPt, Rep)>> {
    let n_max = scan_depth(r);
    let cap = config::max_depth();
    if n_max > cap {
        return Err(Error::DepthLimit(n_max, cap));
    }
    enum_in_rect_to_depth(r, n_max)
}

/// As [`enum_in_rect`] but scanning every depth up to `n_max`.
pub fn enum_in_rect_to_depth(r: &Rect, n_max: u32) -> Result<Vec<(ClusterPt, Rep)>> {
    if r.is_empty() {
        return Ok(Vec::new());
    }
    check_bounded(r)?;
    let one = Dyadic::int(1);
    let mut out = Vec::new();
    for n in 0..=n_max {
        let c = &one - &Dyadic::unit(n);
        let offsets = if n == 0 { vec![c] } else { vec![c.clone(), -c] };
        for c in offsets {
            // points (x, x + c) with x a multiple of 1/2^n
            let lo = r.x_lo.clone().max(&r.y_lo - &c);
            let hi = r.x_hi.clone().min(&r.y_hi - &c);
            if lo > hi {
                continue;
            }
            let j_lo = lo.shl(n).ceil();
            let j_hi = hi.shl(n).floor();
            let mut j = j_lo;
            while j <= j_hi {
                let x = Dyadic::new(j.clone(), n);
                let p = (x.clone(), &x + &c);
                if r.contains(&p) {
                    let v = member_rep(&p).expect("point on a cluster line");
                    out.push((v, p));
                }
                j += 1;
            }
        }
    }
    out.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)));
    out.dedup();
    Ok(out)
}

pub fn points_in_rect(r: &Rect) -> Result<BTreeSet<ClusterPt>> {
    Ok(enum_in_rect(r)?.into_iter().map(|(v, _)| v).collect())
}

/// A cluster reached from the standard one by finitely many mutations,
/// stored as its difference from the standard cluster.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClusterOverlay {
    removed: BTreeSet<Obj>,
    added: BTreeSet<Obj>,
}

impl ClusterOverlay {
    pub fn standard() -> ClusterOverlay {
        ClusterOverlay::default()
    }

    pub fn removed(&self) -> &BTreeSet<Obj> {
        &self.removed
    }

    pub fn added(&self) -> &BTreeSet<Obj> {
        &self.added
    }

    pub fn is_standard(&self) -> bool {
        self.removed.is_empty() && self.added.is_empty()
    }

    pub fn contains(&self, x: &Obj) -> bool {
        self.added.contains(x) || (member(x).is_some() && !self.removed.contains(x))
    }

    /// Members of depth at most `k` in the standard part, plus every added object.
    pub fn members_to_depth(&self, k: u32) -> Vec<Obj> {
        let mut out: Vec<Obj> = ClusterPt::all_to_depth(k)
            .into_iter()
            .map(|v| v.object())
            .filter(|o| !self.removed.contains(o))
            .collect();
        out.extend(self.added.iter().cloned());
        out.sort();
        out.dedup();
        out
    }

    /// The third vertex of the triangle on the counterclockwise side of `p -> q`.
    fn apex(&self, p: &CircleAngle, q: &CircleAngle) -> Option<CircleAngle> {
        let e = self
            .added
            .iter()
            .flat_map(|o| {
                let (a, b) = o.ends();
                [a.value().exp(), b.value().exp()]
            })
            .chain([p.value().exp(), q.value().exp()])
            .max()
            .unwrap_or(0)
            + 1;
        let arc = p.ccw_to(q).shl(e).floor();
        let mut i = BigInt::from(1);
        while i < arc {
            let r = CircleAngle::new(&(p.value() + &Dyadic::new(i.clone(), e)));
            let pr = Obj::from_ends(p, &r).ok();
            let rq = Obj::from_ends(&r, q).ok();
            if let (Some(pr), Some(rq)) = (pr, rq) {
                if self.contains(&pr) && self.contains(&rq) {
                    return Some(r);
                }
            }
            i += 1;
        }
        None
    }

    /// Replaces `x` by the other diagonal of the quadrilateral formed by its
    /// two adjacent triangles.
    pub fn mutate(&self, x: &Obj) -> Result<(ClusterOverlay, Obj)> {
        if !self.contains(x) {
            return Err(Error::NotInCluster(x.to_string()));
        }
        let (p, q) = x.ends();
        let r1 = self.apex(&p, &q);
        let r2 = self.apex(&q, &p);
        let (r1, r2) = match (r1, r2) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::NotInCluster(format!(
                    "{x} has no adjacent triangles"
                )))
            }
        };
        let star = Obj::from_ends(&r1, &r2)?;
        let mut next = self.clone();
        if !next.added.remove(x) {
            next.removed.insert(x.clone());
        }
        if !next.removed.remove(&star) {
            next.added.insert(star.clone());
        }
        Ok((next, star))
    }
}

/// Mutation of the standard cluster at a point.
pub fn mutate_standard(v: &ClusterPt) -> Obj {
    ClusterOverlay::standard()
        .mutate(&v.object())
        .expect("standard cluster point")
        .1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Obj {
        s.parse().unwrap()
    }

    fn pts(v: &[(u32, i64)]) -> BTreeSet<ClusterPt> {
        v.iter().map(|&(n, m)| ClusterPt::new(n, m)).collect()
    }

    #[test]
    fn membership() {
        assert_eq!(member(&m("M(0,0)")), Some(ClusterPt::new(0, 0)));
        assert_eq!(member(&m("M(1/4,9/8)")), Some(ClusterPt::new(3, 2)));
        assert_eq!(member(&m("M(1/4,1/2)")), None);
        assert_eq!(member(&m("M(1/4,9/8)")).map(|v| depth(&v)), Some(3));
        assert_eq!(depth(&ClusterPt::new(2, 1)), 2);
    }

    #[test]
    fn neighborhoods() {
        let v = ClusterPt::new(0, 0);
        assert_eq!(
            v.in_neighbors(),
            vec![ClusterPt::new(1, 1), ClusterPt::new(1, 3)]
        );
        assert_eq!(
            v.out_neighbors(),
            vec![ClusterPt::new(1, 0), ClusterPt::new(1, 2)]
        );
        assert_eq!(ClusterPt::new(1, 1).object(), m("M(1/2,1)"));
        assert_eq!(ClusterPt::new(1, 3).object(), m("M(3/2,2)"));

        let v = ClusterPt::new(2, 1);
        assert_eq!(
            v.in_neighbors(),
            vec![ClusterPt::new(2, 2), ClusterPt::new(3, 1)]
        );
        assert_eq!(
            v.out_neighbors(),
            vec![ClusterPt::new(1, 1), ClusterPt::new(3, 2)]
        );

        let v = ClusterPt::new(1, 0);
        assert_eq!(
            v.in_neighbors(),
            vec![ClusterPt::new(0, 0), ClusterPt::new(2, 7)]
        );
        assert_eq!(
            v.out_neighbors(),
            vec![ClusterPt::new(1, 3), ClusterPt::new(2, 0)]
        );
        assert_eq!(ClusterPt::new(2, 7).object(), m("M(7/4,5/2)"));
    }

    #[test]
    fn rect_enumeration() {
        let r = Rect::open(d("-1/4"), d("1/4"), d("-3/4"), d("3/4"));
        assert_eq!(points_in_rect(&r).unwrap(), pts(&[(0, 0), (1, 0), (1, 1)]));

        let r = Rect::closed(d("-1/2"), d("1/8"), d("-3/4"), d("1/4"));
        let got = enum_in_rect(&r).unwrap();
        let reps: Vec<Rep> = got.iter().map(|(_, p)| p.clone()).collect();
        assert_eq!(
            reps,
            vec![
                (d("1/8"), d("-3/4")),
                (d("0"), d("-3/4")),
                (d("0"), d("-1/2")),
                (d("0"), d("0")),
                (d("-1/2"), d("0")),
                (d("-1/2"), d("1/4")),
            ]
        );
        let vs: Vec<ClusterPt> = got.iter().map(|(v, _)| *v).collect();
        assert_eq!(
            vs,
            [(3, 2), (2, 1), (1, 1), (0, 0), (1, 3), (2, 6)]
                .iter()
                .map(|&(n, m)| ClusterPt::new(n, m))
                .collect::<Vec<_>>()
        );

        let r = Rect::closed(d("1"), d("0"), d("0"), d("1/2"));
        assert!(enum_in_rect(&r).unwrap().is_empty());
    }

    #[test]
    fn unbounded_rectangles() {
        // touches y = x + 1 along a segment
        let r = Rect::closed(d("-1/2"), d("0"), d("0"), d("3/4"));
        assert!(matches!(enum_in_rect(&r), Err(Error::UnboundedRect(_))));
        // corner contact with a closed adjacent edge
        let r = Rect::closed(d("-1/4"), d("1/4"), d("-3/4"), d("3/4"));
        assert!(matches!(enum_in_rect(&r), Err(Error::UnboundedRect(_))));
        // same corner, open edges: finite
        let r = Rect::open(d("-1/4"), d("1/4"), d("-3/4"), d("3/4"));
        assert!(enum_in_rect(&r).is_ok());
    }

    #[test]
    fn mutation_spot_values() {
        let t0 = ClusterOverlay::standard();
        let (c1, star) = t0.mutate(&m("M(0,0)")).unwrap();
        assert_eq!(star, m("M(1/2,1/2)"));
        let (c2, back) = c1.mutate(&star).unwrap();
        assert_eq!(back, m("M(0,0)"));
        assert!(c2.is_standard());
        assert_eq!(t0.mutate(&m("M(0,1/2)")).unwrap().1, m("M(1,3/4)"));
        assert!(matches!(
            t0.mutate(&m("M(1/4,1/2)")),
            Err(Error::NotInCluster(_))
        ));
    }

    #[test]
    fn chords_match_ends() {
        for v in ClusterPt::all_to_depth(4) {
            assert_eq!(v.chord().endpoints(), v.object().ends(), "{v}");
            assert_eq!(member(&v.object()), Some(v));
        }
        assert_eq!(ClusterPt::new(1, 0).chord().to_string(), "{0, 3/2}");
    }

    #[test]
    fn parse_points() {
        assert_eq!("T(2,1)".parse::<ClusterPt>().unwrap(), ClusterPt::new(2, 1));
        assert!("T(0,1)".parse::<ClusterPt>().is_err());
        assert!("T(1,4)".parse::<ClusterPt>().is_err());
        assert_eq!(ClusterPt::new(3, 2).to_string(), "T(3,2)");
    }
}
