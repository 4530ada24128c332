//! Indecomposable objects as points of the open Moebius band
//! `{|y - x| < 1} / (x, y) ~ (y + 1, x + 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::{CircleAngle, Dyadic};
use crate::error::{Error, Result};

/// A real lift `(x, y)` of a point of the band.
pub type Rep = (Dyadic, Dyadic);

/// Isomorphism class of an indecomposable object, stored by its canonical
/// representative `(x, x + delta)` with `0 <= delta < 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj {
    x: Dyadic,
    delta: Dyadic,
}

pub fn flip(r: &Rep) -> Rep {
    let one = Dyadic::int(1);
    (&r.1 + &one, &r.0 + &one)
}

pub fn translate(r: &Rep, k: &num_bigint::BigInt) -> Rep {
    let t = Dyadic::int(2).mul_int(k);
    (&r.0 + &t, &r.1 + &t)
}

impl Obj {
    pub fn normal_form(x: &Dyadic, y: &Dyadic) -> Result<Obj> {
        let one = Dyadic::int(1);
        let d = (y - x).lift_into_window(&-&one);
        if d == -&one {
            return Err(Error::BandBoundary(x.to_string(), y.to_string()));
        }
        let (x, delta) = if d.is_negative() {
            (x + &d + &one, -d)
        } else {
            (x.clone(), d)
        };
        let x = if delta.is_zero() {
            &x - &Dyadic::new(x.floor(), 0)
        } else {
            x.lift_into_window(&Dyadic::zero())
        };
        Ok(Obj { x, delta })
    }

    pub fn new(x: &Dyadic, y: &Dyadic) -> Result<Obj> {
        Obj::normal_form(x, y)
    }

    pub fn x(&self) -> &Dyadic {
        &self.x
    }

    pub fn y(&self) -> Dyadic {
        &self.x + &self.delta
    }

    pub fn delta(&self) -> &Dyadic {
        &self.delta
    }

    pub fn rep(&self) -> Rep {
        (self.x.clone(), self.y())
    }

    /// The canonical representative and its flip.
    pub fn reps(&self) -> [Rep; 2] {
        let r = self.rep();
        let f = flip(&r);
        [r, f]
    }

    /// Largest exponent among the canonical coordinates.
    pub fn exponent(&self) -> u32 {
        self.x.exp().max(self.y().exp())
    }

    pub fn ends(&self) -> (CircleAngle, CircleAngle) {
        let a = CircleAngle::new(&self.x);
        let b = CircleAngle::new(&(&self.y() + &Dyadic::int(1)));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// The object whose ends are the two given circle points.
    pub fn from_ends(p: &CircleAngle, q: &CircleAngle) -> Result<Obj> {
        Obj::normal_form(p.value(), &(q.value() - &Dyadic::int(1)))
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{})", self.x, self.y())
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `M(p, q)`, normalizing any representative.
impl FromStr for Obj {
    type Err = Error;
    fn from_str(s: &str) -> Result<Obj> {
        let t = s.trim();
        let inner = t
            .strip_prefix("M(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected M(x,y), got {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected two coordinates in {s:?}")))?;
        Obj::normal_form(&a.parse()?, &b.parse()?)
    }
}

impl Serialize for Obj {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Obj {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Obj, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Given a fixed source lift `src`, the lift of `dst` (if any) admitting a
/// nonzero basic morphism: `y-1 < a <= x` and `x-1 < b <= y`.
pub fn hom_target_lift(src: &Rep, dst: &Obj) -> Option<Rep> {
    let one = Dyadic::int(1);
    let (a, b) = src;
    for r in dst.reps() {
        let k = ((a - &r.0).half()).ceil();
        let (x, y) = translate(&r, &k);
        if &(&y - &one) < a && a <= &x && &(&x - &one) < b && b <= &y {
            return Some((x, y));
        }
    }
    None
}

/// True when the fixed lifts satisfy the basic-morphism inequalities.
pub fn lifts_admit_hom(src: &Rep, dst: &Rep) -> bool {
    let one = Dyadic::int(1);
    let (a, b) = src;
    let (x, y) = dst;
    &(y - &one) < a && a <= x && &(x - &one) < b && b <= y
}

/// All pairs of lifts realizing a basic morphism `X -> Y`, one per source lift.
pub fn hom_lift_pairs(x: &Obj, y: &Obj) -> Vec<(Rep, Rep)> {
    x.reps()
        .into_iter()
        .filter_map(|s| hom_target_lift(&s, y).map(|t| (s, t)))
        .collect()
}

pub fn hom_c_dim(x: &Obj, y: &Obj) -> u32 {
    u32::from(!hom_lift_pairs(x, y).is_empty())
}

pub fn compatible(x: &Obj, y: &Obj) -> bool {
    x == y || hom_c_dim(x, y) == 0 || hom_c_dim(y, x) == 0
}

/// True when the two end pairs strictly interleave on the circle.
pub fn crossing(x: &Obj, y: &Obj) -> bool {
    let (p, q) = x.ends();
    let (r, s) = y.ends();
    let arc = p.ccw_to(&q);
    let inside = |t: &CircleAngle| {
        let d = p.ccw_to(t);
        !d.is_zero() && d < arc
    };
    let on_end = |t: &CircleAngle| t == &p || t == &q;
    if on_end(&r) || on_end(&s) {
        return false;
    }
    inside(&r) != inside(&s)
}

/// Every object whose canonical coordinates are multiples of `1/2^e`,
/// in canonical order.
pub fn grid(e: u32) -> Vec<Obj> {
    let n = 1i64 << e;
    let mut out = Vec::new();
    for di in 0..n {
        let xs = if di == 0 { n } else { 2 * n };
        for xi in 0..xs {
            out.push(Obj {
                x: Dyadic::new(xi, e),
                delta: Dyadic::new(di, e),
            });
        }
    }
    out.sort();
    out
}

/// Minimum positive circular gap among all ends; 1 for the empty set.
pub fn mesh<'a>(objs: impl IntoIterator<Item = &'a Obj>) -> Dyadic {
    let mut pts: Vec<CircleAngle> = objs
        .into_iter()
        .flat_map(|o| {
            let (a, b) = o.ends();
            [a, b]
        })
        .collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return Dyadic::int(1);
    }
    let mut best: Option<Dyadic> = None;
    for i in 0..pts.len() {
        let g = pts[i].ccw_to(&pts[(i + 1) % pts.len()]);
        if best.as_ref().is_none_or(|b| &g < b) {
            best = Some(g);
        }
    }
    best.unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleKind {
    /// `(x,y) -> (x,z) -> (y+1,z) -> (y+1,x+1)`
    Positive,
    /// `(x,y) -> (w,y) -> (w,x+1) -> (y+1,x+1)`
    Negative,
}

/// The remaining two terms of the distinguished triangle starting with the
/// basic morphism `X -> Y`.
pub fn triangle_complete(x: &Obj, y: &Obj, kind: TriangleKind) -> Result<(Obj, Obj)> {
    let one = Dyadic::int(1);
    for (s, t) in hom_lift_pairs(x, y) {
        if s == t {
            continue;
        }
        let (a, b) = &s;
        let third = match kind {
            TriangleKind::Positive if &t.0 == a => (b + &one, t.1.clone()),
            TriangleKind::Negative if &t.1 == b => (t.0.clone(), a + &one),
            _ => continue,
        };
        let fourth = flip(&s);
        return Ok((
            Obj::normal_form(&third.0, &third.1)?,
            Obj::normal_form(&fourth.0, &fourth.1)?,
        ));
    }
    Err(Error::NotBasicAligned(x.to_string(), y.to_string()))
}

/// An axis-parallel rectangle in real lifts, with per-edge openness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: Dyadic,
    pub x_hi: Dyadic,
    pub y_lo: Dyadic,
    pub y_hi: Dyadic,
    /// Openness of the left, right, bottom and top edges.
    pub open: [bool; 4],
}

impl Rect {
    pub fn closed(x_lo: Dyadic, x_hi: Dyadic, y_lo: Dyadic, y_hi: Dyadic) -> Rect {
        Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            open: [false; 4],
        }
    }

    pub fn open(x_lo: Dyadic, x_hi: Dyadic, y_lo: Dyadic, y_hi: Dyadic) -> Rect {
        Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            open: [true; 4],
        }
    }

    pub fn is_empty(&self) -> bool {
        let [l, r, b, t] = self.open;
        let xe = self.x_lo > self.x_hi || (self.x_lo == self.x_hi && (l || r));
        let ye = self.y_lo > self.y_hi || (self.y_lo == self.y_hi && (b || t));
        xe || ye
    }

    pub fn contains_x(&self, x: &Dyadic) -> bool {
        let [l, r, _, _] = self.open;
        (if l { x > &self.x_lo } else { x >= &self.x_lo })
            && (if r { x < &self.x_hi } else { x <= &self.x_hi })
    }

    pub fn contains_y(&self, y: &Dyadic) -> bool {
        let [_, _, b, t] = self.open;
        (if b { y > &self.y_lo } else { y >= &self.y_lo })
            && (if t { y < &self.y_hi } else { y <= &self.y_hi })
    }

    pub fn contains(&self, p: &Rep) -> bool {
        self.contains_x(&p.0) && self.contains_y(&p.1)
    }

    pub fn max_exp(&self) -> u32 {
        Dyadic::max_exp([&self.x_lo, &self.x_hi, &self.y_lo, &self.y_hi])
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l, r, b, t] = self.open;
        write!(
            f,
            "{}{},{}{}x{}{},{}{}",
            if l { '(' } else { '[' },
            self.x_lo,
            self.x_hi,
            if r { ')' } else { ']' },
            if b { '(' } else { '[' },
            self.y_lo,
            self.y_hi,
            if t { ')' } else { ']' },
        )
    }
}

/// Parses `[a,b]x(c,d)` with brackets giving edge openness.
impl FromStr for Rect {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rect> {
        let bad = || Error::Parse(format!("expected a rectangle like [a,b]x(c,d), got {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (xs, ys) = t.split_once("x").ok_or_else(bad)?;
        let interval = |p: &str| -> Result<(bool, Dyadic, Dyadic, bool)> {
            let lo_open = match p.chars().next() {
                Some('(') => true,
                Some('[') => false,
                _ => return Err(bad()),
            };
            let hi_open = match p.chars().last() {
                Some(')') => true,
                Some(']') => false,
                _ => return Err(bad()),
            };
            let body = &p[1..p.len() - 1];
            let (a, b) = body.split_once(',').ok_or_else(bad)?;
            Ok((lo_open, a.parse()?, b.parse()?, hi_open))
        };
        let (l, x_lo, x_hi, r) = interval(xs)?;
        let (b, y_lo, y_hi, tp) = interval(ys)?;
        Ok(Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            open: [l, r, b, tp],
        })
    }
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

    #[test]
    fn normal_forms() {
        let o = Obj::normal_form(&d("1/4"), &d("-1/2")).unwrap();
        assert_eq!((o.x().clone(), o.delta().clone()), (d("1/2"), d("3/4")));
        let o = Obj::normal_form(&d("0"), &d("0")).unwrap();
        assert_eq!((o.x().clone(), o.delta().clone()), (d("0"), d("0")));
        let o = Obj::normal_form(&d("7/4"), &d("5/2")).unwrap();
        assert_eq!((o.x().clone(), o.delta().clone()), (d("7/4"), d("3/4")));
        assert_eq!(m("M(1,1)"), m("M(0,0)"));
        assert_eq!(m("M(5/2,5/2)"), m("M(1/2,1/2)"));
        assert!(matches!(
            Obj::normal_form(&d("0"), &d("1")),
            Err(Error::BandBoundary(..))
        ));
        assert!(Obj::normal_form(&d("0"), &d("-3")).is_err());
    }

    #[test]
    fn ends_values() {
        let e = |s: &str| {
            let (a, b) = m(s).ends();
            (a.value().clone(), b.value().clone())
        };
        assert_eq!(e("M(0,0)"), (d("0"), d("1")));
        assert_eq!(e("M(1/4,1)"), (d("0"), d("1/4")));
        assert_eq!(e("M(1/2,5/4)"), (d("1/4"), d("1/2")));
    }

    #[test]
    fn mesh_values() {
        assert_eq!(mesh(&[]), d("1"));
        assert_eq!(mesh(&[m("M(0,0)")]), d("1"));
        assert_eq!(mesh(&[m("M(0,0)"), m("M(0,1/2)")]), d("1/2"));
    }

    #[test]
    fn hom_values() {
        assert_eq!(hom_c_dim(&m("M(0,0)"), &m("M(1/4,1/2)")), 1);
        assert_eq!(hom_c_dim(&m("M(1/4,1/2)"), &m("M(0,0)")), 1);
        // only the strict bound y-1 < a separates these two directions
        assert_eq!(hom_c_dim(&m("M(1/2,5/4)"), &m("M(1/4,1)")), 1);
        assert_eq!(hom_c_dim(&m("M(1/4,1)"), &m("M(1/2,5/4)")), 0);
    }

    #[test]
    fn compatibility_values() {
        assert!(compatible(&m("M(0,0)"), &m("M(1/4,1)")));
        assert!(!compatible(&m("M(0,0)"), &m("M(1/4,1/2)")));
        assert!(compatible(&m("M(1/4,1/2)"), &m("M(1/4,1/2)")));
    }

    #[test]
    fn triangles() {
        let (t, f) =
            triangle_complete(&m("M(0,0)"), &m("M(0,1/2)"), TriangleKind::Positive).unwrap();
        assert_eq!(t, m("M(1,1/2)"));
        assert_eq!((t.x().clone(), t.delta().clone()), (d("3/2"), d("1/2")));
        assert_eq!(f, m("M(0,0)"));
        let (t, f) =
            triangle_complete(&m("M(0,0)"), &m("M(1/2,0)"), TriangleKind::Negative).unwrap();
        assert_eq!(t, m("M(1/2,1)"));
        assert_eq!(f, m("M(0,0)"));
        assert!(matches!(
            triangle_complete(&m("M(0,0)"), &m("M(1/2,1/2)"), TriangleKind::Positive),
            Err(Error::NotBasicAligned(..))
        ));
    }

    #[test]
    fn rect_parse_roundtrip() {
        let r: Rect = "(-1/4,1/4)x[-3/4,3/4)".parse().unwrap();
        assert_eq!(r.open, [true, true, false, true]);
        assert_eq!(r.to_string(), "(-1/4,1/4)x[-3/4,3/4)");
        assert_eq!(r.to_string().parse::<Rect>().unwrap(), r);
    }
}
