//! Objects of the quotient as finite-length string modules, and back.
//! Also the binary digit encoding of tails and ray-marked truncations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::band::{translate, Obj, Rect, Rep};
use crate::cluster::{member, member_rep, points_in_rect, ClusterPt};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::strings::{basic_graph_map, q_arrow, GraphMap, Letter, StringWord};
use crate::walk::{hom_ct_dim, walk_of, Step};

/// The string module of a non-cluster object: the interior of its walk,
/// with each cluster map reversed.
pub fn obj_to_string(x: &Obj) -> Result<StringWord> {
    let w = walk_of(x)?;
    let steps = w.steps();
    let k = w.len();
    let vertices = w.interior().iter().map(|v| v.pt).collect();
    let letters = steps[1..k - 2]
        .iter()
        .map(|s| match s {
            Step::Vertical => Letter::Inverse,
            Step::Horizontal => Letter::Direct,
        })
        .collect();
    StringWord::new(vertices, letters)
}

/// The vertices attached at the left and right ends: at an end `v`, the
/// cluster neighbor `v -> t` in the triangle of `v` the word does not use.
pub fn attach_vertices(w: &StringWord) -> Result<(ClusterPt, ClusterPt)> {
    w.validate()?;
    match w.len() {
        0 => Err(Error::InvalidWord("empty word".into())),
        1 => {
            let o = w.vertices[0].out_neighbors();
            Ok((o[0], o[1]))
        }
        n => {
            let at = |v: ClusterPt, i: usize| {
                let used = w.arrow(i).expect("valid word").tri;
                let free = v.triangles().into_iter().find(|t| *t != used).unwrap();
                free.succ(v)
            };
            Ok((at(w.vertices[0], 0), at(w.vertices[n - 1], n - 2)))
        }
    }
}

fn lifts_near(r: &Rep, target: &Dyadic) -> Vec<Rep> {
    let k = (target - &r.0).half().floor();
    (-1..=1)
        .map(|d| translate(r, &(&k + BigInt::from(d))))
        .collect()
}

/// The northwest and southeast corners `(T_a, T_b)` as representatives with
/// `a1 < b1`, `a2 > b2`, whose closed rectangle holds exactly the word and
/// the two corners.
pub fn corner_reps(w: &StringWord) -> Result<(Rep, Rep)> {
    if w.is_marked() {
        return Err(Error::InvalidWord(format!("{w} carries ray markers")));
    }
    let (s, t) = attach_vertices(w)?;
    let mut want: std::collections::BTreeSet<ClusterPt> = w.vertices.iter().copied().collect();
    want.insert(s);
    want.insert(t);
    let one = Dyadic::int(1);
    for (ta, tb) in [(s, t), (t, s)] {
        for rb in tb.object().reps() {
            for ra0 in ta.object().reps() {
                for ra in lifts_near(&ra0, &rb.0) {
                    if !(ra.0 < rb.0 && ra.1 > rb.1) {
                        continue;
                    }
                    let d = &ra.1 - &rb.0;
                    if d >= one || d <= -&one {
                        continue;
                    }
                    let r = Rect::closed(ra.0.clone(), rb.0.clone(), rb.1.clone(), ra.1.clone());
                    if points_in_rect(&r).is_ok_and(|p| p == want) {
                        // shift the pair so that b1 lies in [0, 2)
                        let k = -rb.0.half().floor();
                        return Ok((translate(&ra, &k), translate(&rb, &k)));
                    }
                }
            }
        }
    }
    Err(Error::InvalidWord(format!("no corner rectangle for {w}")))
}

/// `M(b1, a2)` for the corners `T_a = (a1, a2)`, `T_b = (b1, b2)`.
pub fn string_to_obj(w: &StringWord) -> Result<Obj> {
    let (a, b) = corner_reps(w)?;
    Obj::normal_form(&b.0, &a.1)
}

pub fn simple_object(v: &ClusterPt) -> Obj {
    string_to_obj(&StringWord::single(*v)).expect("single vertices are words")
}

/// A basic morphism with a scalar, on either side of the equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicMor<T> {
    pub src: T,
    pub dst: T,
    pub scalar: num_rational::BigRational,
}

/// The graph map matching a basic morphism of the quotient.
pub fn transport_mor(f: &BasicMor<Obj>) -> Result<(BasicMor<StringWord>, GraphMap)> {
    if member(&f.src).is_some() || member(&f.dst).is_some() || hom_ct_dim(&f.src, &f.dst) == 0 {
        return Err(Error::NoMorphism(format!("{} -> {}", f.src, f.dst)));
    }
    let src = obj_to_string(&f.src)?;
    let dst = obj_to_string(&f.dst)?;
    let g = basic_graph_map(&src, &dst)?;
    Ok((
        BasicMor {
            src,
            dst,
            scalar: f.scalar.clone(),
        },
        g,
    ))
}

pub fn transport_back(f: &BasicMor<StringWord>) -> Result<BasicMor<Obj>> {
    basic_graph_map(&f.src, &f.dst)?;
    let src = string_to_obj(&f.src)?;
    let dst = string_to_obj(&f.dst)?;
    if hom_ct_dim(&src, &dst) == 0 {
        return Err(Error::NoMorphism(format!("{src} -> {dst}")));
    }
    Ok(BasicMor {
        src,
        dst,
        scalar: f.scalar.clone(),
    })
}

/// A vertex `v` followed by binary digits describing a walk away from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitPrefix {
    pub v: ClusterPt,
    pub digits: Vec<u8>,
}

impl fmt::Display for DigitPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.v)?;
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitPrefix {
    type Err = Error;
    fn from_str(s: &str) -> Result<DigitPrefix> {
        let (v, ds) = s
            .rsplit_once(':')
            .ok_or_else(|| Error::Parse(format!("expected v:digits, got {s:?}")))?;
        let digits = ds
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad digit {c:?} in {s:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(DigitPrefix {
            v: v.parse()?,
            digits,
        })
    }
}

/// `theta = a + 1 - b` for the standard representative `(a, b)`.
fn theta(v: &ClusterPt) -> Dyadic {
    Dyadic::unit(v.n)
}

/// `(a_m, b_m)` with `b_m = b + sum d_i theta / 2^i` and
/// `a_m = b_m - 1 + theta / 2^m`.
pub fn digits_to_coords(p: &DigitPrefix) -> Rep {
    let (_, b) = p.v.standard_rep();
    let th = theta(&p.v);
    let mut bm = b;
    for (i, &d) in p.digits.iter().enumerate() {
        if d == 1 {
            bm = &bm + &Dyadic::unit(p.v.n + i as u32 + 1);
        }
    }
    let m = p.digits.len() as u32;
    let am = &(&bm - &Dyadic::int(1)) + &Dyadic::unit(th.exp() + m);
    (am, bm)
}

pub fn digits_to_point(p: &DigitPrefix) -> ClusterPt {
    member_rep(&digits_to_coords(p)).expect("digit walks stay in the cluster")
}

/// The digits leading from `v` to `w`, using at most `bound` of them.
pub fn coords_to_digits(v: &ClusterPt, w: &ClusterPt, bound: u32) -> Result<DigitPrefix> {
    let unreachable = || Error::Unreachable(format!("{w} from {v} within {bound} digits"));
    if w.n < v.n || w.n - v.n > bound {
        return Err(unreachable());
    }
    let len = w.n - v.n;
    let (_, b) = v.standard_rep();
    let th = theta(v);
    let (_, wb) = w.standard_rep();
    // translate w by 2k so that its second coordinate lands in [b, b + theta)
    let k = (&b - &wb).half().ceil();
    let wb = &wb + &Dyadic::int(2).mul_int(&k);
    let off = &wb - &b;
    if off.is_negative() || off >= th {
        return Err(unreachable());
    }
    let scaled = off.scaled_int(w.n).ok_or_else(unreachable)?;
    let n = scaled.to_u64().ok_or_else(unreachable)?;
    let digits = (0..len).rev().map(|i| ((n >> i) & 1) as u8).collect();
    let p = DigitPrefix { v: *v, digits };
    if digits_to_point(&p) != *w {
        return Err(unreachable());
    }
    Ok(p)
}

/// Rejects prefixes whose digits are all 1: such a tail points inward.
pub fn check_outward(p: &DigitPrefix) -> Result<()> {
    if !p.digits.is_empty() && p.digits.iter().all(|&d| d == 1) {
        return Err(Error::InwardTail(p.to_string()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailCase {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl fmt::Display for TailCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as u8 + 1;
        write!(f, "case{n}")
    }
}

/// The representative of `x` in the closed quadrant `q` around the origin:
/// 1 is `[0,1) x [0,1)`, 2 is `x <= 0 <= y`, 4 is `y <= 0 <= x`.
fn quadrant_rep(x: &Obj, q: u8) -> Option<Rep> {
    let z = Dyadic::zero();
    let one = Dyadic::int(1);
    x.reps().into_iter().find_map(|r| {
        (-1..=1).find_map(|k| {
            let r = translate(&r, &BigInt::from(k));
            let ok = match q {
                1 => r.0 >= z && r.0 < one && r.1 >= z && r.1 < one,
                2 => r.0 <= z && r.1 >= z,
                _ => r.1 <= z && r.0 >= z,
            };
            ok.then_some(r)
        })
    })
}

/// Which region the two tails of `x` occupy.
///
/// Case 1 is `Hom(M(0,0), x) != 0`. Otherwise `x` sits in the second or
/// fourth quadrant, and `v` is the shallowest vertex of its walk. In the
/// second quadrant the tail leaving `v` toward the lower right end starts
/// with a horizontal step (case 2) or a vertical one (case 3); at the end
/// itself the outward ray is vertical. The fourth quadrant mirrors this
/// toward the upper left end (cases 4 and 5).
pub fn tail_case(x: &Obj) -> Result<TailCase> {
    if member(x).is_some() {
        return Err(Error::InCluster(x.to_string()));
    }
    if quadrant_rep(x, 1).is_some() {
        return Ok(TailCase::Case1);
    }
    let w = walk_of(x)?;
    let steps = w.steps();
    let i = (0..w.len())
        .min_by_key(|&i| (w.vertices[i].pt.n, i))
        .expect("walks are nonempty");
    if quadrant_rep(x, 2).is_some() {
        Ok(match i.checked_sub(1).map(|j| steps[j]) {
            Some(Step::Horizontal) => TailCase::Case2,
            _ => TailCase::Case3,
        })
    } else if quadrant_rep(x, 4).is_some() {
        Ok(match steps.get(i) {
            Some(Step::Vertical) => TailCase::Case4,
            _ => TailCase::Case5,
        })
    } else {
        Err(Error::Unreachable(format!("{x} lies in no quadrant")))
    }
}

/// Extends `w` at both ends by its attach vertex and `k` outward ray steps,
/// marking both ends.
pub fn g_extend(w: &StringWord, k: usize) -> Result<StringWord> {
    if w.is_marked() {
        return Err(Error::InvalidWord(format!(
            "{w} already carries ray markers"
        )));
    }
    if w.is_empty() {
        return Ok(StringWord::empty());
    }
    let (s, t) = attach_vertices(w)?;
    let ray = |start: ClusterPt, from: ClusterPt| {
        let mut out = vec![start];
        let mut used = q_arrow(start, from).expect("attach arrow").tri;
        for _ in 0..k {
            let cur = *out.last().unwrap();
            let tri = cur.triangles().into_iter().find(|t| *t != used).unwrap();
            out.push(tri.pred(cur));
            used = tri;
        }
        out
    };
    let left = ray(s, w.vertices[0]);
    let right = ray(t, w.vertices[w.len() - 1]);
    let mut vertices: Vec<ClusterPt> = left.iter().rev().copied().collect();
    let mut letters = vec![Letter::Inverse; k];
    letters.push(Letter::Direct);
    vertices.extend(&w.vertices);
    letters.extend(&w.letters);
    letters.push(Letter::Inverse);
    vertices.extend(&right);
    letters.extend(std::iter::repeat_n(Letter::Direct, k));
    let mut out = StringWord::new(vertices, letters)?;
    out.left_ray = true;
    out.right_ray = true;
    Ok(out)
}

/// Removes every vertex with a directed path inside the word to a marked end.
pub fn f_strip(w: &StringWord) -> StringWord {
    let n = w.len();
    if n == 0 {
        return StringWord::empty();
    }
    let mut lo = 0;
    if w.left_ray {
        // i reaches the left end iff letters 0..i all point left
        lo = 1 + w
            .letters
            .iter()
            .take_while(|&&l| l == Letter::Inverse)
            .count();
    }
    let mut hi = n;
    if w.right_ray {
        hi = n
            - 1
            - w.letters
                .iter()
                .rev()
                .take_while(|&&l| l == Letter::Direct)
                .count();
    }
    if lo >= hi {
        StringWord::empty()
    } else {
        w.sub(lo, hi - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, m: i64) -> ClusterPt {
        ClusterPt::new(n, m)
    }

    fn m(s: &str) -> Obj {
        s.parse().unwrap()
    }

    fn w(s: &str) -> StringWord {
        s.parse().unwrap()
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn objects_to_strings() {
        assert_eq!(obj_to_string(&m("M(1/2,1/2)")).unwrap(), w("T(0,0)"));
        assert_eq!(
            obj_to_string(&m("M(1/4,3/4)")).unwrap(),
            w("T(1,0) > T(0,0) > T(1,1)")
        );
        assert_eq!(
            obj_to_string(&m("M(1/8,1/4)")).unwrap(),
            w("T(2,1) < T(1,1) < T(0,0) > T(1,3)")
        );
        assert!(matches!(
            obj_to_string(&m("M(0,1/2)")),
            Err(Error::InCluster(_))
        ));
    }

    #[test]
    fn strings_to_objects() {
        let (a, b) = corner_reps(&w("T(0,0)")).unwrap();
        assert_eq!((a, b), ((d("0"), d("1/2")), (d("1/2"), d("0"))));
        assert_eq!(string_to_obj(&w("T(0,0)")).unwrap(), m("M(1/2,1/2)"));
        assert_eq!(
            string_to_obj(&w("T(1,0) > T(0,0) > T(1,1)")).unwrap(),
            m("M(1/4,3/4)")
        );
        assert_eq!(string_to_obj(&w("T(1,0)")).unwrap(), m("M(1,3/4)"));
    }

    #[test]
    fn simples() {
        assert_eq!(simple_object(&p(0, 0)), m("M(1/2,1/2)"));
        assert_eq!(simple_object(&p(1, 0)), m("M(1,3/4)"));
        assert_eq!(simple_object(&p(2, 1)), m("M(1/2,9/8)"));
    }

    #[test]
    fn digit_coordinates() {
        let dp = |s: &str| s.parse::<DigitPrefix>().unwrap();
        assert_eq!(digits_to_coords(&dp("T(0,0):1")), (d("0"), d("1/2")));
        assert_eq!(digits_to_point(&dp("T(0,0):1")), p(1, 0));
        assert_eq!(digits_to_coords(&dp("T(0,0):0")), (d("-1/2"), d("0")));
        assert_eq!(digits_to_point(&dp("T(0,0):0")), p(1, 3));
        assert_eq!(digits_to_coords(&dp("T(0,0):10")), (d("-1/4"), d("1/2")));
        assert_eq!(digits_to_point(&dp("T(0,0):10")), p(2, 7));
        for s in ["T(0,0):1", "T(0,0):0", "T(0,0):10", "T(0,0):"] {
            let q = dp(s);
            let back = coords_to_digits(&q.v, &digits_to_point(&q), 8).unwrap();
            assert_eq!(back, q);
            assert_eq!(back.to_string(), s);
        }
        assert!(matches!(
            coords_to_digits(&p(0, 0), &p(3, 0), 2),
            Err(Error::Unreachable(_))
        ));
        assert!(matches!(check_outward(&dp("T(0,0):011")), Ok(())));
        assert!(matches!(
            check_outward(&dp("T(0,0):11")),
            Err(Error::InwardTail(_))
        ));
    }

    #[test]
    fn extensions() {
        let e = g_extend(&w("T(0,0)"), 1).unwrap();
        assert_eq!(e, w("... T(2,7) < T(1,0) > T(0,0) < T(1,2) > T(2,3) ..."));
        let e0 = g_extend(&w("T(0,0)"), 0).unwrap();
        assert_eq!(e0.unmarked(), w("T(1,0) > T(0,0) < T(1,2)"));
        assert!(e0.left_ray && e0.right_ray);
        let e2 = g_extend(&w("T(0,0)"), 2).unwrap();
        let ray: Vec<Rep> = e2.vertices[..3]
            .iter()
            .rev()
            .map(|v| {
                let (x, y) = v.standard_rep();
                let k = (&d("1/2") - &y).half().floor();
                translate(&(x, y), &k)
            })
            .collect();
        assert_eq!(
            ray,
            vec![
                (d("0"), d("1/2")),
                (d("-1/4"), d("1/2")),
                (d("-3/8"), d("1/2"))
            ]
        );
    }

    #[test]
    fn stripping() {
        for k in 0..4 {
            let e = g_extend(&w("T(0,0)"), k).unwrap();
            assert_eq!(f_strip(&e), w("T(0,0)"));
        }
        let x = w("T(2,1) < T(1,1) < T(0,0) > T(1,3)");
        assert_eq!(f_strip(&x), x);
        let mut out = w("T(1,0) > T(0,0) > T(1,1)");
        out.right_ray = true;
        assert!(f_strip(&out).is_empty());
    }

    #[test]
    fn transport() {
        use num_traits::One;
        let f = BasicMor {
            src: m("M(1/8,1/4)"),
            dst: m("M(1/4,3/4)"),
            scalar: num_rational::BigRational::one(),
        };
        let (g, gm) = transport_mor(&f).unwrap();
        let mut vs = gm.vertices(&g.src);
        vs.sort();
        assert_eq!(vs, vec![p(0, 0), p(1, 1)]);
        assert_eq!(transport_back(&g).unwrap(), f);
        let bad = BasicMor {
            src: m("M(1/4,3/4)"),
            dst: m("M(1/8,1/4)"),
            scalar: num_rational::BigRational::one(),
        };
        assert!(matches!(transport_mor(&bad), Err(Error::NoMorphism(_))));
    }

    #[test]
    fn tail_cases() {
        assert_eq!(tail_case(&m("M(1/4,3/4)")).unwrap(), TailCase::Case1);
        assert_eq!(tail_case(&m("M(1/2,1/2)")).unwrap(), TailCase::Case1);
        assert_eq!(TailCase::Case3.to_string(), "case3");
    }
}
