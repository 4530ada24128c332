//! Minimal walks in the standard cluster, add-T approximations, supports and
//! the infinitesimal Auslander-Reiten data, all relative to the standard
//! cluster.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::band::{hom_lift_pairs, hom_target_lift, lifts_admit_hom, Obj, Rect, Rep};
use crate::cluster::{enum_in_rect, member, ClusterPt};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Sink,
    Source,
    Through,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    /// Leftward move; the cluster map points right.
    Horizontal,
    /// Upward move; the cluster map points up.
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkVertex {
    pub pt: ClusterPt,
    pub rep: Rep,
    pub role: Role,
}

/// A walk from the lower right corner to the upper left corner of a
/// rectangle, listed by first coordinate descending, then second ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Walk {
    pub vertices: Vec<WalkVertex>,
}

impl Walk {
    fn from_points(pts: Vec<(ClusterPt, Rep)>) -> Result<Walk> {
        let k = pts.len();
        let mut outs = vec![0u32; k];
        let mut ins = vec![0u32; k];
        for i in 0..k.saturating_sub(1) {
            match step_between(&pts[i].1, &pts[i + 1].1) {
                Some(Step::Vertical) => {
                    outs[i] += 1;
                    ins[i + 1] += 1;
                }
                Some(Step::Horizontal) => {
                    outs[i + 1] += 1;
                    ins[i] += 1;
                }
                None => {
                    return Err(Error::InvalidWord(format!(
                        "{} and {} are not joined by an axis step",
                        pts[i].0,
                        pts[i + 1].0
                    )))
                }
            }
        }
        let vertices = pts
            .into_iter()
            .enumerate()
            .map(|(i, (pt, rep))| {
                let role = if outs[i] == 0 {
                    Role::Sink
                } else if ins[i] == 0 && i != 0 && i + 1 != k {
                    Role::Source
                } else if ins[i] == 0 {
                    Role::Sink
                } else {
                    Role::Through
                };
                WalkVertex { pt, rep, role }
            })
            .collect();
        Ok(Walk { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of steps.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn points(&self) -> Vec<ClusterPt> {
        self.vertices.iter().map(|v| v.pt).collect()
    }

    pub fn reps(&self) -> Vec<Rep> {
        self.vertices.iter().map(|v| v.rep.clone()).collect()
    }

    pub fn roles(&self) -> Vec<Role> {
        self.vertices.iter().map(|v| v.role).collect()
    }

    pub fn steps(&self) -> Vec<Step> {
        self.vertices
            .windows(2)
            .map(|w| step_between(&w[0].rep, &w[1].rep).expect("validated walk"))
            .collect()
    }

    /// Non-endpoint vertices.
    pub fn interior(&self) -> &[WalkVertex] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    /// True when every step joins two points of a common triangle.
    pub fn is_irreducible_chain(&self) -> bool {
        self.vertices.windows(2).all(|w| {
            let a = w[0].pt;
            let b = w[1].pt;
            a.in_neighbors().contains(&b) || a.out_neighbors().contains(&b)
        })
    }
}

fn step_between(p: &Rep, q: &Rep) -> Option<Step> {
    if p.0 == q.0 && q.1 > p.1 {
        Some(Step::Vertical)
    } else if p.1 == q.1 && q.0 < p.0 {
        Some(Step::Horizontal)
    } else {
        None
    }
}

/// Largest `b < y` with `(x, b)` a representative of a cluster point.
fn max_below_on_vertical(x: &Dyadic, y: &Dyadic, n_max: u32) -> Option<Dyadic> {
    let one = Dyadic::int(1);
    let mut best: Option<Dyadic> = None;
    for n in x.exp()..=n_max.max(x.exp()) {
        let c = &one - &Dyadic::unit(n);
        for b in [x + &c, x - &c] {
            if &b < y && best.as_ref().is_none_or(|v| &b > v) {
                best = Some(b);
            }
        }
    }
    best
}

/// Largest `a < x` with `(a, y)` a representative of a cluster point.
fn max_left_on_horizontal(x: &Dyadic, y: &Dyadic, n_max: u32) -> Option<Dyadic> {
    let one = Dyadic::int(1);
    let mut best: Option<Dyadic> = None;
    for n in y.exp()..=n_max.max(y.exp()) {
        let c = &one - &Dyadic::unit(n);
        for a in [y - &c, y + &c] {
            if &a < x && best.as_ref().is_none_or(|v| &a > v) {
                best = Some(a);
            }
        }
    }
    best
}

/// The rectangle `[a,x] x [b,y]` spanned by the walk of `X = M(x,y)`.
pub fn walk_rect(x: &Obj) -> Result<Rect> {
    if member(x).is_some() {
        return Err(Error::InCluster(x.to_string()));
    }
    let (xx, yy) = x.rep();
    let n_max = x.exponent() + 1;
    let b = max_below_on_vertical(&xx, &yy, n_max).expect("a cluster point below");
    let a = max_left_on_horizontal(&xx, &yy, n_max).expect("a cluster point to the left");
    Ok(Rect::closed(a, xx, b, yy))
}

pub fn walk_of(x: &Obj) -> Result<Walk> {
    let r = walk_rect(x)?;
    Walk::from_points(enum_in_rect(&r)?)
}

/// The unique minimal walk from `v` (lower right) to `w` (upper left).
pub fn minimal_walk(v: &ClusterPt, w: &ClusterPt) -> Result<Walk> {
    if v == w {
        return Walk::from_points(vec![(*v, v.standard_rep())]);
    }
    let mut best: Option<Walk> = None;
    let vo = v.object();
    let wo = w.object();
    for vr in vo.reps() {
        for wr in wo.reps() {
            // translate w so that it sits weakly up-left of vr
            let k = ((&vr.1 - &wr.1).half()).ceil();
            let t = crate::band::translate(&wr, &k);
            if t.0 > vr.0 || t.1 < vr.1 {
                continue;
            }
            let r = Rect::closed(t.0.clone(), vr.0.clone(), vr.1.clone(), t.1.clone());
            let Ok(pts) = enum_in_rect(&r) else { continue };
            let Ok(walk) = Walk::from_points(pts) else {
                continue;
            };
            if !walk.is_irreducible_chain() {
                continue;
            }
            if walk.vertices.first().map(|x| x.pt) != Some(*v)
                || walk.vertices.last().map(|x| x.pt) != Some(*w)
            {
                continue;
            }
            if best.as_ref().is_none_or(|b| walk.len() < b.len()) {
                best = Some(walk);
            }
        }
    }
    best.ok_or_else(|| Error::Unreachable(format!("no minimal walk from {v} to {w}")))
}

pub fn support(x: &Obj) -> Result<BTreeSet<ClusterPt>> {
    let (xx, yy) = x.rep();
    let one = Dyadic::int(1);
    let r = Rect::open(&yy - &one, xx.clone(), &xx - &one, yy);
    Ok(enum_in_rect(&r)?.into_iter().map(|(v, _)| v).collect())
}

/// Sources `A` and sinks `B` of the walk: `0 -> A -> B -> X -> 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Approximation {
    pub sources: Vec<(ClusterPt, Rep)>,
    pub sinks: Vec<(ClusterPt, Rep)>,
}

impl Approximation {
    /// Per-coordinate multiset balance `firsts(A) + {x} = firsts(B)` and the
    /// same for second coordinates.
    pub fn is_balanced(&self, x: &Obj) -> bool {
        let (xx, yy) = x.rep();
        let mut fa: Vec<Dyadic> = self.sources.iter().map(|(_, r)| r.0.clone()).collect();
        let mut sa: Vec<Dyadic> = self.sources.iter().map(|(_, r)| r.1.clone()).collect();
        fa.push(xx);
        sa.push(yy);
        let mut fb: Vec<Dyadic> = self.sinks.iter().map(|(_, r)| r.0.clone()).collect();
        let mut sb: Vec<Dyadic> = self.sinks.iter().map(|(_, r)| r.1.clone()).collect();
        fa.sort();
        sa.sort();
        fb.sort();
        sb.sort();
        fa == fb && sa == sb
    }
}

pub fn approximation(x: &Obj) -> Result<Approximation> {
    let w = walk_of(x)?;
    let pick = |role| {
        w.vertices
            .iter()
            .filter(|v| v.role == role)
            .map(|v| (v.pt, v.rep.clone()))
            .collect()
    };
    Ok(Approximation {
        sources: pick(Role::Source),
        sinks: pick(Role::Sink),
    })
}

fn rect_free_of_cluster(s: &Rep, t: &Rep) -> Result<bool> {
    let r = Rect::closed(s.0.clone(), t.0.clone(), s.1.clone(), t.1.clone());
    Ok(enum_in_rect(&r)?.is_empty())
}

pub fn try_hom_ct_dim(x: &Obj, y: &Obj) -> Result<u32> {
    for (s, t) in hom_lift_pairs(x, y) {
        if rect_free_of_cluster(&s, &t)? {
            return Ok(1);
        }
    }
    Ok(0)
}

/// Dimension of `Hom(X, Y)` in the quotient by the standard cluster.
pub fn hom_ct_dim(x: &Obj, y: &Obj) -> u32 {
    try_hom_ct_dim(x, y).expect("rectangle enumeration within the depth limit")
}

/// Whether the composite of the basic maps `X -> Y -> Z` survives in the
/// quotient. Both factors are assumed nonzero.
pub fn composite_survives(x: &Obj, y: &Obj, z: &Obj) -> bool {
    let Some((s, t)) = hom_lift_pairs(x, y).into_iter().next() else {
        return false;
    };
    let Some(u) = hom_target_lift(&t, z) else {
        return false;
    };
    lifts_admit_hom(&s, &u) && rect_free_of_cluster(&s, &u).expect("bounded rectangle")
}

/// Whether the composite of basic maps `X -> Y -> Z` is nonzero in the
/// cluster category itself.
pub fn composite_nonzero_in_c(x: &Obj, y: &Obj, z: &Obj) -> bool {
    let Some((s, t)) = hom_lift_pairs(x, y).into_iter().next() else {
        return false;
    };
    hom_target_lift(&t, z).is_some_and(|u| lifts_admit_hom(&s, &u))
}

/// `1/2^K` with `K = 2 +` the largest coordinate exponent; `1/4` for no objects.
pub fn concrete_epsilon<'a>(objs: impl IntoIterator<Item = &'a Obj>) -> Dyadic {
    let e = objs.into_iter().map(|o| o.exponent()).max().unwrap_or(0);
    Dyadic::unit(e + 2)
}

fn shifted(s: &ClusterPt, dx: &Dyadic, dy: &Dyadic) -> Obj {
    let (a, b) = s.standard_rep();
    Obj::normal_form(&(&a + dx), &(&b + dy)).expect("small shifts stay in the band")
}

/// `S_eps = (s1 + eps, s2 + eps)`.
pub fn s_eps(s: &ClusterPt, eps: &Dyadic) -> Obj {
    shifted(s, eps, eps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauDims {
    pub tau_inv: u32,
    pub tau: u32,
    pub rad: u32,
    pub hom0: u32,
    pub hom0_t1: u32,
}

impl TauDims {
    /// `hom0_T1 - tau_inv + rad - hom0`.
    pub fn alternating_sum(&self) -> i64 {
        self.hom0_t1 as i64 - self.tau_inv as i64 + self.rad as i64 - self.hom0 as i64
    }
}

/// `dim Hom(tau^-1 S, X)` in the quotient, evaluated at `S_eps`.
pub fn tau_inv_dim(s: &ClusterPt, x: &Obj, eps: &Dyadic) -> u32 {
    hom_ct_dim(&s_eps(s, eps), x)
}

/// `dim Hom(X, tau S)` in the quotient, evaluated at `S_-eps`.
pub fn tau_dim(s: &ClusterPt, x: &Obj, eps: &Dyadic) -> u32 {
    hom_ct_dim(x, &s_eps(s, &-eps))
}

/// `dim Hom(r tau^-1 S, X)`: the two half-shifted objects `(s1+eps, s2)` and
/// `(s1, s2+eps)`.
pub fn rad_dim(s: &ClusterPt, x: &Obj, eps: &Dyadic) -> u32 {
    let z = Dyadic::zero();
    hom_ct_dim(&shifted(s, eps, &z), x) + hom_ct_dim(&shifted(s, &z, eps), x)
}

/// The rank of the radical term read off the walk of `X`.
pub fn rad_from_walk(s: &ClusterPt, w: &Walk) -> u32 {
    let k = w.len();
    w.vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.pt == *s)
        .map(|(i, v)| match v.role {
            Role::Source => 0,
            Role::Sink if i != 0 && i + 1 != k => 2,
            _ => 1,
        })
        .sum()
}

pub fn tau_dims(s: &ClusterPt, x: &Obj) -> Result<TauDims> {
    let so = s.object();
    let eps = concrete_epsilon([&so, x]);
    let tau_inv = tau_inv_dim(s, x, &eps);
    let tau = tau_dim(s, x, &eps);
    if member(x).is_some() {
        return Ok(TauDims {
            tau_inv,
            tau,
            rad: 0,
            hom0: u32::from(so == *x),
            hom0_t1: 0,
        });
    }
    let w = walk_of(x)?;
    let count = |role| {
        w.vertices
            .iter()
            .filter(|v| v.pt == *s && v.role == role)
            .count() as u32
    };
    Ok(TauDims {
        tau_inv,
        tau,
        rad: rad_from_walk(s, &w),
        hom0: count(Role::Sink),
        hom0_t1: count(Role::Source),
    })
}

/// For a basic `f = c * (X -> Y)`, the scalar by which `f` acts on
/// `Hom(tau^-1 S, -)` at each common support point.
pub fn induced_support_map(
    x: &Obj,
    y: &Obj,
    c: &BigRational,
) -> Result<BTreeMap<ClusterPt, BigRational>> {
    if try_hom_ct_dim(x, y)? == 0 {
        return Err(Error::NotBasic(x.to_string(), y.to_string()));
    }
    let sx = support(x)?;
    let sy = support(y)?;
    let mut out = BTreeMap::new();
    for s in sx.intersection(&sy) {
        let so = s.object();
        let eps = concrete_epsilon([&so, x, y]);
        let v = if composite_survives(&s_eps(s, &eps), x, y) {
            c.clone()
        } else {
            BigRational::zero()
        };
        out.insert(*s, v);
    }
    Ok(out)
}
