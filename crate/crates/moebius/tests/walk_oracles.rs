use moebius::band::hom_c_dim;
use moebius::cluster::member;
use moebius::walk::*;
use moebius::{ClusterPt, Obj};

fn grid(e: u32) -> Vec<Obj> {
    moebius::band::grid(e)
        .into_iter()
        .filter(|o| member(o).is_none())
        .collect()
}

#[test]
fn walk_endpoints_and_balance() {
    for x in grid(4) {
        let w = walk_of(&x).unwrap();
        let (xx, yy) = x.rep();
        let first = &w.vertices[0].rep;
        let last = &w.vertices[w.len() - 1].rep;
        assert_eq!(first.0, xx, "{x}");
        assert_eq!(last.1, yy, "{x}");
        assert!(w.is_irreducible_chain(), "{x}");
        assert!(approximation(&x).unwrap().is_balanced(&x), "{x}");
        // the walk is the minimal walk between its endpoints
        let mw = minimal_walk(&w.vertices[0].pt, &w.vertices[w.len() - 1].pt).unwrap();
        assert_eq!(mw.points(), w.points(), "{x}");
    }
}

#[test]
fn radical_matches_shifted_objects() {
    for x in grid(3) {
        let w = walk_of(&x).unwrap();
        for s in ClusterPt::all_to_depth(4) {
            let eps = concrete_epsilon([&s.object(), &x]);
            assert_eq!(rad_from_walk(&s, &w), rad_dim(&s, &x, &eps), "{s} {x}");
        }
    }
}

#[test]
fn alternating_sum_vanishes() {
    for x in grid(3) {
        for s in ClusterPt::all_to_depth(4) {
            let t = tau_dims(&s, &x).unwrap();
            assert_eq!(t.alternating_sum(), 0, "{s} {x} {t:?}");
        }
    }
}

#[test]
fn duality_on_shifted_objects() {
    let mut objs = grid(3);
    objs.extend(ClusterPt::all_to_depth(3).iter().map(|p| p.object()));
    for s in &objs {
        for x in &objs {
            let eps = concrete_epsilon([s, x]);
            let (a, b) = s.rep();
            let up = Obj::normal_form(&(&a + &eps), &(&b + &eps)).unwrap();
            let down = Obj::normal_form(&(&a - &eps), &(&b - &eps)).unwrap();
            assert_eq!(hom_c_dim(&up, x), hom_c_dim(x, s), "{s} {x}");
            assert_eq!(hom_c_dim(x, &down), hom_c_dim(s, x), "{s} {x}");
        }
    }
}

#[test]
fn quotient_hom_vanishes_on_cluster() {
    for x in grid(3) {
        for p in ClusterPt::all_to_depth(3) {
            assert_eq!(hom_ct_dim(&p.object(), &x), 0);
            assert_eq!(hom_ct_dim(&x, &p.object()), 0);
        }
    }
}

#[test]
fn support_is_where_tau_inverse_lives() {
    for x in grid(3) {
        let sup = support(&x).unwrap();
        for s in ClusterPt::all_to_depth(5) {
            let eps = concrete_epsilon([&s.object(), &x]);
            assert_eq!(sup.contains(&s), tau_inv_dim(&s, &x, &eps) == 1, "{s} {x}");
        }
    }
}
