use num_bigint::BigInt;
use proptest::prelude::*;

use moebius::band::{flip, hom_c_dim, translate, Obj};
use moebius::cluster::{enum_in_rect, enum_in_rect_to_depth, member, scan_depth};
use moebius::equiv::{obj_to_string, string_to_obj};
use moebius::strings::{decompose_rep, hom_dim_strings, sum_of_words, StringWord};
use moebius::walk::hom_ct_dim;
use moebius::{Dyadic, Rect};

fn dyadic(max_exp: u32, span: i64) -> impl Strategy<Value = Dyadic> {
    (0..=max_exp).prop_flat_map(move |e| {
        let r = span << e;
        (-r..=r).prop_map(move |n| Dyadic::new(n, e))
    })
}

/// A point strictly inside the band, as `(x, x + d)` with `|d| < 1`.
fn band_point(max_exp: u32) -> impl Strategy<Value = (Dyadic, Dyadic)> {
    (dyadic(max_exp, 3), 1..=max_exp).prop_flat_map(|(x, e)| {
        let r = (1i64 << e) - 1;
        (-r..=r).prop_map(move |n| {
            let y = &x + &Dyadic::new(n, e);
            (x.clone(), y)
        })
    })
}

fn object(max_exp: u32) -> impl Strategy<Value = Obj> {
    band_point(max_exp).prop_map(|(x, y)| Obj::normal_form(&x, &y).unwrap())
}

fn off_cluster(max_exp: u32) -> impl Strategy<Value = Obj> {
    object(max_exp).prop_filter("not a cluster object", |o| member(o).is_none())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_ignores_flip_and_translation((x, y) in band_point(6), k in -3i64..=3) {
        let o = Obj::normal_form(&x, &y).unwrap();
        let f = flip(&(x.clone(), y.clone()));
        prop_assert_eq!(&Obj::normal_form(&f.0, &f.1).unwrap(), &o);
        let t = translate(&(x, y), &BigInt::from(k));
        prop_assert_eq!(&Obj::normal_form(&t.0, &t.1).unwrap(), &o);
        let (a, b) = o.rep();
        prop_assert_eq!(Obj::normal_form(&a, &b).unwrap(), o);
    }

    #[test]
    fn canonical_rep_window(o in object(6)) {
        let (x, y) = o.rep();
        let d = &y - &x;
        prop_assert!(d >= Dyadic::zero() && d < Dyadic::int(1));
        prop_assert!(x >= Dyadic::zero() && x < Dyadic::int(2));
    }

    #[test]
    fn lift_window(v in dyadic(8, 20), lo in dyadic(4, 5)) {
        let l = v.lift_into_window(&lo);
        prop_assert!(l >= lo && l < &lo + &Dyadic::int(2));
        let diff = (&l - &v).half();
        prop_assert!(diff.is_integer());
    }

    #[test]
    fn dyadic_arithmetic_is_exact(a in dyadic(20, 50), b in dyadic(20, 50)) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!((&a + &b).to_rational(), a.to_rational() + b.to_rational());
        prop_assert_eq!(a.mul(&b).to_rational(), a.to_rational() * b.to_rational());
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Dyadic>().unwrap(), a.clone());
        let dec: f64 = a.to_decimal().parse().unwrap();
        prop_assert_eq!(dec, a.num().to_string().parse::<f64>().unwrap() / 2f64.powi(a.exp() as i32));
    }

    #[test]
    fn scan_depth_suffices(x in dyadic(4, 2), w in 0i64..=8, h in 0i64..=8, dy in -8i64..=8) {
        let lo_y = &x + &Dyadic::new(dy, 4);
        let r = Rect::closed(x.clone(), &x + &Dyadic::new(w, 4), lo_y.clone(), &lo_y + &Dyadic::new(h, 4));
        if let Ok(pts) = enum_in_rect(&r) {
            let deeper = enum_in_rect_to_depth(&r, scan_depth(&r) + 4).unwrap();
            prop_assert_eq!(pts, deeper);
        }
    }

    #[test]
    fn hom_in_quotient_below_hom_in_c(x in object(5), y in object(5)) {
        prop_assert!(hom_ct_dim(&x, &y) <= hom_c_dim(&x, &y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn deep_objects_round_trip(x in off_cluster(6)) {
        let w = obj_to_string(&x).unwrap();
        prop_assert_eq!(string_to_obj(&w).unwrap(), x);
    }

    #[test]
    fn deep_homs_agree(x in off_cluster(5), y in off_cluster(5)) {
        let (wx, wy) = (obj_to_string(&x).unwrap(), obj_to_string(&y).unwrap());
        prop_assert_eq!(hom_ct_dim(&x, &y), hom_dim_strings(&wx, &wy));
    }

    #[test]
    fn decomposition_recovers_summands(xs in prop::collection::vec(off_cluster(3), 1..=3)) {
        let words: Vec<StringWord> = xs.iter().map(|x| obj_to_string(x).unwrap()).collect();
        let (m, _) = sum_of_words(&words);
        let mut got = decompose_rep(&m).unwrap();
        prop_assert_eq!(got.len(), words.len());
        for w in &words {
            let i = got.iter().position(|g| g == w);
            prop_assert!(i.is_some(), "{} missing from {:?}", w, got);
            got.remove(i.unwrap());
        }
    }
}
