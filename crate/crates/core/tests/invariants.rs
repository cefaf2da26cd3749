use kahler_core::formulas::{hp_bounds, hyperplane_top_form, omega1_via_fattening, ri_bounds};
use kahler_core::kaehler::{max_form_degree, top_form_hf, DirectPresentation};
use kahler_core::{FatPointScheme, HFTable, HomogPoly, KaehlerEngine};
use proptest::prelude::*;

fn scheme(n_range: std::ops::RangeInclusive<usize>, max_pts: usize, max_mult: u32) -> impl Strategy<Value = FatPointScheme> {
    n_range
        .prop_flat_map(move |n| {
            proptest::collection::btree_set(proptest::collection::vec(-3i64..=3, n), 1..=max_pts)
                .prop_flat_map(move |pts| {
                    let k = pts.len();
                    (Just(n), Just(pts), proptest::collection::vec(1..=max_mult, k))
                })
        })
        .prop_map(|(n, pts, mults)| {
            let coords: Vec<Vec<i64>> = pts.into_iter().map(|p| [vec![1], p].concat()).collect();
            let spec: Vec<(&[i64], u32)> = coords.iter().map(|c| &c[..]).zip(mults).collect();
            FatPointScheme::from_i64(n, &spec).expect("distinct affine points")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_direct_presentation(w in scheme(1..=2, 3, 2)) {
        let e = KaehlerEngine::new(&w);
        let d = DirectPresentation::new(&w);
        for relative in [false, true] {
            for m in 1..=max_form_degree(w.n(), relative) {
                let a = e.omega_hf(m, relative).unwrap();
                let b = d.omega_hf(m, relative).unwrap();
                prop_assert_eq!(a.table, b.table, "m = {}, relative = {}", m, relative);
            }
        }
    }

    #[test]
    fn koszul_and_top_forms(w in scheme(1..=3, 4, 3)) {
        let e = KaehlerEngine::new(&w);
        let n = w.n();
        let top = e.omega_hf(n + 1, false).unwrap();
        prop_assert_eq!(&top_form_hf(&w).unwrap().table, &top.table);
        for d in 0..=top.ri + 1 {
            prop_assert!(e.koszul_check(d), "degree {}", d);
        }
    }

    #[test]
    fn fattening_and_relative_identity(w in scheme(1..=3, 4, 3)) {
        let e = KaehlerEngine::new(&w);
        let abs = e.omega_hf(1, false).unwrap();
        let rel = e.omega_hf(1, true).unwrap();
        prop_assert_eq!(&omega1_via_fattening(&w), &abs.table);
        let hw = w.hf_table();
        for i in 0..(abs.ri.max(rel.ri) + 3) as i64 {
            prop_assert_eq!(rel.value(i) + hw.value(i - 1), abs.value(i), "degree {}", i);
        }
    }

    #[test]
    fn bounds_hold(w in scheme(1..=3, 4, 3)) {
        let e = KaehlerEngine::new(&w);
        let ri1 = e.omega_hf(1, false).unwrap().ri;
        for relative in [false, true] {
            for m in 1..=max_form_degree(w.n(), relative) {
                let o = e.omega_hf(m, relative).unwrap();
                if !w.is_reduced() {
                    let b = hp_bounds(&w, m, relative).unwrap();
                    prop_assert!(b.contains(o.hp()), "m = {}: hp {} outside {:?}", m, o.hp(), b);
                }
                let r = ri_bounds(&w, m, relative, Some(ri1)).unwrap();
                prop_assert!(r.best().is_none_or(|x| x >= o.ri), "m = {}: ri {} above {:?}", m, o.ri, r);
            }
        }
    }

    #[test]
    fn top_forms_on_a_line(
        xs in proptest::collection::btree_set(-4i64..=4, 1..=4),
        mults in proptest::collection::vec(1u32..=3, 4),
    ) {
        let coords: Vec<[i64; 3]> = xs.iter().map(|&x| [1, x, 0]).collect();
        let spec: Vec<(&[i64], u32)> = coords.iter().map(|c| &c[..]).zip(mults).collect();
        let w = FatPointScheme::from_i64(2, &spec).unwrap();
        let h = HomogPoly::parse("X2", 3).unwrap();
        let want: HFTable = KaehlerEngine::new(&w).omega_hf(3, false).unwrap().table;
        prop_assert_eq!(hyperplane_top_form(&w, &h).unwrap(), want);
    }
}
