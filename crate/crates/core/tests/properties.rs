use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use polylat::enumerate::{summarize, Budget};
use polylat::statmech::{
    expected_visits, free_energy, max_class_bound, partition_function, quenched_expected_visits,
    quenched_free_energy, sandwich_check, CONVEXITY_TOL, EXPECTATION_TOL,
};
use polylat::topology::KeyKind;
use polylat::{
    max_topology_class, Boundary, Convention, EnsembleSpec, Histogram, Point, Polymer, PolymerClass, TopologyKey,
    TopologyTable,
};
use proptest::prelude::*;

fn hist_strategy() -> impl Strategy<Value = Histogram> {
    prop::collection::btree_map(0usize..30, 1u64..1_000_000_000, 1..8)
        .prop_map(|m| m.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect())
}

fn table_strategy() -> impl Strategy<Value = TopologyTable> {
    prop::collection::vec(hist_strategy(), 1..5).prop_map(|hs| {
        let spec = EnsembleSpec::contains_origin(PolymerClass::Tree, 2, 30, Boundary::Penetrable);
        let classes: BTreeMap<TopologyKey, Histogram> = hs
            .into_iter()
            .enumerate()
            .map(|(i, h)| (TopologyKey::new(KeyKind::TreeCode, vec![i as u8]), h))
            .collect();
        TopologyTable { spec, classes }
    })
}

fn walk_strategy() -> impl Strategy<Value = Polymer> {
    (2usize..=3, prop::collection::vec(0usize..6, 1..14)).prop_filter_map("self-intersecting", |(d, steps)| {
        let mut pts = vec![Point::origin(d)];
        let mut seen = HashSet::from([Point::origin(d)]);
        for k in steps {
            let k = k % (2 * d);
            let q = pts.last().unwrap().add(&Point::unit(d, k / 2, if k % 2 == 0 { 1 } else { -1 }));
            if !seen.insert(q.clone()) {
                return None;
            }
            pts.push(q);
        }
        Polymer::path(PolymerClass::Walk, &pts).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ln_z_is_convex(h in hist_strategy(), b in -4.0f64..6.0, step in 0.01f64..1.0) {
        let l = |x: f64| partition_function(&h, x).unwrap().ln();
        prop_assert!(l(b - step) + l(b + step) - 2.0 * l(b) >= -CONVEXITY_TOL);
    }

    #[test]
    fn zero_beta_counts_exactly(h in hist_strategy()) {
        prop_assert_eq!(partition_function(&h, 0.0).unwrap().exact, Some(h.total()));
    }

    #[test]
    fn jensen_holds(t in table_strategy(), b in -4.0f64..6.0) {
        let df = free_energy(&t, b).unwrap() - free_energy(&t, 0.0).unwrap();
        let dfq = quenched_free_energy(&t, b).unwrap() - quenched_free_energy(&t, 0.0).unwrap();
        prop_assert!(df - dfq >= -EXPECTATION_TOL);
    }

    #[test]
    fn expectations_in_range(t in table_strategy(), b in -4.0f64..6.0) {
        let h = t.marginal();
        let (lo, hi) = (h.min_visits().unwrap() as f64, h.max_visits().unwrap() as f64);
        for e in [expected_visits(&t, b).unwrap(), quenched_expected_visits(&t, b).unwrap()] {
            prop_assert!(e >= lo - 1e-9 && e <= hi + 1e-9);
        }
    }

    #[test]
    fn finite_difference_matches_expectation(h in hist_strategy(), b in -3.0f64..4.0) {
        let t = TopologyTable {
            spec: EnsembleSpec::contains_origin(PolymerClass::Tree, 2, 30, Boundary::Penetrable),
            classes: BTreeMap::from([(TopologyKey::new(KeyKind::TreeCode, vec![0]), h.clone())]),
        };
        let e = 1e-4;
        let l = |x: f64| partition_function(&h, x).unwrap().ln();
        let fd = (l(b - 2.0 * e) - l(b + 2.0 * e) + 8.0 * (l(b + e) - l(b - e))) / (12.0 * e);
        let ev = expected_visits(&t, b).unwrap();
        prop_assert!((fd - ev).abs() <= polylat::statmech::FD_TOL);
    }

    #[test]
    fn visits_bounded(w in walk_strategy()) {
        prop_assert!(w.visits() <= w.sites().len());
        if w.dim() == 2 {
            prop_assert!(w.visits() <= w.longest_path().unwrap() + 1);
        }
    }

    #[test]
    fn surface_translations_keep_visits(w in walk_strategy(), a in -5i32..5, b in -5i32..5) {
        let mut v = vec![0; w.dim()];
        v[1] = a;
        if w.dim() > 2 {
            v[2] = b;
        }
        prop_assert_eq!(w.translate(&Point(v)).visits(), w.visits());
    }

    #[test]
    fn lex_normalize_picks_one_representative(w in walk_strategy(), shift in prop::collection::vec(-6i32..6, 3)) {
        let n = w.lex_normalize();
        prop_assert_eq!(n.lex_min_site(), &Point::origin(w.dim()));
        prop_assert_eq!(n.lex_normalize(), n.clone());
        let moved = w.translate(&Point(shift[..w.dim()].to_vec()));
        prop_assert_eq!(moved.lex_normalize(), n.clone());
        prop_assert_eq!(n.class(), w.class());
        prop_assert_eq!(n.edges().len(), w.edges().len());
    }

    #[test]
    fn spans_cover_sites(w in walk_strategy()) {
        prop_assert!(w.spans().iter().product::<usize>() >= w.sites().len());
    }
}

/// Configurations lying in the surface of `Z^d` are exactly the
/// `(d−1)`-dimensional ones; they give the sandwich's lower count.
#[test]
fn sandwich_pairs() {
    let b = Budget::default();
    for (class, n) in [(PolymerClass::Tree, 5), (PolymerClass::Animal, 5), (PolymerClass::Walk, 6), (PolymerClass::Comb, 5)] {
        let sites = if class.sized_by_sites() { n } else { n + 1 };
        let low = summarize(&EnsembleSpec::contains_origin(class, 2, n, Boundary::Penetrable), &b).unwrap();
        for x in [Boundary::Penetrable, Boundary::Impenetrable] {
            let high = summarize(&EnsembleSpec::contains_origin(class, 3, n, x), &b).unwrap();
            let h = &high.visit_histogram;
            if x == Boundary::Penetrable {
                assert_eq!(h.get(sites), low.total, "{class}");
            }
            for beta in [0.0, 0.5, 1.0, 3.0] {
                assert!(sandwich_check(&low.total, h, sites, beta).unwrap(), "{class} {x} β={beta}");
            }
        }
    }
}

#[test]
fn commonest_tree_topology_is_bounded() {
    for (d, top) in [(2, 9), (3, 6)] {
        for n in 2..=top {
            let s = EnsembleSpec::new(PolymerClass::Tree, d, n, Boundary::Penetrable, Convention::ContainsOrigin).unwrap();
            let (_, m) = max_topology_class(&s).unwrap();
            assert!(m <= max_class_bound(d, n), "d={d} n={n}");
        }
    }
}
