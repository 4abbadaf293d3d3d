//! Enumeration results against slow independent counts.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use polylat::constructs::{build_phi30, build_phi_chain};
use polylat::enumerate::{summarize, Budget};
use polylat::topology::knot_invariant;
use polylat::{count_by_topology, Boundary, Convention, EnsembleSpec, Polymer, PolymerClass};
use polylat_oracle as oracle;

type Hist = BTreeMap<usize, u64>;

fn core_hist(class: PolymerClass, d: usize, n: usize, b: Boundary, c: Convention) -> Hist {
    let spec = EnsembleSpec::new(class, d, n, b, c).unwrap();
    let s = summarize(&spec, &Budget::default()).unwrap();
    s.visit_histogram.iter().map(|(k, v)| (k, u64::try_from(v.clone()).unwrap())).collect()
}

/// Visit histogram of a list of shapes (one per translation class) under a
/// convention; walks anchor at their first site for from-origin counting.
fn shape_hist(shapes: &[Vec<oracle::Site>], b: Boundary, c: Convention) -> Hist {
    let mut h = Hist::new();
    for s in shapes {
        let lo = s.iter().map(|p| p[0]).min().unwrap();
        let layer = |x: i32| s.iter().filter(|p| p[0] == x).count();
        let mut add = |k: usize| *h.entry(k).or_default() += 1;
        match (c, b) {
            (Convention::TranslationClasses, _) => add(layer(lo)),
            (Convention::ContainsOrigin, Boundary::Penetrable) => s.iter().for_each(|p| add(layer(p[0]))),
            (Convention::ContainsOrigin, Boundary::Impenetrable) => (0..layer(lo)).for_each(|_| add(layer(lo))),
            (Convention::FromOrigin, Boundary::Penetrable) => add(layer(s[0][0])),
            (Convention::FromOrigin, Boundary::Impenetrable) => {
                if s[0][0] == lo {
                    add(layer(lo))
                }
            }
        }
    }
    h
}

const MODES: [(Boundary, Convention); 4] = [
    (Boundary::Penetrable, Convention::TranslationClasses),
    (Boundary::Penetrable, Convention::ContainsOrigin),
    (Boundary::Impenetrable, Convention::ContainsOrigin),
    (Boundary::Impenetrable, Convention::TranslationClasses),
];

#[test]
fn tree_counts() {
    for (d, top) in [(2, 8), (3, 6)] {
        for n in 1..=top {
            let spec = EnsembleSpec::new(PolymerClass::Tree, d, n, Boundary::Penetrable, Convention::TranslationClasses)
                .unwrap();
            let got = summarize(&spec, &Budget::default()).unwrap().total;
            assert_eq!(got, oracle::tree_count(d, n), "d={d} n={n}");
        }
    }
}

#[test]
fn tree_histograms() {
    for (d, n) in [(2, 6), (3, 5)] {
        let shapes: Vec<_> = oracle::trees(d, n).into_iter().map(|(s, _)| s).collect();
        for (b, c) in MODES {
            assert_eq!(core_hist(PolymerClass::Tree, d, n, b, c), shape_hist(&shapes, b, c), "d={d} n={n} {b} {c}");
        }
    }
}

#[test]
fn animal_histograms() {
    for (d, n) in [(2, 6), (2, 7), (3, 5)] {
        let shapes: Vec<_> = oracle::animals(d, n).into_iter().map(|(s, _)| s).collect();
        for (b, c) in MODES {
            assert_eq!(core_hist(PolymerClass::Animal, d, n, b, c), shape_hist(&shapes, b, c), "d={d} n={n} {b} {c}");
        }
    }
}

#[test]
fn animal_totals() {
    for (d, n) in [(2, 8), (3, 6)] {
        let spec = EnsembleSpec::new(PolymerClass::Animal, d, n, Boundary::Penetrable, Convention::TranslationClasses)
            .unwrap();
        assert_eq!(summarize(&spec, &Budget::default()).unwrap().total, oracle::animal_count(d, n), "d={d} n={n}");
    }
}

#[test]
fn walk_histograms() {
    for (d, n) in [(2, 8), (3, 6)] {
        let shapes = oracle::walks(d, n);
        assert_eq!(shapes.len() as u64, oracle::walk_count(d, n));
        for (b, c) in MODES.into_iter().chain([
            (Boundary::Penetrable, Convention::FromOrigin),
            (Boundary::Impenetrable, Convention::FromOrigin),
        ]) {
            assert_eq!(core_hist(PolymerClass::Walk, d, n, b, c), shape_hist(&shapes, b, c), "d={d} n={n} {b} {c}");
        }
    }
}

#[test]
fn polygon_histograms() {
    for (d, n) in [(2, 10), (3, 8)] {
        let shapes = oracle::polygons(d, n);
        for (b, c) in MODES {
            assert_eq!(core_hist(PolymerClass::Polygon, d, n, b, c), shape_hist(&shapes, b, c), "d={d} n={n} {b} {c}");
        }
    }
}

#[test]
fn comb_histograms() {
    for (d, n) in [(2, 6), (3, 5)] {
        let shapes = oracle::combs(d, n);
        for (b, c) in MODES {
            assert_eq!(core_hist(PolymerClass::Comb, d, n, b, c), shape_hist(&shapes, b, c), "d={d} n={n} {b} {c}");
        }
    }
}

#[test]
fn tree_topology_classes() {
    for n in 1..=7 {
        let spec = EnsembleSpec::contains_origin(PolymerClass::Tree, 2, n, Boundary::Penetrable);
        let t = count_by_topology(&spec).unwrap();
        assert_eq!(t.classes.len(), oracle::free_trees_bounded(n, 4), "n={n}");
    }
}

fn cycle_points(p: &Polymer) -> Vec<[i32; 3]> {
    let adj = p.adjacency();
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    loop {
        let cur = *order.last().unwrap();
        let next = *adj[cur].iter().find(|&&w| w != prev).unwrap();
        if next == 0 {
            break;
        }
        prev = cur;
        order.push(next);
    }
    order.iter().map(|&i| {
        let c = &p.sites()[i].0;
        [c[0], c[1], c[2]]
    }).collect()
}

fn strip_t(mut x: num_bigint::BigInt, t: i64) -> num_bigint::BigInt {
    use num_traits::Zero;
    let t = num_bigint::BigInt::from(t);
    while !x.is_zero() && (&x % &t).is_zero() {
        x /= &t;
    }
    x
}

#[test]
fn knot_data_against_diagram() {
    let phi = build_phi30();
    let pts = cycle_points(&phi);
    assert_eq!(oracle::fox_colorings(&pts), 9);
    let inv = knot_invariant(&phi).unwrap();
    assert_eq!(inv.determinant, BigUint::from(3u32));
    assert_eq!(oracle::alexander_at(&pts, -1), 3.into());
    let poly = inv.alexander.clone().expect("small diagram");
    let trefoil: Vec<num_bigint::BigInt> = vec![1.into(), (-1).into(), 1.into()];
    assert_eq!(poly, trefoil);
    for t in [2i64, 3, 5] {
        let v: num_bigint::BigInt = poly.iter().rev().fold(0.into(), |acc, c| acc * t + c);
        use num_traits::Signed;
        assert_eq!(strip_t(v.abs(), t), strip_t(oracle::alexander_at(&pts, t), t), "t={t}");
    }
    for t in 1..=5usize {
        let chain = build_phi_chain(t).unwrap();
        let pts = cycle_points(&chain);
        assert_eq!(oracle::fox_colorings(&pts), 3u64.pow(t as u32 + 1), "t={t}");
        assert_eq!(knot_invariant(&chain).unwrap().determinant, BigUint::from(3u32).pow(t as u32));
    }
}
