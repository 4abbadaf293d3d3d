use num_bigint::BigUint;
use polylat::constructs::{build_phi30, straight_comb_witness};
use polylat::enumerate::{summarize, Budget, Configuration, Consumer};
use polylat::statmech::{
    expected_visits, free_energy, growth_lower_bound_madras, partition_function, pattern_stats, pseudo_critical,
    quenched_expected_visits, quenched_free_energy, relative_quenched, submultiplicative_upper_bound, thermo,
    BetaGrid, Pattern, Which,
};
use polylat::topology::{comb_signature, graph_key, knot_invariant, tree_key};
use polylat::{
    count_by_topology, max_topology_class, Boundary, CombSignature, Convention, EnsembleSpec, Error, Histogram,
    Point, Polymer, PolymerClass, TopologyTable,
};
use polylat_oracle as oracle;

fn pt(c: &[i32]) -> Point {
    Point(c.to_vec())
}

fn path(class: PolymerClass, pts: &[&[i32]]) -> Polymer {
    Polymer::path(class, &pts.iter().map(|c| pt(c)).collect::<Vec<_>>()).unwrap()
}

fn star4() -> Polymer {
    let c = pt(&[0, 0]);
    let leaves = [pt(&[1, 0]), pt(&[-1, 0]), pt(&[0, 1]), pt(&[0, -1])];
    let mut sites = vec![c.clone()];
    sites.extend(leaves.iter().cloned());
    let edges = leaves.iter().map(|l| (c.clone(), l.clone())).collect();
    Polymer::new(PolymerClass::Tree, 2, sites, edges, None).unwrap()
}

fn unit_square(class: PolymerClass, edges: usize) -> Polymer {
    let s = [pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])];
    let e = (0..edges).map(|i| (s[i].clone(), s[(i + 1) % 4].clone())).collect();
    Polymer::new(class, 2, s.to_vec(), e, None).unwrap()
}

fn spec(class: PolymerClass, d: usize, n: usize, b: Boundary, c: Convention) -> EnsembleSpec {
    EnsembleSpec::new(class, d, n, b, c).unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

// lattice core

#[test]
fn validate_examples() {
    let single = Polymer::new(PolymerClass::Animal, 2, vec![pt(&[0, 0])], vec![], None).unwrap();
    assert!(single.is_valid());
    assert!(unit_square(PolymerClass::Polygon, 4).is_valid());
    let apart = Polymer::new(PolymerClass::Animal, 2, vec![pt(&[0, 0]), pt(&[1, 0])], vec![], None).unwrap();
    assert!(!apart.is_valid());
}

#[test]
fn visits_examples() {
    let single = Polymer::new(PolymerClass::Animal, 3, vec![pt(&[0, 0, 0])], vec![], None).unwrap();
    assert_eq!(single.visits(), 1);
    let up = path(PolymerClass::Walk, &[&[0, 0], &[1, 0], &[2, 0], &[3, 0], &[4, 0]]);
    assert_eq!(up.visits(), 1);
    let flat = path(PolymerClass::Walk, &[&[0, 0, 0], &[0, 1, 0], &[0, 1, 1], &[0, 2, 1], &[0, 2, 2]]);
    assert_eq!(flat.visits(), 5);
}

#[test]
fn lex_examples() {
    let s = [pt(&[3, 3]), pt(&[4, 3]), pt(&[4, 4]), pt(&[3, 4])];
    let sq = Polymer::cycle(&s).unwrap();
    let n = sq.lex_normalize();
    assert_eq!(n, unit_square(PolymerClass::Polygon, 4));
    assert_eq!(n.lex_normalize(), n);
    assert_eq!(n.lex_min_site(), &pt(&[0, 0]));
}

#[test]
fn span_examples() {
    let single = Polymer::new(PolymerClass::Tree, 4, vec![pt(&[0, 0, 0, 0])], vec![], None).unwrap();
    assert_eq!(single.spans(), vec![1, 1, 1, 1]);
    let up = path(PolymerClass::Walk, &[&[0, 0], &[1, 0], &[2, 0], &[3, 0], &[4, 0]]);
    assert_eq!(up.spans(), vec![5, 1]);
    assert_eq!(build_phi30().spans(), vec![4, 4, 5]);
}

#[test]
fn longest_path_examples() {
    let w = path(PolymerClass::Walk, &[&[0, 0], &[0, 1], &[1, 1], &[1, 2], &[2, 2], &[2, 3]]);
    assert_eq!(w.longest_path().unwrap(), 5);
    assert_eq!(star4().longest_path().unwrap(), 2);
    assert!(unit_square(PolymerClass::Polygon, 4).longest_path().is_err());
    assert!(unit_square(PolymerClass::Animal, 4).longest_path().is_err());
}

/// Pairs of (double sweep, all-pairs) path lengths over every configuration.
#[derive(Default)]
struct LpPairs(std::collections::BTreeMap<(usize, usize), u64>);

impl Consumer for LpPairs {
    fn fresh(&self) -> Self {
        LpPairs::default()
    }
    fn accept(&mut self, cfg: &Configuration<'_>) {
        let p = cfg.polymer();
        let lp = p.longest_path().unwrap();
        let brute = oracle::diameter(p.sites().len(), p.edges());
        *self.0.entry((lp, brute)).or_default() += 1;
    }
    fn merge(&mut self, o: Self) {
        for (k, v) in o.0 {
            *self.0.entry(k).or_default() += v;
        }
    }
}

#[test]
fn longest_path_distribution_d2_n10() {
    let s = spec(PolymerClass::Tree, 2, 10, Boundary::Penetrable, Convention::TranslationClasses);
    let (summary, pairs) = polylat::enumerate(&s, &Budget::default(), LpPairs::default()).unwrap();
    assert!(pairs.0.keys().all(|(a, b)| a == b));
    assert_eq!(BigUint::from(pairs.0.values().sum::<u64>()), summary.total);
    assert_eq!(summary.total, big(144_880));
}

// enumerate

#[test]
fn odd_polygons_are_empty() {
    for b in [Boundary::Penetrable, Boundary::Impenetrable] {
        for c in [Convention::TranslationClasses, Convention::ContainsOrigin] {
            let s = summarize(&spec(PolymerClass::Polygon, 3, 7, b, c), &Budget::default()).unwrap();
            assert_eq!(s.total, big(0));
        }
    }
}

#[test]
fn small_animals_against_oracle() {
    for n in 1..=6 {
        let s = summarize(&spec(PolymerClass::Animal, 2, n, Boundary::Penetrable, Convention::TranslationClasses), &Budget::default())
            .unwrap();
        assert_eq!(s.total, oracle::animal_count(2, n), "n={n}");
    }
}

#[test]
fn contains_origin_multiplies_translation_classes() {
    let b = Budget::default();
    let cases = [
        (PolymerClass::Animal, 2, 6),
        (PolymerClass::Tree, 3, 5),
        (PolymerClass::Polygon, 2, 10),
        (PolymerClass::Walk, 2, 9),
        (PolymerClass::Comb, 3, 5),
    ];
    for (class, d, n) in cases {
        for size in 1..=n {
            let bar = summarize(&spec(class, d, size, Boundary::Penetrable, Convention::TranslationClasses), &b).unwrap();
            let oo = summarize(&spec(class, d, size, Boundary::Penetrable, Convention::ContainsOrigin), &b).unwrap();
            let factor = if class.sized_by_sites() || class == PolymerClass::Polygon { size } else { size + 1 };
            assert_eq!(oo.total, bar.total * big(factor as u64), "{class} d={d} n={size}");
        }
    }
}

// topology

#[test]
fn tree_classes_d3_n5() {
    let s = EnsembleSpec::contains_origin(PolymerClass::Tree, 3, 5, Boundary::Penetrable);
    let (key, size) = max_topology_class(&s).unwrap();
    assert_eq!(size, big(1815));
    let p5 = path(PolymerClass::Tree, &[&[0, 0, 0], &[0, 1, 0], &[0, 1, 1], &[1, 1, 1], &[1, 2, 1]]);
    assert_eq!(key, tree_key(&p5).unwrap());
    let p5b = path(PolymerClass::Tree, &[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0], &[4, 0, 0]]);
    assert_eq!(tree_key(&p5b).unwrap(), key);
    assert_ne!(tree_key(&star4()).unwrap(), key);
}

#[test]
fn tree_topology_sums_d2_n4() {
    let s = EnsembleSpec::contains_origin(PolymerClass::Tree, 2, 4, Boundary::Penetrable);
    let t = count_by_topology(&s).unwrap();
    assert_eq!(t.total(), oracle::tree_count(2, 4) * big(4));
    let s3 = EnsembleSpec::contains_origin(PolymerClass::Tree, 2, 3, Boundary::Penetrable);
    assert_eq!(max_topology_class(&s3).unwrap().1, oracle::tree_count(2, 3) * big(3));
}

#[test]
fn animal_keys() {
    let p4 = path(PolymerClass::Animal, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
    assert_ne!(graph_key(&unit_square(PolymerClass::Animal, 4)).unwrap(), graph_key(&p4).unwrap());
    assert_ne!(
        graph_key(&unit_square(PolymerClass::Animal, 4)).unwrap(),
        graph_key(&unit_square(PolymerClass::Animal, 3)).unwrap()
    );
    let s = EnsembleSpec::contains_origin(PolymerClass::Animal, 2, 5, Boundary::Penetrable);
    let t = count_by_topology(&s).unwrap();
    assert_eq!(t.total(), oracle::animal_count(2, 5) * big(5));
}

#[test]
fn comb_topologies_small() {
    for n in 2..=8 {
        let s = EnsembleSpec::contains_origin(PolymerClass::Comb, 2, n, Boundary::Penetrable);
        let t = count_by_topology(&s).unwrap();
        assert_eq!(t.classes.len(), 1 << (n - 2), "n={n}");
    }
}

#[test]
fn comb_signature_examples() {
    for n in 1..6 {
        let pts: Vec<Point> = (0..=n).map(|i| pt(&[0, i])).collect();
        let c = Polymer::path(PolymerClass::Comb, &pts).unwrap();
        assert_eq!(comb_signature(&c).unwrap(), CombSignature::new(0, vec![n as usize], vec![]).unwrap());
    }
    let fig: CombSignature = "4;2,3,4,1,3;3,1,5,2".parse().unwrap();
    let w = straight_comb_witness(&fig, 3).unwrap();
    assert_eq!(comb_signature(&w).unwrap(), fig);
    assert_eq!(fig.edges(), 24);
}

#[test]
fn square_has_determinant_one() {
    let s = [pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[1, 1, 0]), pt(&[0, 1, 0])];
    let sq = Polymer::cycle(&s).unwrap();
    assert_eq!(knot_invariant(&sq).unwrap().determinant, big(1));
}

// statmech

fn trees_d3_n5() -> TopologyTable {
    count_by_topology(&EnsembleSpec::contains_origin(PolymerClass::Tree, 3, 5, Boundary::Penetrable)).unwrap()
}

#[test]
fn zero_beta_examples() {
    let t = trees_d3_n5();
    let z = partition_function(&t.marginal(), 0.0).unwrap();
    assert_eq!(z.exact, Some(big(3390)));
    // Plain f64 evaluation of the same definitions.
    let f0 = (3390f64).ln() / 5.0;
    let fq0 = (1815.0 * 1815f64.ln() + 75.0 * 75f64.ln() + 1500.0 * 1500f64.ln()) / 3390.0 / 5.0;
    assert!((free_energy(&t, 0.0).unwrap() - f0).abs() < 1e-14);
    assert!((quenched_free_energy(&t, 0.0).unwrap() - fq0).abs() < 1e-14);
    assert!((f0 - 1.625717).abs() < 5e-7);
    assert!((fq0 - 1.46980).abs() < 5e-6);
    assert!(fq0 < f0);
    let h = t.marginal();
    let mean: f64 = h.iter().map(|(k, c)| k as f64 * c.to_string().parse::<f64>().unwrap()).sum::<f64>() / 3390.0;
    assert!((expected_visits(&t, 0.0).unwrap() - mean).abs() < 1e-12);
}

#[test]
fn single_class_quenched_equals_annealed() {
    let t = count_by_topology(&EnsembleSpec::new(PolymerClass::Walk, 2, 8, Boundary::Impenetrable, Convention::FromOrigin).unwrap())
        .unwrap();
    assert_eq!(t.classes.len(), 1);
    for beta in [-1.0, 0.0, 0.7] {
        assert!((free_energy(&t, beta).unwrap() - quenched_free_energy(&t, beta).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn strong_attraction_trees_d2() {
    for n in 3..=9 {
        let t = count_by_topology(&EnsembleSpec::contains_origin(PolymerClass::Tree, 2, n, Boundary::Penetrable)).unwrap();
        let e = expected_visits(&t, 40.0).unwrap();
        let eq = quenched_expected_visits(&t, 40.0).unwrap();
        // Every tree of a non-path topology has a branch site with a neighbour off the line.
        let total = t.total().to_string().parse::<f64>().unwrap();
        let cap: f64 = t
            .classes
            .values()
            .map(|h| h.total().to_string().parse::<f64>().unwrap() / total * h.max_visits().unwrap() as f64)
            .sum();
        assert!(e > n as f64 - 1e-6, "n={n} e={e}");
        assert!(eq <= cap + 1e-9);
        if n >= 4 {
            assert!(cap < n as f64 - 1e-3, "n={n}");
        }
    }
}

#[test]
fn identities_on_default_grid() {
    let grid = BetaGrid::default();
    for s in [
        EnsembleSpec::contains_origin(PolymerClass::Tree, 3, 5, Boundary::Penetrable),
        EnsembleSpec::contains_origin(PolymerClass::Animal, 2, 6, Boundary::Penetrable),
        spec(PolymerClass::Walk, 3, 6, Boundary::Impenetrable, Convention::FromOrigin),
        spec(PolymerClass::Comb, 2, 7, Boundary::Impenetrable, Convention::ContainsOrigin),
    ] {
        let r = thermo(&count_by_topology(&s).unwrap(), &grid).unwrap();
        assert!(r.checks.all_pass(), "{s}: {:?}", r.checks.failures());
    }
}

#[test]
fn relative_quenched_examples() {
    let t = trees_d3_n5();
    assert_eq!(relative_quenched(&t, 0.0).unwrap().dfq, 0.0);
    assert!(relative_quenched(&t, 1.5).unwrap().dfq >= 0.0);
    for n in 1..=8 {
        let t = count_by_topology(&EnsembleSpec::contains_origin(PolymerClass::Animal, 2, n, Boundary::Penetrable)).unwrap();
        for k in 0..=8 {
            let beta = -0.25 * k as f64;
            let r = relative_quenched(&t, beta).unwrap();
            assert!(r.animal_margin.unwrap() >= -1e-12, "n={n} β={beta}");
        }
    }
}

/// First β on the grid, refined by bisection, where `(ln Z(β) − ln Z(0))/N`
/// exceeds θ, from a plain visit histogram.
fn crossing_f64(h: &[(usize, f64)], n: f64, theta: f64, grid: &[f64]) -> Option<f64> {
    let lz = |b: f64| {
        let m = h.iter().map(|&(k, _)| b * k as f64).fold(f64::MIN, f64::max);
        m + h.iter().map(|&(k, c)| c * (b * k as f64 - m).exp()).sum::<f64>().ln()
    };
    let d = |b: f64| (lz(b) - lz(0.0)) / n;
    let mut prev = None;
    for &b in grid {
        if d(b) > theta {
            let Some(mut lo) = prev else { return Some(b) };
            let mut hi = b;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if d(mid) > theta {
                    hi = mid
                } else {
                    lo = mid
                }
            }
            return Some(hi);
        }
        prev = Some(b);
    }
    None
}

#[test]
fn walk_crossings_increase_with_n() {
    let grid = BetaGrid::range(-2.0, 8.0, 0.25).unwrap();
    let tables: Vec<TopologyTable> = (2..=10)
        .map(|n| count_by_topology(&spec(PolymerClass::Walk, 2, n, Boundary::Impenetrable, Convention::FromOrigin)).unwrap())
        .collect();
    let pc = pseudo_critical(&tables, &grid, 0.02, Which::Annealed).unwrap();
    let betas: Vec<f64> = pc.crossings.iter().map(|c| c.beta.unwrap()).collect();
    assert!(betas.iter().all(|&b| b > 0.0));
    assert!(betas.windows(2).all(|w| w[1] > w[0]));
    for (i, n) in (2..=10).enumerate() {
        let mut h = std::collections::BTreeMap::<usize, f64>::new();
        for w in oracle::walks(2, n) {
            if w.iter().all(|p| p[0] >= 0) {
                *h.entry(w.iter().filter(|p| p[0] == 0).count()).or_default() += 1.0;
            }
        }
        let h: Vec<(usize, f64)> = h.into_iter().collect();
        let want = crossing_f64(&h, n as f64, 0.02, grid.values()).unwrap();
        assert!((betas[i] - want).abs() < 1e-9, "n={n}: {} vs {want}", betas[i]);
    }
}

#[test]
fn tree_quenched_crossings_exist() {
    let grid = BetaGrid::range(-2.0, 8.0, 0.25).unwrap();
    let tables: Vec<TopologyTable> = (2..=10)
        .map(|n| count_by_topology(&EnsembleSpec::contains_origin(PolymerClass::Tree, 2, n, Boundary::Penetrable)).unwrap())
        .collect();
    let pc = pseudo_critical(&tables, &grid, 0.05, Which::Quenched).unwrap();
    assert!(pc.crossings.iter().all(|c| c.beta.is_some_and(|b| b > 0.0 && b < 0.25)));
    let inf = pseudo_critical(&tables, &grid, f64::INFINITY, Which::Quenched);
    assert!(matches!(inf, Err(Error::NoCrossing(_))));
}

#[test]
fn madras_examples() {
    let b = growth_lower_bound_madras(2, 15, &big(338_158_676)).unwrap();
    assert!(b.value >= 4.3442 && b.value < 4.3443, "{}", b.value);
    let b = growth_lower_bound_madras(3, 11, &big(248_160_162)).unwrap();
    assert!(b.value >= 7.7248 && b.value < 7.7249, "{}", b.value);
    // Independent f64 evaluation of the same formula.
    let f = |d: f64, n: f64, t: f64| (d * (2.0 * n).powf((d - 1.0) / d) * t).powf(1.0 / n);
    assert!((f(2.0, 15.0, 338_158_676.0) - 4.344_2).abs() < 1e-4);
}

#[test]
fn walk_upper_bound_from_counts() {
    let counts: Vec<BigUint> = (1..=12).map(|n| big(oracle::walk_count(2, n))).collect();
    let mut last = f64::INFINITY;
    for k in 1..=12 {
        let b = submultiplicative_upper_bound(&counts[..k], |_| 1.0).unwrap();
        assert!(b.value <= last);
        last = b.value;
    }
    assert!((2.638..=4.0).contains(&last));
}

#[test]
fn pattern_examples() {
    let s = EnsembleSpec::contains_origin(PolymerClass::Tree, 2, 5, Boundary::Penetrable);
    let h = pattern_stats(&s, Pattern::StarH, &Budget::default()).unwrap();
    let t = count_by_topology(&s).unwrap();
    let star = t.class_size(&tree_key(&star4()).unwrap());
    let hit: BigUint = h.iter().filter(|&(k, _)| k >= 1).map(|(_, c)| c.clone()).sum();
    assert_eq!(hit, star);
    assert_eq!(star, big(5));
    for n in 1..=8 {
        let s = spec(PolymerClass::Comb, 2, n, Boundary::Penetrable, Convention::TranslationClasses);
        let h = pattern_stats(&s, Pattern::SideChainCount, &Budget::default()).unwrap();
        assert!(h.max_visits().unwrap() <= (n - 1) / 2);
    }
    assert!(pattern_stats(&s, Pattern::SawPq, &Budget::default()).is_err());
}

#[test]
fn left_histogram_identity() {
    let s = spec(PolymerClass::Comb, 2, 7, Boundary::Impenetrable, Convention::ContainsOrigin);
    let sum = summarize(&s, &Budget::default()).unwrap();
    let left: &Histogram = &sum.visit_histogram;
    assert_eq!(left.total(), sum.total);
    let shapes = oracle::combs(2, 7);
    let plus: usize = shapes
        .iter()
        .map(|c| {
            let lo = c.iter().map(|p| p[0]).min().unwrap();
            c.iter().filter(|p| p[0] == lo).count()
        })
        .sum();
    assert_eq!(sum.total, big(plus as u64));
    for beta in [-1.0, 0.5, 2.0] {
        let z: f64 = left.iter().map(|(k, c)| c.to_string().parse::<f64>().unwrap() * (beta * k as f64).exp()).sum();
        let got = partition_function(left, beta).unwrap().value().unwrap();
        assert!((got - z).abs() <= 1e-13 * z);
    }
}
