use std::collections::HashSet;

use polylat::constructs::{
    build_phi_chain, comb_decompose, comb_plus_map, straight_comb_witness, DecomposeCase,
};
use polylat::{CombSignature, Point, Polymer, PolymerClass};
use proptest::prelude::*;

fn p2(x: i32, y: i32) -> Point {
    Point(vec![x, y])
}

fn step(d: usize, k: u8) -> Point {
    let k = k as usize % (2 * d);
    Point::unit(d, k / 2, if k % 2 == 0 { 1 } else { -1 })
}

/// Grows a comb from direction lists; `None` if anything collides.
fn grow(d: usize, backbone: &[u8], chains: &[(usize, Vec<u8>)]) -> Option<Polymer> {
    let mut bb = vec![Point::origin(d)];
    let mut seen: HashSet<Point> = bb.iter().cloned().collect();
    for &k in backbone {
        let q = bb.last().unwrap().add(&step(d, k));
        if !seen.insert(q.clone()) {
            return None;
        }
        bb.push(q);
    }
    let mut edges: Vec<(Point, Point)> = bb.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let t = bb.len() - 1;
    let mut used = HashSet::new();
    for (at, dirs) in chains {
        if t < 2 {
            break;
        }
        let i = 1 + at % (t - 1);
        if !used.insert(i) {
            continue;
        }
        let mut cur = bb[i].clone();
        for &k in dirs {
            let q = cur.add(&step(d, k));
            if !seen.insert(q.clone()) {
                return None;
            }
            edges.push((cur, q.clone()));
            cur = q;
        }
    }
    let sites: Vec<Point> = seen.into_iter().collect();
    let p = Polymer::new(PolymerClass::Comb, d, sites, edges, Some((bb[0].clone(), bb[t].clone()))).ok()?;
    p.is_valid().then_some(p)
}

fn comb_strategy() -> impl Strategy<Value = Polymer> {
    (
        2usize..=3,
        prop::collection::vec(0u8..6, 1..10),
        prop::collection::vec((0usize..16, prop::collection::vec(0u8..6, 1..4)), 0..4),
    )
        .prop_filter_map("self-intersecting", |(d, bb, ch)| grow(d, &bb, &ch))
}

fn min_layer_count(p: &Polymer) -> usize {
    let lo = p.sites().iter().map(|s| s.0[0]).min().unwrap();
    p.sites().iter().filter(|s| s.0[0] == lo).count()
}

#[test]
fn single_edge_into_bulk() {
    let c = Polymer::path(PolymerClass::Comb, &[p2(0, 0), p2(1, 0)]).unwrap();
    let out = comb_plus_map(&c).unwrap();
    assert!(out.is_valid());
    assert_eq!(out.edges().len(), 3);
    assert_eq!(out.visits(), 1);
    assert!(out.contains_origin() && out.in_halfspace());
}

#[test]
fn plus_map_rejects_outside_halfspace() {
    let c = Polymer::path(PolymerClass::Comb, &[p2(0, 0), p2(-1, 0)]).unwrap();
    assert!(comb_plus_map(&c).is_err());
    let c = Polymer::path(PolymerClass::Comb, &[p2(1, 0), p2(2, 0)]).unwrap();
    assert!(comb_plus_map(&c).is_err());
}

// Two placements of one shape whose only surface edge joins the two
// possible origins land on the same image.
#[test]
fn plus_map_shared_surface_edge() {
    let pts = [p2(1, 0), p2(0, 0), p2(0, 1), p2(1, 1)];
    let a = Polymer::path(PolymerClass::Comb, &pts).unwrap();
    let b = a.translate(&p2(0, -1));
    assert!(a.contains_origin() && b.contains_origin());
    assert_ne!(a, b);
    assert_eq!(comb_plus_map(&a).unwrap(), comb_plus_map(&b).unwrap());
    assert_eq!(comb_plus_map(&a).unwrap().visits(), 2);
}

#[test]
fn pure_backbone_split() {
    let pts: Vec<Point> = (0..8).map(|i| p2(0, i)).collect();
    let c = Polymer::path(PolymerClass::Comb, &pts).unwrap();
    for n in 1..7 {
        let dcp = comb_decompose(&c, n).unwrap();
        assert!(matches!(dcp.case, DecomposeCase::I | DecomposeCase::III));
        assert_eq!(dcp.theta.edges().len(), 0);
        assert_eq!(dcp.kappa1.edges().len(), n);
        assert_eq!(dcp.kappa2.edges().len(), 7 - n);
    }
}

#[test]
fn split_inside_side_chain() {
    // Backbone (0,0)..(0,4); a 3-step chain hangs off (0,1).
    let c = grow(2, &[2, 2, 2, 2], &[(0, vec![0, 0, 0])]).unwrap();
    let dcp = comb_decompose(&c, 3).unwrap();
    assert_eq!(dcp.case, DecomposeCase::II);
    assert_eq!(dcp.kappa1.edges().len(), 3);
    assert_eq!(dcp.u, Some(p2(1, 1)));
    assert_eq!(dcp.y, Some(p2(0, 2)));
    assert_eq!(dcp.theta.edges().len(), 2);
    assert_eq!(dcp.kappa2.edges().len(), 2);
}

#[test]
fn split_bounds() {
    let c = Polymer::path(PolymerClass::Comb, &[p2(0, 0), p2(0, 1), p2(0, 2)]).unwrap();
    assert!(comb_decompose(&c, 0).is_err());
    assert!(comb_decompose(&c, 2).is_err());
}

#[test]
fn phi_chain_counts() {
    for t in 1..=50 {
        let c = build_phi_chain(t).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.edges().len(), 28 * t);
        assert_eq!(c.visits(), 4 * t);
    }
}

#[test]
fn witness_examples() {
    let s: CombSignature = "0;6;".parse().unwrap();
    assert_eq!(straight_comb_witness(&s, 3).unwrap().visits(), 7);
    let s: CombSignature = "4;2,3,4,1,3;3,1,5,2".parse().unwrap();
    assert_eq!(straight_comb_witness(&s, 3).unwrap().visits(), 25);
    let s: CombSignature = "2;1,1,1;2,2".parse().unwrap();
    assert_eq!(straight_comb_witness(&s, 2).unwrap().visits(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decompose_partitions_edges(c in comb_strategy(), k in 0usize..64) {
        let total = c.edges().len();
        prop_assume!(total >= 2);
        let n = 1 + k % (total - 1);
        let dcp = comb_decompose(&c, n).unwrap();
        prop_assert_eq!(dcp.kappa1.edges().len(), n);
        prop_assert_eq!(
            dcp.kappa1.edges().len() + dcp.kappa2.edges().len() + dcp.theta.edges().len(),
            total
        );
        let mut all: HashSet<(Point, Point)> = HashSet::new();
        for piece in [&dcp.kappa1, &dcp.kappa2, &dcp.theta] {
            prop_assert!(piece.is_valid());
            for (a, b) in piece.edge_points() {
                prop_assert!(all.insert((a.clone(), b.clone())));
                prop_assert!(c.site_index(a).is_some() && c.site_index(b).is_some());
            }
        }
        prop_assert!(dcp.kappa1.site_index(&Point::origin(c.dim())).is_some());
        let (k1, k2, th) = dcp.normalized();
        prop_assert!(
            min_layer_count(&c) <= k1.visits() + k2.visits() + th.visits()
        );
    }

    #[test]
    fn plus_map_output(c in comb_strategy()) {
        // Place a surface site at the origin with everything in x_1 ≥ 0.
        let lo = c.sites().iter().map(|s| s.0[0]).min().unwrap();
        let base = c.sites().iter().find(|s| s.0[0] == lo).unwrap().clone();
        let c = c.translate(&base.scale(-1));
        let out = comb_plus_map(&c).unwrap();
        prop_assert!(out.is_valid());
        prop_assert_eq!(out.class(), PolymerClass::Comb);
        prop_assert_eq!(out.edges().len(), c.edges().len() + 2);
        prop_assert!(out.in_halfspace() && out.contains_origin());
        prop_assert!((1..=2).contains(&out.visits()));
    }

    #[test]
    fn witness_round_trip(b in 0usize..4, ns in prop::collection::vec(1usize..5, 5), ss in prop::collection::vec(1usize..5, 4), d in 2usize..=4) {
        let sig = CombSignature::new(b, ns[..=b].to_vec(), ss[..b].to_vec()).unwrap();
        let w = straight_comb_witness(&sig, d).unwrap();
        prop_assert!(w.is_valid());
        prop_assert_eq!(polylat::topology::comb_signature(&w).unwrap(), sig.clone());
        let want = if d >= 3 { sig.edges() + 1 } else { sig.backbone_len() + 1 };
        prop_assert_eq!(w.visits(), want);
    }
}
