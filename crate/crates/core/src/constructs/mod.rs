//! Explicit constructions: the 30-step trefoil polygon, its stacked
//! products, straight comb witnesses, and two comb maps.

mod combs;

use std::collections::BTreeSet;

pub use combs::{decompose_fibers, plus_map_census, DecomposeCase, FiberReport, PlusMapReport};
pub(crate) use combs::SmallComb;

use crate::error::{Error, Result};
use crate::lattice::{Point, Polymer, PolymerClass};
use crate::topology::CombSignature;

fn p3(x: i32, y: i32, z: i32) -> Point {
    Point(vec![x, y, z])
}

/// The 30-step trefoil polygon, starting from `A` at the origin.
const PHI: [[i32; 3]; 30] = [
    [0, 0, 0],
    [1, 0, 0],
    [2, 0, 0],
    [2, -1, 0],
    [2, -1, 1],
    [2, -1, 2],
    [1, -1, 2],
    [1, 0, 2],
    [1, 1, 2],
    [2, 1, 2],
    [3, 1, 2],
    [3, 1, 1],
    [3, 1, 0],
    [3, 0, 0],
    [3, -1, 0],
    [3, -2, 0],
    [2, -2, 0],
    [1, -2, 0],
    [1, -1, 0],
    [1, -1, 1],
    [1, 0, 1],
    [2, 0, 1],
    [2, 0, 2],
    [2, 0, 3],
    [1, 0, 3],
    [1, 0, 4],
    [0, 0, 4],
    [0, 0, 3],
    [0, 0, 2],
    [0, 0, 1],
];

pub fn build_phi30() -> Polymer {
    let pts: Vec<Point> = PHI.iter().map(|c| p3(c[0], c[1], c[2])).collect();
    Polymer::cycle(&pts).expect("phi is a lattice cycle")
}

type Edge = (Point, Point);

fn edge(a: Point, b: Point) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `t` copies of φ stacked along `x_3` in steps of 4, shared edges removed,
/// and the top detour `B C D E` cut to the single edge `B E`.
pub fn build_phi_chain(t: usize) -> Result<Polymer> {
    if t == 0 {
        return Err(Error::InvalidArgument("phi chain needs t ≥ 1".into()));
    }
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for j in 0..t as i32 {
        for i in 0..PHI.len() {
            let (a, b) = (PHI[i], PHI[(i + 1) % PHI.len()]);
            let e = edge(p3(a[0], a[1], a[2] + 4 * j), p3(b[0], b[1], b[2] + 4 * j));
            // Consecutive copies share u_j; the symmetric difference drops it.
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
    }
    let top = 4 * t as i32;
    let (b, c, d, e) = (p3(0, 0, top - 1), p3(0, 0, top), p3(1, 0, top), p3(1, 0, top - 1));
    for x in [edge(b.clone(), c.clone()), edge(c, d.clone()), edge(d, e.clone())] {
        if !edges.remove(&x) {
            return Err(Error::Precondition("top detour missing".into()));
        }
    }
    edges.insert(edge(b, e));
    let sites: Vec<Point> = edges.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    Polymer::new(PolymerClass::Polygon, 3, sites, edges.into_iter().collect(), None)
}

/// A comb with the given signature. In `d ≥ 3` it lies in the surface:
/// backbone along `x_2`, side chains along `+x_3`. In `d = 2` the backbone
/// runs along the surface line and side chains go into the bulk along `+x_1`.
pub fn straight_comb_witness(sig: &CombSignature, d: usize) -> Result<Polymer> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    let at = |x1: i32, x2: i32, x3: i32| {
        let mut v = vec![0; d];
        v[0] = x1;
        v[1] = x2;
        if d >= 3 {
            v[2] = x3;
        }
        Point(v)
    };
    let len = sig.backbone_len() as i32;
    let mut sites: Vec<Point> = (0..=len).map(|i| at(0, i, 0)).collect();
    let mut edges: Vec<Edge> = sites.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    for (&pos, &s) in sig.attach_positions().iter().zip(sig.s()) {
        let mut prev = at(0, pos as i32, 0);
        for k in 1..=s as i32 {
            let next = if d >= 3 { at(0, pos as i32, k) } else { at(k, pos as i32, 0) };
            edges.push((prev, next.clone()));
            sites.push(next.clone());
            prev = next;
        }
    }
    let labels = Some((at(0, 0, 0), at(0, len, 0)));
    let p = Polymer::new(PolymerClass::Comb, d, sites, edges, labels)?;
    debug_assert!(p.is_valid());
    Ok(p)
}

fn require_comb(p: &Polymer) -> Result<()> {
    if p.class() != PolymerClass::Comb {
        return Err(Error::WrongClass { expected: "comb".into(), got: p.class().to_string() });
    }
    p.validate().map_err(|v| Error::Precondition(format!("invalid comb: {v}")))
}

/// Maps a comb of `C_N^+` (origin included, inside `x_1 ≥ 0`, `N ≥ 1`) to
/// one of `C_{N+2}^+` with at most two surface sites.
///
/// If the origin has degree 1, the walk `0, −e_1, −2e_1` is appended (an
/// origin label moves to `−2e_1`). Otherwise the edge from the origin to its
/// lexicographically smallest neighbour `v` with `v_1 = 0` is replaced by
/// `v, v−e_1, −e_1, 0`. The result is translated so its least site is the origin.
pub fn comb_plus_map(p: &Polymer) -> Result<Polymer> {
    require_comb(p)?;
    let o = p
        .site_index(&Point::origin(p.dim()))
        .ok_or_else(|| Error::Precondition("comb does not contain the origin".into()))?;
    if !p.in_halfspace() {
        return Err(Error::Precondition("comb leaves the half-space x_1 ≥ 0".into()));
    }
    if p.edges().is_empty() {
        return Err(Error::Precondition("comb has no edges".into()));
    }
    let out = SmallComb::from_polymer(p).plus_two(o)?;
    Ok(out.to_polymer(PolymerClass::Comb, &out.whole()).lex_normalize())
}

/// Pieces of a comb split after `N` edges, in their original positions.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub case: DecomposeCase,
    /// Comb with exactly `N` edges, containing `ρ_A`.
    pub kappa1: Polymer,
    pub kappa2: Polymer,
    /// Walk, possibly of zero steps.
    pub theta: Polymer,
    /// Site where `κ¹` ends (`κ¹_B`).
    pub split: Point,
    /// Case II only: the side-chain site `u` where `θ` starts, and `y`.
    pub u: Option<Point>,
    pub y: Option<Point>,
}

impl Decomposition {
    /// The pieces each translated so their least site is the origin.
    pub fn normalized(&self) -> (Polymer, Polymer, Polymer) {
        (self.kappa1.lex_normalize(), self.kappa2.lex_normalize(), self.theta.lex_normalize())
    }
}

/// Splits an `(N+M)`-edge comb into an `N`-edge comb containing `ρ_A`, a
/// second comb, and a walk. Reading from `ρ_A`, the backbone is walked and
/// each side chain is taken in full as soon as it is reached; the case
/// depends on whether edge `N` falls on the backbone before the last side
/// chain (III), inside a side chain (II) or after all of them (I).
pub fn comb_decompose(p: &Polymer, n: usize) -> Result<Decomposition> {
    require_comb(p)?;
    let total = p.edges().len();
    if n == 0 || n >= total {
        return Err(Error::Precondition(format!("split {n} must lie in [1, {}]", total.saturating_sub(1))));
    }
    let c = SmallComb::from_polymer(p);
    let s = c.split(n);
    Ok(Decomposition {
        case: s.case,
        kappa1: c.to_polymer(PolymerClass::Comb, &s.k1),
        kappa2: c.to_polymer(PolymerClass::Comb, &s.k2),
        theta: c.to_polymer(PolymerClass::Walk, &s.theta),
        split: c.point(s.split),
        u: s.u.map(|i| c.point(i)),
        y: s.y.map(|i| c.point(i)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_caption_anchors() {
        let phi = build_phi30();
        for q in [p3(0, 0, 0), p3(0, 0, 4), p3(1, 0, 4), p3(3, 1, 0), p3(3, 1, 1)] {
            assert!(phi.site_index(&q).is_some(), "{q}");
        }
        assert_eq!(phi.sites().len(), 30);
    }

    #[test]
    fn chain_small() {
        let c = build_phi_chain(2).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.edges().len(), 56);
        assert_eq!(c.visits(), 8);
    }
}
