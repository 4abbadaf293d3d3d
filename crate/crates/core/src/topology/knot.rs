//! Knot determinant `|Δ(-1)|` (and optionally the Alexander polynomial) of a
//! lattice polygon in `Z^3`, from a generic parallel projection.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{KeyKind, TopologyKey};
use crate::error::{Error, Result};
use crate::lattice::{Polymer, PolymerClass};

/// The polynomial is only computed for diagrams with at most this many crossings.
pub const ALEXANDER_CROSSING_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotInvariant {
    pub determinant: BigUint,
    /// Coefficients from the constant term up, normalized so the constant
    /// term is nonzero and `Δ(1) = 1`.
    pub alexander: Option<Vec<BigInt>>,
}

impl KnotInvariant {
    pub fn unknot() -> Self {
        KnotInvariant { determinant: BigUint::one(), alexander: Some(vec![BigInt::one()]) }
    }

    pub fn key(&self) -> TopologyKey {
        TopologyKey::new(KeyKind::KnotInvariant, self.determinant.to_bytes_be())
    }
}

pub(crate) fn unknot_key() -> TopologyKey {
    KnotInvariant::unknot().key()
}

/// Direction `k` of the projection schedule: `(a, b, -c)` is collapsed.
fn schedule(k: usize) -> [i64; 3] {
    const P: [i64; 16] = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let a = P[k % 16];
    let b = P[(k + 1) % 16] + 2 * (k / 16) as i64;
    let c = 7 + 10 * (1i64 << (k % 14)) + k as i64;
    [a, b, c]
}

pub const SCHEDULE_LEN: usize = 64;

pub fn knot_invariant(p: &Polymer) -> Result<KnotInvariant> {
    let verts = polygon_cycle(p)?;
    for k in 0..SCHEDULE_LEN {
        if let Some(diagram) = Diagram::build(&verts, schedule(k)) {
            return Ok(diagram.invariant());
        }
    }
    Err(Error::NoGenericProjection(SCHEDULE_LEN))
}

/// Same computation with a caller-chosen direction; `None` if not generic.
pub fn knot_invariant_along(p: &Polymer, dir: [i64; 3]) -> Result<Option<(KnotInvariant, usize)>> {
    if dir[2] == 0 {
        return Err(Error::InvalidArgument("third component of the direction must be nonzero".into()));
    }
    let verts = polygon_cycle(p)?;
    Ok(Diagram::build(&verts, dir).map(|d| (d.invariant(), d.crossings.len())))
}

fn polygon_cycle(p: &Polymer) -> Result<Vec<[i64; 3]>> {
    if p.class() != PolymerClass::Polygon {
        return Err(Error::WrongClass { expected: "polygon".into(), got: p.class().to_string() });
    }
    if p.dim() != 3 {
        return Err(Error::Precondition(format!("knot invariants need d=3, got d={}", p.dim())));
    }
    if let Err(v) = p.validate() {
        return Err(Error::Precondition(format!("invalid polygon: {v}")));
    }
    let adj = p.adjacency();
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        if next == 0 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order
        .into_iter()
        .map(|i| {
            let c = &p.sites()[i].0;
            [c[0] as i64, c[1] as i64, c[2] as i64]
        })
        .collect())
}

struct Crossing {
    over_edge: usize,
    under_edge: usize,
    /// Positions along each edge, as `num / den` with `den > 0`.
    t_over: (i128, i128),
    t_under: (i128, i128),
    sign: i32,
}

struct Diagram {
    n_edges: usize,
    crossings: Vec<Crossing>,
}

fn orient(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> i128 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(p: (i128, i128), a: (i128, i128), b: (i128, i128)) -> bool {
    orient(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Diagram {
    /// Projects along `(a, b, -c)`; returns `None` on any degenerate incidence.
    fn build(verts: &[[i64; 3]], dir: [i64; 3]) -> Option<Diagram> {
        let [a, b, c] = dir.map(|x| x as i128);
        let n = verts.len();
        let proj: Vec<(i128, i128)> = verts
            .iter()
            .map(|v| {
                let [x, y, z] = v.map(|x| x as i128);
                (c * x + a * z, c * y + b * z)
            })
            .collect();
        // No two vertices project together.
        let mut seen = HashSet::with_capacity(n);
        if !proj.iter().all(|p| seen.insert(*p)) {
            return None;
        }
        let seg = |i: usize| (proj[i], proj[(i + 1) % n]);
        // No vertex projects into an edge it does not bound.
        for v in 0..n {
            for e in 0..n {
                if v == e || v == (e + 1) % n {
                    continue;
                }
                let (p, q) = seg(e);
                if on_segment(proj[v], p, q) {
                    return None;
                }
            }
        }
        let mut crossings = Vec::new();
        let mut points = HashSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (p1, p2) = seg(i);
                let (q1, q2) = seg(j);
                let o1 = orient(p1, p2, q1).signum();
                let o2 = orient(p1, p2, q2).signum();
                let o3 = orient(q1, q2, p1).signum();
                let o4 = orient(q1, q2, p2).signum();
                if o1 * o2 >= 0 || o3 * o4 >= 0 {
                    continue;
                }
                let d1 = (p2.0 - p1.0, p2.1 - p1.1);
                let d2 = (q2.0 - q1.0, q2.1 - q1.1);
                let w = (q1.0 - p1.0, q1.1 - p1.1);
                let mut den = d1.0 * d2.1 - d1.1 * d2.0;
                let mut n1 = w.0 * d2.1 - w.1 * d2.0;
                let mut n2 = w.0 * d1.1 - w.1 * d1.0;
                if den < 0 {
                    (den, n1, n2) = (-den, -n1, -n2);
                }
                // Exact crossing point, reduced, to detect triple points.
                let px = p1.0 * den + n1 * d1.0;
                let py = p1.1 * den + n1 * d1.1;
                let g = gcd(gcd(px, py), den);
                if !points.insert((px / g, py / g, den / g)) {
                    return None;
                }
                let zi = |e: usize, t: i128| {
                    let z0 = verts[e][2] as i128;
                    let z1 = verts[(e + 1) % n][2] as i128;
                    z0 * den + t * (z1 - z0)
                };
                let (hi, hj) = (zi(i, n1), zi(j, n2));
                let (over, under, t_over, t_under, d_over, d_under) = match hi.cmp(&hj) {
                    Ordering::Greater => (i, j, n1, n2, d1, d2),
                    Ordering::Less => (j, i, n2, n1, d2, d1),
                    Ordering::Equal => return None,
                };
                let sign = (d_over.0 * d_under.1 - d_over.1 * d_under.0).signum() as i32;
                crossings.push(Crossing {
                    over_edge: over,
                    under_edge: under,
                    t_over: (t_over, den),
                    t_under: (t_under, den),
                    sign,
                });
            }
        }
        Some(Diagram { n_edges: n, crossings })
    }

    /// Gauss sequence `(crossing, is_over)` along the polygon.
    fn gauss(&self) -> Vec<(usize, bool)> {
        let mut per_edge: Vec<Vec<((i128, i128), usize, bool)>> = vec![Vec::new(); self.n_edges];
        for (k, c) in self.crossings.iter().enumerate() {
            per_edge[c.over_edge].push((c.t_over, k, true));
            per_edge[c.under_edge].push((c.t_under, k, false));
        }
        let mut seq = Vec::with_capacity(2 * self.crossings.len());
        for mut list in per_edge {
            list.sort_by(|x, y| (x.0 .0 * y.0 .1).cmp(&(y.0 .0 * x.0 .1)));
            seq.extend(list.into_iter().map(|(_, k, o)| (k, o)));
        }
        seq
    }

    fn invariant(&self) -> KnotInvariant {
        let n = self.crossings.len();
        if n == 0 {
            return KnotInvariant::unknot();
        }
        let seq = self.gauss();
        let first_under = seq.iter().position(|&(_, o)| !o).unwrap();
        let mut over = vec![0usize; n];
        let mut inc = vec![0usize; n];
        let mut out = vec![0usize; n];
        let mut arc = 0;
        for i in 1..=seq.len() {
            let (k, is_over) = seq[(first_under + i) % seq.len()];
            if is_over {
                over[k] = arc;
            } else {
                inc[k] = arc;
                arc = (arc + 1) % n;
                out[k] = arc;
            }
        }
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for k in 0..n {
            m[k][over[k]] += 2;
            m[k][inc[k]] -= 1;
            m[k][out[k]] -= 1;
        }
        let minor: Vec<Vec<BigInt>> = m[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
        let determinant = bareiss(minor).abs().to_biguint().unwrap();
        let alexander = (n <= ALEXANDER_CROSSING_CAP).then(|| {
            let mut pm = vec![vec![Poly::zero(); n]; n];
            for k in 0..n {
                let (j, l) = if self.crossings[k].sign > 0 { (inc[k], out[k]) } else { (out[k], inc[k]) };
                pm[k][over[k]] = pm[k][over[k]].add(&Poly(vec![BigInt::one(), -BigInt::one()]));
                pm[k][j] = pm[k][j].add(&Poly(vec![BigInt::zero(), BigInt::one()]));
                pm[k][l] = pm[k][l].add(&Poly(vec![-BigInt::one()]));
            }
            let minor: Vec<Vec<Poly>> = pm[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
            normalize_alexander(poly_bareiss(minor))
        });
        KnotInvariant { determinant, alexander }
    }
}

/// Fraction-free Gaussian elimination.
pub(crate) fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn zero() -> Poly {
        Poly(Vec::new())
    }

    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trim()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly(r).trim()
    }

    /// Exact division; the divisor must divide `self` in `Z[t]`.
    fn div_exact(&self, d: &Poly) -> Poly {
        let mut rem = self.clone().trim().0;
        let d = d.clone().trim().0;
        if rem.is_empty() {
            return Poly::zero();
        }
        let lead = d.last().unwrap().clone();
        let mut q = vec![BigInt::zero(); rem.len() + 1 - d.len()];
        for i in (0..q.len()).rev() {
            let c = &rem[i + d.len() - 1] / &lead;
            for (j, dj) in d.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        Poly(q).trim()
    }
}

fn poly_bareiss(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly(vec![BigInt::one()]);
    }
    let mut negate = false;
    let mut prev = Poly(vec![BigInt::one()]);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).add(&m[i][k].mul(&m[k][j]).neg());
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

fn normalize_alexander(p: Poly) -> Vec<BigInt> {
    let mut c = p.trim().0;
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..lead_zeros);
    let at_one: BigInt = c.iter().sum();
    if at_one.is_negative() {
        for x in c.iter_mut() {
            *x = -x.clone();
        }
    }
    c
}
