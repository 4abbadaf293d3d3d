//! β sweeps, identity checks, and the pseudo-critical estimator.

use num_bigint::BigUint;

use super::{
    expected_dd, ln_z, partition_function, per_size, quenched_ln, relative_quenched, Dd, PartitionFunction,
    CONVEXITY_TOL, EXPECTATION_TOL, FD_STEP, FD_TOL,
};
use crate::enumerate::{Boundary, EnsembleSpec, Histogram, TopologyTable};
use crate::error::{Error, Result};
use crate::lattice::PolymerClass;

/// Strictly ascending finite β values.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaGrid(Vec<f64>);

impl BetaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty β grid".into()));
        }
        if values.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("β grid has a non-finite value".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("β grid must be strictly ascending".into()));
        }
        Ok(BetaGrid(values))
    }

    /// `lo, lo+step, …` up to `hi` inclusive (to within 1e-9 of a step).
    pub fn range(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || hi < lo {
            return Err(Error::InvalidArgument(format!("bad range {lo}..{hi} step {step}")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        BetaGrid::new((0..=n).map(|i| lo + i as f64 * step).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn contains_zero(&self) -> bool {
        self.0.contains(&0.0)
    }
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid::range(-2.0, 4.0, 0.25).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThermoRow {
    pub beta: f64,
    pub z: PartitionFunction,
    pub f: f64,
    pub fq: f64,
    pub e_sigma: f64,
    pub eq_sigma: f64,
    pub df: f64,
    pub dfq: f64,
}

/// Results of the identity checks over one sweep. Margins are "worst
/// case" values: the check passes when the margin is above its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermoChecks {
    pub z0_exact: Option<bool>,
    /// Smallest second difference of `ln Z` (slope differences on a nonuniform grid).
    pub min_second_difference: f64,
    /// Largest `|d ln Z/dβ − E_β(σ)|`.
    pub max_fd_error: f64,
    /// Smallest `dF − dFQ`.
    pub min_jensen_margin: f64,
    pub e_sigma_monotone: bool,
    pub e_sigma_in_range: bool,
    /// Smallest margin of the negative-β quenched animal bound, if it applies.
    pub animal_bound_margin: Option<f64>,
    /// Smallest `−dFQ` over `β ≤ 0` when the animal bound does not apply.
    pub nonpositive_margin: Option<f64>,
}

impl ThermoChecks {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.z0_exact == Some(false) {
            out.push("Z(0) differs from the cardinality".to_string());
        }
        if self.min_second_difference < -CONVEXITY_TOL {
            out.push(format!("convexity: second difference {:e}", self.min_second_difference));
        }
        if self.max_fd_error > FD_TOL {
            out.push(format!("finite difference off by {:e}", self.max_fd_error));
        }
        if self.min_jensen_margin < -EXPECTATION_TOL {
            out.push(format!("Jensen margin {:e}", self.min_jensen_margin));
        }
        if !self.e_sigma_monotone {
            out.push("E_sigma decreases".to_string());
        }
        if !self.e_sigma_in_range {
            out.push("E_sigma out of range".to_string());
        }
        if let Some(m) = self.animal_bound_margin {
            if m < -EXPECTATION_TOL {
                out.push(format!("negative-β animal bound margin {m:e}"));
            }
        }
        if let Some(m) = self.nonpositive_margin {
            if m < -EXPECTATION_TOL {
                out.push(format!("dFQ > 0 at β ≤ 0 by {:e}", -m));
            }
        }
        out
    }

    pub fn all_pass(&self) -> bool {
        self.failures().is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThermoResult {
    pub spec: EnsembleSpec,
    pub rows: Vec<ThermoRow>,
    pub checks: ThermoChecks,
}

/// Annealed and quenched sweep of one topology table over `grid`.
pub fn thermo(t: &TopologyTable, grid: &BetaGrid) -> Result<ThermoResult> {
    let n = per_size(&t.spec)?;
    let h = t.marginal();
    if h.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let lz0 = ln_z(&h, 0.0)?;
    let lq0 = quenched_ln(t, 0.0)?;
    let mut rows = Vec::with_capacity(grid.values().len());
    let mut lnz = Vec::with_capacity(grid.values().len());
    let mut max_fd_error: f64 = 0.0;
    let (mut animal, mut nonpos): (Option<f64>, Option<f64>) = (None, None);
    for &beta in grid.values() {
        let z = partition_function(&h, beta)?;
        let lq = quenched_ln(t, beta)?;
        let e = expected_dd(&h, beta)?.to_f64();
        let mut eq = Dd::ZERO;
        let total = h.total();
        for c in t.classes.values() {
            eq = eq + Dd::ratio(&c.total(), &total) * expected_dd(c, beta)?;
        }
        max_fd_error = max_fd_error.max((fd_derivative(&h, beta)? - e).abs());
        if beta <= 0.0 {
            let r = relative_quenched(t, beta)?;
            if let Some(m) = r.animal_margin {
                animal = Some(animal.map_or(m, |a| a.min(m)));
            }
            if let Some(m) = r.nonpositive_margin {
                nonpos = Some(nonpos.map_or(m, |a| a.min(m)));
            }
        }
        lnz.push(z.ln);
        rows.push(ThermoRow {
            beta,
            f: z.ln() / n,
            fq: lq.to_f64() / n,
            e_sigma: e,
            eq_sigma: eq.to_f64(),
            df: (z.ln - lz0).to_f64() / n,
            dfq: (lq - lq0).to_f64() / n,
            z,
        });
    }
    let sites = t.spec.sites() as f64;
    let min_e = if t.spec.boundary == Boundary::Impenetrable { 1.0 } else { 0.0 };
    let checks = ThermoChecks {
        z0_exact: rows.iter().find(|r| r.beta == 0.0).map(|r| r.z.exact.as_ref() == Some(&t.total())),
        min_second_difference: min_second_difference(grid.values(), &lnz),
        max_fd_error,
        min_jensen_margin: rows.iter().map(|r| r.df - r.dfq).fold(f64::INFINITY, f64::min),
        e_sigma_monotone: rows.windows(2).all(|w| w[1].e_sigma >= w[0].e_sigma - EXPECTATION_TOL),
        e_sigma_in_range: rows
            .iter()
            .all(|r| r.e_sigma >= min_e - EXPECTATION_TOL && r.e_sigma <= sites + EXPECTATION_TOL),
        animal_bound_margin: animal,
        nonpositive_margin: nonpos,
    };
    Ok(ThermoResult { spec: t.spec, rows, checks })
}

/// Five-point central difference of `ln Z` at `β`.
fn fd_derivative(h: &Histogram, beta: f64) -> Result<f64> {
    let hh = FD_STEP;
    let f = |x: f64| ln_z(h, x);
    let num = (f(beta - 2.0 * hh)? - f(beta + 2.0 * hh)?) + Dd::new(8.0) * (f(beta + hh)? - f(beta - hh)?);
    Ok(num.to_f64() / (12.0 * hh))
}

/// Second differences on a uniform grid, scaled slope differences otherwise.
fn min_second_difference(b: &[f64], y: &[Dd]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 1..b.len().saturating_sub(1) {
        let (h1, h2) = (b[i] - b[i - 1], b[i + 1] - b[i]);
        let s1 = (y[i] - y[i - 1]).to_f64() / h1;
        let s2 = (y[i + 1] - y[i]).to_f64() / h2;
        let d = if (h1 - h2).abs() < 1e-12 * h1 {
            (y[i + 1] - y[i] - (y[i] - y[i - 1])).to_f64()
        } else {
            (s2 - s1) * 0.5 * (h1 + h2)
        };
        m = m.min(d);
    }
    if m == f64::INFINITY {
        0.0
    } else {
        m
    }
}

/// Checks `lower·e^{βN'} ≤ Z_N(β) ≤ total·e^{βN'}` at `β ≥ 0`, where `lower`
/// counts the configurations lying in the surface and `N'` is the site count.
pub fn sandwich_check(lower: &BigUint, h: &Histogram, sites: usize, beta: f64) -> Result<bool> {
    if beta < 0.0 {
        return Err(Error::InvalidArgument("sandwich applies at β ≥ 0".into()));
    }
    let lz = ln_z(h, beta)?;
    let top = Dd::new(beta * sites as f64);
    let slack = 1e-24 * lz.hi.abs().max(1.0);
    let lower_ok = lower == &BigUint::default() || (Dd::from_biguint(lower).ln() + top - lz).hi <= slack;
    let upper_ok = (lz - Dd::from_biguint(&h.total()).ln() - top).hi <= slack;
    Ok(lower_ok && upper_ok)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombSurfaceCheck {
    pub classes: usize,
    pub violations: Vec<String>,
}

/// Per-class comb surface bounds: in `d ≥ 3`, `ln Z(β|g) ≥ β(N+1)` at every
/// `β ≥ 0` of `betas`; in `d = 2`, max σ of each class is at most `N+1−b/2`.
pub fn comb_surface_check(t: &TopologyTable, betas: &[f64]) -> Result<CombSurfaceCheck> {
    if t.spec.class != PolymerClass::Comb {
        return Err(Error::WrongClass { expected: "comb".into(), got: t.spec.class.to_string() });
    }
    let n = t.spec.size;
    let mut violations = Vec::new();
    for (key, h) in &t.classes {
        let sig = key.comb_signature().ok_or_else(|| Error::Malformed(format!("{key} is not a comb key")))?;
        if t.spec.d >= 3 {
            for &beta in betas.iter().filter(|&&b| b >= 0.0) {
                let lz = ln_z(h, beta)?;
                if (Dd::new(beta * (n + 1) as f64) - lz).hi > 1e-24 * lz.hi.abs().max(1.0) {
                    violations.push(format!("{sig} at β={beta}: ln Z = {}", lz.to_f64()));
                }
            }
        } else {
            let max = h.max_visits().unwrap_or(0);
            // max σ ≤ N + 1 − b/2, compared doubled to stay in integers.
            if 2 * max > 2 * (n + 1) - sig.b() {
                violations.push(format!("{sig}: max σ {max} > N+1−b/2"));
            }
        }
    }
    Ok(CombSurfaceCheck { classes: t.classes.len(), violations })
}

/// `N·2d·(2d−1)^{N−2}`, the cap on the commonest tree topology at `N ≥ 2` sites.
pub fn max_class_bound(d: usize, n: usize) -> BigUint {
    assert!(n >= 2);
    BigUint::from(n * 2 * d) * BigUint::from(2 * d - 1).pow((n - 2) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Annealed,
    Quenched,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub size: usize,
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoCritical {
    pub theta: f64,
    pub which: Which,
    pub crossings: Vec<Crossing>,
}

/// Per size, the smallest β on `grid` where `dF` (or `dFQ`) exceeds `theta`,
/// refined by bisection between the bracketing grid points. This is a
/// finite-size estimator and says nothing by itself about the limit.
pub fn pseudo_critical(tables: &[TopologyTable], grid: &BetaGrid, theta: f64, which: Which) -> Result<PseudoCritical> {
    if tables.len() < 2 {
        return Err(Error::InvalidArgument("pseudo-critical estimate needs at least two sizes".into()));
    }
    let mut crossings = Vec::new();
    for t in tables {
        let n = per_size(&t.spec)?;
        let h = t.marginal();
        let d = |beta: f64| -> Result<f64> {
            Ok(match which {
                Which::Annealed => (ln_z(&h, beta)? - ln_z(&h, 0.0)?).to_f64() / n,
                Which::Quenched => (quenched_ln(t, beta)? - quenched_ln(t, 0.0)?).to_f64() / n,
            })
        };
        let mut beta = None;
        let mut prev: Option<f64> = None;
        for &b in grid.values() {
            if d(b)? > theta {
                beta = Some(match prev {
                    None => b,
                    Some(mut lo) => {
                        let mut hi = b;
                        for _ in 0..60 {
                            let mid = 0.5 * (lo + hi);
                            if d(mid)? > theta {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                        hi
                    }
                });
                break;
            }
            prev = Some(b);
        }
        crossings.push(Crossing { size: t.spec.size, beta });
    }
    if crossings.iter().all(|c| c.beta.is_none()) {
        return Err(Error::NoCrossing(theta));
    }
    Ok(PseudoCritical { theta, which, crossings })
}
