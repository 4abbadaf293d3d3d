//! Finite-N thermodynamics over exact visit histograms.
//!
//! Everything here is a sum over `k ↦ count(k)` pairs, never over raw
//! configurations. Logarithms of partition functions are carried in
//! double-double precision, factored as `ln Z = β k* + ln Σ_k c_k e^{β(k − k*)}`
//! with `k*` the dominant visit count, so no term exceeds its count.

mod bounds;
pub mod dd;
mod patterns;
mod thermo;

use std::borrow::Cow;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

pub use bounds::{
    growth_lower_bound_madras, madras_tree_bound, monotone_lower_bound, submultiplicative_upper_bound, BoundKind,
    GrowthBound,
};
pub use dd::Dd;
pub use patterns::{pattern_stats, pq_occurrences, Pattern};
pub use thermo::{
    comb_surface_check, max_class_bound, pseudo_critical, sandwich_check, thermo, BetaGrid, CombSurfaceCheck, Crossing,
    PseudoCritical, ThermoChecks, ThermoResult, ThermoRow, Which,
};

use crate::enumerate::{Boundary, EnsembleSpec, EnumerationSummary, Histogram, TopologyTable};
use crate::error::{Error, Result};
use crate::lattice::PolymerClass;

/// Tolerance for second differences of `ln Z`.
pub const CONVEXITY_TOL: f64 = 1e-10;
/// Tolerance for expectations and Jensen margins.
pub const EXPECTATION_TOL: f64 = 1e-12;
/// Tolerance for finite-difference derivatives.
pub const FD_TOL: f64 = 1e-8;
/// Step of the five-point derivative stencil.
pub const FD_STEP: f64 = 1e-4;
/// Default pseudo-critical threshold on `dF`.
pub const DEFAULT_THETA: f64 = 0.02;

/// Anything carrying an exact visit histogram for a named ensemble.
pub trait VisitData {
    fn spec(&self) -> &EnsembleSpec;
    fn histogram(&self) -> Cow<'_, Histogram>;
}

impl VisitData for TopologyTable {
    fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }
    fn histogram(&self) -> Cow<'_, Histogram> {
        Cow::Owned(self.marginal())
    }
}

impl VisitData for EnumerationSummary {
    fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }
    fn histogram(&self) -> Cow<'_, Histogram> {
        Cow::Borrowed(&self.visit_histogram)
    }
}

/// `Z_N(β)`, held as its logarithm; exact when `β = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionFunction {
    pub ln: Dd,
    pub exact: Option<BigUint>,
}

impl PartitionFunction {
    pub fn ln(&self) -> f64 {
        self.ln.to_f64()
    }

    /// `Z` as an `f64`; overflow error past the `f64` range.
    pub fn value(&self) -> Result<f64> {
        let v = self.ln.exp().to_f64();
        if self.ln.hi > 709.0 || !v.is_finite() {
            return Err(Error::Overflow(format!("Z = e^{:.3} is outside the f64 range", self.ln.hi)));
        }
        Ok(v)
    }
}

impl fmt::Display for PartitionFunction {
    /// Exact integer at `β = 0`, otherwise 17 significant digits at any magnitude.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.exact {
            return write!(f, "{n}");
        }
        let log10 = self.ln / Dd::new(std::f64::consts::LN_10) + Dd::new(0.0);
        let e = log10.hi.floor();
        let mant = ((log10 - Dd::new(e)) * Dd::new(std::f64::consts::LN_10)).exp().to_f64();
        let (mant, e) = if mant >= 10.0 { (mant / 10.0, e + 1.0) } else { (mant, e) };
        write!(f, "{mant:.16}e{e}")
    }
}

/// Sums `Σ_k c_k e^{β(k−k*)}` and `Σ_k k c_k e^{β(k−k*)}`.
struct Sums {
    kstar: usize,
    s0: Dd,
    s1: Dd,
}

fn sums(h: &Histogram, beta: f64) -> Result<Sums> {
    if !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("β = {beta} is not finite")));
    }
    let kstar = if beta >= 0.0 { h.max_visits() } else { h.min_visits() }.ok_or(Error::EmptyEnsemble)?;
    let b = Dd::new(beta);
    let (mut s0, mut s1) = (Dd::ZERO, Dd::ZERO);
    for (k, c) in h.iter() {
        let w = Dd::from_biguint(c) * (b * Dd::new(k as f64 - kstar as f64)).exp();
        s0 = s0 + w;
        s1 = s1 + w * Dd::new(k as f64);
    }
    Ok(Sums { kstar, s0, s1 })
}

fn ln_z(h: &Histogram, beta: f64) -> Result<Dd> {
    let s = sums(h, beta)?;
    let lead = Dd::new(beta) * Dd::new(s.kstar as f64);
    if lead.hi > 1e300 {
        return Err(Error::Overflow(format!("βN = {} is out of range", lead.hi)));
    }
    Ok(lead + s.s0.ln())
}

/// `Z_N(β) = Σ_k count(k) e^{βk}`.
pub fn partition_function(h: &Histogram, beta: f64) -> Result<PartitionFunction> {
    let ln = ln_z(h, beta)?;
    let exact = (beta == 0.0).then(|| h.total());
    Ok(PartitionFunction { ln, exact })
}

fn per_size(spec: &EnsembleSpec) -> Result<f64> {
    if spec.size == 0 {
        return Err(Error::InvalidArgument("free energy needs N ≥ 1".into()));
    }
    Ok(spec.size as f64)
}

fn ln_z_dd(data: &impl VisitData, beta: f64) -> Result<Dd> {
    ln_z(&data.histogram(), beta)
}

/// `F_N(β) = (1/N) log Z_N(β)`.
pub fn free_energy(data: &impl VisitData, beta: f64) -> Result<f64> {
    Ok(ln_z_dd(data, beta)?.to_f64() / per_size(data.spec())?)
}

/// Topology-weighted `Σ_τ w_τ log Z_N(β|τ)`, weights exact ratios.
fn quenched_ln(t: &TopologyTable, beta: f64) -> Result<Dd> {
    let total = t.total();
    if total.is_zero() {
        return Err(Error::EmptyEnsemble);
    }
    let mut acc = Dd::ZERO;
    for h in t.classes.values() {
        let w = Dd::ratio(&h.total(), &total);
        acc = acc + w * ln_z(h, beta)?;
    }
    Ok(acc)
}

/// `F_N^Q(β) = Σ_τ (|τ|/total) (1/N) log Z_N(β|τ)`.
pub fn quenched_free_energy(t: &TopologyTable, beta: f64) -> Result<f64> {
    Ok(quenched_ln(t, beta)?.to_f64() / per_size(&t.spec)?)
}

fn expected_dd(h: &Histogram, beta: f64) -> Result<Dd> {
    let s = sums(h, beta)?;
    Ok(s.s1 / s.s0)
}

/// `E_β(σ)`.
pub fn expected_visits(data: &impl VisitData, beta: f64) -> Result<f64> {
    Ok(expected_dd(&data.histogram(), beta)?.to_f64())
}

/// `E_β^Q(σ) = Σ_τ w_τ E_β(σ|τ)`.
pub fn quenched_expected_visits(t: &TopologyTable, beta: f64) -> Result<f64> {
    let total = t.total();
    if total.is_zero() {
        return Err(Error::EmptyEnsemble);
    }
    let mut acc = Dd::ZERO;
    for h in t.classes.values() {
        acc = acc + Dd::ratio(&h.total(), &total) * expected_dd(h, beta)?;
    }
    Ok(acc.to_f64())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelativeQuenched {
    pub beta: f64,
    pub dfq: f64,
    /// `dFQ − (−log(dN)/N + β N^{−1/d})` for penetrable animals at `β ≤ 0`.
    pub animal_margin: Option<f64>,
    /// `−dFQ` for other ensembles at `β ≤ 0`.
    pub nonpositive_margin: Option<f64>,
}

/// `F_N^Q(β) − F_N^Q(0)` plus the applicable bound margin.
pub fn relative_quenched(t: &TopologyTable, beta: f64) -> Result<RelativeQuenched> {
    let n = per_size(&t.spec)?;
    let dfq = ((quenched_ln(t, beta)? - quenched_ln(t, 0.0)?).to_f64()) / n;
    let (mut animal_margin, mut nonpositive_margin) = (None, None);
    if beta <= 0.0 {
        if t.spec.class == PolymerClass::Animal && t.spec.boundary == Boundary::Penetrable {
            let d = t.spec.d as f64;
            let bound = -(d * n).ln() / n + beta * n.powf(-1.0 / d);
            animal_margin = Some(dfq - bound);
        } else {
            nonpositive_margin = Some(-dfq);
        }
    }
    Ok(RelativeQuenched { beta, dfq, animal_margin, nonpositive_margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(v: &[(usize, u64)]) -> Histogram {
        v.iter().map(|&(k, c)| (k, BigUint::from(c))).collect()
    }

    #[test]
    fn zero_beta_is_cardinality() {
        let h = hist(&[(1, 10), (2, 5), (4, 1)]);
        let z = partition_function(&h, 0.0).unwrap();
        assert_eq!(z.exact, Some(BigUint::from(16u32)));
        assert_eq!(z.to_string(), "16");
        assert!((z.ln() - 16f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn large_magnitudes_print() {
        let h = hist(&[(1000, 1)]);
        let z = partition_function(&h, 2.0).unwrap();
        assert!(z.value().is_err());
        // e^2000 = 3.88118...e868
        assert!(z.to_string().starts_with("3.8811801942"), "{z}");
        assert!(z.to_string().ends_with("e868"));
    }

    #[test]
    fn expectation_two_levels() {
        let h = hist(&[(0, 1), (1, 1)]);
        let e = expected_dd(&h, 1.0).unwrap().to_f64();
        let want = std::f64::consts::E / (1.0 + std::f64::consts::E);
        assert!((e - want).abs() < 1e-15);
    }
}
