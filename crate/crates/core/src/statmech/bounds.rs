//! Rigorous finite-N bounds on growth constants.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Dd;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    LowerMadras,
    LowerMonotone,
    UpperSubmultiplicative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub kind: BoundKind,
    pub value: f64,
    /// Size at which the value was attained.
    pub n: usize,
}

/// `(d (2N)^{(d−1)/d} t_N)^{1/N}`, a lower bound on the tree growth constant
/// from the number `t_N` of `N`-site trees up to translation.
pub fn madras_tree_bound(d: usize, n: usize, t_n: &BigUint) -> f64 {
    let dd = d as f64;
    let ln = Dd::new(dd).ln()
        + Dd::new((dd - 1.0) / dd) * Dd::new(2.0 * n as f64).ln()
        + Dd::from_biguint(t_n).ln();
    (ln / Dd::new(n as f64)).exp().to_f64()
}

pub fn growth_lower_bound_madras(d: usize, n: usize, t_n: &BigUint) -> Result<GrowthBound> {
    if d < 2 || n == 0 || t_n.is_zero() {
        return Err(Error::InvalidArgument("need d ≥ 2, N ≥ 1 and t_N > 0".into()));
    }
    Ok(GrowthBound { kind: BoundKind::LowerMadras, value: madras_tree_bound(d, n, t_n), n })
}

fn nth_root(a: &BigUint, g: f64, n: usize) -> f64 {
    ((Dd::from_biguint(a).ln() + Dd::new(g.ln())) / Dd::new(n as f64)).exp().to_f64()
}

/// `min_n (g(n) a_n)^{1/n}` over `a_1..a_n`. An upper bound on
/// `lim a_n^{1/n}` whenever `a_{m+n} ≤ g(m) a_m a_n` holds; the caller
/// certifies that inequality and supplies `g`.
pub fn submultiplicative_upper_bound(a: &[BigUint], g: impl Fn(usize) -> f64) -> Result<GrowthBound> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    let mut best = GrowthBound { kind: BoundKind::UpperSubmultiplicative, value: f64::INFINITY, n: 0 };
    for (i, x) in a.iter().enumerate() {
        let n = i + 1;
        let gn = g(n);
        if x.is_zero() || !(gn > 0.0) || !gn.is_finite() {
            return Err(Error::InvalidArgument(format!("nonpositive entry at n={n}")));
        }
        let v = nth_root(x, gn, n);
        if v < best.value {
            best = GrowthBound { value: v, n, ..best };
        }
    }
    Ok(best)
}

/// `max_n a_n^{1/n}`: a lower bound on `lim a_n^{1/n}` for supermultiplicative
/// sequences (`a_m a_n ≤ a_{m+n}`), certified by the caller.
pub fn monotone_lower_bound(a: &[BigUint]) -> Result<GrowthBound> {
    let mut best = GrowthBound { kind: BoundKind::LowerMonotone, value: 0.0, n: 0 };
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::InvalidArgument(format!("nonpositive entry at n={}", i + 1)));
        }
        let v = nth_root(x, 1.0, i + 1);
        if v > best.value {
            best = GrowthBound { value: v, n: i + 1, ..best };
        }
    }
    if best.n == 0 {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    Ok(best)
}
