//! Double-double arithmetic (about 106 significant bits).

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn from_biguint(n: &BigUint) -> Dd {
        let bits = n.bits();
        if bits <= 53 {
            return Dd::new(n.to_u64().unwrap() as f64);
        }
        let shift = bits.saturating_sub(106);
        let m = n >> shift;
        let hi = (&m >> 53u32).to_u64().unwrap() as f64 * 2f64.powi(53);
        let lo = (&m & BigUint::from((1u64 << 53) - 1)).to_u64().unwrap() as f64;
        let (s, e) = two_sum(hi, lo);
        let scale = 2f64.powi(shift as i32);
        Dd { hi: s * scale, lo: e * scale }
    }

    /// Exact ratio `a / b` rounded to double-double.
    pub fn ratio(a: &BigUint, b: &BigUint) -> Dd {
        Dd::from_biguint(a) / Dd::from_biguint(b)
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (s, e) = quick_two_sum(p, e + self.lo * b);
        Dd { hi: s, lo: e }
    }

    fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    /// `e^x`. Underflows to zero below about -745.
    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-4);
        // Taylor series on |r| < 2^-4 * ln2/2.
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=20 {
            term = (term * r) / Dd::new(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..4 {
            sum = sum.sqr();
        }
        sum.ldexp(k as i32)
    }

    /// Natural log of a positive value, by one Newton step from the `f64` log.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "log of a nonpositive value");
        let y = Dd::new(self.hi.ln());
        y + self * (-y).exp() - Dd::ONE
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        Dd { hi: s, lo: e }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::new(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            c => c,
        }
    }
}

impl std::iter::Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(it: I) -> Dd {
        it.fold(Dd::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_round_trip() {
        for &x in &[-30.5, -1.0, -1e-3, 0.3, 1.0, 7.25, 100.0] {
            let e = Dd::new(x).exp();
            let back = e.ln();
            assert!((back - Dd::new(x)).abs().hi < 1e-28 * x.abs().max(1.0), "{x}");
        }
        // e = 2.718281828459045 + 1.445646891729250e-16
        let e = Dd::ONE.exp();
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.445_646_891_729_250_2e-16).abs() < 1e-30, "{:e}", e.lo);
    }

    #[test]
    fn big_integers() {
        use num_bigint::BigInt;
        use num_traits::{FromPrimitive, Signed};
        let n = BigUint::from(3u32).pow(80) + 12345u32;
        let d = Dd::from_biguint(&n);
        let back = BigInt::from_f64(d.hi).unwrap() + BigInt::from_f64(d.lo).unwrap();
        let err = (back - BigInt::from(n.clone())).abs();
        assert!(err.bits() + 100 < n.bits());
        assert!((d.ln().to_f64() - 80.0 * 3f64.ln()).abs() < 1e-12);
        let third = Dd::ratio(&BigUint::from(1u32), &BigUint::from(3u32));
        assert!(((third * Dd::new(3.0)) - Dd::ONE).abs().hi < 1e-31);
    }
}
