//! Field scalars used for realified linear algebra.
//!
//! Everything on the integral side runs over [`BigInt`]. Automorphisms of
//! realifications are matrices over a [`Scalar`]: either `f64` for genuinely
//! real data, or [`BigRational`] when every entry is rational, in which case
//! determinants, descent checks and degree combinations are exact.

use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Whether arithmetic is exact. Exact scalars compare against zero
    /// without tolerance.
    const EXACT: bool;

    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    /// Natural log of the absolute value. Must not be called on zero.
    fn ln_abs(&self) -> f64;

    /// Zero test used by descent and commutation checks. `scale` is the
    /// magnitude of the quantities that were combined to produce `self`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Stable textual form used in reports.
    fn render(&self) -> String;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn from_rational(v: &BigRational) -> Self {
        ratio_to_f64(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln_abs(&self) -> f64 {
        self.abs().ln()
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale.max(1.0)
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn ln_abs(&self) -> f64 {
        ln_abs_bigint(self.numer()) - ln_abs_bigint(self.denom())
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        render_rational(self)
    }
}

/// `p/q`, or just `p` for integers.
pub fn render_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// ln|v| for integers of any size, without overflowing through f64.
pub fn ln_abs_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.abs().to_f64().unwrap().ln();
    }
    // keep the top 64 bits, account for the rest as a power of two
    let shift = bits - 64;
    let top: BigInt = v.abs() >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ratio_to_f64(v: &BigRational) -> f64 {
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let sign = if v.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
            sign * (ln_abs_bigint(v.numer()) - ln_abs_bigint(v.denom())).exp()
        }
    }
}

/// Parse `"p"`, `"p/q"` or a finite decimal such as `"-1.25"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().ok()?,
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(int_part * &denom + frac_part, denom);
        return Some(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new((-5).into(), 4.into()));
        assert_eq!(parse_rational("17").unwrap(), BigRational::from_integer(17.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn huge_logs_do_not_overflow() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let got = ln_abs_bigint(&big);
        assert!((got - 400.0 * 10f64.ln()).abs() < 1e-9);
        let r = BigRational::new(big.clone(), big * 7);
        assert!((r.ln_abs() + 7f64.ln()).abs() < 1e-9);
    }
}
