use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactlin::{real_determinant_of_induced_map, FgAbGroup, Matrix};
use crate::scalar::Scalar;

/// An arithmetic line bundle on Spec Z, recorded as a covolume scale `q > 0`
/// and a metric scalar `t ≠ 0`; `adeg = −log(q·|t|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetLine<T> {
    q: BigRational,
    t: T,
}

impl<T: Scalar> DetLine<T> {
    pub fn new(q: BigRational, t: T) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::DegenerateDetLine(format!("covolume scale {q} is not positive")));
        }
        if t.is_zero() {
            return Err(Error::DegenerateDetLine("metric scalar is zero".into()));
        }
        Ok(DetLine { q, t })
    }

    pub fn trivial() -> Self {
        DetLine { q: BigRational::one(), t: T::one() }
    }

    /// `q = 1/|torsion(g)|` with the given metric scalar.
    pub fn from_group(g: &FgAbGroup, t: T) -> Result<Self> {
        Self::new(BigRational::new(BigInt::one(), g.torsion_order()), t)
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    pub fn tensor(&self, other: &Self) -> Self {
        DetLine { q: &self.q * &other.q, t: self.t.clone() * other.t.clone() }
    }

    pub fn inverse(&self) -> Self {
        DetLine { q: self.q.recip(), t: T::one() / self.t.clone() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let k = e.unsigned_abs() as usize;
        DetLine { q: num_traits::pow(base.q, k), t: num_traits::pow(base.t, k) }
    }

    /// `−log(q·|t|)`. For exact scalars the product is formed first, so a
    /// trivial class has degree exactly 0.
    pub fn adeg(&self) -> f64 {
        if T::EXACT {
            -(T::from_rational(&self.q) * self.t.abs()).ln_abs() + 0.0
        } else {
            -(self.q.ln_abs() + self.t.ln_abs()) + 0.0
        }
    }

    /// `q·|t| = 1`, decided exactly for exact scalars.
    pub fn is_trivial_class(&self, tol: f64) -> bool {
        if T::EXACT {
            (T::from_rational(&self.q) * self.t.abs()).is_one()
        } else {
            self.adeg().abs() <= tol
        }
    }
}

/// `det_line(G, φ) = (1/|torsion(G)|, det φ_R)`.
pub fn det_line<T: Scalar>(g: &FgAbGroup, phi: &Matrix<T>) -> Result<DetLine<T>> {
    DetLine::from_group(g, real_determinant_of_induced_map(g, phi)?)
}
