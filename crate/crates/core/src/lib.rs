//! Determinant-of-cohomology calculus on noncommutative arithmetic surfaces
//! `coh(R ⊗ O_{P¹_Z})` for a Z-order `R`.
//!
//! Computations are generic over [`Scalar`]: `f64` for real automorphism
//! data and [`BigRational`](num_rational::BigRational) for exact residuals.

pub mod arithbundles;
pub mod error;
pub mod exactlin;
pub mod gradedengine;
pub mod p1cohomology;
pub mod scalar;
pub mod zorder;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type RealMatrix = exactlin::Matrix<f64>;
pub type RationalMatrix = exactlin::Matrix<Rational>;
pub type ExactDetLine = arithbundles::DetLine<Rational>;
pub type RealDetLine = arithbundles::DetLine<f64>;
pub type ExactBundle = arithbundles::ArithBundle<Rational>;
pub type RealBundle = arithbundles::ArithBundle<f64>;
pub type ExactLineBundle = arithbundles::ArithLineBundle<Rational>;
pub type RealLineBundle = arithbundles::ArithLineBundle<f64>;
