//! Determinant lines on Spec Z and the determinant-of-cohomology calculus:
//! `λ`, intersection numbers, Euler characteristics, and the residuals of
//! Serre-duality compatibility and Riemann–Roch.

mod bundles;
mod detline;

pub use bundles::{
    det_hom_ext, duality_residual, euler_characteristic, intersection, lambda, rr_residual, simplicity_warning,
    ArithBundle, ArithLineBundle, OmegaChoice,
};
pub use detline::{det_line, DetLine};
