//! Graded right modules over `R[T0, T1]` on finite windows: truncation,
//! shift, torsion, and Čech cohomology through stabilized localizations.
//! Serves as an independent check on the monomial model.

mod cech;
mod module;

pub use cech::{cech_cohomology, cech_window_top, gamma_sections, torsion_submodule};
pub use module::{stabilization_margin, GradedModule};
