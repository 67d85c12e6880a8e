//! Exact integer linear algebra, finitely generated abelian groups, and the
//! bridge from integral presentations to real determinants.

mod dense;
mod group;
mod hom;
mod intmatrix;
mod lattice;
mod realdet;
mod snf;

pub use dense::Matrix;
pub use group::{FgAbGroup, GroupMap, Kernel};
pub use hom::{constrained_hom, hom_group, HomConstraint, HomGroup};
pub use intmatrix::IntMatrix;
pub use lattice::{integer_kernel, solve_integer, Lattice};
pub use realdet::{induced_free_action, real_determinant_of_induced_map, DESCENT_TOL};
pub use snf::{smith_normal_form, Snf};

/// Rank over Q of an integer matrix.
pub fn rational_rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}
