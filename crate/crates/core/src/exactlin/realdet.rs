//! From integral data to real determinants.

use super::{FgAbGroup, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Descent tolerance for non-exact scalars.
pub const DESCENT_TOL: f64 = 1e-9;

/// Matrix, in the cached free-part basis, of the map induced on `g ⊗ R` by
/// `action` (given on ambient generators). Fails if `action` does not
/// preserve the real span of the relations.
pub fn induced_free_action<T: Scalar>(g: &FgAbGroup, action: &Matrix<T>) -> Result<Matrix<T>> {
    let n = g.generators();
    if action.rows() != n || action.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "action is {}x{} on a group with {n} generators",
            action.rows(),
            action.cols()
        )));
    }
    let proj = Matrix::<T>::from_int(g.free_projection());
    let rel = Matrix::<T>::from_int(g.relations());
    let defect = &(&proj * action) * &rel;
    let scale = action.max_abs() * rel.max_abs().max(1.0);
    if !defect.is_negligible(scale, DESCENT_TOL) {
        return Err(Error::NotDescending { defect: defect.max_abs() });
    }
    let basis = Matrix::<T>::from_int(g.free_basis());
    Ok(&(&proj * action) * &basis)
}

/// Determinant of the map induced on the rank-r real quotient `g ⊗ R`.
/// Rank 0 gives 1.
pub fn real_determinant_of_induced_map<T: Scalar>(g: &FgAbGroup, action: &Matrix<T>) -> Result<T> {
    Ok(induced_free_action(g, action)?.determinant())
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    use super::*;
    use crate::exactlin::IntMatrix;

    #[test]
    fn diagonal_action_on_free_group() {
        let g = FgAbGroup::free(2);
        let a = Matrix::<f64>::from_vec(2, 2, vec![2.0, 0.0, 0.0, 3.0]);
        assert_eq!(real_determinant_of_induced_map(&g, &a).unwrap(), 6.0);
    }

    #[test]
    fn torsion_is_invisible() {
        let g = FgAbGroup::from_invariants(1, &[5]);
        let a = Matrix::<f64>::from_vec(2, 2, vec![-2.0, 0.0, 0.0, 1.0]);
        assert_eq!(real_determinant_of_induced_map(&g, &a).unwrap(), -2.0);
    }

    #[test]
    fn redundant_generator_presentation() {
        // Z^2 presented on three generators with e3 = e1 + e2
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[1], [1], [-1]]));
        assert_eq!(g.rank(), 2);
        let two = BigRational::from_integer(BigInt::from(2));
        let a = Matrix::scalar(3, two);
        let det = real_determinant_of_induced_map(&g, &a).unwrap();
        assert_eq!(det, BigRational::from_integer(BigInt::from(4)));
    }

    #[test]
    fn non_descending_action_is_rejected() {
        // Z with relation direction e2 in Z^2; the swap moves e2 onto e1
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[0], [1]]));
        let swap = Matrix::<f64>::from_vec(2, 2, vec![0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(real_determinant_of_induced_map(&g, &swap), Err(Error::NotDescending { .. })));
    }
}
