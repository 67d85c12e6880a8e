use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Bimodule, OrderElement, ZOrder};
use crate::error::Result;
use crate::exactlin::{rational_rank, real_determinant_of_induced_map, IntMatrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimplicityReport {
    /// Trace form `tr(λ_{xy})` is nondegenerate.
    pub separable: bool,
    pub trace_form_determinant: BigInt,
    pub trace_form_unimodular: bool,
    pub center_rank: usize,
}

impl SemisimplicityReport {
    pub fn central_simple(&self) -> bool {
        self.separable && self.center_rank == 1
    }
}

/// Gram matrix of the regular trace form on the order basis.
pub fn trace_form(order: &ZOrder) -> IntMatrix {
    let r = order.rank();
    let traces: Vec<BigInt> = (0..r).map(|k| order.left_basis_matrix(k).trace()).collect();
    IntMatrix::from_fn(r, r, |i, j| {
        (0..r).fold(BigInt::zero(), |acc, k| acc + order.constant(i, j, k) * &traces[k])
    })
}

pub fn semisimplicity_check(order: &ZOrder) -> SemisimplicityReport {
    let r = order.rank();
    let det = trace_form(order).determinant();
    // x is central iff (ρ_{e_i} − λ_{e_i}) x = 0 for every i
    let blocks: Vec<IntMatrix> = (0..r)
        .map(|i| order.right_basis_matrix(i).sub(&order.left_basis_matrix(i)))
        .collect();
    let stacked = blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| acc.vstack(b));
    let center_rank = r - rational_rank(&stacked);
    SemisimplicityReport {
        separable: !det.is_zero(),
        trace_form_unimodular: det.abs() == BigInt::from(1),
        trace_form_determinant: det,
        center_rank,
    }
}

/// Determinants of left and right multiplication by `a` on `M ⊗ R`.
pub fn det_left_right_check<T: Scalar>(m: &Bimodule, a: &OrderElement<T>) -> Result<(T, T)> {
    let left = m.ambient_left_action(a);
    let right = m.as_right().ambient_action(a);
    Ok((real_determinant_of_induced_map(m.group(), &left)?, real_determinant_of_induced_map(m.group(), &right)?))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::BigRational;

    use super::*;
    use crate::exactlin::FgAbGroup;
    use crate::zorder::RightModule;

    #[test]
    fn semisimplicity_of_builtins() {
        let m2 = semisimplicity_check(&ZOrder::matrix_ring_2());
        assert!(m2.central_simple());
        // regular trace on M2 is twice the reduced trace
        assert_eq!(m2.trace_form_determinant.abs(), BigInt::from(16));
        let dual = semisimplicity_check(&ZOrder::dual_numbers());
        assert!(!dual.separable);
        let zz = semisimplicity_check(&ZOrder::z_times_z());
        assert!(zz.separable && zz.center_rank == 2);
        let zi = semisimplicity_check(&ZOrder::gaussian_integers());
        assert_eq!(trace_form(&ZOrder::gaussian_integers()), IntMatrix::from_rows(&[[2, 0], [0, -2]]));
        assert!(zi.separable && zi.center_rank == 2);
        assert!(semisimplicity_check(&ZOrder::lipschitz()).central_simple());
        assert!(semisimplicity_check(&ZOrder::integers()).central_simple());
    }

    #[test]
    fn unequal_left_and_right_determinants_over_z_times_z() {
        let r = Arc::new(ZOrder::z_times_z());
        let right = RightModule::through_character(&r, FgAbGroup::free(1), &[0, 1]).unwrap();
        let m = Bimodule::new(right, vec![IntMatrix::identity(1), IntMatrix::zeros(1, 1)]).unwrap();
        let a = OrderElement::<BigRational>::from_ints(&[2, 1]);
        let (l, rr) = det_left_right_check(&m, &a).unwrap();
        assert_eq!(l, BigRational::from_integer(2.into()));
        assert_eq!(rr, BigRational::from_integer(1.into()));
    }

    #[test]
    fn m2z_left_and_right_norms_agree() {
        let r = Arc::new(ZOrder::matrix_ring_2());
        let a = OrderElement::<f64>::from_ints(&[3, 1, -2, 5]);
        let (l, rr) = det_left_right_check(&Bimodule::regular(&r), &a).unwrap();
        // det λ_a = det(a)^2 = 17^2
        assert!((l - 289.0).abs() < 1e-9 && (rr - 289.0).abs() < 1e-9);
    }
}
