//! Sublattices of Z^n: bases from generators, coordinates, kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{smith_normal_form, IntMatrix};

/// A sublattice of Z^n with a fixed basis and a coordinate solver.
#[derive(Clone, Debug)]
pub struct Lattice {
    basis: IntMatrix,
    u: IntMatrix,
    diag: Vec<BigInt>,
}

impl Lattice {
    /// The lattice spanned by the columns of `gens`.
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let snf = smith_normal_form(gens);
        let diag: Vec<BigInt> = snf.diagonal().into_iter().take_while(|d| !d.is_zero()).collect();
        let n = gens.rows();
        let basis = IntMatrix::from_fn(n, diag.len(), |i, j| snf.u_inv.get(i, j) * &diag[j]);
        Lattice { basis, u: snf.u, diag }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `w` in the basis, or `None` if `w` is not in the lattice.
    pub fn coords(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec(w);
        let d = self.diag.len();
        if y[d..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(d);
        for (yi, si) in y[..d].iter().zip(&self.diag) {
            let (q, r) = yi.div_rem(si);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, w: &[BigInt]) -> bool {
        self.coords(w).is_some()
    }
}

/// Basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let k = snf.rank();
    snf.v.select_cols(k..m.cols())
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let y = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !yi.is_zero() {
                return None;
            }
        } else {
            let (q, r) = yi.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(snf.v.mul_vec(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_coordinates_roundtrip() {
        let gens = IntMatrix::from_rows(&[[2, 4, 6], [0, 3, 3]]);
        let lat = Lattice::from_generators(&gens);
        assert_eq!(lat.rank(), 2);
        for j in 0..gens.cols() {
            let col = gens.column(j);
            let c = lat.coords(&col).expect("generator lies in its own span");
            assert_eq!(lat.basis().mul_vec(&c), col);
        }
        assert!(!lat.contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        let b: Vec<BigInt> = vec![6.into(), 12.into()];
        let x = solve_integer(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve_integer(&m, &[1.into(), 1.into()]).is_none());
    }
}
