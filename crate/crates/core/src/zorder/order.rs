use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix, Matrix};
use crate::scalar::Scalar;

/// A ring free of finite rank over Z, given by structure constants
/// `e_i · e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZOrder {
    name: String,
    rank: usize,
    constants: Vec<BigInt>,
    unit: Vec<BigInt>,
}

/// Coordinates of an element of `R ⊗ Q` or `R ⊗ R` in the order basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderElement<T>(pub Vec<T>);

impl<T: Scalar> OrderElement<T> {
    pub fn from_ints(v: &[i64]) -> Self {
        OrderElement(v.iter().map(|&x| T::from_i64(x)).collect())
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }
}

/// Validate structure constants and a unit. `constants[i][j][k]` is the
/// coefficient of `e_k` in `e_i e_j`.
pub fn validate_order(
    name: &str,
    constants: &[Vec<Vec<BigInt>>],
    unit: &[BigInt],
) -> Result<ZOrder> {
    let r = constants.len();
    if r == 0 {
        return Err(Error::InvalidModule("order must have rank at least 1".into()));
    }
    let mut flat = Vec::with_capacity(r * r * r);
    for (i, row) in constants.iter().enumerate() {
        if row.len() != r {
            return Err(Error::DimensionMismatch(format!("structure constants row {i} has {} entries", row.len())));
        }
        for (j, v) in row.iter().enumerate() {
            if v.len() != r {
                return Err(Error::DimensionMismatch(format!("product e{i}*e{j} has {} coordinates", v.len())));
            }
            flat.extend(v.iter().cloned());
        }
    }
    if unit.len() != r {
        return Err(Error::DimensionMismatch(format!("unit has {} coordinates, rank is {r}", unit.len())));
    }
    let order = ZOrder { name: name.to_string(), rank: r, constants: flat, unit: unit.to_vec() };
    order.check_associative()?;
    order.check_unit()?;
    Ok(order)
}

impl ZOrder {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coefficient of `e_k` in `e_i e_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.constants[(i * self.rank + j) * self.rank + k]
    }

    pub fn unit(&self) -> &[BigInt] {
        &self.unit
    }

    pub fn structure_constants(&self) -> Vec<Vec<Vec<BigInt>>> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.constant(i, j, k).clone()).collect()).collect())
            .collect()
    }

    fn check_associative(&self) -> Result<()> {
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for m in 0..r {
                        let mut lhs = BigInt::zero();
                        let mut rhs = BigInt::zero();
                        for l in 0..r {
                            lhs += self.constant(i, j, l) * self.constant(l, k, m);
                            rhs += self.constant(j, k, l) * self.constant(i, l, m);
                        }
                        if lhs != rhs {
                            return Err(Error::NotAssociative(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let r = self.rank;
        for j in 0..r {
            for k in 0..r {
                let expected = if j == k { BigInt::one() } else { BigInt::zero() };
                let mut left = BigInt::zero();
                let mut right = BigInt::zero();
                for i in 0..r {
                    left += &self.unit[i] * self.constant(i, j, k);
                    right += &self.unit[i] * self.constant(j, i, k);
                }
                if left != expected || right != expected {
                    return Err(Error::BadUnit);
                }
            }
        }
        Ok(())
    }

    pub fn mul<T: Scalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let r = self.rank;
        let mut out = vec![T::zero(); r];
        for i in 0..r {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if b[j].is_zero() {
                    continue;
                }
                let ab = a[i].clone() * b[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + ab.clone() * T::from_bigint(c);
                    }
                }
            }
        }
        out
    }

    pub fn mul_int(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let r = self.rank;
        let mut out = vec![BigInt::zero(); r];
        for i in 0..r {
            for j in 0..r {
                let ab = &a[i] * &b[j];
                if ab.is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &ab * self.constant(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_basis_matrix(&self, i: usize) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.rank, |k, j| self.constant(i, j, k).clone())
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_basis_matrix(&self, i: usize) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.rank, |k, j| self.constant(j, i, k).clone())
    }

    /// Matrices of left and right multiplication by `a` in the order basis.
    pub fn regular_representations<T: Scalar>(&self, a: &OrderElement<T>) -> (Matrix<T>, Matrix<T>) {
        let r = self.rank;
        let coords = a.coords();
        assert_eq!(coords.len(), r);
        let lambda = Matrix::from_fn(r, r, |k, j| {
            (0..r).fold(T::zero(), |acc, i| acc + coords[i].clone() * T::from_bigint(self.constant(i, j, k)))
        });
        let rho = Matrix::from_fn(r, r, |k, j| {
            (0..r).fold(T::zero(), |acc, i| acc + coords[i].clone() * T::from_bigint(self.constant(j, i, k)))
        });
        (lambda, rho)
    }

    /// Reduced-free norm `det λ_a` on `R ⊗ R`.
    pub fn norm<T: Scalar>(&self, a: &OrderElement<T>) -> T {
        self.regular_representations(a).0.determinant()
    }

    /// The same ring with basis relabelled: old `e_i` becomes new `e_{perm[i]}`.
    pub fn permuted_basis(&self, perm: &[usize]) -> ZOrder {
        let r = self.rank;
        assert_eq!(perm.len(), r);
        let mut constants = vec![BigInt::zero(); r * r * r];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    constants[(perm[i] * r + perm[j]) * r + perm[k]] = self.constant(i, j, k).clone();
                }
            }
        }
        let mut unit = vec![BigInt::zero(); r];
        for i in 0..r {
            unit[perm[i]] = self.unit[i].clone();
        }
        ZOrder { name: format!("{}[permuted]", self.name), rank: r, constants, unit }
    }

    // ---- built-in orders ----

    fn from_table(name: &str, r: usize, unit: &[i64], product: impl Fn(usize, usize) -> Vec<i64>) -> ZOrder {
        let constants: Vec<Vec<Vec<BigInt>>> = (0..r)
            .map(|i| (0..r).map(|j| product(i, j).into_iter().map(BigInt::from).collect()).collect())
            .collect();
        let unit: Vec<BigInt> = unit.iter().map(|&u| BigInt::from(u)).collect();
        validate_order(name, &constants, &unit).expect("built-in order tables are valid")
    }

    pub fn integers() -> ZOrder {
        Self::from_table("Z", 1, &[1], |_, _| vec![1])
    }

    /// Z[i] on the basis {1, i}.
    pub fn gaussian_integers() -> ZOrder {
        Self::from_table("Z[i]", 2, &[1, 0], |a, b| match (a, b) {
            (0, x) | (x, 0) => {
                let mut v = vec![0, 0];
                v[x] = 1;
                v
            }
            _ => vec![-1, 0],
        })
    }

    /// M2(Z) on the matrix units E11, E12, E21, E22.
    pub fn matrix_ring_2() -> ZOrder {
        let unit_index = |i: usize, j: usize| 2 * i + j;
        Self::from_table("M2(Z)", 4, &[1, 0, 0, 1], |a, b| {
            let (i, j) = (a / 2, a % 2);
            let (k, l) = (b / 2, b % 2);
            let mut v = vec![0; 4];
            if j == k {
                v[unit_index(i, l)] = 1;
            }
            v
        })
    }

    /// Lipschitz quaternions Z<1, i, j, k>, k = ij, i² = j² = −1.
    pub fn lipschitz() -> ZOrder {
        // (sign, index) of basis products
        const TABLE: [[(i64, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        Self::from_table("Lipschitz", 4, &[1, 0, 0, 0], |a, b| {
            let (s, k) = TABLE[a][b];
            let mut v = vec![0; 4];
            v[k] = s;
            v
        })
    }

    /// Z × Z on the idempotents e1, e2.
    pub fn z_times_z() -> ZOrder {
        Self::from_table("ZxZ", 2, &[1, 1], |a, b| {
            let mut v = vec![0, 0];
            if a == b {
                v[a] = 1;
            }
            v
        })
    }

    /// Z[x]/(x²) on {1, x}.
    pub fn dual_numbers() -> ZOrder {
        Self::from_table("Z[x]/(x^2)", 2, &[1, 0], |a, b| match (a, b) {
            (0, x) | (x, 0) => {
                let mut v = vec![0, 0];
                v[x] = 1;
                v
            }
            _ => vec![0, 0],
        })
    }

    /// Built-in order by name.
    pub fn builtin(name: &str) -> Option<ZOrder> {
        match name {
            "Z" => Some(Self::integers()),
            "Zi" | "Z[i]" => Some(Self::gaussian_integers()),
            "M2Z" | "M2(Z)" => Some(Self::matrix_ring_2()),
            "Lipschitz" | "H" => Some(Self::lipschitz()),
            "ZxZ" | "Z×Z" => Some(Self::z_times_z()),
            "DualNumbers" | "Z[x]/(x^2)" => Some(Self::dual_numbers()),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 6] = ["Z", "Zi", "M2Z", "Lipschitz", "ZxZ", "DualNumbers"];
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    #[test]
    fn builtins_validate() {
        for name in ZOrder::BUILTIN_NAMES {
            let r = ZOrder::builtin(name).unwrap();
            assert!(r.rank() >= 1);
        }
    }

    #[test]
    fn matrix_units_multiply_like_matrices() {
        let r = ZOrder::matrix_ring_2();
        // E12 * E21 = E11, E21 * E12 = E22, E12 * E12 = 0
        let e = |i: usize| {
            let mut v = vec![BigInt::zero(); 4];
            v[i] = BigInt::one();
            v
        };
        assert_eq!(r.mul_int(&e(1), &e(2)), e(0));
        assert_eq!(r.mul_int(&e(2), &e(1)), e(3));
        assert!(r.mul_int(&e(1), &e(1)).iter().all(Zero::is_zero));
    }

    #[test]
    fn quaternion_relations() {
        let h = ZOrder::lipschitz();
        let e = |i: usize, s: i64| {
            let mut v = vec![BigInt::zero(); 4];
            v[i] = BigInt::from(s);
            v
        };
        assert_eq!(h.mul_int(&e(1, 1), &e(2, 1)), e(3, 1)); // ij = k
        assert_eq!(h.mul_int(&e(2, 1), &e(1, 1)), e(3, -1)); // ji = -k
        assert_eq!(h.mul_int(&e(3, 1), &e(3, 1)), e(0, -1)); // k² = -1
    }

    #[test]
    fn non_associative_constants_are_rejected() {
        // e1 e1 = e2 but e2 multiplies everything to zero, e1 is a bad unit candidate
        let z = BigInt::zero;
        let o = BigInt::one;
        let constants = vec![
            vec![vec![z(), o()], vec![o(), z()]],
            vec![vec![o(), z()], vec![z(), z()]],
        ];
        let err = validate_order("broken", &constants, &[o(), z()]).unwrap_err();
        assert!(matches!(err, Error::NotAssociative(..)));
    }

    #[test]
    fn bad_unit_is_rejected() {
        let constants = ZOrder::integers().structure_constants();
        let err = validate_order("Z", &constants, &[BigInt::from(2)]).unwrap_err();
        assert_eq!(err, Error::BadUnit);
    }

    #[test]
    fn regular_representations_of_unit_and_idempotent() {
        let r = ZOrder::matrix_ring_2();
        let one = OrderElement::<BigRational>::from_ints(&[1, 0, 0, 1]);
        let (l, rr) = r.regular_representations(&one);
        assert!(l.is_one() && rr.is_one());
        let e11 = OrderElement::<BigRational>::from_ints(&[1, 0, 0, 0]);
        let (l, rr) = r.regular_representations(&e11);
        assert_eq!(&l * &l, l);
        assert_eq!(&rr * &rr, rr);
        let two = BigRational::from_integer(2.into());
        assert_eq!(l.trace(), two);
        assert_eq!(rr.trace(), two);
        let five = OrderElement::<BigRational>::from_ints(&[5]);
        let (l, rr) = ZOrder::integers().regular_representations(&five);
        assert_eq!(l.get(0, 0), &BigRational::from_integer(5.into()));
        assert_eq!(rr, l);
    }
}
