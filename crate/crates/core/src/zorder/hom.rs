//! Module homomorphisms: integral Hom groups and their realifications.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Bimodule, RightModule};
use crate::error::{Error, Result};
use crate::exactlin::{constrained_hom, rational_rank, HomConstraint, HomGroup, IntMatrix, Matrix};
use crate::scalar::Scalar;

/// `Hom_R(source, target)` with the modules it was computed from.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    hom: HomGroup,
    source: RightModule,
    target: RightModule,
    real_dim: OnceLock<usize>,
}

/// Right-linear maps `J → P`: `F∘ρ_J(e_i) = ρ_P(e_i)∘F` for every basis element.
pub fn hom_right(j: &RightModule, p: &RightModule) -> Result<ModuleHom> {
    if j.order() != p.order() {
        return Err(Error::InvalidModule("Hom between modules over different orders".into()));
    }
    let constraints: Vec<HomConstraint> = (0..j.order().rank())
        .map(|i| HomConstraint::commutes(j.action(i).clone(), p.action(i).clone()))
        .collect();
    let hom = constrained_hom(j.group(), p.group(), &constraints);
    Ok(ModuleHom { hom, source: j.clone(), target: p.clone(), real_dim: OnceLock::new() })
}

/// Bimodule maps: right-linear and commuting with the left actions.
pub fn hom_bimodule(m: &Bimodule, n: &Bimodule) -> Result<ModuleHom> {
    if m.order() != n.order() {
        return Err(Error::InvalidModule("Hom between bimodules over different orders".into()));
    }
    let r = m.order().rank();
    let mut constraints: Vec<HomConstraint> = (0..r)
        .map(|i| HomConstraint::commutes(m.as_right().action(i).clone(), n.as_right().action(i).clone()))
        .collect();
    constraints.extend((0..r).map(|i| HomConstraint::commutes(m.left_action(i).clone(), n.left_action(i).clone())));
    let hom = constrained_hom(m.group(), n.group(), &constraints);
    Ok(ModuleHom { hom, source: m.as_right().clone(), target: n.as_right().clone(), real_dim: OnceLock::new() })
}

impl ModuleHom {
    pub fn hom(&self) -> &HomGroup {
        &self.hom
    }

    pub fn group(&self) -> &crate::exactlin::FgAbGroup {
        self.hom.group()
    }

    pub fn source(&self) -> &RightModule {
        &self.source
    }

    pub fn target(&self) -> &RightModule {
        &self.target
    }

    /// Free-part maps written in free coordinates, `P_target · F · B_source`.
    pub fn free_coordinate_maps(&self) -> Vec<IntMatrix> {
        let p = self.target.group().free_projection();
        let b = self.source.group().free_basis();
        self.hom.free_part_maps().iter().map(|f| &(p * f) * b).collect()
    }

    /// Real dimension of `Hom_{R⊗R}(source ⊗ R, target ⊗ R)`, computed from
    /// the free-coordinate commutation system over Q.
    pub fn real_dimension(&self) -> usize {
        *self.real_dim.get_or_init(|| self.compute_real_dimension())
    }

    fn compute_real_dimension(&self) -> usize {
        let (rs, rt) = (self.source.rank(), self.target.rank());
        let vars = rs * rt;
        if vars == 0 {
            return 0;
        }
        let r = self.source.order().rank();
        let mut system = IntMatrix::zeros(r * vars, vars);
        for e in 0..r {
            let a = self.source.free_action(e);
            let b = self.target.free_action(e);
            // (f a - b f)_{i,c}
            for i in 0..rt {
                for c in 0..rs {
                    let row = e * vars + i * rs + c;
                    for j in 0..rs {
                        let v = a.get(j, c);
                        if !v.is_zero() {
                            *system.get_mut(row, i * rs + j) += v;
                        }
                    }
                    for l in 0..rt {
                        let v = b.get(i, l);
                        if !v.is_zero() {
                            *system.get_mut(row, l * rs + c) -= v;
                        }
                    }
                }
            }
        }
        vars - rational_rank(&system)
    }

    /// Basis of the real Hom space given by the integral free-part maps,
    /// after checking that tensoring with R does not change the dimension.
    pub fn realify<T: Scalar>(&self) -> Result<RealHom<T>> {
        let lattice = self.group().rank();
        let real = self.real_dimension();
        if lattice != real {
            return Err(Error::BaseChange { lattice, real });
        }
        let maps = self.free_coordinate_maps();
        let (rows, cols) = (self.target.rank(), self.source.rank());
        let basis = Matrix::from_fn(rows * cols, maps.len(), |e, k| T::from_bigint(&maps[k].entries()[e]));
        Ok(RealHom { rows, cols, basis })
    }

    /// `Hom_R(K, target)` as a right module through the left action of `K`:
    /// `(φ·r)(k) = φ(r·k)`. The module's free coordinates agree with the
    /// basis of [`ModuleHom::realify`].
    pub fn right_module_via_left(&self, k: &Bimodule) -> Result<RightModule> {
        if k.group().generators() != self.source.group().generators() {
            return Err(Error::DimensionMismatch("bimodule does not match the Hom source".into()));
        }
        let action: Result<Vec<IntMatrix>> = (0..k.order().rank())
            .map(|i| self.hom.induced_endomorphism(|f| f * k.left_action(i)))
            .collect();
        RightModule::new(k.order(), self.group().clone(), action?)
    }
}

/// A basis of a real Hom space `Hom(V, W)` as vectorized `rows x cols` matrices.
#[derive(Clone)]
pub struct RealHom<T> {
    rows: usize,
    cols: usize,
    basis: Matrix<T>,
}

impl<T: Scalar> RealHom<T> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vector(&self, k: usize) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.basis.get(i * self.cols + j, k).clone())
    }

    /// Matrix in this basis of `f ↦ left · f · right`; fails if the map
    /// leaves the space.
    pub fn induced_matrix(&self, left: &Matrix<T>, right: &Matrix<T>, tol: f64) -> Result<Matrix<T>> {
        let d = self.dim();
        if d == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let n = self.rows * self.cols;
        let mut images = Matrix::zeros(n, d);
        for k in 0..d {
            let img = &(left * &self.basis_vector(k)) * right;
            for (e, v) in img.entries().iter().enumerate() {
                images.set(e, k, v.clone());
            }
        }
        self.basis.solve(&images, tol).map_err(|e| match e {
            Error::NotDescending { .. } => {
                Error::NotAutomorphism("induced map does not preserve the module homomorphisms".into())
            }
            other => other,
        })
    }

    /// Determinant of `f ↦ left · f · right`; basis independent.
    pub fn induced_determinant(&self, left: &Matrix<T>, right: &Matrix<T>, tol: f64) -> Result<T> {
        Ok(self.induced_matrix(left, right, tol)?.determinant())
    }
}

/// Search for a bimodule isomorphism `m → n` among small integer
/// combinations of the free bimodule maps. Both groups must be free.
pub fn find_bimodule_isomorphism(m: &Bimodule, n: &Bimodule, bound: i64) -> Result<Option<IntMatrix>> {
    if !m.group().is_free() || !n.group().is_free() || m.rank() != n.rank() {
        return Ok(None);
    }
    let hom = hom_bimodule(m, n)?;
    let maps = hom.free_coordinate_maps();
    let d = maps.len();
    if d == 0 {
        return Ok((m.rank() == 0).then(|| IntMatrix::zeros(0, 0)));
    }
    let span = (2 * bound + 1) as usize;
    let total = span.checked_pow(d as u32).unwrap_or(usize::MAX);
    for idx in 0..total.min(1 << 20) {
        let mut rest = idx;
        let mut f = IntMatrix::zeros(n.rank(), m.rank());
        for map in &maps {
            let c = (rest % span) as i64 - bound;
            rest /= span;
            if c != 0 {
                f = f.add(&map.scale(&BigInt::from(c)));
            }
        }
        let det = f.determinant();
        if det == BigInt::from(1) || det == BigInt::from(-1) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::BigRational;

    use super::*;
    use crate::exactlin::FgAbGroup;
    use crate::zorder::{dual_bimodule, ZOrder};

    #[test]
    fn hom_from_regular_module_is_evaluation() {
        let r = Arc::new(ZOrder::matrix_ring_2());
        let reg = RightModule::regular(&r);
        let h = hom_right(&reg, &reg).unwrap();
        assert_eq!(h.group().describe(), "Z^4");
        let z = Arc::new(ZOrder::integers());
        let p = RightModule::over_integers(&z, FgAbGroup::from_invariants(1, &[4])).unwrap();
        let h = hom_right(&RightModule::regular(&z), &p).unwrap();
        assert!(h.group().same_invariants(p.group()));
    }

    #[test]
    fn row_vectors_into_m2z() {
        let r = Arc::new(ZOrder::matrix_ring_2());
        let action: Vec<IntMatrix> = (0..4)
            .map(|a| {
                let (i, j) = (a / 2, a % 2);
                IntMatrix::from_fn(2, 2, |p, q| BigInt::from((p == j && q == i) as i64))
            })
            .collect();
        let rows = RightModule::new(&r, FgAbGroup::free(2), action).unwrap();
        let h = hom_right(&rows, &RightModule::regular(&r)).unwrap();
        assert_eq!(h.group().describe(), "Z^2");
        assert_eq!(h.real_dimension(), 2);
    }

    #[test]
    fn realified_hom_and_induced_determinant() {
        let r = Arc::new(ZOrder::gaussian_integers());
        let reg = RightModule::regular(&r);
        let h = hom_right(&reg, &reg).unwrap();
        let real = h.realify::<BigRational>().unwrap();
        assert_eq!(real.dim(), 2);
        let q = |v: i64| BigRational::from_integer(v.into());
        // post-composition with left multiplication by 1 + 2i has determinant |1+2i|^2
        let lam = Matrix::from_vec(2, 2, vec![q(1), q(-2), q(2), q(1)]);
        let det = real.induced_determinant(&lam, &Matrix::identity(2), 0.0).unwrap();
        assert_eq!(det, q(5));
    }

    #[test]
    fn gaussian_dual_is_isomorphic_to_regular() {
        let r = Arc::new(ZOrder::gaussian_integers());
        let iso = find_bimodule_isomorphism(&Bimodule::regular(&r), &dual_bimodule(&r), 2).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn m2z_dual_is_isomorphic_to_regular() {
        let r = Arc::new(ZOrder::matrix_ring_2());
        let iso = find_bimodule_isomorphism(&Bimodule::regular(&r), &dual_bimodule(&r), 1).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn dual_as_hom_module_from_regular() {
        let r = Arc::new(ZOrder::lipschitz());
        let reg = Bimodule::regular(&r);
        let dual = dual_bimodule(&r);
        let h = hom_right(reg.as_right(), dual.as_right()).unwrap();
        let m = h.right_module_via_left(&reg).unwrap();
        assert_eq!(m.rank(), 4);
    }
}
