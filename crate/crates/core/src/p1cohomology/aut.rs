use std::collections::BTreeMap;

use super::{AlphaSpace, QgrHomExt, TwistSum};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::scalar::Scalar;
use crate::zorder::RightModule;

/// Smallest `|det|` accepted for an automorphism block.
pub const INVERTIBILITY_TOL: f64 = 1e-12;
/// Relative tolerance for commutation with the order action.
pub const COMMUTATION_TOL: f64 = 1e-9;

/// Automorphism of a realified twist sum, one block per twist class, acting
/// on the free-part coordinates of the class module `P^(m)`.
#[derive(Clone, PartialEq)]
pub struct AutData<T> {
    blocks: BTreeMap<i64, Matrix<T>>,
}

impl<T: Scalar> std::fmt::Debug for AutData<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.blocks.iter()).finish()
    }
}

/// Checks that `m` is an invertible endomorphism of `module ⊗ R` commuting
/// with the right order action.
pub fn check_module_automorphism<T: Scalar>(module: &RightModule, m: &Matrix<T>, what: &str) -> Result<()> {
    let r = module.rank();
    if m.rows() != r || m.cols() != r {
        return Err(Error::NotAutomorphism(format!("{what}: expected a {r}x{r} block, got {}x{}", m.rows(), m.cols())));
    }
    let det = m.determinant();
    let tiny = if T::EXACT { det.is_zero() } else { det.to_f64().abs() < INVERTIBILITY_TOL };
    if tiny {
        return Err(Error::NotAutomorphism(format!("{what}: block is not invertible (det = {})", det.render())));
    }
    for (i, a) in module.free_actions().iter().enumerate() {
        let a = Matrix::<T>::from_int(a);
        let defect = (&(m * &a)).sub(&(&a * m));
        let scale = m.max_abs() * a.max_abs();
        if !defect.is_negligible(scale, COMMUTATION_TOL) {
            return Err(Error::NotAutomorphism(format!(
                "{what}: block does not commute with the action of e{i} (defect {:e})",
                defect.max_abs()
            )));
        }
    }
    Ok(())
}

impl<T: Scalar> AutData<T> {
    pub fn new(blocks: BTreeMap<i64, Matrix<T>>) -> Self {
        AutData { blocks }
    }

    pub fn single(twist: i64, m: Matrix<T>) -> Self {
        AutData { blocks: BTreeMap::from([(twist, m)]) }
    }

    pub fn block(&self, twist: i64) -> Option<&Matrix<T>> {
        self.blocks.get(&twist)
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix<T>> {
        &self.blocks
    }

    pub fn identity(e: &TwistSum) -> Self {
        Self::scalar(e, T::one())
    }

    pub fn scalar(e: &TwistSum, c: T) -> Self {
        let blocks = e
            .twist_classes()
            .keys()
            .map(|&m| (m, Matrix::scalar(e.class_module(m).expect("class is nonempty").rank(), c.clone())))
            .collect();
        AutData { blocks }
    }

    /// Block-diagonal data from one block per summand, in summand order.
    pub fn from_summand_blocks(e: &TwistSum, per_summand: &[Matrix<T>]) -> Result<Self> {
        if per_summand.len() != e.summands().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} summand blocks for {} summands",
                per_summand.len(),
                e.summands().len()
            )));
        }
        let blocks = e
            .twist_classes()
            .into_iter()
            .map(|(m, idx)| {
                let parts: Vec<&Matrix<T>> = idx.iter().map(|&i| &per_summand[i]).collect();
                (m, Matrix::block_diagonal(&parts))
            })
            .collect();
        Ok(AutData { blocks })
    }

    /// The same automorphism written for `e.permuted(perm)`.
    pub fn permute_summands(&self, e: &TwistSum, perm: &[usize]) -> Self {
        let mut blocks = BTreeMap::new();
        for (m, idx) in e.twist_classes() {
            let Some(block) = self.blocks.get(&m) else { continue };
            // coordinate ranges of each summand inside the old class block
            let mut old_offsets = Vec::with_capacity(idx.len());
            let mut off = 0;
            for &i in &idx {
                old_offsets.push(off);
                off += e.summands()[i].0.rank();
            }
            let mut order: Vec<usize> = (0..idx.len()).collect();
            order.sort_by_key(|&k| perm[idx[k]]);
            let mut coord_perm = vec![0; off];
            let mut new_off = 0;
            for &k in &order {
                let rk = e.summands()[idx[k]].0.rank();
                for c in 0..rk {
                    coord_perm[old_offsets[k] + c] = new_off + c;
                }
                new_off += rk;
            }
            blocks.insert(m, block.permuted(&coord_perm));
        }
        AutData { blocks }
    }

    pub fn validate(&self, e: &TwistSum) -> Result<()> {
        for m in e.twist_classes().keys() {
            let p = e.class_module(*m).expect("class is nonempty");
            let block = self
                .blocks
                .get(m)
                .ok_or_else(|| Error::NotAutomorphism(format!("no block for twist class {m}")))?;
            check_module_automorphism(&p, block, &format!("twist class {m}"))?;
        }
        if let Some(extra) = self.blocks.keys().find(|m| !e.twist_classes().contains_key(m)) {
            return Err(Error::NotAutomorphism(format!("block for absent twist class {extra}")));
        }
        Ok(())
    }
}

fn pow<T: Scalar>(t: T, e: usize) -> T {
    num_traits::pow(t, e)
}

/// `det((β⁻¹)^*_i ∘ (γ_*)_i)` on `Hom` (`i = 0`) or `Ext¹` (`i = 1`):
/// the product over twist classes of the determinant of `F ↦ γ_m F β⁻¹`
/// raised to the cohomology multiplicity.
pub fn induced_map_det<T: Scalar>(data: &QgrHomExt, beta: &Matrix<T>, gamma: &AutData<T>, degree: usize) -> Result<T> {
    let Some(group) = data.degree(degree) else { return Ok(T::one()) };
    if group.factors().is_empty() {
        return Ok(T::one());
    }
    let beta_inv =
        beta.inverse().ok_or_else(|| Error::NotAutomorphism("line bundle automorphism is singular".into()))?;
    let mut det = T::one();
    for f in group.factors() {
        let g = gamma
            .block(f.class_twist)
            .ok_or_else(|| Error::NotAutomorphism(format!("no block for twist class {}", f.class_twist)))?;
        let real = f.hom.realify::<T>()?;
        let d = real.induced_determinant(g, &beta_inv, COMMUTATION_TOL)?;
        det = det * pow(d, f.multiplicity());
    }
    Ok(det)
}

/// Matrix of `ψ ↦ α∘ψ` on the realification of `K^∨ = Hom_R(K, R^∨)`,
/// in the free coordinates of `space.dual_module`.
pub fn transported_alpha<T: Scalar>(space: &AlphaSpace, alpha: &Matrix<T>) -> Result<Matrix<T>> {
    let real = space.dual_hom.realify::<T>()?;
    let k = space.dual_hom.source().rank();
    real.induced_matrix(alpha, &Matrix::identity(k), COMMUTATION_TOL)
}

/// `det(α_*)` for post-composition with `α` on the α-space.
pub fn alpha_det<T: Scalar>(space: &AlphaSpace, alpha: &Matrix<T>) -> Result<T> {
    if space.space.factors().is_empty() {
        return Ok(T::one());
    }
    let alpha_k = transported_alpha(space, alpha)?;
    let mut det = T::one();
    for f in space.space.factors() {
        let real = f.hom.realify::<T>()?;
        let src = f.hom.source().rank();
        let d = real.induced_determinant(&alpha_k, &Matrix::identity(src), COMMUTATION_TOL)?;
        det = det * pow(d, f.multiplicity());
    }
    Ok(det)
}
