//! Right modules and bimodules over a [`ZOrder`], given by explicit integer
//! action matrices on the ambient generators of a presented group.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{OrderElement, ZOrder};
use crate::error::{Error, Result};
use crate::exactlin::{FgAbGroup, GroupMap, IntMatrix, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct RightModule {
    order: Arc<ZOrder>,
    group: FgAbGroup,
    action: Vec<IntMatrix>,
    free_action: Vec<IntMatrix>,
}

fn combination(order: &ZOrder, mats: &[IntMatrix], coeffs: impl Fn(usize) -> BigInt, n: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(n, n);
    for (k, m) in mats.iter().enumerate().take(order.rank()) {
        let c = coeffs(k);
        if !c.is_zero() {
            out = out.add(&m.scale(&c));
        }
    }
    out
}

fn check_endomorphisms(group: &FgAbGroup, mats: &[IntMatrix], r: usize, what: &str) -> Result<()> {
    if mats.len() != r {
        return Err(Error::InvalidModule(format!("{what} action needs {r} matrices, got {}", mats.len())));
    }
    for (i, m) in mats.iter().enumerate() {
        GroupMap::new(group, group, m.clone())
            .map_err(|e| Error::InvalidModule(format!("{what} action of e{i}: {e}")))?;
    }
    Ok(())
}

fn check_unit_acts_trivially(order: &ZOrder, group: &FgAbGroup, mats: &[IntMatrix], what: &str) -> Result<()> {
    let n = group.generators();
    let u = combination(order, mats, |k| order.unit()[k].clone(), n);
    if !group.maps_agree(&u, &IntMatrix::identity(n)) {
        return Err(Error::InvalidModule(format!("unit does not act as the identity ({what} action)")));
    }
    Ok(())
}

impl RightModule {
    /// `action[i]` is the matrix of `m ↦ m·e_i`. Checks well-definedness,
    /// the unit law and `ρ(e_j)ρ(e_i) = ρ(e_i e_j)`.
    pub fn new(order: &Arc<ZOrder>, group: FgAbGroup, action: Vec<IntMatrix>) -> Result<Self> {
        let r = order.rank();
        let n = group.generators();
        check_endomorphisms(&group, &action, r, "right")?;
        check_unit_acts_trivially(order, &group, &action, "right")?;
        for i in 0..r {
            for j in 0..r {
                let lhs = &action[j] * &action[i];
                let rhs = combination(order, &action, |k| order.constant(i, j, k).clone(), n);
                if !group.maps_agree(&lhs, &rhs) {
                    return Err(Error::InvalidModule(format!("right action fails (m·e{i})·e{j} = m·(e{i}e{j})")));
                }
            }
        }
        Ok(Self::unchecked(order.clone(), group, action))
    }

    fn unchecked(order: Arc<ZOrder>, group: FgAbGroup, action: Vec<IntMatrix>) -> Self {
        let free_action = action.iter().map(|a| &(group.free_projection() * a) * group.free_basis()).collect();
        RightModule { order, group, action, free_action }
    }

    /// `R_R`
    pub fn regular(order: &Arc<ZOrder>) -> Self {
        let r = order.rank();
        let action = (0..r).map(|i| order.right_basis_matrix(i)).collect();
        Self::unchecked(order.clone(), FgAbGroup::free(r), action)
    }

    /// A group on which `R` acts through a ring map `R → Z` sending `e_i`
    /// to `values[i]` (scalar action on every generator).
    pub fn through_character(order: &Arc<ZOrder>, group: FgAbGroup, values: &[i64]) -> Result<Self> {
        let n = group.generators();
        let action = values.iter().map(|&v| IntMatrix::identity(n).scale(&BigInt::from(v))).collect();
        Self::new(order, group, action)
    }

    /// A group with the scalar action of `Z` (only valid over `R = Z`).
    pub fn over_integers(order: &Arc<ZOrder>, group: FgAbGroup) -> Result<Self> {
        if order.rank() != 1 || !order.unit()[0].is_one() {
            return Err(Error::InvalidModule("scalar action needs the order Z".into()));
        }
        Self::through_character(order, group, &[1])
    }

    pub fn direct_sum(parts: &[&RightModule]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
        if parts.iter().any(|p| p.order != first.order) {
            return Err(Error::InvalidModule("direct sum of modules over different orders".into()));
        }
        let groups: Vec<&FgAbGroup> = parts.iter().map(|p| &p.group).collect();
        let group = FgAbGroup::direct_sum(&groups);
        let action = (0..first.order.rank())
            .map(|i| {
                let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.action[i]).collect();
                IntMatrix::block_diagonal(&blocks)
            })
            .collect();
        Ok(Self::unchecked(first.order.clone(), group, action))
    }

    pub fn order(&self) -> &Arc<ZOrder> {
        &self.order
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn action(&self, i: usize) -> &IntMatrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Action of `e_i` in the free-part coordinates of the group.
    pub fn free_action(&self, i: usize) -> &IntMatrix {
        &self.free_action[i]
    }

    pub fn free_actions(&self) -> &[IntMatrix] {
        &self.free_action
    }

    /// Right multiplication by `a` on `group ⊗ R`, in free-part coordinates.
    pub fn real_action<T: Scalar>(&self, a: &OrderElement<T>) -> Matrix<T> {
        weighted(&self.free_action, a.coords(), self.rank())
    }

    /// Right multiplication by `a` on ambient generators.
    pub fn ambient_action<T: Scalar>(&self, a: &OrderElement<T>) -> Matrix<T> {
        weighted(&self.action, a.coords(), self.group.generators())
    }
}

fn weighted<T: Scalar>(mats: &[IntMatrix], coeffs: &[T], n: usize) -> Matrix<T> {
    assert_eq!(mats.len(), coeffs.len(), "element has the wrong number of coordinates");
    let mut out = Matrix::zeros(n, n);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&Matrix::from_int(m).scale(c));
        }
    }
    out
}

/// An `R`-bimodule: a right module together with a commuting left action.
#[derive(Clone, Debug)]
pub struct Bimodule {
    right: RightModule,
    left: Vec<IntMatrix>,
    free_left: Vec<IntMatrix>,
}

impl Bimodule {
    /// `left[i]` is the matrix of `m ↦ e_i·m`.
    pub fn new(right: RightModule, left: Vec<IntMatrix>) -> Result<Self> {
        let order = right.order.clone();
        let group = right.group.clone();
        let r = order.rank();
        let n = group.generators();
        check_endomorphisms(&group, &left, r, "left")?;
        check_unit_acts_trivially(&order, &group, &left, "left")?;
        for i in 0..r {
            for j in 0..r {
                let lhs = &left[i] * &left[j];
                let rhs = combination(&order, &left, |k| order.constant(i, j, k).clone(), n);
                if !group.maps_agree(&lhs, &rhs) {
                    return Err(Error::InvalidModule(format!("left action fails e{i}·(e{j}·m) = (e{i}e{j})·m")));
                }
                let a = &left[i] * right.action(j);
                let b = right.action(j) * &left[i];
                if !group.maps_agree(&a, &b) {
                    return Err(Error::InvalidModule(format!("left action of e{i} does not commute with right action of e{j}")));
                }
            }
        }
        Ok(Self::unchecked(right, left))
    }

    fn unchecked(right: RightModule, left: Vec<IntMatrix>) -> Self {
        let g = &right.group;
        let free_left = left.iter().map(|a| &(g.free_projection() * a) * g.free_basis()).collect();
        Bimodule { right, left, free_left }
    }

    /// `R` acting on itself from both sides.
    pub fn regular(order: &Arc<ZOrder>) -> Self {
        let left = (0..order.rank()).map(|i| order.left_basis_matrix(i)).collect();
        Self::unchecked(RightModule::regular(order), left)
    }

    /// `Hom_Z(M, Z)` on the dual basis with `(a·f·b)(x) = f(b·x·a)`.
    /// Requires the underlying group to be free on its generators.
    pub fn dual(&self) -> Result<Self> {
        let g = self.group();
        if g.relations().cols() > 0 && !g.relations().is_zero() {
            return Err(Error::InvalidModule("dual needs a module presented without relations".into()));
        }
        let n = g.generators();
        let right_action = self.left.iter().map(IntMatrix::transpose).collect();
        let left_action = self.right.action.iter().map(IntMatrix::transpose).collect();
        let right = RightModule::unchecked(self.right.order.clone(), FgAbGroup::free(n), right_action);
        Ok(Self::unchecked(right, left_action))
    }

    pub fn as_right(&self) -> &RightModule {
        &self.right
    }

    pub fn order(&self) -> &Arc<ZOrder> {
        self.right.order()
    }

    pub fn group(&self) -> &FgAbGroup {
        self.right.group()
    }

    pub fn rank(&self) -> usize {
        self.right.rank()
    }

    pub fn left_action(&self, i: usize) -> &IntMatrix {
        &self.left[i]
    }

    pub fn left_actions(&self) -> &[IntMatrix] {
        &self.left
    }

    pub fn free_left_action(&self, i: usize) -> &IntMatrix {
        &self.free_left[i]
    }

    /// Left multiplication by `a` on `group ⊗ R`, in free-part coordinates.
    pub fn real_left_action<T: Scalar>(&self, a: &OrderElement<T>) -> Matrix<T> {
        weighted(&self.free_left, a.coords(), self.rank())
    }

    pub fn ambient_left_action<T: Scalar>(&self, a: &OrderElement<T>) -> Matrix<T> {
        weighted(&self.left, a.coords(), self.group().generators())
    }
}

/// `R^∨ = Hom_Z(R, Z)` as an `R`-bimodule.
pub fn dual_bimodule(order: &Arc<ZOrder>) -> Bimodule {
    Bimodule::regular(order).dual().expect("the regular bimodule is free")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_times_z() -> Arc<ZOrder> {
        Arc::new(ZOrder::z_times_z())
    }

    #[test]
    fn regular_and_dual_validate() {
        for name in ZOrder::BUILTIN_NAMES {
            let r = Arc::new(ZOrder::builtin(name).unwrap());
            let reg = Bimodule::regular(&r);
            Bimodule::new(reg.as_right().clone(), reg.left_actions().to_vec()).unwrap();
            let dual = dual_bimodule(&r);
            let right = RightModule::new(&r, dual.group().clone(), dual.as_right().actions().to_vec()).unwrap();
            Bimodule::new(right, dual.left_actions().to_vec()).unwrap();
        }
    }

    #[test]
    fn dual_of_integers_is_trivial_action() {
        let z = Arc::new(ZOrder::integers());
        let d = dual_bimodule(&z);
        assert_eq!(d.rank(), 1);
        assert_eq!(d.as_right().action(0), &IntMatrix::identity(1));
        assert_eq!(d.left_action(0), &IntMatrix::identity(1));
    }

    #[test]
    fn double_dual_restores_actions() {
        let r = Arc::new(ZOrder::lipschitz());
        let reg = Bimodule::regular(&r);
        let dd = reg.dual().unwrap().dual().unwrap();
        for i in 0..4 {
            assert_eq!(dd.as_right().action(i), reg.as_right().action(i));
            assert_eq!(dd.left_action(i), reg.left_action(i));
        }
    }

    #[test]
    fn mixed_factor_bimodule_over_z_times_z() {
        let r = z_times_z();
        let right = RightModule::through_character(&r, FgAbGroup::free(1), &[0, 1]).unwrap();
        let left = vec![IntMatrix::identity(1), IntMatrix::zeros(1, 1)];
        Bimodule::new(right, left).unwrap();
    }

    #[test]
    fn wrong_order_of_composition_is_rejected() {
        // on row vectors the assignment e_ij ↦ E_ij (acting on columns) is a
        // left action, not a right one
        let r = Arc::new(ZOrder::matrix_ring_2());
        let action: Vec<IntMatrix> = (0..4)
            .map(|a| {
                let (i, j) = (a / 2, a % 2);
                IntMatrix::from_fn(2, 2, |p, q| BigInt::from((p == i && q == j) as i64))
            })
            .collect();
        assert!(RightModule::new(&r, FgAbGroup::free(2), action.clone()).is_err());
        let transposed = action.iter().map(IntMatrix::transpose).collect();
        RightModule::new(&r, FgAbGroup::free(2), transposed).unwrap();
    }

    #[test]
    fn torsion_module_with_scalar_action() {
        let z = Arc::new(ZOrder::integers());
        let m = RightModule::over_integers(&z, FgAbGroup::cyclic(6)).unwrap();
        assert_eq!(m.rank(), 0);
        let non_unit = RightModule::through_character(&z, FgAbGroup::cyclic(6), &[5]);
        assert!(non_unit.is_err());
    }
}
