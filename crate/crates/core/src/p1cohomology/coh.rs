use super::{cohomology_basis, h0_basis, InvertibleObject, Monomial, TwistSum};
use crate::error::Result;
use crate::exactlin::FgAbGroup;
use crate::zorder::{dual_bimodule, hom_right, ModuleHom, RightModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohLabel {
    pub summand: usize,
    pub monomial: Monomial,
    /// First ambient generator of this copy of the summand.
    pub offset: usize,
}

/// `H^i(E)` with one labelled copy of each coefficient group per monomial.
#[derive(Clone, Debug)]
pub struct CohGroup {
    group: FgAbGroup,
    labels: Vec<CohLabel>,
}

impl CohGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn labels(&self) -> &[CohLabel] {
        &self.labels
    }
}

/// `H^i(⊕ P_j ⊗ O(n_j)) = ⊕ P_j ⊗ H^i(O(n_j))`, zero for `i > 1`.
pub fn twist_cohomology(e: &TwistSum, degree: usize) -> CohGroup {
    let mut parts = Vec::new();
    let mut labels = Vec::new();
    let mut offset = 0;
    for (j, (p, n)) in e.summands().iter().enumerate() {
        for monomial in cohomology_basis(*n, degree) {
            labels.push(CohLabel { summand: j, monomial, offset });
            offset += p.group().generators();
            parts.push(p.group());
        }
    }
    CohGroup { group: FgAbGroup::direct_sum(&parts), labels }
}

/// `Hom_R(·, ·) ⊗ H^i(O(k))` for one twist class.
#[derive(Clone, Debug)]
pub struct QgrFactor {
    pub class_twist: i64,
    pub hom: ModuleHom,
    pub monomials: Vec<Monomial>,
}

impl QgrFactor {
    pub fn multiplicity(&self) -> usize {
        self.monomials.len()
    }
}

/// A qgr Hom or Ext group with its factor decomposition.
#[derive(Clone, Debug)]
pub struct QgrGroup {
    group: FgAbGroup,
    factors: Vec<QgrFactor>,
}

impl QgrGroup {
    fn assemble(factors: Vec<QgrFactor>) -> Self {
        let powers: Vec<FgAbGroup> = factors.iter().map(|f| f.hom.group().power(f.multiplicity())).collect();
        let refs: Vec<&FgAbGroup> = powers.iter().collect();
        QgrGroup { group: FgAbGroup::direct_sum(&refs), factors }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn factors(&self) -> &[QgrFactor] {
        &self.factors
    }

    /// Sum of the real dimensions of the factors; equals the group rank.
    pub fn real_dimension(&self) -> usize {
        self.factors.iter().map(|f| f.hom.real_dimension() * f.multiplicity()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct QgrHomExt {
    pub line_twist: i64,
    pub hom: QgrGroup,
    pub ext: QgrGroup,
}

impl QgrHomExt {
    pub fn degree(&self, i: usize) -> Option<&QgrGroup> {
        match i {
            0 => Some(&self.hom),
            1 => Some(&self.ext),
            _ => None,
        }
    }
}

/// `Hom(J ⊗ O(n), E) = ⊕_m Hom_R(J, P^(m)) ⊗ H⁰(O(m − n))`, and `Ext¹` with `H¹`.
pub fn hom_ext_qgr(l: &InvertibleObject, e: &TwistSum) -> Result<QgrHomExt> {
    let n = l.twist();
    let mut hom_factors = Vec::new();
    let mut ext_factors = Vec::new();
    for m in e.twist_classes().keys() {
        let k = m - n;
        let h0 = cohomology_basis(k, 0);
        let h1 = cohomology_basis(k, 1);
        if h0.is_empty() && h1.is_empty() {
            continue;
        }
        let p = e.class_module(*m).expect("class is nonempty");
        let hom = hom_right(l.module(), &p)?;
        if !h0.is_empty() {
            hom_factors.push(QgrFactor { class_twist: *m, hom: hom.clone(), monomials: h0 });
        }
        if !h1.is_empty() {
            ext_factors.push(QgrFactor { class_twist: *m, hom, monomials: h1 });
        }
    }
    Ok(QgrHomExt { line_twist: n, hom: QgrGroup::assemble(hom_factors), ext: QgrGroup::assemble(ext_factors) })
}

/// The space on which the ω-automorphism acts when correcting `det Ext¹`:
/// `Hom(t⁻¹E, ω) = ⊕_m Hom_R(P^(m), K^∨) ⊗ H⁰(O(n − 2 − m))` with
/// `K^∨ = Hom_R(K, R^∨)` and `K` the inverse of `J`.
#[derive(Clone, Debug)]
pub struct AlphaSpace {
    /// `Hom_R(K, R^∨)`; its realification carries the transported α.
    pub dual_hom: ModuleHom,
    pub dual_module: RightModule,
    pub space: QgrGroup,
}

pub fn alpha_space(l: &InvertibleObject, e: &TwistSum) -> Result<AlphaSpace> {
    let k = l.inverse()?;
    let omega = dual_bimodule(l.order());
    let dual_hom = hom_right(k.as_right(), omega.as_right())?;
    let dual_module = dual_hom.right_module_via_left(k)?;
    let n = l.twist();
    let mut factors = Vec::new();
    for m in e.twist_classes().keys() {
        let monomials = h0_basis(n - 2 - m);
        if monomials.is_empty() {
            continue;
        }
        let p = e.class_module(*m).expect("class is nonempty");
        factors.push(QgrFactor { class_twist: *m, hom: hom_right(&p, &dual_module)?, monomials });
    }
    Ok(AlphaSpace { dual_hom, dual_module, space: QgrGroup::assemble(factors) })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::zorder::ZOrder;

    #[test]
    fn cohomology_of_line_bundles_over_z() {
        let z = Arc::new(ZOrder::integers());
        let h = twist_cohomology(&TwistSum::structure(&z, 3), 0);
        assert_eq!(h.group().rank(), 4);
        assert_eq!(twist_cohomology(&TwistSum::structure(&z, 3), 1).group().rank(), 0);
        let h1 = twist_cohomology(&TwistSum::structure(&z, -3), 1);
        assert_eq!(h1.group().rank(), 2);
        assert_eq!(h1.labels()[0].monomial, Monomial { a: -1, b: -2 });
        assert!(twist_cohomology(&TwistSum::structure(&z, 5), 2).group().is_trivial());
        let tors = RightModule::over_integers(&z, FgAbGroup::cyclic(6)).unwrap();
        let h = twist_cohomology(&TwistSum::single(tors, 0), 0);
        assert_eq!(h.group().describe(), "Z/6");
    }

    #[test]
    fn qgr_hom_and_ext_examples() {
        let m2 = Arc::new(ZOrder::matrix_ring_2());
        let d = hom_ext_qgr(&InvertibleObject::structure(&m2, 0), &TwistSum::structure(&m2, 0)).unwrap();
        assert_eq!(d.hom.group().rank(), 4);
        assert!(d.ext.group().is_trivial());

        let z = Arc::new(ZOrder::integers());
        let d = hom_ext_qgr(&InvertibleObject::structure(&z, 2), &TwistSum::structure(&z, 0)).unwrap();
        assert!(d.hom.group().is_trivial());
        assert_eq!(d.ext.group().describe(), "Z");
        assert_eq!(d.ext.factors()[0].monomials, vec![Monomial { a: -1, b: -1 }]);

        let omega = TwistSum::single(dual_bimodule(&z).as_right().clone(), -2);
        let d = hom_ext_qgr(&InvertibleObject::structure(&z, 0), &omega).unwrap();
        assert!(d.hom.group().is_trivial());
        assert_eq!(d.ext.group().describe(), "Z");
    }

    #[test]
    fn alpha_space_ranks() {
        let m2 = Arc::new(ZOrder::matrix_ring_2());
        let l = InvertibleObject::structure(&m2, 0);
        let a = alpha_space(&l, &TwistSum::structure(&m2, -3)).unwrap();
        assert_eq!(a.space.group().rank(), 8);
        assert_eq!(a.dual_module.rank(), 4);
        let a = alpha_space(&l, &TwistSum::structure(&m2, 0)).unwrap();
        assert!(a.space.group().is_trivial());
    }
}
