use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{alpha_space, h0_basis, h1_basis, hom_ext_qgr, InvertibleObject, Monomial, TwistSum};
use crate::error::Result;
use crate::exactlin::IntMatrix;
use crate::zorder::{dual_bimodule, hom_right, Bimodule, ZOrder};

/// `ω = R^∨ ⊗ O(−2)`
#[derive(Clone, Debug)]
pub struct DualizingObject {
    pub bimodule: Bimodule,
    pub twist: i64,
}

impl DualizingObject {
    pub fn as_twist_sum(&self) -> TwistSum {
        TwistSum::single(self.bimodule.as_right().clone(), self.twist)
    }
}

pub fn dualizing_object(order: &Arc<ZOrder>) -> DualizingObject {
    DualizingObject { bimodule: dual_bimodule(order), twist: -2 }
}

/// Gram matrix of the residue pairing `H⁰(O(k)) × H¹(O(−2−k)) → Z` on
/// monomials, `T0^a T1^b · T0^{−1−a} T1^{−1−b} = T0^{−1} T1^{−1}`.
pub fn residue_pairing(k: i64) -> IntMatrix {
    let h0 = h0_basis(k);
    let h1 = h1_basis(-2 - k);
    let pairs = |x: &Monomial, y: &Monomial| x.a + y.a == -1 && x.b + y.b == -1;
    IntMatrix::from_fn(h0.len(), h1.len(), |i, j| BigInt::from(pairs(&h0[i], &h1[j]) as i64))
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.determinant().abs().is_one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreSummandReport {
    pub summand: usize,
    pub twist: i64,
    pub ext_rank: usize,
    pub dual_hom_rank: usize,
    pub monomial_pairing_unimodular: bool,
    /// Evaluation pairing `Hom_R(R, P) × Hom_R(P, R^∨) → Z`; only for `J = R`.
    pub coefficient_pairing_unimodular: Option<bool>,
}

impl SerreSummandReport {
    pub fn passed(&self) -> bool {
        self.ext_rank == self.dual_hom_rank
            && self.monomial_pairing_unimodular
            && self.coefficient_pairing_unimodular.unwrap_or(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreReport {
    pub ext_rank: usize,
    pub dual_hom_rank: usize,
    pub summands: Vec<SerreSummandReport>,
}

impl SerreReport {
    pub fn passed(&self) -> bool {
        self.ext_rank == self.dual_hom_rank && self.summands.iter().all(SerreSummandReport::passed)
    }
}

/// Compares `Ext¹(L, E)` with `Hom(t⁻¹E, ω)` summand by summand.
pub fn serre_invariant_check(l: &InvertibleObject, e: &TwistSum) -> Result<SerreReport> {
    let n = l.twist();
    let structure = l.is_structure();
    let mut summands = Vec::new();
    for (i, (p, m)) in e.summands().iter().enumerate() {
        let single = TwistSum::single(p.clone(), *m);
        let ext_rank = hom_ext_qgr(l, &single)?.ext.group().rank();
        let space = alpha_space(l, &single)?;
        let dual_hom_rank = space.space.group().rank();
        let k = n - 2 - m;
        let monomial_pairing_unimodular = h0_basis(k).len() == h1_basis(-2 - k).len() && is_unimodular(&residue_pairing(k));
        let coefficient_pairing_unimodular = if structure {
            Some(is_unimodular(&evaluation_pairing(l, p, &space.dual_hom, &space.dual_module)?))
        } else {
            None
        };
        summands.push(SerreSummandReport {
            summand: i,
            twist: *m,
            ext_rank,
            dual_hom_rank,
            monomial_pairing_unimodular,
            coefficient_pairing_unimodular,
        });
    }
    Ok(SerreReport {
        ext_rank: summands.iter().map(|s| s.ext_rank).sum(),
        dual_hom_rank: summands.iter().map(|s| s.dual_hom_rank).sum(),
        summands,
    })
}

/// `(f, g) ↦ g(f(1))(1)` on free parts, for `J = K = R`.
fn evaluation_pairing(
    l: &InvertibleObject,
    p: &crate::zorder::RightModule,
    dual_hom: &crate::zorder::ModuleHom,
    dual_module: &crate::zorder::RightModule,
) -> Result<IntMatrix> {
    let unit = l.order().unit().to_vec();
    let fs = hom_right(l.module(), p)?.hom().free_part_maps();
    let gs = hom_right(p, dual_module)?.hom().free_part_maps();
    Ok(IntMatrix::from_fn(fs.len(), gs.len(), |a, b| {
        let v = (&gs[b] * &fs[a]).mul_vec(&unit);
        let functional = dual_hom.hom().map_from_coords(&v).mul_vec(&unit);
        functional.iter().zip(&unit).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
    }))
}
