use std::sync::Arc;

use super::DetLine;
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::p1cohomology::{
    alpha_det, alpha_space, check_module_automorphism, dualizing_object, h0_rank, hom_ext_qgr, induced_map_det,
    AutData, DualizingObject, InvertibleObject, TwistSum,
};
use crate::scalar::Scalar;
use crate::zorder::{semisimplicity_check, ZOrder};

/// `(E, γ)`
#[derive(Clone, Debug)]
pub struct ArithBundle<T: Scalar> {
    sheaf: TwistSum,
    gamma: AutData<T>,
}

impl<T: Scalar> ArithBundle<T> {
    pub fn new(sheaf: TwistSum, gamma: AutData<T>) -> Result<Self> {
        gamma.validate(&sheaf)?;
        Ok(ArithBundle { sheaf, gamma })
    }

    /// `Ā = (R ⊗ O, id)`
    pub fn structure(order: &Arc<ZOrder>) -> Self {
        let sheaf = TwistSum::structure(order, 0);
        let gamma = AutData::identity(&sheaf);
        ArithBundle { sheaf, gamma }
    }

    pub fn sheaf(&self) -> &TwistSum {
        &self.sheaf
    }

    pub fn gamma(&self) -> &AutData<T> {
        &self.gamma
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        ArithBundle { sheaf: self.sheaf.permuted(perm), gamma: self.gamma.permute_summands(&self.sheaf, perm) }
    }
}

/// `(L, β)` with `β` acting on the free coordinates of `J`.
#[derive(Clone, Debug)]
pub struct ArithLineBundle<T: Scalar> {
    line: InvertibleObject,
    beta: Matrix<T>,
}

impl<T: Scalar> ArithLineBundle<T> {
    pub fn new(line: InvertibleObject, beta: Matrix<T>) -> Result<Self> {
        check_module_automorphism(line.module(), &beta, "line bundle automorphism")?;
        Ok(ArithLineBundle { line, beta })
    }

    pub fn structure(order: &Arc<ZOrder>) -> Self {
        let line = InvertibleObject::structure(order, 0);
        let beta = Matrix::identity(order.rank());
        ArithLineBundle { line, beta }
    }

    pub fn line(&self) -> &InvertibleObject {
        &self.line
    }

    pub fn beta(&self) -> &Matrix<T> {
        &self.beta
    }

    /// The same data viewed as a bundle `(J ⊗ O(n), β)`.
    pub fn as_bundle(&self) -> ArithBundle<T> {
        let sheaf = TwistSum::single(self.line.module().clone(), self.line.twist());
        ArithBundle { sheaf, gamma: AutData::single(self.line.twist(), self.beta.clone()) }
    }
}

/// `ω̄ = (R^∨ ⊗ O(−2), α)`
#[derive(Clone, Debug)]
pub struct OmegaChoice<T: Scalar> {
    omega: DualizingObject,
    alpha: Matrix<T>,
}

impl<T: Scalar> OmegaChoice<T> {
    pub fn new(order: &Arc<ZOrder>, alpha: Matrix<T>) -> Result<Self> {
        let omega = dualizing_object(order);
        check_module_automorphism(omega.bimodule.as_right(), &alpha, "dualizing object automorphism")?;
        Ok(OmegaChoice { omega, alpha })
    }

    pub fn identity(order: &Arc<ZOrder>) -> Self {
        OmegaChoice { omega: dualizing_object(order), alpha: Matrix::identity(order.rank()) }
    }

    pub fn alpha(&self) -> &Matrix<T> {
        &self.alpha
    }

    pub fn dualizing(&self) -> &DualizingObject {
        &self.omega
    }

    pub fn as_bundle(&self) -> ArithBundle<T> {
        let sheaf = self.omega.as_twist_sum();
        ArithBundle { sheaf, gamma: AutData::single(self.omega.twist, self.alpha.clone()) }
    }
}

fn check_orders<T: Scalar>(lb: &ArithLineBundle<T>, eb: &ArithBundle<T>, w: &OmegaChoice<T>) -> Result<()> {
    let r = lb.line.order();
    if eb.sheaf.order() != r || w.omega.bimodule.order() != r {
        return Err(Error::InvalidModule("bundles over different orders".into()));
    }
    Ok(())
}

/// `(det Hom(L̄, Ē), det Ext¹(L̄, Ē))`, the latter corrected by `det(α_*)⁻¹`.
pub fn det_hom_ext<T: Scalar>(
    lb: &ArithLineBundle<T>,
    eb: &ArithBundle<T>,
    w: &OmegaChoice<T>,
) -> Result<(DetLine<T>, DetLine<T>)> {
    check_orders(lb, eb, w)?;
    let data = hom_ext_qgr(&lb.line, &eb.sheaf)?;
    let t_hom = induced_map_det(&data, &lb.beta, &eb.gamma, 0)?;
    let mut t_ext = induced_map_det(&data, &lb.beta, &eb.gamma, 1)?;
    let n = lb.line.twist();
    let alpha_needed = eb.sheaf.twist_classes().keys().any(|m| h0_rank(n - 2 - m) > 0);
    if alpha_needed {
        let space = alpha_space(&lb.line, &eb.sheaf)?;
        t_ext = t_ext / alpha_det(&space, &w.alpha)?;
    }
    Ok((DetLine::from_group(data.hom.group(), t_hom)?, DetLine::from_group(data.ext.group(), t_ext)?))
}

/// `λ(L̄, Ē) = det Hom ⊗ (det Ext¹)⁻¹`
pub fn lambda<T: Scalar>(lb: &ArithLineBundle<T>, eb: &ArithBundle<T>, w: &OmegaChoice<T>) -> Result<DetLine<T>> {
    let (hom, ext) = det_hom_ext(lb, eb, w)?;
    Ok(hom.tensor(&ext.inverse()))
}

/// `λ(L̄,Ē) ⊗ λ(L̄,Ā)⁻¹ ⊗ λ(Ā,Ē)⁻¹ ⊗ λ(Ā,Ā)` and its intersection number
/// `−adeg`.
pub fn intersection<T: Scalar>(
    lb: &ArithLineBundle<T>,
    eb: &ArithBundle<T>,
    w: &OmegaChoice<T>,
) -> Result<(DetLine<T>, f64)> {
    let order = lb.line.order();
    let a_line = ArithLineBundle::structure(order);
    let a = ArithBundle::structure(order);
    let bundle = lambda(lb, eb, w)?
        .tensor(&lambda(lb, &a, w)?.inverse())
        .tensor(&lambda(&a_line, eb, w)?.inverse())
        .tensor(&lambda(&a_line, &a, w)?);
    let number = -bundle.adeg();
    Ok((bundle, number))
}

/// `χ(Ē) = adeg λ(Ā, Ē)`
pub fn euler_characteristic<T: Scalar>(eb: &ArithBundle<T>, w: &OmegaChoice<T>) -> Result<f64> {
    let a_line = ArithLineBundle::structure(eb.sheaf.order());
    Ok(lambda(&a_line, eb, w)?.adeg())
}

/// Warning text when the real algebra is not certified central simple.
pub fn simplicity_warning(order: &ZOrder) -> Option<String> {
    let rep = semisimplicity_check(order);
    (!rep.central_simple()).then(|| {
        format!(
            "{} is not certified central simple (separable: {}, center rank {})",
            order.name(),
            rep.separable,
            rep.center_rank
        )
    })
}

/// `adeg λ(L̄, ω̄) − adeg λ(Ā, L̄)`; zero when the real algebra is simple.
pub fn duality_residual<T: Scalar>(lb: &ArithLineBundle<T>, w: &OmegaChoice<T>) -> Result<f64> {
    let order = lb.line.order();
    let with_omega = lambda(lb, &w.as_bundle(), w)?;
    let plain = lambda(&ArithLineBundle::structure(order), &lb.as_bundle(), w)?;
    Ok(if T::EXACT {
        with_omega.tensor(&plain.inverse()).adeg()
    } else {
        with_omega.adeg() - plain.adeg()
    })
}

/// `χ(L̄) − ½((L̄,L̄) − (L̄,ω̄)) − χ(Ā)`
pub fn rr_residual<T: Scalar>(lb: &ArithLineBundle<T>, w: &OmegaChoice<T>) -> Result<f64> {
    let order = lb.line.order();
    let a_line = ArithLineBundle::structure(order);
    let a = ArithBundle::structure(order);
    let chi_l = lambda(&a_line, &lb.as_bundle(), w)?;
    let chi_a = lambda(&a_line, &a, w)?;
    let (ll, ll_number) = intersection(lb, &lb.as_bundle(), w)?;
    let (lw, lw_number) = intersection(lb, &w.as_bundle(), w)?;
    Ok(if T::EXACT {
        // twice the residual is the degree of one exact line
        let twice = chi_l.pow(2).tensor(&ll).tensor(&lw.inverse()).tensor(&chi_a.pow(-2));
        twice.adeg() / 2.0
    } else {
        chi_l.adeg() - 0.5 * (ll_number - lw_number) - chi_a.adeg()
    })
}
