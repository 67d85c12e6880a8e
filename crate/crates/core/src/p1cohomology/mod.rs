//! Coherent objects `⊕ P_i ⊗ O(n_i)` on `coh(R ⊗ O_{P¹_Z})`: monomial
//! cohomology, qgr Hom and Ext¹, the dualizing object and induced maps.

mod aut;
mod coh;
mod serre;
mod twist;

pub use aut::{
    alpha_det, check_module_automorphism, induced_map_det, transported_alpha, AutData, COMMUTATION_TOL,
    INVERTIBILITY_TOL,
};
pub use coh::{alpha_space, hom_ext_qgr, twist_cohomology, AlphaSpace, CohGroup, CohLabel, QgrFactor, QgrGroup, QgrHomExt};
pub use serre::{dualizing_object, residue_pairing, serre_invariant_check, DualizingObject, SerreReport, SerreSummandReport};
pub use twist::{
    cohomology_basis, h0_basis, h0_rank, h1_basis, h1_rank, InvertibilityReport, InvertibleObject, Monomial, TwistSum,
};
