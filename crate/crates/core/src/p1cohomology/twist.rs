use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::zorder::{hom_right, Bimodule, RightModule, ZOrder};

/// `T0^a T1^b`
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: i64,
    pub b: i64,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T0^{} T1^{}", self.a, self.b)
    }
}

pub fn h0_rank(n: i64) -> usize {
    (n + 1).max(0) as usize
}

pub fn h1_rank(n: i64) -> usize {
    (-n - 1).max(0) as usize
}

/// `{T0^a T1^b : a, b ≥ 0, a + b = n}` with `a` descending.
pub fn h0_basis(n: i64) -> Vec<Monomial> {
    (0..=n).rev().map(|a| Monomial { a, b: n - a }).collect()
}

/// `{T0^a T1^b : a, b ≤ −1, a + b = n}` with `a` descending.
pub fn h1_basis(n: i64) -> Vec<Monomial> {
    (n + 1..=-1).rev().map(|a| Monomial { a, b: n - a }).collect()
}

pub fn cohomology_basis(n: i64, degree: usize) -> Vec<Monomial> {
    match degree {
        0 => h0_basis(n),
        1 => h1_basis(n),
        _ => Vec::new(),
    }
}

/// `⊕ P_i ⊗ O(n_i)`
#[derive(Clone, Debug)]
pub struct TwistSum {
    order: Arc<ZOrder>,
    summands: Vec<(RightModule, i64)>,
}

impl TwistSum {
    pub fn new(order: &Arc<ZOrder>, summands: Vec<(RightModule, i64)>) -> Result<Self> {
        if summands.iter().any(|(p, _)| p.order() != order) {
            return Err(Error::InvalidModule("twist sum summands over different orders".into()));
        }
        Ok(TwistSum { order: order.clone(), summands })
    }

    pub fn single(module: RightModule, twist: i64) -> Self {
        TwistSum { order: module.order().clone(), summands: vec![(module, twist)] }
    }

    /// `R ⊗ O(n)`
    pub fn structure(order: &Arc<ZOrder>, twist: i64) -> Self {
        Self::single(RightModule::regular(order), twist)
    }

    pub fn order(&self) -> &Arc<ZOrder> {
        &self.order
    }

    pub fn summands(&self) -> &[(RightModule, i64)] {
        &self.summands
    }

    /// Summand indices grouped by twist, in list order.
    pub fn twist_classes(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, (_, n)) in self.summands.iter().enumerate() {
            classes.entry(*n).or_default().push(i);
        }
        classes
    }

    /// `P^(m)`: direct sum of the summands of twist `m`.
    pub fn class_module(&self, m: i64) -> Option<RightModule> {
        let parts: Vec<&RightModule> = self.summands.iter().filter(|(_, n)| *n == m).map(|(p, _)| p).collect();
        if parts.is_empty() {
            None
        } else {
            Some(RightModule::direct_sum(&parts).expect("summands share the order"))
        }
    }

    /// Summand `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> TwistSum {
        assert_eq!(perm.len(), self.summands.len());
        let mut slots: Vec<Option<(RightModule, i64)>> = vec![None; perm.len()];
        for (i, s) in self.summands.iter().enumerate() {
            slots[perm[i]] = Some(s.clone());
        }
        TwistSum { order: self.order.clone(), summands: slots.into_iter().map(|s| s.expect("perm is a bijection")).collect() }
    }
}

/// `J ⊗ O(n)` with `J` an invertible bimodule and optional inverse `K`.
#[derive(Clone, Debug)]
pub struct InvertibleObject {
    bimodule: Bimodule,
    twist: i64,
    inverse: Option<Bimodule>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvertibilityReport {
    pub rank_matches: bool,
    pub endomorphism_rank_matches: bool,
    pub inverse_rank_matches: Option<bool>,
    pub warnings: Vec<String>,
}

impl InvertibilityReport {
    pub fn passed(&self) -> bool {
        self.rank_matches && self.endomorphism_rank_matches && self.inverse_rank_matches.unwrap_or(true)
    }
}

impl InvertibleObject {
    /// `R ⊗ O(n)`, its own inverse.
    pub fn structure(order: &Arc<ZOrder>, twist: i64) -> Self {
        let r = Bimodule::regular(order);
        InvertibleObject { bimodule: r.clone(), twist, inverse: Some(r) }
    }

    /// A user-asserted invertible bimodule; see [`InvertibleObject::necessary_conditions`].
    /// The regular bimodule needs no inverse data.
    pub fn new(bimodule: Bimodule, twist: i64, inverse: Option<Bimodule>) -> Result<Self> {
        if let Some(k) = &inverse {
            if k.order() != bimodule.order() {
                return Err(Error::InvalidModule("inverse bimodule over a different order".into()));
            }
        }
        let mut out = InvertibleObject { bimodule, twist, inverse };
        if out.inverse.is_none() && out.is_structure() {
            out.inverse = Some(Bimodule::regular(out.order()));
        }
        Ok(out)
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.bimodule
    }

    pub fn module(&self) -> &RightModule {
        self.bimodule.as_right()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn order(&self) -> &Arc<ZOrder> {
        self.bimodule.order()
    }

    pub fn inverse(&self) -> Result<&Bimodule> {
        self.inverse.as_ref().ok_or(Error::UnsupportedInvertible)
    }

    /// Whether `J` is `R` itself with its regular actions.
    pub fn is_structure(&self) -> bool {
        let reg = Bimodule::regular(self.order());
        let j = &self.bimodule;
        j.group().generators() == reg.group().generators()
            && j.group().relations().is_zero()
            && j.as_right().actions() == reg.as_right().actions()
            && j.left_actions() == reg.left_actions()
    }

    pub fn with_twist(&self, twist: i64) -> Self {
        InvertibleObject { twist, ..self.clone() }
    }

    /// Checks that hold for every invertible bimodule: `J` and `K` have the
    /// rank of `R` and `End_R(J)` has the rank of `R`.
    pub fn necessary_conditions(&self) -> Result<InvertibilityReport> {
        let r = self.order().rank();
        let mut report = InvertibilityReport::default();
        let j = self.module();
        report.rank_matches = j.rank() == r && j.group().is_free();
        if !report.rank_matches {
            report.warnings.push(format!("J has {} instead of Z^{r}", j.group().describe()));
        }
        let end_rank = hom_right(j, j)?.group().rank();
        report.endomorphism_rank_matches = end_rank == r;
        if !report.endomorphism_rank_matches {
            report.warnings.push(format!("End_R(J) has rank {end_rank}, expected {r}"));
        }
        report.inverse_rank_matches = self.inverse.as_ref().map(|k| k.rank() == r && k.group().is_free());
        if self.inverse.is_none() {
            report.warnings.push("no inverse bimodule supplied; Ext corrections unavailable".into());
        } else if report.inverse_rank_matches == Some(false) {
            report.warnings.push("inverse bimodule has the wrong rank".into());
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FgAbGroup;

    #[test]
    fn monomial_bases() {
        assert_eq!(h0_basis(3).len(), 4);
        assert_eq!(h0_basis(3)[0], Monomial { a: 3, b: 0 });
        assert!(h0_basis(-1).is_empty());
        assert_eq!(h1_basis(-3), vec![Monomial { a: -1, b: -2 }, Monomial { a: -2, b: -1 }]);
        assert!(h1_basis(-1).is_empty());
        for n in -8..=8 {
            assert_eq!(h0_basis(n).len(), h0_rank(n));
            assert_eq!(h1_basis(n).len(), h1_rank(n));
        }
    }

    #[test]
    fn twist_classes_and_permutation() {
        let z = Arc::new(ZOrder::integers());
        let p = RightModule::over_integers(&z, FgAbGroup::cyclic(6)).unwrap();
        let e = TwistSum::new(&z, vec![(RightModule::regular(&z), 1), (p, 0), (RightModule::regular(&z), 1)]).unwrap();
        let classes = e.twist_classes();
        assert_eq!(classes[&1], vec![0, 2]);
        assert_eq!(e.class_module(1).unwrap().rank(), 2);
        let f = e.permuted(&[2, 0, 1]);
        assert_eq!(f.summands()[0].1, 0);
        assert!(e.class_module(5).is_none());
    }

    #[test]
    fn structure_object_passes_necessary_conditions() {
        let r = Arc::new(ZOrder::matrix_ring_2());
        assert!(InvertibleObject::structure(&r, 0).necessary_conditions().unwrap().passed());
    }
}
