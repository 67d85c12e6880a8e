//! Finitely generated abelian groups as cokernels of integer matrices.
//!
//! Convention: `FgAbGroup::new(rel)` with `rel` an `n x m` matrix is
//! `Z^n / (column span of rel)`. The `n` standard basis vectors are the
//! *ambient generators*; all maps are written on ambient generators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{integer_kernel, smith_normal_form, solve_integer, IntMatrix, Lattice, Snf};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FgAbGroup(Arc<GroupData>);

struct GroupData {
    relations: IntMatrix,
    snf: Snf,
    nonzero: usize,
    torsion: Vec<BigInt>,
    free_projection: IntMatrix,
    free_basis: IntMatrix,
}

impl FgAbGroup {
    pub fn new(relations: IntMatrix) -> Self {
        let snf = smith_normal_form(&relations);
        let diag = snf.diagonal();
        let nonzero = diag.iter().take_while(|d| !d.is_zero()).count();
        let torsion = diag[..nonzero].iter().filter(|d| !d.is_one()).cloned().collect();
        let n = relations.rows();
        let free_projection = snf.u.select_rows(nonzero..n);
        let free_basis = snf.u_inv.select_cols(nonzero..n);
        FgAbGroup(Arc::new(GroupData { relations, snf, nonzero, torsion, free_projection, free_basis }))
    }

    /// Z^n
    pub fn free(n: usize) -> Self {
        Self::new(IntMatrix::zeros(n, 0))
    }

    /// Z/d
    pub fn cyclic(d: i64) -> Self {
        Self::new(IntMatrix::from_rows(&[[d]]))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s` on `rank + s` generators.
    pub fn from_invariants(rank: usize, torsion: &[i64]) -> Self {
        let n = rank + torsion.len();
        let rel = IntMatrix::from_fn(n, torsion.len(), |i, j| {
            if i == rank + j {
                BigInt::from(torsion[j])
            } else {
                BigInt::zero()
            }
        });
        Self::new(rel)
    }

    /// Direct sum whose free-part coordinates are the concatenation of the
    /// summands' free-part coordinates.
    pub fn direct_sum(parts: &[&FgAbGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|g| g.relations()).collect();
        let relations = IntMatrix::block_diagonal(&blocks);
        let projections: Vec<&IntMatrix> = parts.iter().map(|g| g.free_projection()).collect();
        let bases: Vec<&IntMatrix> = parts.iter().map(|g| g.free_basis()).collect();
        let snf = smith_normal_form(&relations);
        let diag = snf.diagonal();
        let nonzero = diag.iter().take_while(|d| !d.is_zero()).count();
        let torsion = diag[..nonzero].iter().filter(|d| !d.is_one()).cloned().collect();
        FgAbGroup(Arc::new(GroupData {
            relations,
            snf,
            nonzero,
            torsion,
            free_projection: IntMatrix::block_diagonal(&projections),
            free_basis: IntMatrix::block_diagonal(&bases),
        }))
    }

    /// `g^k`
    pub fn power(&self, k: usize) -> Self {
        let parts = vec![self; k];
        Self::direct_sum(&parts)
    }

    pub fn generators(&self) -> usize {
        self.0.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn rank(&self) -> usize {
        self.generators() - self.0.nonzero
    }

    /// Invariant factors `d_1 | d_2 | ...`, all at least 2.
    pub fn torsion(&self) -> &[BigInt] {
        &self.0.torsion
    }

    pub fn torsion_order(&self) -> BigInt {
        self.0.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 && self.0.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.0.torsion.is_empty()
    }

    pub fn same_invariants(&self, other: &FgAbGroup) -> bool {
        self.rank() == other.rank() && self.torsion() == other.torsion()
    }

    /// `r x n` map from ambient coordinates onto the torsion-free quotient.
    /// Its kernel over R is the real span of the relations.
    pub fn free_projection(&self) -> &IntMatrix {
        &self.0.free_projection
    }

    /// `n x r` lift of a basis of the torsion-free quotient;
    /// `free_projection * free_basis = I_r`.
    pub fn free_basis(&self) -> &IntMatrix {
        &self.0.free_basis
    }

    pub fn snf(&self) -> &Snf {
        &self.0.snf
    }

    /// Whether an ambient vector lies in the relation span (is zero in the group).
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        let y = self.0.snf.u.mul_vec(v);
        let diag = self.0.snf.diagonal();
        y.iter().enumerate().all(|(i, yi)| {
            if i < self.0.nonzero {
                yi.is_multiple_of(&diag[i])
            } else {
                yi.is_zero()
            }
        })
    }

    /// Whether two ambient vectors define the same element.
    pub fn equal_elements(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_element(&d)
    }

    /// Whether every column of `m` (ambient vectors) is zero in the group.
    pub fn kills_columns(&self, m: &IntMatrix) -> bool {
        assert_eq!(m.rows(), self.generators());
        (0..m.cols()).all(|j| self.is_zero_element(&m.column(j)))
    }

    /// Whether `a - b` has all columns zero in the group.
    pub fn maps_agree(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        self.kills_columns(&a.sub(b))
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in self.torsion() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} on {} generators)", self.describe(), self.generators())
    }
}

/// Homomorphism given on ambient generators; well-definedness is checked.
#[derive(Clone, Debug)]
pub struct GroupMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

pub struct Kernel {
    pub group: FgAbGroup,
    /// Ambient generators of `group` mapped into the source.
    pub inclusion: GroupMap,
}

impl GroupMap {
    pub fn new(source: &FgAbGroup, target: &FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, groups have {} -> {} generators",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        let image_of_relations = &matrix * source.relations();
        if !target.kills_columns(&image_of_relations) {
            return Err(Error::NotWellDefined);
        }
        Ok(GroupMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupMap { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generators()) }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &GroupMap) -> GroupMap {
        GroupMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        }
    }

    pub fn kernel(&self) -> Kernel {
        let n = self.source.generators();
        let b = self.target.relations();
        let stacked = self.matrix.hstack(&b.scale(&BigInt::from(-1)));
        let ker = integer_kernel(&stacked);
        let gens = ker.select_rows(0..n);
        let lattice = Lattice::from_generators(&gens);
        let a = self.source.relations();
        let rel_cols: Vec<Vec<BigInt>> = (0..a.cols())
            .map(|j| lattice.coords(&a.column(j)).expect("source relations lie in the kernel"))
            .collect();
        let rel = IntMatrix::from_columns(lattice.rank(), &rel_cols);
        let group = FgAbGroup::new(rel);
        let inclusion =
            GroupMap { source: group.clone(), target: self.source.clone(), matrix: lattice.basis().clone() };
        Kernel { group, inclusion }
    }

    pub fn cokernel(&self) -> FgAbGroup {
        FgAbGroup::new(self.target.relations().hstack(&self.matrix))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Surjective between groups with equal invariants; such a map is an
    /// isomorphism because finitely generated abelian groups are Hopfian.
    pub fn is_isomorphism(&self) -> bool {
        self.source.same_invariants(&self.target) && self.is_surjective()
    }

    /// Coordinates `c` with `matrix * c ≡ v` in the target, if `v` is in the image.
    pub fn lift(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.source.generators();
        let system = self.matrix.hstack(self.target.relations());
        solve_integer(&system, v).map(|x| x[..n].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariants_examples() {
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[6], [0]]));
        assert_eq!((g.rank(), g.torsion().to_vec()), (1, ints(&[6])));
        let g = FgAbGroup::free(3);
        assert_eq!((g.rank(), g.torsion().len()), (3, 0));
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!((g.rank(), g.torsion().to_vec()), (0, ints(&[6])));
        assert_eq!(g.describe(), "Z/6");
    }

    #[test]
    fn free_part_basis_projects_to_identity() {
        let g = FgAbGroup::new(IntMatrix::from_rows(&[[2, 4], [6, 8], [1, 1]]));
        let p = g.free_projection();
        let b = g.free_basis();
        assert_eq!(p * b, IntMatrix::identity(g.rank()));
        assert!((p * g.relations()).is_zero());
    }

    #[test]
    fn direct_sum_keeps_block_free_coordinates() {
        let a = FgAbGroup::from_invariants(1, &[6]);
        let b = FgAbGroup::new(IntMatrix::from_rows(&[[2], [4]]));
        let s = FgAbGroup::direct_sum(&[&a, &b]);
        assert_eq!(s.describe(), "Z^2 + Z/2 + Z/6");
        assert_eq!(s.free_projection() * s.free_basis(), IntMatrix::identity(2));
        assert!((s.free_projection() * s.relations()).is_zero());
        assert!(s.free_projection().select_cols(0..2).select_rows(1..2).is_zero());
    }

    #[test]
    fn kernel_and_cokernel_of_multiplication() {
        // x2 on Z/4 has kernel Z/2 and cokernel Z/2
        let z4 = FgAbGroup::cyclic(4);
        let f = GroupMap::new(&z4, &z4, IntMatrix::from_rows(&[[2]])).unwrap();
        let k = f.kernel();
        assert_eq!(k.group.describe(), "Z/2");
        assert_eq!(f.cokernel().describe(), "Z/2");
        assert!(!f.is_isomorphism());
        // x3 on Z/4 is an automorphism
        let g = GroupMap::new(&z4, &z4, IntMatrix::from_rows(&[[3]])).unwrap();
        assert!(g.is_isomorphism());
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let z4 = FgAbGroup::cyclic(4);
        let z3 = FgAbGroup::cyclic(3);
        assert_eq!(GroupMap::new(&z4, &z3, IntMatrix::from_rows(&[[1]])).unwrap_err(), Error::NotWellDefined);
    }
}
