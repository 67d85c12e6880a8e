//! Hom groups between presented abelian groups, optionally cut down by
//! commutation constraints (used for module homomorphisms).

use num_bigint::BigInt;
use num_traits::Zero;

use super::{integer_kernel, FgAbGroup, IntMatrix, Lattice};
use crate::error::{Error, Result};

/// Condition `F·right − left·F ≡ 0` (columnwise in the target relation span)
/// on a candidate map `F: source -> target`. Without `left` the condition is
/// `F·right ≡ 0`.
#[derive(Clone, Debug)]
pub struct HomConstraint {
    right: IntMatrix,
    left: Option<IntMatrix>,
}

impl HomConstraint {
    pub fn annihilates(right: IntMatrix) -> Self {
        HomConstraint { right, left: None }
    }

    /// `F ∘ source_endo = target_endo ∘ F`
    pub fn commutes(source_endo: IntMatrix, target_endo: IntMatrix) -> Self {
        HomConstraint { right: source_endo, left: Some(target_endo) }
    }
}

/// `Hom(g, h)` (possibly constrained) as a presented group whose ambient
/// generators are a lattice basis of valid representing matrices.
#[derive(Clone, Debug)]
pub struct HomGroup {
    group: FgAbGroup,
    lattice: Lattice,
    source_gens: usize,
    target_gens: usize,
}

impl HomGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn source_generators(&self) -> usize {
        self.source_gens
    }

    pub fn target_generators(&self) -> usize {
        self.target_gens
    }

    /// Representing matrix of an element given by ambient coordinates.
    pub fn map_from_coords(&self, c: &[BigInt]) -> IntMatrix {
        let v = self.lattice.basis().mul_vec(c);
        IntMatrix::from_vec(self.target_gens, self.source_gens, v)
    }

    /// Representing matrix of the `k`-th ambient generator.
    pub fn map(&self, k: usize) -> IntMatrix {
        let v = self.lattice.basis().column(k);
        IntMatrix::from_vec(self.target_gens, self.source_gens, v)
    }

    pub fn maps(&self) -> Vec<IntMatrix> {
        (0..self.group.generators()).map(|k| self.map(k)).collect()
    }

    /// Ambient coordinates of a representing matrix, if it is a valid map.
    pub fn coords_of(&self, f: &IntMatrix) -> Option<Vec<BigInt>> {
        if f.rows() != self.target_gens || f.cols() != self.source_gens {
            return None;
        }
        self.lattice.coords(f.entries())
    }

    /// Maps representing the free-part basis of the group.
    pub fn free_part_maps(&self) -> Vec<IntMatrix> {
        let fb = self.group.free_basis();
        (0..fb.cols()).map(|j| self.map_from_coords(&fb.column(j))).collect()
    }

    /// Matrix on ambient generators of an endomorphism given on representing
    /// matrices (for example `F ↦ F∘φ`).
    pub fn induced_endomorphism(&self, f: impl Fn(&IntMatrix) -> IntMatrix) -> Result<IntMatrix> {
        let cols: Result<Vec<Vec<BigInt>>> = (0..self.group.generators())
            .map(|k| {
                let image = f(&self.map(k));
                self.coords_of(&image).ok_or(Error::NotWellDefined)
            })
            .collect();
        Ok(IntMatrix::from_columns(self.group.generators(), &cols?))
    }
}

pub fn hom_group(g: &FgAbGroup, h: &FgAbGroup) -> HomGroup {
    constrained_hom(g, h, &[])
}

/// `{F : F·rel(g) ≡ 0 and every extra constraint holds}` modulo maps into
/// the relations of `h`.
pub fn constrained_hom(g: &FgAbGroup, h: &FgAbGroup, extra: &[HomConstraint]) -> HomGroup {
    let n = g.generators();
    let p = h.generators();
    let b = h.relations();
    let mb = b.cols();

    let mut constraints: Vec<&HomConstraint> = Vec::new();
    let base = HomConstraint::annihilates(g.relations().clone());
    if g.relations().cols() > 0 {
        constraints.push(&base);
    }
    constraints.extend(extra.iter());

    let f_vars = p * n;
    let total_rows: usize = constraints.iter().map(|c| p * c.right.cols()).sum();
    let total_cols: usize = f_vars + constraints.iter().map(|c| mb * c.right.cols()).sum::<usize>();
    let mut system = IntMatrix::zeros(total_rows, total_cols);

    let mut row0 = 0;
    let mut x0 = f_vars;
    for c in &constraints {
        let cc = c.right.cols();
        assert_eq!(c.right.rows(), n, "constraint right factor must act on source generators");
        for i in 0..p {
            for col in 0..cc {
                let row = row0 + i * cc + col;
                for j in 0..n {
                    let r = c.right.get(j, col);
                    if !r.is_zero() {
                        *system.get_mut(row, i * n + j) += r;
                    }
                }
                if let Some(left) = &c.left {
                    assert_eq!(cc, n);
                    for l in 0..p {
                        let v = left.get(i, l);
                        if !v.is_zero() {
                            *system.get_mut(row, l * n + col) -= v;
                        }
                    }
                }
                for s in 0..mb {
                    let v = b.get(i, s);
                    if !v.is_zero() {
                        *system.get_mut(row, x0 + s * cc + col) -= v;
                    }
                }
            }
        }
        row0 += p * cc;
        x0 += mb * cc;
    }

    let lattice = if constraints.is_empty() {
        Lattice::from_generators(&IntMatrix::identity(f_vars))
    } else {
        let ker = integer_kernel(&system);
        Lattice::from_generators(&ker.select_rows(0..f_vars))
    };

    // maps with image in the relations of h are zero
    let mut rel_cols = Vec::with_capacity(mb * n);
    for s in 0..mb {
        for c in 0..n {
            let mut v = vec![BigInt::zero(); f_vars];
            for i in 0..p {
                v[i * n + c] = b.get(i, s).clone();
            }
            let coords = lattice.coords(&v).expect("maps into relations satisfy every constraint");
            rel_cols.push(coords);
        }
    }
    let group = FgAbGroup::new(IntMatrix::from_columns(lattice.rank(), &rel_cols));
    HomGroup { group, lattice, source_gens: n, target_gens: p }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_examples() {
        let z = FgAbGroup::free(1);
        let z4 = FgAbGroup::cyclic(4);
        let z6 = FgAbGroup::cyclic(6);
        assert_eq!(hom_group(&z, &z4).group().describe(), "Z/4");
        assert_eq!(hom_group(&z6, &z4).group().describe(), "Z/2");
        assert_eq!(hom_group(&FgAbGroup::free(2), &z).group().describe(), "Z^2");
        assert_eq!(hom_group(&z4, &z).group().describe(), "0");
    }

    #[test]
    fn representing_maps_are_homomorphisms() {
        let g = FgAbGroup::from_invariants(1, &[6]);
        let h = FgAbGroup::from_invariants(1, &[4]);
        let hom = hom_group(&g, &h);
        // Hom(Z+Z/6, Z+Z/4) = Z + Z/4 + 0 + Z/2
        assert_eq!(hom.group().describe(), "Z + Z/2 + Z/4");
        for f in hom.maps() {
            assert!(h.kills_columns(&(&f * g.relations())));
        }
    }
}
