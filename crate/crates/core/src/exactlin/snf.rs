//! Smith normal form over Z with both transforms and their inverses.
//!
//! Pivoting is fixed: the entry of smallest absolute value in the active
//! block, ties broken by lowest row and then lowest column. Output is a pure
//! function of the input matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u * m * v == s`, with `u`, `v` unimodular and `s` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Diagonal of `s`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries (the rank over Q).
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.a.get(i, j)
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.entry(bi, bj).abs() <= e.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Smallest nonzero off-pivot entry in row t or column t.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let e = self.entry(i, j);
            if e.is_zero() {
                return;
            }
            match *best {
                Some((bi, bj)) if self.entry(bi, bj).abs() <= e.abs() => {}
                _ => *best = Some((i, j)),
            }
        };
        for i in t + 1..self.a.rows() {
            consider(i, t, &mut best);
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, &mut best);
        }
        best
    }

    fn bring_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
        if self.entry(t, t).is_negative() {
            self.negate_row(t);
        }
    }

    fn clear_cross(&mut self, t: usize) {
        loop {
            let p = self.entry(t, t).clone();
            for i in t + 1..self.a.rows() {
                let e = self.entry(i, t);
                if !e.is_zero() {
                    let q = e.div_floor(&p);
                    self.add_row(i, t, &-q);
                }
            }
            for j in t + 1..self.a.cols() {
                let e = self.entry(t, j);
                if !e.is_zero() {
                    let q = e.div_floor(&p);
                    self.add_col(j, t, &-q);
                }
            }
            match self.smallest_in_cross(t) {
                Some(pos) => self.bring_to_pivot(t, pos),
                None => return,
            }
        }
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = self.entry(t, t);
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.entry(i, j).is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some(pos) = w.smallest_in_block(t) else { break };
        w.bring_to_pivot(t, pos);
        loop {
            w.clear_cross(t);
            match w.first_non_multiple(t) {
                Some(i) => {
                    // pull the offending row into the pivot row and redo
                    w.add_row(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        t += 1;
    }
    Snf { u: w.u, u_inv: w.u_inv, s: w.a, v: w.v, v_inv: w.v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let snf = smith_normal_form(m);
        assert_eq!(&(&snf.u * m) * &snf.v, snf.s);
        assert_eq!(&snf.u * &snf.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&snf.v * &snf.v_inv, IntMatrix::identity(m.cols()));
        let d = snf.diagonal();
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        snf
    }

    #[test]
    fn two_by_two_example() {
        let snf = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let snf = check(&IntMatrix::identity(3));
        assert_eq!(snf.s, IntMatrix::identity(3));
        let snf = check(&IntMatrix::zeros(2, 3));
        assert!(snf.s.is_zero());
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let snf = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(3, 0));
        check(&IntMatrix::zeros(0, 2));
    }

    #[test]
    fn rectangular_with_negative_entries() {
        let m = IntMatrix::from_rows(&[[0, -6, 9, 3], [4, 0, -2, 8], [1, 1, 1, 1]]);
        check(&m);
    }
}
