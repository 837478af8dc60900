//! Smith normal form by gcd-driven row and column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal.
///
/// `u_inv` is `U⁻¹`, tracked alongside `U` so callers can map canonical
/// coordinates back to the original generators without a second inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | … | d_k`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Diagonal entry `i`, zero past the rank.
    pub fn diagonal(&self, i: usize) -> BigInt {
        self.invariant_factors.get(i).cloned().unwrap_or_else(BigInt::zero)
    }
}

struct Reducer {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    /// row[target] += f · row[source]
    fn add_row(&mut self, target: usize, source: usize, f: &BigInt) {
        self.d.add_row_multiple(target, source, f);
        self.u.add_row_multiple(target, source, f);
        // (E U)^-1 = U^-1 E^-1, and E^-1 subtracts the same multiple.
        self.u_inv.add_col_multiple(source, target, &-f);
    }

    /// col[target] += f · col[source]
    fn add_col(&mut self, target: usize, source: usize, f: &BigInt) {
        self.d.add_col_multiple(target, source, f);
        self.v.add_col_multiple(target, source, f);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the nonzero entry of least absolute value in the trailing
    /// block starting at `(t, t)`; ties resolve to the first in row-major order.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    best = Some(((i, j), a));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Smallest nonzero entry in row `t` and column `t` past the pivot.
    fn min_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        let mut consider = |p: (usize, usize), x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some((p, a));
            }
        };
        consider((t, t), &self.d[(t, t)]);
        for i in t + 1..self.d.rows() {
            consider((i, t), &self.d[(i, t)]);
        }
        for j in t + 1..self.d.cols() {
            consider((t, j), &self.d[(t, j)]);
        }
        best.map(|(p, _)| p)
    }

    fn clear_cross(&mut self, t: usize) -> bool {
        let pivot = self.d[(t, t)].clone();
        let mut clean = true;
        for i in t + 1..self.d.rows() {
            let q = self.d[(i, t)].div_floor(&pivot);
            if !q.is_zero() {
                self.add_row(i, t, &-q);
            }
            if !self.d[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.d.cols() {
            let q = self.d[(t, j)].div_floor(&pivot);
            if !q.is_zero() {
                self.add_col(j, t, &-q);
            }
            if !self.d[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let pivot = &self.d[(t, t)];
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                if !self.d[(i, j)].is_multiple_of(pivot) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Computes the Smith normal form of `a`. Deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = Reducer {
        d: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut invariant_factors = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = r.min_entry(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            if !r.clear_cross(t) {
                // a remainder smaller than the pivot survived; promote it
                let (i, j) = r.min_in_cross(t).expect("pivot is nonzero");
                r.swap_rows(t, i);
                r.swap_cols(t, j);
                continue;
            }
            match r.non_divisible(t) {
                Some(i) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.d[(t, t)].is_negative() {
            r.negate_row(t);
        }
        invariant_factors.push(r.d[(t, t)].clone());
    }
    SmithForm { u: r.u, u_inv: r.u_inv, d: r.d, v: r.v, invariant_factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn identity_has_unit_factors() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.invariant_factors, vec![BigInt::one(); 3]);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the chain is 2 | 4
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix_has_no_factors() {
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.d.is_zero());
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn divisibility_repair_kicks_in() {
        // diag(2, 3) is diagonal but not in normal form: 2 ∤ 3
        let s = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.invariant_factors, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_shapes() {
        let s = check(&IntMatrix::from_rows(&[vec![0, 2, 0]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2)]);
        let s = check(&IntMatrix::from_rows(&[vec![4], vec![6], vec![10]]));
        assert_eq!(s.invariant_factors, vec![BigInt::from(2)]);
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
    }
}
