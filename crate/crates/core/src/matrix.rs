//! Dense integer matrices and their Smith normal form.
//!
//! Elimination first runs on `i64` with checked arithmetic and restarts on
//! arbitrary-precision integers if an entry overflows. Pivots are chosen as
//! the entry of smallest absolute value, ties broken by `(row, column)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r][c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    /// `self * other`, `None` on overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (l, &a) in self.data[i].iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[l][j];
                    if b != 0 {
                        out.data[i][j] = out.data[i][j].checked_add(a.checked_mul(b)?)?;
                    }
                }
            }
        }
        Some(out)
    }

    /// Nonzero diagonal entries of the Smith normal form, each dividing the
    /// next, all positive.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        if let Some(d) = diagonalize(self.data.clone(), self.rows, self.cols) {
            return d.into_iter().map(BigInt::from).collect();
        }
        let big: Vec<Vec<BigInt>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        diagonalize(big, self.rows, self.cols).expect("big integers do not overflow")
    }

    pub fn rank(&self) -> usize {
        self.smith_invariants().len()
    }
}

trait Ring: Clone {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    /// Quotient truncated toward zero.
    fn quot(&self, d: &Self) -> Option<Self>;
    fn divides(&self, n: &Self) -> bool;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn add(&self, b: &Self) -> Option<Self>;
    fn abs(&self) -> Option<Self>;
}

impl Ring for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn divides(&self, n: &Self) -> bool {
        n.checked_rem(*self).is_none_or(|r| r == 0)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        self.checked_add(*b)
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
}

impl Ring for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude() == &num_bigint::BigUint::from(1u8)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn divides(&self, n: &Self) -> bool {
        Zero::is_zero(&n.mod_floor(self))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn add(&self, b: &Self) -> Option<Self> {
        Some(self + b)
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
}

fn smallest<T: Ring>(m: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.cmp_abs(&m[bi][bj]) == Ordering::Less) {
                best = Some((i, j));
                if x.is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

fn diagonalize<T: Ring>(mut m: Vec<Vec<T>>, rows: usize, cols: usize) -> Option<Vec<T>> {
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest(&m, t) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut leftover = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].quot(&m[t][t])?;
                let (head, tail) = m.split_at_mut(i);
                let pivot_row = &head[t];
                for j in t..cols {
                    if !pivot_row[j].is_zero() {
                        tail[0][j] = tail[0][j].sub_mul(&q, &pivot_row[j])?;
                    }
                }
                leftover |= !m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].quot(&m[t][t])?;
                for row in m.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        row[j] = row[j].sub_mul(&q, &row[t])?;
                    }
                }
                leftover |= !m[t][j].is_zero();
            }
            if leftover {
                // a remainder smaller than the pivot is left in row or column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !m[i][t].is_zero() && m[i][t].cmp_abs(&m[best.0][best.1]) == Ordering::Less {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !m[t][j].is_zero() && m[t][j].cmp_abs(&m[best.0][best.1]) == Ordering::Less {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                } else if best.1 != t {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            if m[t][t].is_unit() {
                break;
            }
            let pivot = m[t][t].clone();
            let bad = (t + 1..rows).find(|&i| m[i][t + 1..].iter().any(|x| !pivot.divides(x)));
            match bad {
                Some(i) => {
                    let (head, tail) = m.split_at_mut(i);
                    for j in t..cols {
                        head[t][j] = head[t][j].add(&tail[0][j])?;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs()?);
    }
    Some(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix {
            rows: rows.len(),
            cols: rows.first().map_or(0, |r| r.len()),
            data: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    fn inv(m: &IntMatrix) -> Vec<i64> {
        m.smith_invariants()
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_is_normalized_to_divisibility_chain() {
        assert_eq!(inv(&mat(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(inv(&mat(&[&[4, 0], &[0, 6]])), vec![2, 12]);
    }

    #[test]
    fn rank_deficient() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(inv(&m), vec![1, 1]);
    }

    #[test]
    fn torsion_of_two() {
        // boundary of the Möbius-type relation a + a
        assert_eq!(inv(&mat(&[&[2]])), vec![2]);
        assert_eq!(inv(&mat(&[&[-2, 4], &[6, 0]])), vec![2, 12]);
    }

    #[test]
    fn empty_and_zero() {
        assert!(IntMatrix::zeros(0, 3).smith_invariants().is_empty());
        assert!(IntMatrix::zeros(2, 2).smith_invariants().is_empty());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let m = mat(&[&[i64::MIN]]);
        assert_eq!(m.smith_invariants(), vec![BigInt::from(1u64 << 63)]);
    }

    #[test]
    fn large_entries() {
        let big = i64::MAX / 2 + 1;
        let m = mat(&[&[big, big - 1], &[big - 1, big]]);
        let d = m.smith_invariants();
        // det = big^2 - (big-1)^2 = 2*big - 1, gcd of entries 1
        assert_eq!(d[0], BigInt::from(1));
        assert_eq!(d[1], BigInt::from(2 * (big as i128) - 1));
    }

    #[test]
    fn checked_mul_detects_overflow() {
        let a = mat(&[&[i64::MAX, 1]]);
        let b = mat(&[&[2], &[0]]);
        assert!(a.checked_mul(&b).is_none());
    }
}
