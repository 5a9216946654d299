//! Fraction-free (Bareiss) elimination and the rank / kernel / solve routines built on it.
//!
//! Rows are first scaled to integers, then eliminated with exact integer
//! division by the previous pivot. Pivots are the first nonzero entry in
//! column order, so every result depends only on the input matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::matrix::Matrix;
use super::rational::{Rational, Vector};
use super::subspace::Subspace;

/// Row counts times column counts above this are eliminated with rayon.
const PARALLEL_THRESHOLD: usize = 4096;

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    /// Nonzero rows of the RREF, one per pivot.
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis: one vector per free column, that column set to 1.
    pub fn kernel_vectors(&self) -> Vec<Vector> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Bareiss forward elimination. Returns the echelon integer rows (pivot rows
/// first) and the pivot columns.
fn bareiss(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    let parallel = nrows * cols > PARALLEL_THRESHOLD;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        pivots.push(c);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        let update = |row: &mut Vec<BigInt>| {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                row[j] = num / &prev;
            }
        };
        if parallel {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        prev = pivot.clone();
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Fraction-free elimination followed by rational back substitution.
pub fn rref(m: &Matrix) -> Echelon {
    let int_rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let (int_rows, pivots) = bareiss(int_rows, m.cols());
    let mut rows: Vec<Vector> = int_rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let lead = row[p].clone();
            row.into_iter()
                .map(|x| Rational::new(x, lead.clone()))
                .collect()
        })
        .collect();
    for k in (0..rows.len()).rev() {
        let p = pivots[k];
        let (above, rest) = rows.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for j in p..m.cols() {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    Echelon {
        cols: m.cols(),
        rows,
        pivots,
    }
}

/// Pivot columns of the matrix, in increasing order.
pub fn pivot_columns(m: &Matrix) -> Vec<usize> {
    let int_rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    bareiss(int_rows, m.cols()).1
}

pub fn rank(m: &Matrix) -> usize {
    pivot_columns(m).len()
}

pub fn kernel_basis(m: &Matrix) -> Subspace {
    Subspace::from_independent(m.cols(), rref(m).kernel_vectors())
}

/// Solves `m x = b`. The particular solution sets every free variable to zero;
/// `None` means the system is inconsistent.
pub fn solve_affine(m: &Matrix, b: &[Rational]) -> (Option<Vector>, Subspace) {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let mut aug = Matrix::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols())] = b[i].clone();
    }
    let ech = rref(&aug);
    let n = m.cols();
    let consistent = ech.pivots.last() != Some(&n);
    let coeff = Echelon {
        cols: n,
        rows: ech
            .rows
            .iter()
            .zip(&ech.pivots)
            .filter(|(_, &p)| p < n)
            .map(|(r, _)| r[..n].to_vec())
            .collect(),
        pivots: ech.pivots.iter().copied().filter(|&p| p < n).collect(),
    };
    let kernel = Subspace::from_independent(n, coeff.kernel_vectors());
    if !consistent {
        return (None, kernel);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[n].clone();
    }
    (Some(x), kernel)
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let ech = rref(&aug);
    if ech.rank() < n || ech.pivots[n - 1] != n - 1 {
        return None;
    }
    let rows: Vec<Vector> = ech.rows.iter().map(|r| r[n..].to_vec()).collect();
    Matrix::from_rows(rows)
}
