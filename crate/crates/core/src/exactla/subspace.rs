use num_traits::{One, Zero};

use super::elim;
use super::matrix::Matrix;
use super::rational::{is_zero_vector, unit_vector, Rational, Vector};

/// Incrementally maintained reduced row echelon basis, used for rank-increase
/// tests and span membership.
#[derive(Clone, Debug)]
pub struct RowReducer {
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl RowReducer {
    pub fn new(dim: usize) -> Self {
        RowReducer {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Stored rows, in insertion order; together they are in reduced form.
    pub fn rows(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Residual of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.dim, "vector has wrong length");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` if it increases the rank; reports whether it did.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[p].clone();
        if !lead.is_one() {
            for x in r.iter_mut() {
                *x /= &lead;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[p].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// A linear subspace of `Q^n` given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| unit_vector(ambient_dim, i))
                .collect(),
        }
    }

    /// Caller guarantees independence; checked in debug builds.
    pub(crate) fn from_independent(ambient_dim: usize, basis: Vec<Vector>) -> Self {
        let s = Subspace { ambient_dim, basis };
        debug_assert!(s.basis.iter().all(|v| v.len() == ambient_dim));
        debug_assert_eq!(elim::rank(&s.to_matrix()), s.basis.len());
        s
    }

    /// Returns `None` if the vectors are dependent or have the wrong length.
    pub fn new(ambient_dim: usize, basis: Vec<Vector>) -> Option<Self> {
        if basis.iter().any(|v| v.len() != ambient_dim) {
            return None;
        }
        let mut red = RowReducer::new(ambient_dim);
        if basis.iter().all(|v| red.insert(v)) {
            Some(Subspace { ambient_dim, basis })
        } else {
            None
        }
    }

    /// Span of arbitrary vectors; keeps, in order, those that increase the rank.
    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Self {
        let mut red = RowReducer::new(ambient_dim);
        let basis = vectors.iter().filter(|v| red.insert(v)).cloned().collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector> {
        self.basis
    }

    /// Basis vectors as matrix columns.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.ambient_dim);
        for v in &self.basis {
            red.insert(v);
        }
        red
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reducer().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let red = self.reducer();
        other.basis.iter().all(|v| red.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let all: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.ambient_dim, &all)
    }
}

/// Complement of `s` spanned by standard unit vectors, chosen greedily in
/// index order: `e_i` is kept exactly when it increases the rank.
pub fn extend_to_complement(s: &Subspace) -> Subspace {
    let n = s.ambient_dim();
    let mut red = s.reducer();
    let basis = (0..n)
        .map(|i| unit_vector(n, i))
        .filter(|e| red.insert(e))
        .collect();
    Subspace {
        ambient_dim: n,
        basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::int;

    #[test]
    fn complement_of_whole_space_is_empty() {
        assert_eq!(extend_to_complement(&Subspace::whole(4)).dim(), 0);
    }

    #[test]
    fn complement_of_first_axis() {
        let s = Subspace::new(3, vec![unit_vector(3, 0)]).unwrap();
        let w = extend_to_complement(&s);
        assert_eq!(w.basis(), &[unit_vector(3, 1), unit_vector(3, 2)]);
    }

    #[test]
    fn complement_of_diagonal_line() {
        let s = Subspace::new(2, vec![vec![int(1), int(1)]]).unwrap();
        let w = extend_to_complement(&s);
        assert_eq!(w.basis(), &[unit_vector(2, 0)]);
    }

    #[test]
    fn dependent_basis_rejected() {
        let v = vec![int(1), int(2)];
        assert!(Subspace::new(2, vec![v.clone(), v]).is_none());
        assert!(Subspace::new(3, vec![vec![int(1)]]).is_none());
    }

    #[test]
    fn span_drops_redundant_vectors() {
        let vs = vec![
            vec![int(1), int(0), int(1)],
            vec![int(2), int(0), int(2)],
            vec![int(0), int(1), int(0)],
        ];
        let s = Subspace::span(3, &vs);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[int(3), int(-1), int(3)]));
        assert!(!s.contains(&[int(0), int(0), int(1)]));
    }
}
