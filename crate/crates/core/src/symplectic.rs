//! Standard symplectic spaces, the conformal symplectic algebra and the `Ā` map.
//!
//! Coordinates of `V` are ordered `(a, x_1..x_{m-1}, y_1..y_{m-1}, b)` and the
//! form is `σ(u,u') = a b' - b a' + Σ (x_i y'_i - y_i x'_i)`, so the weight
//! `(0,1,2,3)` grading of a cubic-form Legendrian is diagonal.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::rational::{frac, int};
use crate::exactla::{inverse, kernel_basis, Matrix, Rational, RowReducer, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("half-dimension m must be at least 1")]
    ZeroHalfDimension,
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("basis matrix {0} is linearly dependent on the previous ones")]
    DependentBasis(usize),
    #[error("basis matrix {0} is not conformal symplectic")]
    NotConformal(usize),
}

#[derive(Debug)]
struct SpaceInner {
    m: usize,
    gram: Matrix,
    /// `(gram^T)^{-1}`: maps `(σ(v, e_i))_i` back to `v`.
    dual: Matrix,
}

/// `(V, σ)` with `dim V = 2m`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct SymplecticSpace(Arc<SpaceInner>);

impl PartialEq for SymplecticSpace {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m
    }
}

impl Eq for SymplecticSpace {}

impl SymplecticSpace {
    pub fn standard(m: usize) -> Result<Self, SymplecticError> {
        if m == 0 {
            return Err(SymplecticError::ZeroHalfDimension);
        }
        let n = 2 * m;
        let mut gram = Matrix::zeros(n, n);
        gram[(0, n - 1)] = int(1);
        gram[(n - 1, 0)] = int(-1);
        for i in 1..m {
            gram[(i, i + m - 1)] = int(1);
            gram[(i + m - 1, i)] = int(-1);
        }
        let dual = inverse(&gram.transpose()).expect("standard gram is invertible");
        Ok(SymplecticSpace(Arc::new(SpaceInner { m, gram, dual })))
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn dim(&self) -> usize {
        2 * self.0.m
    }

    pub fn gram(&self) -> &Matrix {
        &self.0.gram
    }

    pub fn a_index(&self) -> usize {
        0
    }

    pub fn x_index(&self, i: usize) -> usize {
        1 + i
    }

    pub fn y_index(&self, i: usize) -> usize {
        self.0.m + i
    }

    pub fn b_index(&self) -> usize {
        self.dim() - 1
    }

    pub fn form(&self, u: &[Rational], v: &[Rational]) -> Rational {
        self.0.gram.bilinear(u, v)
    }

    /// The unique `v` with `σ(v, e_i) = values[i]` for every basis vector.
    pub fn dual_vector(&self, values: &[Rational]) -> Vector {
        self.0.dual.mul_vec(values)
    }

    /// Row vector `u ↦ σ(t, u)` for a fixed `t`.
    pub fn covector(&self, t: &[Rational]) -> Vector {
        self.0.gram.transpose().mul_vec(t)
    }

    pub fn is_isotropic(&self, vectors: &[Vector]) -> bool {
        vectors
            .iter()
            .enumerate()
            .all(|(i, u)| vectors[i + 1..].iter().all(|v| self.form(u, v).is_zero()))
    }

    fn check_shape(&self, mat: &Matrix) -> Result<(), SymplecticError> {
        let n = self.dim();
        if mat.rows() != n || mat.cols() != n {
            return Err(SymplecticError::Shape {
                expected: n,
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        Ok(())
    }
}

/// An element of `csp(V)` together with its conformal factor `(2/dim V)·tr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspElement {
    pub mat: Matrix,
    pub conformal_factor: Rational,
}

/// Returns the element iff `σ(a v, w) + σ(v, a w) = (2/dim V) tr(a) σ(v, w)`
/// on every pair of basis vectors.
pub fn csp_membership(space: &SymplecticSpace, mat: &Matrix) -> Option<CspElement> {
    space.check_shape(mat).ok()?;
    let factor = conformal_factor(space, mat);
    // a^T G + G a = c G is the basis-pair identity in matrix form.
    let lhs = mat
        .transpose()
        .mul(space.gram())
        .add(&space.gram().mul(mat));
    (lhs == space.gram().scale(&factor)).then(|| CspElement {
        mat: mat.clone(),
        conformal_factor: factor,
    })
}

pub fn conformal_factor(space: &SymplecticSpace, mat: &Matrix) -> Rational {
    frac(2, space.dim() as i64) * mat.trace()
}

/// Lie subalgebra of `gl(V)` given by a linearly independent basis.
#[derive(Clone, Debug)]
pub struct LieSubalgebra {
    space: SymplecticSpace,
    basis: Vec<Matrix>,
    closed: bool,
}

impl LieSubalgebra {
    /// Validates shapes and independence and computes the closure certificate.
    pub fn new(space: SymplecticSpace, basis: Vec<Matrix>) -> Result<Self, SymplecticError> {
        let mut red = RowReducer::new(space.dim() * space.dim());
        for (i, b) in basis.iter().enumerate() {
            space.check_shape(b)?;
            if !red.insert(b.as_slice()) {
                return Err(SymplecticError::DependentBasis(i));
            }
        }
        let closed = brackets_close(&red, &basis);
        Ok(LieSubalgebra {
            space,
            basis,
            closed,
        })
    }

    pub fn zero(space: SymplecticSpace) -> Self {
        LieSubalgebra {
            space,
            basis: Vec::new(),
            closed: true,
        }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every commutator of basis elements lies in the span.
    pub fn closed(&self) -> bool {
        self.closed
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.space.dim() * self.space.dim());
        for b in &self.basis {
            red.insert(b.as_slice());
        }
        red
    }

    pub fn contains(&self, mat: &Matrix) -> bool {
        mat.rows() == self.space.dim()
            && mat.cols() == self.space.dim()
            && self.reducer().contains(mat.as_slice())
    }

    /// Same span inside `gl(V)`.
    pub fn same_span(&self, other: &LieSubalgebra) -> bool {
        if self.space != other.space || self.dim() != other.dim() {
            return false;
        }
        let red = self.reducer();
        other.basis.iter().all(|b| red.contains(b.as_slice()))
    }

    /// Index of the first basis element outside `csp(V)`.
    pub fn first_non_conformal(&self) -> Option<usize> {
        self.basis
            .iter()
            .position(|b| csp_membership(&self.space, b).is_none())
    }

    pub fn report(&self) -> AlgebraReport {
        AlgebraReport {
            dim_v: self.space.dim(),
            basis: self.basis.clone(),
            closed: self.closed,
        }
    }
}

fn brackets_close(red: &RowReducer, basis: &[Matrix]) -> bool {
    basis.iter().enumerate().all(|(i, a)| {
        basis[i + 1..]
            .iter()
            .all(|b| red.contains(a.commutator(b).as_slice()))
    })
}

/// JSON form of a subalgebra: `{ "dim_V", "basis", "closed" }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraReport {
    #[serde(rename = "dim_V")]
    pub dim_v: usize,
    pub basis: Vec<Matrix>,
    pub closed: bool,
}

/// Basis of `csp(V)`, as the kernel of the linear system
/// `a^T G + G a - (2/dim V) tr(a) G = 0` in the row-major entries of `a`.
pub fn csp_basis(space: &SymplecticSpace) -> LieSubalgebra {
    let n = space.dim();
    let g = space.gram();
    let c = frac(2, n as i64);
    let mut constraints = Matrix::zeros(n * n, n * n);
    for p in 0..n {
        for q in 0..n {
            let row = p * n + q;
            // (a^T G)_{pq} = Σ_k a_{kp} G_{kq};  (G a)_{pq} = Σ_k G_{pk} a_{kq}
            for k in 0..n {
                constraints[(row, k * n + p)] += &g[(k, q)];
                constraints[(row, k * n + q)] += &g[(p, k)];
                constraints[(row, k * n + k)] -= &c * &g[(p, q)];
            }
        }
    }
    let basis: Vec<Matrix> = kernel_basis(&constraints)
        .into_basis()
        .into_iter()
        .map(|v| Matrix::from_flat(n, n, v))
        .collect();
    LieSubalgebra::new(space.clone(), basis).expect("kernel basis is independent")
}

/// `Ā` for `A` given on the basis (`maps[i] = A_{e_i}`): the unique vector with
/// `σ(Ā, e_i) = (2/dim V) tr(A_{e_i})`.
pub fn abar(space: &SymplecticSpace, maps: &[Matrix]) -> Vector {
    assert_eq!(maps.len(), space.dim(), "one matrix per basis vector");
    let traces: Vec<Rational> = maps.iter().map(|a| conformal_factor(space, a)).collect();
    space.dual_vector(&traces)
}
