//! Minimal polynomials and the semisimple part of the Jordan–Chevalley decomposition.

use num_traits::Zero;

use super::elim::{inverse, kernel_basis};
use super::matrix::Matrix;
use super::poly::Polynomial;

/// Minimal polynomial, found as the first linear dependency among
/// `I, M, M^2, ...` (flattened).
pub fn minimal_polynomial(m: &Matrix) -> Polynomial {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let n = m.rows();
    let mut powers = vec![Matrix::identity(n).into_flat()];
    let mut current = Matrix::identity(n);
    for _ in 1..=n {
        current = current.mul(m);
        powers.push(current.as_slice().to_vec());
        let krylov = Matrix::from_columns(n * n, &powers);
        let kernel = kernel_basis(&krylov);
        if let Some(v) = kernel.basis().first() {
            return Polynomial::new(v.clone()).monic();
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

pub fn is_nilpotent(m: &Matrix) -> bool {
    m.pow(m.rows() as u32).is_zero()
}

pub fn is_semisimple(m: &Matrix) -> bool {
    minimal_polynomial(m).is_squarefree()
}

/// Newton iteration `S <- S - p(S) p'(S)^{-1}` with `p` the squarefree part of
/// the minimal polynomial. Converges in at most `ceil(log2 n) + 1` steps.
pub fn jordan_semisimple_part(m: &Matrix) -> Matrix {
    assert!(m.is_square(), "Jordan decomposition of a non-square matrix");
    let p = minimal_polynomial(m).squarefree_part();
    let dp = p.derivative();
    let mut s = m.clone();
    for _ in 0..=m.rows().max(1) {
        let ps = p.eval_matrix(&s);
        if ps.is_zero() {
            return s;
        }
        let inv =
            inverse(&dp.eval_matrix(&s)).expect("p'(S) is invertible because p is squarefree");
        s = s.sub(&ps.mul(&inv));
    }
    debug_assert!(p.eval_matrix(&s).as_slice().iter().all(Zero::is_zero));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::int;

    #[test]
    fn diagonal_is_its_own_semisimple_part() {
        let d = Matrix::diagonal(&[int(1), int(3), int(3), int(-2)]);
        assert_eq!(jordan_semisimple_part(&d), d);
    }

    #[test]
    fn nilpotent_has_zero_semisimple_part() {
        let n = Matrix::from_i64_rows(&[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]);
        assert!(jordan_semisimple_part(&n).is_zero());
    }

    #[test]
    fn distinct_eigenvalues_already_semisimple() {
        let m = Matrix::from_i64_rows(&[&[2, 1], &[0, 1]]);
        assert_eq!(minimal_polynomial(&m).degree(), Some(2));
        assert!(minimal_polynomial(&m).is_squarefree());
        assert_eq!(jordan_semisimple_part(&m), m);
    }

    #[test]
    fn jordan_block_splits() {
        // 2I + N with N a single nilpotent block, plus an eigenvalue 5 block.
        let m = Matrix::from_i64_rows(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 5]]);
        let s = jordan_semisimple_part(&m);
        assert_eq!(s, Matrix::diagonal(&[int(2), int(2), int(5)]));
        assert!(is_nilpotent(&m.sub(&s)));
    }

    #[test]
    fn irrational_eigenvalues_stay_rational() {
        // x^2 - 2 has no rational roots; add a nilpotent coupling.
        let a =
            Matrix::from_i64_rows(&[&[0, 2, 1, 0], &[1, 0, 0, 1], &[0, 0, 0, 2], &[0, 0, 1, 0]]);
        let s = jordan_semisimple_part(&a);
        assert!(is_semisimple(&s));
        assert!(is_nilpotent(&a.sub(&s)));
        assert_eq!(s.mul(&a), a.mul(&s));
    }
}
