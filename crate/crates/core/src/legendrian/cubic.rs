use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::rational::{format_rational, int, serde_rational};
use crate::exactla::{rank, Matrix, Rational, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("a cubic form needs at least one variable")]
    NoVariables,
    #[error("monomials[{index}].ijk: indices {ijk:?} must satisfy i <= j <= k")]
    IndexOrder { index: usize, ijk: [usize; 3] },
    #[error("monomials[{index}].ijk: index out of range for n = {n}")]
    IndexRange { index: usize, n: usize },
}

/// Coefficient of `x_i x_j x_k` with `i <= j <= k`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Monomial {
    pub ijk: [usize; 3],
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

/// Cubic form `P(x) = T(x, x, x)` stored as its full symmetric trilinear tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    n: usize,
    tensor: Vec<Rational>,
}

fn permutation_count([i, j, k]: [usize; 3]) -> i64 {
    if i == j && j == k {
        1
    } else if i == j || j == k || i == k {
        3
    } else {
        6
    }
}

fn permutations([i, j, k]: [usize; 3]) -> [[usize; 3]; 6] {
    [
        [i, j, k],
        [i, k, j],
        [j, i, k],
        [j, k, i],
        [k, i, j],
        [k, j, i],
    ]
}

impl CubicForm {
    /// Repeated monomials are summed.
    pub fn from_monomials(n: usize, monomials: &[Monomial]) -> Result<Self, CubicError> {
        if n == 0 {
            return Err(CubicError::NoVariables);
        }
        let mut tensor = vec![Rational::zero(); n * n * n];
        for (index, m) in monomials.iter().enumerate() {
            let [i, j, k] = m.ijk;
            if !(i <= j && j <= k) {
                return Err(CubicError::IndexOrder { index, ijk: m.ijk });
            }
            if k >= n {
                return Err(CubicError::IndexRange { index, n });
            }
            let share = &m.coeff / int(permutation_count(m.ijk));
            let mut seen = Vec::with_capacity(6);
            for p in permutations(m.ijk) {
                if !seen.contains(&p) {
                    seen.push(p);
                    tensor[(p[0] * n + p[1]) * n + p[2]] += &share;
                }
            }
        }
        Ok(CubicForm { n, tensor })
    }

    /// Shorthand for tests and fixtures: `(i, j, k, coeff)`.
    pub fn from_terms(n: usize, terms: &[(usize, usize, usize, i64)]) -> Result<Self, CubicError> {
        let monomials: Vec<Monomial> = terms
            .iter()
            .map(|&(i, j, k, c)| Monomial {
                ijk: [i, j, k],
                coeff: int(c),
            })
            .collect();
        CubicForm::from_monomials(n, &monomials)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.tensor[(i * self.n + j) * self.n + k]
    }

    /// Monomial coefficients, `i <= j <= k`, zero terms omitted.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                for k in j..self.n {
                    let c = self.entry(i, j, k) * int(permutation_count([i, j, k]));
                    if !c.is_zero() {
                        out.push(Monomial {
                            ijk: [i, j, k],
                            coeff: c,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn trilinear(&self, u: &[Rational], v: &[Rational], w: &[Rational]) -> Rational {
        let n = self.n;
        let mut acc = Rational::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    let t = self.entry(i, j, k);
                    if !t.is_zero() && !w[k].is_zero() {
                        acc += t * &u[i] * &v[j] * &w[k];
                    }
                }
            }
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.trilinear(x, x, x)
    }

    /// `∂_i P(x) = 3 T(e_i, x, x)`.
    pub fn gradient(&self, x: &[Rational]) -> Vector {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..n {
                    for k in 0..n {
                        let t = self.entry(i, j, k);
                        if !t.is_zero() {
                            acc += t * &x[j] * &x[k];
                        }
                    }
                }
                acc * int(3)
            })
            .collect()
    }

    /// `∂_i ∂_j P(x) = 6 T(e_i, e_j, x)`.
    pub fn hessian(&self, x: &[Rational]) -> Matrix {
        let n = self.n;
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    let t = self.entry(i, j, k);
                    if !t.is_zero() {
                        acc += t * &x[k];
                    }
                }
                h[(i, j)] = acc * int(6);
            }
        }
        h
    }

    /// Matrix of `Sym²W → W^∨`, `e_i ⊙ e_j ↦ T(e_i, e_j, ·)`, one row per `i <= j`.
    pub fn hessian_map(&self) -> Matrix {
        let n = self.n;
        let rows: Vec<Vector> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| (0..n).map(|k| self.entry(i, j, k).clone()).collect())
            .collect();
        Matrix::from_rows(rows).expect("rows have length n")
    }

    /// Human-readable polynomial, variables `x0, x1, ...`.
    pub fn display(&self) -> String {
        let terms: Vec<String> = self
            .monomials()
            .iter()
            .map(|m| {
                let mut powers = [0usize; 3];
                let mut vars: Vec<usize> = Vec::new();
                for &v in &m.ijk {
                    if let Some(p) = vars.iter().position(|&u| u == v) {
                        powers[p] += 1;
                    } else {
                        powers[vars.len()] = 1;
                        vars.push(v);
                    }
                }
                let body: Vec<String> = vars
                    .iter()
                    .zip(powers)
                    .map(|(v, p)| {
                        if p == 1 {
                            format!("x{v}")
                        } else {
                            format!("x{v}^{p}")
                        }
                    })
                    .collect();
                let c = format_rational(&m.coeff);
                match c.as_str() {
                    "1" => body.join("*"),
                    "-1" => format!("-{}", body.join("*")),
                    _ => format!("{c}*{}", body.join("*")),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        }
    }
}

/// The Hessian map `Sym²W → W^∨` is onto.
pub fn cubic_nondegenerate(p: &CubicForm) -> bool {
    rank(&p.hessian_map()) == p.n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::frac;

    #[test]
    fn nondegeneracy_examples() {
        assert!(cubic_nondegenerate(
            &CubicForm::from_terms(1, &[(0, 0, 0, 1)]).unwrap()
        ));
        assert!(cubic_nondegenerate(
            &CubicForm::from_terms(3, &[(0, 1, 2, 1)]).unwrap()
        ));
        assert!(!cubic_nondegenerate(
            &CubicForm::from_terms(2, &[(0, 0, 0, 1)]).unwrap()
        ));
    }

    #[test]
    fn monomial_conversion_divides_by_permutations() {
        let p = CubicForm::from_terms(3, &[(0, 1, 2, 1)]).unwrap();
        assert_eq!(p.entry(2, 0, 1), &frac(1, 6));
        let q = CubicForm::from_terms(2, &[(0, 0, 1, 3)]).unwrap();
        assert_eq!(q.entry(1, 0, 0), &int(1));
        assert_eq!(
            q.monomials(),
            vec![Monomial {
                ijk: [0, 0, 1],
                coeff: int(3)
            }]
        );
    }

    #[test]
    fn derivatives_of_xyz() {
        let p = CubicForm::from_terms(3, &[(0, 1, 2, 1)]).unwrap();
        let x = vec![int(2), int(3), int(5)];
        assert_eq!(p.eval(&x), int(30));
        assert_eq!(p.gradient(&x), vec![int(15), int(10), int(6)]);
        let h = p.hessian(&x);
        assert_eq!(h[(0, 1)], int(5));
        assert_eq!(h[(0, 0)], int(0));
    }

    #[test]
    fn index_errors_name_the_monomial() {
        assert_eq!(
            CubicForm::from_terms(2, &[(0, 0, 0, 1), (1, 0, 0, 1)]).unwrap_err(),
            CubicError::IndexOrder {
                index: 1,
                ijk: [1, 0, 0]
            }
        );
        assert_eq!(
            CubicForm::from_terms(2, &[(0, 0, 2, 1)]).unwrap_err(),
            CubicError::IndexRange { index: 0, n: 2 }
        );
        assert_eq!(
            CubicForm::from_terms(0, &[]).unwrap_err(),
            CubicError::NoVariables
        );
    }

    #[test]
    fn display_is_readable() {
        let p = CubicForm::from_terms(2, &[(0, 0, 0, 1), (0, 1, 1, -2)]).unwrap();
        assert_eq!(p.display(), "x0^3 - 2*x0*x1^2");
    }
}
