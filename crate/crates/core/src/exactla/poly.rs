use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::rational::{int, Rational};

/// Univariate polynomial over the rationals, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => Polynomial::new(self.coeffs.iter().map(|c| c / l).collect()),
        }
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / lead;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &f * c;
            }
            quot[shift] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, each simple.
    pub fn squarefree_part(&self) -> Polynomial {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            if !c.is_zero() {
                acc.add_scaled(c, &Matrix::identity(n));
            }
        }
        acc
    }

    pub fn one() -> Self {
        Polynomial::new(vec![Rational::one()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let f = p(&[2, -3, 0, 1]);
        let (q, r) = f.div_rem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[-2, 1, 1]));
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.squarefree_part(), p(&[-2, 1, 1]));
        assert!(!f.is_squarefree());
        assert!(p(&[-2, 1, 1]).is_squarefree());
    }

    #[test]
    fn eval_matrix_matches_scalar() {
        let f = p(&[1, 0, 3]);
        let m = Matrix::diagonal(&[int(2), int(-1)]);
        assert_eq!(
            f.eval_matrix(&m),
            Matrix::diagonal(&[f.eval(&int(2)), f.eval(&int(-1))])
        );
    }
}
