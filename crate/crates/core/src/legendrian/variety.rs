//! The affine chart `x ↦ ẑ(x) = (1, x, ∇P(x), -P(x))` of `Z_P` in `V = Q^{2n+2}`,
//! its tangent frames and osculating flags.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cubic::CubicForm;
use super::LegendrianError;
use crate::exactla::rational::{frac, int, unit_vector};
use crate::exactla::{rank, Matrix, Rational, Subspace, Vector};
use crate::symplectic::SymplecticSpace;

/// Seed used when neither `--seed` nor `LEGPRO_SEED` is given.
pub const DEFAULT_SEED: u64 = 20190516;

/// The symplectic space of dimension `2n + 2` hosting `Z_P`.
pub fn ambient_space(p: &CubicForm) -> SymplecticSpace {
    SymplecticSpace::standard(p.n() + 1).expect("n >= 1")
}

pub fn zp_point(p: &CubicForm, x: &[Rational]) -> Vector {
    assert_eq!(x.len(), p.n(), "point has wrong length");
    let mut v = Vec::with_capacity(2 * p.n() + 2);
    v.push(int(1));
    v.extend_from_slice(x);
    v.extend(p.gradient(x));
    v.push(-p.eval(x));
    v
}

/// `ẑ(x)` followed by `∂_i ẑ(x) = (0, e_i, Hess P(x) e_i, -∂_i P(x))`.
pub fn zp_frame(p: &CubicForm, x: &[Rational]) -> Vec<Vector> {
    let n = p.n();
    let grad = p.gradient(x);
    let hess = p.hessian(x);
    let mut frame = vec![zp_point(p, x)];
    for i in 0..n {
        let mut d = vec![Rational::zero(); 2 * n + 2];
        d[1 + i] = int(1);
        for k in 0..n {
            d[n + 1 + k] = hess[(k, i)].clone();
        }
        d[2 * n + 1] = -grad[i].clone();
        frame.push(d);
    }
    frame
}

/// Tangent space of the affine cone at `ẑ(x)`.
pub fn zp_tangent(p: &CubicForm, x: &[Rational]) -> Result<Subspace, LegendrianError> {
    Subspace::new(2 * p.n() + 2, zp_frame(p, x)).ok_or(LegendrianError::NonImmersive)
}

/// A sampled point of the cone `Ẑ_P` with its tangent frame.
#[derive(Clone, Debug)]
pub struct LegendrianSample {
    pub x: Vector,
    pub point: Vector,
    pub tangent: Subspace,
}

pub fn sample_at(p: &CubicForm, x: &[Rational]) -> Result<LegendrianSample, LegendrianError> {
    Ok(LegendrianSample {
        x: x.to_vec(),
        point: zp_point(p, x),
        tangent: zp_tangent(p, x)?,
    })
}

/// Second derivatives `∂_i ∂_j ẑ = (0, 0, 6 T(e_i, e_j, ·), -∂_i∂_j P(x))`, `i <= j`.
fn second_derivatives(p: &CubicForm, x: &[Rational]) -> Vec<Vector> {
    let n = p.n();
    let hess = p.hessian(x);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut d = vec![Rational::zero(); 2 * n + 2];
            for k in 0..n {
                d[n + 1 + k] = p.entry(i, j, k) * int(6);
            }
            d[2 * n + 1] = -hess[(i, j)].clone();
            out.push(d);
        }
    }
    out
}

/// Third derivatives `∂_i ∂_j ∂_k ẑ = (0, 0, 0, -6 T_{ijk})`, `i <= j <= k`.
fn third_derivatives(p: &CubicForm) -> Vec<Vector> {
    let n = p.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let mut d = vec![Rational::zero(); 2 * n + 2];
                d[2 * n + 1] = -(p.entry(i, j, k) * int(6));
                out.push(d);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OsculatingFlag {
    pub dims: [usize; 3],
    /// `F₂` equals the σ-orthogonal of `ẑ(x)`.
    pub perp_check: bool,
    /// `F₃ = V`.
    pub span_check: bool,
}

/// `F₁ ⊂ F₂ ⊂ F₃` spanned by derivatives of `ẑ` up to orders 1, 2, 3.
/// Points where the dimensions are not `(n+1, 2n+1, 2n+2)` are rejected.
pub fn osculating_flag(p: &CubicForm, x: &[Rational]) -> Result<OsculatingFlag, LegendrianError> {
    let n = p.n();
    let dim_v = 2 * n + 2;
    let space = ambient_space(p);
    let z = zp_point(p, x);
    let f1 = zp_frame(p, x);
    let mut f2 = f1.clone();
    f2.extend(second_derivatives(p, x));
    let mut f3 = f2.clone();
    f3.extend(third_derivatives(p));
    let dims = [f1.as_slice(), f2.as_slice(), f3.as_slice()]
        .map(|vs| rank(&Matrix::from_columns(dim_v, vs)));
    if dims != [n + 1, 2 * n + 1, 2 * n + 2] {
        return Err(LegendrianError::NonGeneralPoint { dims });
    }
    // dim z^⊥σ = 2n+1 = dim F₂, so containment is equality.
    let perp_check = f2.iter().all(|u| space.form(&z, u).is_zero());
    Ok(OsculatingFlag {
        dims,
        perp_check,
        span_check: dims[2] == dim_v,
    })
}

/// Diagonal weights `0` on `a`, `1` on `x`, `2` on `y`, `3` on `b`.
pub fn grading_element(n: usize) -> Matrix {
    let mut w = vec![int(0)];
    w.extend(std::iter::repeat_n(int(1), n));
    w.extend(std::iter::repeat_n(int(2), n));
    w.push(int(3));
    Matrix::diagonal(&w)
}

/// The cone points `ẑ(x)` span `V`.
pub fn cone_spans(p: &CubicForm, xs: &[Vector]) -> bool {
    let dim_v = 2 * p.n() + 2;
    let points: Vec<Vector> = xs.iter().map(|x| zp_point(p, x)).collect();
    !points.is_empty() && rank(&Matrix::from_columns(dim_v, &points)) == dim_v
}

/// Deterministic generator of sample points in the affine chart.
#[derive(Clone, Debug)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    n: usize,
    radius: i64,
}

impl PointSampler {
    pub fn new(n: usize, seed: u64, radius: i64) -> Self {
        assert!(radius >= 1, "grid radius must be positive");
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            radius,
        }
    }

    /// Integer point with coordinates in `[-radius, radius]`.
    pub fn grid_point(&mut self) -> Vector {
        let r = self.radius;
        (0..self.n)
            .map(|_| int(self.rng.gen_range(-r..=r)))
            .collect()
    }

    /// Rational point `p/q` with `|p| <= radius`, `1 <= q <= radius`.
    pub fn rational_point(&mut self) -> Vector {
        let r = self.radius;
        (0..self.n)
            .map(|_| frac(self.rng.gen_range(-r..=r), self.rng.gen_range(1..=r)))
            .collect()
    }

    /// Nonzero rational scale factor for moving along the cone.
    pub fn scale(&mut self) -> Rational {
        let r = self.radius;
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-r..=r);
        }
        frac(p, self.rng.gen_range(1..=r))
    }
}

/// Basis vector helper for callers that need `e_a`, `e_x_i`, ...
pub fn coordinate_vector(p: &CubicForm, index: usize) -> Vector {
    unit_vector(2 * p.n() + 2, index)
}
