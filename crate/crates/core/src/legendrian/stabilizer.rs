//! Infinitesimal stabilizers `{ a : a ẑ(x) ∈ T_{ẑ(x)} for all x }` by sampling.
//!
//! The tangent spaces are Lagrangian, so `u ∈ T` iff `σ(t, u) = 0` for every
//! frame vector `t`; each sample contributes `n + 1` linear conditions on the
//! coordinates of `a` in the ambient basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cubic::{cubic_nondegenerate, CubicForm};
use super::variety::{ambient_space, zp_frame, zp_point, PointSampler, DEFAULT_SEED};
use super::LegendrianError;
use crate::exactla::rational::dot;
use crate::exactla::{kernel_basis, Matrix, RowReducer, Vector};
use crate::symplectic::{csp_basis, LieSubalgebra, SymplecticSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Csp,
    Gl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub batch_size: usize,
    /// Consecutive batches that must leave the solution dimension unchanged.
    pub stable_batches: usize,
    pub max_batches: usize,
    pub grid_radius: i64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: DEFAULT_SEED,
            batch_size: 5,
            stable_batches: 3,
            max_batches: 60,
            grid_radius: 3,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub algebra: LieSubalgebra,
    pub ambient: Ambient,
    pub samples_used: usize,
    pub batches: usize,
}

pub fn ambient_basis(space: &SymplecticSpace, ambient: Ambient) -> Vec<Matrix> {
    match ambient {
        Ambient::Csp => csp_basis(space).basis().to_vec(),
        Ambient::Gl => {
            let n = space.dim();
            (0..n * n)
                .map(|k| {
                    let mut e = Matrix::zeros(n, n);
                    e[(k / n, k % n)] = num_traits::One::one();
                    e
                })
                .collect()
        }
    }
}

/// Conditions `σ(t_k, B_l ẑ(x)) = 0`, one row per frame vector `t_k`.
fn constraint_rows(
    p: &CubicForm,
    space: &SymplecticSpace,
    basis: &[Matrix],
    x: &[crate::exactla::Rational],
) -> Vec<Vector> {
    let z = zp_point(p, x);
    let images: Vec<Vector> = basis.iter().map(|b| b.mul_vec(&z)).collect();
    zp_frame(p, x)
        .iter()
        .map(|t| {
            let cov = space.covector(t);
            images.iter().map(|bz| dot(&cov, bz)).collect()
        })
        .collect()
}

fn sample_batch(sampler: &mut PointSampler, size: usize) -> Vec<Vector> {
    (0..size).map(|_| sampler.grid_point()).collect()
}

/// Adds a batch of constraints; returns whether the solution space shrank.
fn absorb(
    p: &CubicForm,
    space: &SymplecticSpace,
    basis: &[Matrix],
    reducer: &mut RowReducer,
    batch: &[Vector],
) -> bool {
    let rows: Vec<Vec<Vector>> = batch
        .par_iter()
        .map(|x| constraint_rows(p, space, basis, x))
        .collect();
    let before = reducer.rank();
    for r in rows.iter().flatten() {
        reducer.insert(r);
    }
    reducer.rank() > before
}

/// Samples until `stable_batches` consecutive batches leave the solution
/// dimension unchanged, then confirms with one more batch.
pub fn stabilizer_algebra(
    p: &CubicForm,
    ambient: Ambient,
    config: &SamplerConfig,
) -> Result<Stabilizer, LegendrianError> {
    if !cubic_nondegenerate(p) {
        return Err(LegendrianError::Degenerate);
    }
    let space = ambient_space(p);
    let basis = ambient_basis(&space, ambient);
    let mut sampler = PointSampler::new(p.n(), config.seed, config.grid_radius);
    let mut reducer = RowReducer::new(basis.len());
    let mut stable = 0;
    let mut batches = 0;
    loop {
        if batches >= config.max_batches {
            return Err(LegendrianError::Unstable { batches });
        }
        let batch = sample_batch(&mut sampler, config.batch_size);
        batches += 1;
        if absorb(p, &space, &basis, &mut reducer, &batch) {
            stable = 0;
            continue;
        }
        stable += 1;
        if stable >= config.stable_batches {
            let check = sample_batch(&mut sampler, config.batch_size);
            batches += 1;
            if !absorb(p, &space, &basis, &mut reducer, &check) {
                break;
            }
            stable = 0;
        }
    }
    let rows = reducer.rows();
    let constraints = if rows.is_empty() {
        Matrix::zeros(0, basis.len())
    } else {
        Matrix::from_rows(rows).expect("reducer rows share the ambient length")
    };
    let n = space.dim();
    let mats: Vec<Matrix> = kernel_basis(&constraints)
        .into_basis()
        .into_iter()
        .map(|c| {
            let mut m = Matrix::zeros(n, n);
            for (coef, b) in c.iter().zip(&basis) {
                m.add_scaled(coef, b);
            }
            m
        })
        .collect();
    let algebra =
        LieSubalgebra::new(space, mats).map_err(|_| LegendrianError::DependentStabilizer)?;
    if !algebra.closed() {
        return Err(LegendrianError::NotClosed);
    }
    Ok(Stabilizer {
        algebra,
        ambient,
        samples_used: batches * config.batch_size,
        batches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendrian::variety::grading_element;
    use crate::symplectic::csp_membership;

    fn x3() -> CubicForm {
        CubicForm::from_terms(1, &[(0, 0, 0, 1)]).unwrap()
    }

    #[test]
    fn twisted_cubic_stabilizer_is_gl2() {
        let cfg = SamplerConfig::default();
        let st = stabilizer_algebra(&x3(), Ambient::Csp, &cfg).unwrap();
        assert_eq!(st.algebra.dim(), 4);
        assert!(st.algebra.closed());
        assert!(st.algebra.contains(&grading_element(1)));
        assert!(st.algebra.contains(&Matrix::identity(4)));
        let gl = stabilizer_algebra(&x3(), Ambient::Gl, &cfg).unwrap();
        assert!(gl.algebra.same_span(&st.algebra));
        for b in gl.algebra.basis() {
            assert!(csp_membership(gl.algebra.space(), b).is_some());
        }
    }

    #[test]
    fn xyz_stabilizer_has_dimension_ten() {
        let p = CubicForm::from_terms(3, &[(0, 1, 2, 1)]).unwrap();
        let st = stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::default()).unwrap();
        assert_eq!(st.algebra.dim(), 10);
    }

    #[test]
    fn degenerate_form_rejected() {
        let p = CubicForm::from_terms(2, &[(0, 0, 0, 1)]).unwrap();
        assert_eq!(
            stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::default()).unwrap_err(),
            LegendrianError::Degenerate
        );
    }

    #[test]
    fn exhausted_batches_report_unstable() {
        let cfg = SamplerConfig {
            max_batches: 2,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            stabilizer_algebra(&x3(), Ambient::Gl, &cfg),
            Err(LegendrianError::Unstable { .. })
        ));
    }

    #[test]
    fn stabilizer_elements_keep_points_isotropic() {
        let p = CubicForm::from_terms(2, &[(0, 0, 0, 1), (1, 1, 1, 1)]).unwrap();
        let st = stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::default()).unwrap();
        let space = st.algebra.space().clone();
        let mut sampler = PointSampler::new(2, 99, 3);
        for _ in 0..5 {
            let z = zp_point(&p, &sampler.rational_point());
            for a in st.algebra.basis() {
                assert!(num_traits::Zero::is_zero(&space.form(&a.mul_vec(&z), &z)));
            }
        }
    }
}
