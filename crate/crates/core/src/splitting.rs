//! Fiberwise torsion normalization.
//!
//! Fix `W` complementary to `Im δ ⊂ Hom(∧²V, V)` once. A torsion `Π` moves by
//! `Π ↦ Π + δs` under a gauge shift `s ∈ Hom(V, g)`; its normal form is the
//! unique representative of `Π + Im δ` inside `W`. The shift is unique exactly
//! when `δ` is injective, i.e. when `g` has no nonzero contact prolongation.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactla::elim::pivot_columns;
use crate::exactla::rational::{serde_rational_vec, vec_add, vec_scale, vec_sub};
use crate::exactla::{extend_to_complement, inverse, Matrix, Rational, Subspace, Vector};
use crate::prolong::{
    check_algebra, delta, delta_matrix, pair_count, ProlongError, ProlongationElement,
    TorsionTensor,
};
use crate::symplectic::LieSubalgebra;

/// `s ∈ Hom(V, g)` in the coordinates of [`crate::prolong`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeShift {
    #[serde(with = "serde_rational_vec")]
    pub coords: Vector,
}

impl GaugeShift {
    pub fn zero(len: usize) -> Self {
        GaugeShift {
            coords: vec![Rational::zero(); len],
        }
    }

    pub fn add(&self, other: &GaugeShift) -> GaugeShift {
        GaugeShift {
            coords: vec_add(&self.coords, &other.coords),
        }
    }

    pub fn neg(&self) -> GaugeShift {
        GaugeShift {
            coords: vec_scale(&self.coords, &-Rational::from_integer(1.into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct NormalizationContext {
    g: LieSubalgebra,
    delta_matrix: Matrix,
    /// Pivot columns of the δ-matrix; their images form the basis of `Im δ`.
    image_columns: Vec<usize>,
    image: Subspace,
    complement: Subspace,
    /// Coordinates of `Hom(∧²V, V)` not covered by `W`'s unit vectors.
    image_rows: Vec<usize>,
    /// Inverse of the image basis restricted to `image_rows`.
    image_solver: Matrix,
    prolongation_dim: usize,
}

pub fn build_context(g: &LieSubalgebra) -> Result<NormalizationContext, ProlongError> {
    check_algebra(g)?;
    let dm = delta_matrix(g);
    let image_columns = pivot_columns(&dm);
    let target = pair_count(g.space().dim()) * g.space().dim();
    let image = Subspace::new(
        target,
        image_columns.iter().map(|&c| dm.column(c)).collect(),
    )
    .expect("pivot columns are independent");
    let complement = extend_to_complement(&image);
    let in_w: Vec<bool> = {
        let mut mask = vec![false; target];
        for w in complement.basis() {
            let k = w.iter().position(|x| !x.is_zero()).expect("unit vector");
            mask[k] = true;
        }
        mask
    };
    let image_rows: Vec<usize> = (0..target).filter(|&k| !in_w[k]).collect();
    let r = image.dim();
    let mut restricted = Matrix::zeros(r, r);
    for (a, &row) in image_rows.iter().enumerate() {
        for (b, v) in image.basis().iter().enumerate() {
            restricted[(a, b)] = v[row].clone();
        }
    }
    let image_solver = if r == 0 {
        Matrix::zeros(0, 0)
    } else {
        inverse(&restricted).expect("Im δ ⊕ W is the whole space")
    };
    let prolongation_dim = dm.cols() - r;
    Ok(NormalizationContext {
        g: g.clone(),
        delta_matrix: dm,
        image_columns,
        image,
        complement,
        image_rows,
        image_solver,
        prolongation_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub shift: GaugeShift,
    pub normalized: TorsionTensor,
    pub unique: bool,
    /// Dimension of the set of shifts achieving the normal form.
    pub coset_dim: usize,
}

impl NormalizationContext {
    pub fn algebra(&self) -> &LieSubalgebra {
        &self.g
    }

    pub fn delta_matrix(&self) -> &Matrix {
        &self.delta_matrix
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn prolongation_dim(&self) -> usize {
        self.prolongation_dim
    }

    pub fn shift_len(&self) -> usize {
        self.delta_matrix.cols()
    }

    pub fn torsion_dim(&self) -> usize {
        self.delta_matrix.rows()
    }

    /// `δs` through the assembled matrix.
    pub fn delta_of(&self, s: &GaugeShift) -> TorsionTensor {
        TorsionTensor::from_flat(self.g.space().dim(), &self.delta_matrix.mul_vec(&s.coords))
    }

    /// `Π + δs`.
    pub fn transform(&self, pi: &TorsionTensor, s: &GaugeShift) -> TorsionTensor {
        pi.add(&self.delta_of(s))
    }

    /// Splits `Π` along `Im δ ⊕ W`. The shift is supported on the pivot
    /// columns of the δ-matrix, which is the representative with every free
    /// coordinate zero.
    pub fn normalize(&self, pi: &TorsionTensor) -> Normalized {
        let flat = pi.to_flat();
        assert_eq!(
            flat.len(),
            self.torsion_dim(),
            "torsion has wrong dimension"
        );
        let restricted: Vector = self.image_rows.iter().map(|&k| flat[k].clone()).collect();
        let c = self.image_solver.mul_vec(&restricted);
        let mut image_part = vec![Rational::zero(); flat.len()];
        for (ck, v) in c.iter().zip(self.image.basis()) {
            crate::exactla::rational::vec_axpy(&mut image_part, ck, v);
        }
        let normalized = vec_sub(&flat, &image_part);
        let mut shift = GaugeShift::zero(self.shift_len());
        for (ck, &col) in c.iter().zip(&self.image_columns) {
            shift.coords[col] = -ck.clone();
        }
        Normalized {
            shift,
            normalized: TorsionTensor::from_flat(self.g.space().dim(), &normalized),
            unique: self.prolongation_dim == 0,
            coset_dim: self.prolongation_dim,
        }
    }

    pub fn in_complement(&self, pi: &TorsionTensor) -> bool {
        self.complement.contains(&pi.to_flat())
    }

    pub fn in_image(&self, pi: &TorsionTensor) -> bool {
        self.image.contains(&pi.to_flat())
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            unique: self.prolongation_dim == 0,
            coset_dim: self.prolongation_dim,
            image_dim: self.image.dim(),
            complement_dim: self.complement.dim(),
        }
    }
}

/// `Π + δs`, evaluating δ directly on the element `s` rather than through the
/// assembled matrix.
pub fn transform_torsion(g: &LieSubalgebra, pi: &TorsionTensor, s: &GaugeShift) -> TorsionTensor {
    pi.add(&delta(&ProlongationElement::from_coords(g, &s.coords)))
}

pub fn normalize_torsion(ctx: &NormalizationContext, pi: &TorsionTensor) -> Normalized {
    ctx.normalize(pi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSummary {
    pub unique: bool,
    pub coset_dim: usize,
    pub image_dim: usize,
    pub complement_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeReport {
    pub unique: bool,
    pub coset_dim: usize,
    #[serde(with = "serde_rational_vec")]
    pub s: Vector,
    /// `pi_norm` as pairs `i < j` with their values.
    pub pi_norm: Vec<TorsionPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionPair {
    pub ij: [usize; 2],
    #[serde(with = "serde_rational_vec")]
    pub value: Vector,
}

pub fn torsion_pairs(pi: &TorsionTensor) -> Vec<TorsionPair> {
    let n = pi.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(TorsionPair {
                ij: [i, j],
                value: pi.get(i, j),
            });
        }
    }
    out
}

impl Normalized {
    pub fn report(&self) -> NormalizeReport {
        NormalizeReport {
            unique: self.unique,
            coset_dim: self.coset_dim,
            s: self.shift.coords.clone(),
            pi_norm: torsion_pairs(&self.normalized),
        }
    }
}

/// A two-dimensional abelian subalgebra `span{Id, H}` with `H` a seeded random
/// element of `csp(V)`, resampled until δ has full column rank.
pub fn rigid_abelian_algebra(
    space: &crate::symplectic::SymplecticSpace,
    seed: u64,
) -> LieSubalgebra {
    use rand::{Rng, SeedableRng};
    let csp = crate::symplectic::csp_basis(space);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = space.dim();
    loop {
        let mut h = Matrix::zeros(n, n);
        for b in csp.basis() {
            h.add_scaled(&crate::exactla::rational::int(rng.gen_range(-3..=3)), b);
        }
        let Ok(g) = LieSubalgebra::new(space.clone(), vec![Matrix::identity(n), h]) else {
            continue;
        };
        if crate::exactla::rank(&delta_matrix(&g)) == 2 * n {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::int;
    use crate::symplectic::{csp_basis, SymplecticSpace};

    fn space(m: usize) -> SymplecticSpace {
        SymplecticSpace::standard(m).unwrap()
    }

    fn center(m: usize) -> LieSubalgebra {
        let s = space(m);
        LieSubalgebra::new(s.clone(), vec![Matrix::identity(s.dim())]).unwrap()
    }

    #[test]
    fn zero_algebra_context() {
        let ctx = build_context(&LieSubalgebra::zero(space(2))).unwrap();
        assert_eq!(ctx.image().dim(), 0);
        assert_eq!(ctx.complement().dim(), 24);
        assert_eq!(ctx.prolongation_dim(), 0);
        let pi = TorsionTensor::from_flat(4, &(0..24).map(int).collect::<Vec<_>>());
        let n = ctx.normalize(&pi);
        assert_eq!(n.normalized, pi);
        assert!(n.unique);
    }

    #[test]
    fn center_has_injective_delta() {
        for m in 1..=3 {
            let ctx = build_context(&center(m)).unwrap();
            assert_eq!(ctx.prolongation_dim(), 0, "m = {m}");
            assert_eq!(ctx.image().dim(), 2 * m);
        }
    }

    #[test]
    fn round_trip_recovers_negated_shift() {
        let g = center(2);
        let ctx = build_context(&g).unwrap();
        let s0 = GaugeShift {
            coords: vec![int(1), int(-2), int(3), int(5)],
        };
        let pi = ctx.delta_of(&s0);
        let n = ctx.normalize(&pi);
        assert!(n.normalized.is_zero());
        assert_eq!(n.shift, s0.neg());
    }

    #[test]
    fn both_transform_routes_agree() {
        let g = csp_basis(&space(1));
        let ctx = build_context(&g).unwrap();
        let s = GaugeShift {
            coords: (0..8).map(|k| int(k * k - 3)).collect(),
        };
        let pi = TorsionTensor::from_flat(2, &[int(1), int(-1)]);
        assert_eq!(ctx.transform(&pi, &s), transform_torsion(&g, &pi, &s));
    }

    #[test]
    fn rigid_algebra_is_closed_with_trivial_prolongation() {
        let g = rigid_abelian_algebra(&space(2), 3);
        assert!(g.closed());
        assert_eq!(g.dim(), 2);
        assert_eq!(build_context(&g).unwrap().prolongation_dim(), 0);
    }

    #[test]
    fn rank_nullity_for_csp() {
        let g = csp_basis(&space(2));
        let ctx = build_context(&g).unwrap();
        assert_eq!(ctx.image().dim() + ctx.prolongation_dim(), 4 * 11);
        assert_eq!(ctx.prolongation_dim(), 24);
        let n = ctx.normalize(&TorsionTensor::zero(4));
        assert!(!n.unique);
        assert_eq!(n.coset_dim, 24);
    }
}
