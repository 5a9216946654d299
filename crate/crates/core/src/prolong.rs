//! Contact prolongations: the operator δ, prolongation spaces, and the point
//! identities and Euler witness that a prolongation of a Legendrian stabilizer
//! must satisfy.
//!
//! `Hom(V, g)` is coordinatized by pairs (basis vector `e_i`, basis element
//! `B_l` of `g`) with flat index `l * dim V + i`. `Hom(∧²V, V)` uses pairs
//! `i < j` in lexicographic order, each followed by its `dim V` output
//! coordinates.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::jordan::{is_nilpotent, is_semisimple};
use crate::exactla::rational::{
    format_rational, int, is_zero_vector, serde_rational_opt, serde_rational_vec, unit_vector,
    vec_add, vec_axpy, vec_scale, vec_sub, zero_vector,
};
use crate::exactla::{
    jordan_semisimple_part, kernel_basis, rank, solve_affine, Matrix, Rational, Subspace, Vector,
};
use crate::symplectic::{abar, csp_membership, LieSubalgebra, SymplecticSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProlongError {
    #[error("basis element {0} of g is not in csp(V)")]
    NotInCsp(usize),
    #[error("g is not closed under the bracket")]
    NotClosed,
    #[error("point is not contained in the supplied tangent space")]
    PointNotInTangent,
    #[error(transparent)]
    Identity(#[from] IdentityViolation),
    #[error("σ(Ā, v) = 0: choose a point off the hyperplane σ(Ā, ·) = 0")]
    BadHyperplane,
    #[error("δ returned a nonzero value on a computed kernel vector")]
    KernelCheckFailed,
}

/// Which of the two point identities failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointIdentity {
    /// `A_v(v) = 2σ(Ā,v) v`
    Eigenvector,
    /// `A_v(w) = σ(Ā,v) w + σ(Ā,w) v`
    TangentAction,
}

impl fmt::Display for PointIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointIdentity::Eigenvector => write!(f, "A_v(v) = 2σ(Ā,v)v"),
            PointIdentity::TangentAction => write!(f, "A_v(w) = σ(Ā,v)w + σ(Ā,w)v"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("identity {identity} fails at point [{}] with residual [{}]", fmt_vec(.point), fmt_vec(.residual))]
pub struct IdentityViolation {
    pub identity: PointIdentity,
    pub point: Vector,
    /// Index of the tangent basis vector `w` for the tangent identity.
    pub tangent_index: Option<usize>,
    pub residual: Vector,
}

fn fmt_vec(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

/// `A ∈ Hom(V, g)` stored by its values `A_{e_i}` on the basis, plus `Ā`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongationElement {
    space: SymplecticSpace,
    maps: Vec<Matrix>,
    abar: Vector,
}

impl ProlongationElement {
    pub fn from_maps(space: &SymplecticSpace, maps: Vec<Matrix>) -> Self {
        let abar = abar(space, &maps);
        ProlongationElement {
            space: space.clone(),
            maps,
            abar,
        }
    }

    pub fn zero(space: &SymplecticSpace) -> Self {
        let n = space.dim();
        ProlongationElement::from_maps(space, vec![Matrix::zeros(n, n); n])
    }

    /// Element with coordinates `coords[l * dim V + i]` on `(e_i, B_l)`.
    pub fn from_coords(g: &LieSubalgebra, coords: &[Rational]) -> Self {
        let space = g.space();
        let n = space.dim();
        assert_eq!(
            coords.len(),
            n * g.dim(),
            "coordinate vector has wrong length"
        );
        let mut maps = vec![Matrix::zeros(n, n); n];
        for (l, b) in g.basis().iter().enumerate() {
            for (i, m) in maps.iter_mut().enumerate() {
                m.add_scaled(&coords[l * n + i], b);
            }
        }
        ProlongationElement::from_maps(space, maps)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn abar(&self) -> &Vector {
        &self.abar
    }

    pub fn abar_is_zero(&self) -> bool {
        is_zero_vector(&self.abar)
    }

    /// `A_v = Σ v_i A_{e_i}`.
    pub fn map_at(&self, v: &[Rational]) -> Matrix {
        let n = self.space.dim();
        let mut out = Matrix::zeros(n, n);
        for (c, m) in v.iter().zip(&self.maps) {
            out.add_scaled(c, m);
        }
        out
    }

    pub fn lies_in(&self, g: &LieSubalgebra) -> bool {
        self.maps.iter().all(|m| g.contains(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.add(b))
            .collect();
        ProlongationElement::from_maps(&self.space, maps)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let maps = self.maps.iter().map(|a| a.scale(c)).collect();
        ProlongationElement::from_maps(&self.space, maps)
    }

    pub fn report(&self) -> ProlongationElementReport {
        ProlongationElementReport {
            maps: self.maps.clone(),
            abar: self.abar.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProlongationElementReport {
    pub maps: Vec<Matrix>,
    #[serde(with = "serde_rational_vec")]
    pub abar: Vector,
}

/// Number of pairs `i < j` below `n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n, "pair ({i}, {j}) out of range for dim {n}");
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Element of `Hom(∧²V, V)`, stored on pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTensor {
    dim: usize,
    values: Vec<Vector>,
}

impl TorsionTensor {
    pub fn zero(dim: usize) -> Self {
        TorsionTensor {
            dim,
            values: vec![zero_vector(dim); pair_count(dim)],
        }
    }

    pub fn from_flat(dim: usize, flat: &[Rational]) -> Self {
        assert_eq!(
            flat.len(),
            pair_count(dim) * dim,
            "flat torsion has wrong length"
        );
        TorsionTensor {
            dim,
            values: flat.chunks(dim.max(1)).map(<[Rational]>::to_vec).collect(),
        }
    }

    pub fn to_flat(&self) -> Vector {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value on `(e_i, e_j)`, using antisymmetry for `i > j`.
    pub fn get(&self, i: usize, j: usize) -> Vector {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.values[pair_index(self.dim, i, j)].clone(),
            std::cmp::Ordering::Greater => {
                vec_scale(&self.values[pair_index(self.dim, j, i)], &int(-1))
            }
            std::cmp::Ordering::Equal => zero_vector(self.dim),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Vector) {
        assert_eq!(value.len(), self.dim, "torsion value has wrong length");
        let k = pair_index(self.dim, i, j);
        self.values[k] = value;
    }

    pub fn add(&self, other: &TorsionTensor) -> TorsionTensor {
        assert_eq!(self.dim, other.dim);
        TorsionTensor {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| vec_add(a, b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vector(v))
    }
}

/// `δA(e_i, e_j) = A_{e_i}(e_j) - A_{e_j}(e_i) - σ(e_i, e_j) Ā`.
pub fn delta(a: &ProlongationElement) -> TorsionTensor {
    let space = a.space();
    let n = space.dim();
    let mut out = TorsionTensor::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec_sub(&a.maps[i].column(j), &a.maps[j].column(i));
            let s = space.gram()[(i, j)].clone();
            vec_axpy(&mut v, &-s, &a.abar);
            out.set(i, j, v);
        }
    }
    out
}

/// Matrix of δ in the fixed coordinates: `pair_count(n) * n` rows,
/// `n * dim g` columns.
pub fn delta_matrix(g: &LieSubalgebra) -> Matrix {
    let space = g.space();
    let n = space.dim();
    let columns: Vec<Vector> = (0..n * g.dim())
        .into_par_iter()
        .map(|col| {
            let (l, i) = (col / n, col % n);
            let mut maps = vec![Matrix::zeros(n, n); n];
            maps[i] = g.basis()[l].clone();
            delta(&ProlongationElement::from_maps(space, maps)).to_flat()
        })
        .collect();
    Matrix::from_columns(pair_count(n) * n, &columns)
}

/// Checks the preconditions shared by every prolongation computation.
pub fn check_algebra(g: &LieSubalgebra) -> Result<(), ProlongError> {
    if let Some(i) = g.first_non_conformal() {
        return Err(ProlongError::NotInCsp(i));
    }
    if !g.closed() {
        return Err(ProlongError::NotClosed);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ProlongationSpace {
    /// `dim Hom(V, g)`.
    pub dim_hom: usize,
    pub rank_delta: usize,
    /// Kernel basis in `Hom(V, g)` coordinates.
    pub coords: Vec<Vector>,
    pub basis: Vec<ProlongationElement>,
}

impl ProlongationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn report(&self) -> ProlongationReport {
        ProlongationReport {
            dim_hom: self.dim_hom,
            rank_delta: self.rank_delta,
            prolongation_dim: self.dim(),
            basis: self.basis.iter().map(ProlongationElement::report).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProlongationReport {
    pub dim_hom: usize,
    pub rank_delta: usize,
    pub prolongation_dim: usize,
    pub basis: Vec<ProlongationElementReport>,
}

/// Basis of `{ A ∈ Hom(V, g) : δA = 0 }`; every element is re-checked.
pub fn prolongation_space(g: &LieSubalgebra) -> Result<ProlongationSpace, ProlongError> {
    check_algebra(g)?;
    let dm = delta_matrix(g);
    let kernel = kernel_basis(&dm);
    let rank_delta = rank(&dm);
    let coords = kernel.into_basis();
    let basis: Vec<ProlongationElement> = coords
        .iter()
        .map(|c| ProlongationElement::from_coords(g, c))
        .collect();
    if basis.iter().any(|a| !delta(a).is_zero()) {
        return Err(ProlongError::KernelCheckFailed);
    }
    debug_assert_eq!(rank_delta + basis.len(), dm.cols());
    Ok(ProlongationSpace {
        dim_hom: dm.cols(),
        rank_delta,
        coords,
        basis,
    })
}

/// `A^w_u(v) = σ(w,u) v + σ(w,v) u + σ(u,v) w`, a prolongation of `csp(V)`
/// with `Ā = 2w`.
pub fn sp_plus_family(space: &SymplecticSpace, w: &[Rational]) -> ProlongationElement {
    let n = space.dim();
    assert_eq!(w.len(), n, "w has wrong length");
    let maps = (0..n)
        .map(|i| {
            let u = unit_vector(n, i);
            let mut m = Matrix::identity(n).scale(&space.form(w, &u));
            for k in 0..n {
                let ek = unit_vector(n, k);
                // column k is the image of e_k
                let col = vec_add(
                    &vec_scale(&u, &space.form(w, &ek)),
                    &vec_scale(w, &space.form(&u, &ek)),
                );
                for r in 0..n {
                    m[(r, k)] += &col[r];
                }
            }
            m
        })
        .collect();
    ProlongationElement::from_maps(space, maps)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointIdentityReport {
    #[serde(with = "serde_rational_vec")]
    pub point: Vector,
    #[serde(with = "crate::exactla::rational::serde_rational")]
    pub sigma_abar_v: Rational,
    pub tangent_vectors_checked: usize,
}

/// Checks `A_v(v) = 2σ(Ā,v) v` and `A_v(w) = σ(Ā,v) w + σ(Ā,w) v` for each
/// tangent basis vector `w`. The caller supplies a cone point and its tangent.
pub fn check_point_identities(
    a: &ProlongationElement,
    v: &[Rational],
    tangent: &Subspace,
) -> Result<PointIdentityReport, ProlongError> {
    let space = a.space();
    if !tangent.contains(v) {
        return Err(ProlongError::PointNotInTangent);
    }
    let av = a.map_at(v);
    let s_v = space.form(&a.abar, v);
    let lhs = av.mul_vec(v);
    let residual = vec_sub(&lhs, &vec_scale(v, &(int(2) * &s_v)));
    if !is_zero_vector(&residual) {
        return Err(IdentityViolation {
            identity: PointIdentity::Eigenvector,
            point: v.to_vec(),
            tangent_index: None,
            residual,
        }
        .into());
    }
    for (k, w) in tangent.basis().iter().enumerate() {
        let s_w = space.form(&a.abar, w);
        let expected = vec_add(&vec_scale(w, &s_v), &vec_scale(v, &s_w));
        let residual = vec_sub(&av.mul_vec(w), &expected);
        if !is_zero_vector(&residual) {
            return Err(IdentityViolation {
                identity: PointIdentity::TangentAction,
                point: v.to_vec(),
                tangent_index: Some(k),
                residual,
            }
            .into());
        }
    }
    Ok(PointIdentityReport {
        point: v.to_vec(),
        sigma_abar_v: s_v,
        tangent_vectors_checked: tangent.dim(),
    })
}

/// Semisimple part `S_v` of `A_v` at a point rescaled to `σ(Ā, v) = 1`, with
/// the checks that make `exp(t S_v)` an Euler symmetry at `[v]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EulerWitness {
    pub semisimple: Matrix,
    #[serde(with = "serde_rational_vec")]
    pub point: Vector,
    /// `λ` with `S_v v = λ v`, if `v` is an eigenvector.
    #[serde(with = "serde_rational_opt")]
    pub point_weight: Option<Rational>,
    /// `μ` with `S_v w ≡ μ w mod v` on the tangent space, if the induced map is scalar.
    #[serde(with = "serde_rational_opt")]
    pub quotient_weight: Option<Rational>,
    pub preserves_tangent: bool,
    pub semisimple_ok: bool,
    pub nilpotent_remainder: bool,
    pub commutes: bool,
}

impl EulerWitness {
    /// `S_v v = 2v`, tangent preserved, identity on tangent/line, and a valid
    /// Jordan–Chevalley split.
    pub fn passed(&self) -> bool {
        self.point_weight == Some(int(2))
            && self.quotient_weight == Some(Rational::one())
            && self.preserves_tangent
            && self.semisimple_ok
            && self.nilpotent_remainder
            && self.commutes
    }
}

pub fn euler_symmetry_witness(
    a: &ProlongationElement,
    v: &[Rational],
    tangent: &Subspace,
) -> Result<EulerWitness, ProlongError> {
    let space = a.space();
    if !tangent.contains(v) {
        return Err(ProlongError::PointNotInTangent);
    }
    let s = space.form(&a.abar, v);
    if s.is_zero() {
        return Err(ProlongError::BadHyperplane);
    }
    let v: Vector = v.iter().map(|x| x / &s).collect();
    let av = a.map_at(&v);
    let sv = jordan_semisimple_part(&av);

    let point_weight = eigenvalue_on(&sv, &v);

    // Basis of the tangent space starting with v.
    let mut frame = vec![v.clone()];
    for w in tangent.basis() {
        let mut candidate = frame.clone();
        candidate.push(w.clone());
        if Subspace::new(space.dim(), candidate).is_some() {
            frame.push(w.clone());
        }
    }
    let frame_matrix = Matrix::from_columns(space.dim(), &frame);
    let mut preserves_tangent = true;
    let mut images = Vec::with_capacity(frame.len());
    for w in &frame {
        match solve_affine(&frame_matrix, &sv.mul_vec(w)).0 {
            Some(c) => images.push(c),
            None => {
                preserves_tangent = false;
                break;
            }
        }
    }
    let quotient_weight = if preserves_tangent {
        scalar_quotient_block(&images)
    } else {
        None
    };

    Ok(EulerWitness {
        point_weight,
        quotient_weight,
        preserves_tangent,
        semisimple_ok: is_semisimple(&sv),
        nilpotent_remainder: is_nilpotent(&av.sub(&sv)),
        commutes: sv.mul(&av) == av.mul(&sv),
        semisimple: sv,
        point: v,
    })
}

fn eigenvalue_on(m: &Matrix, v: &[Rational]) -> Option<Rational> {
    let mv = m.mul_vec(v);
    let k = v.iter().position(|x| !x.is_zero())?;
    let lambda = &mv[k] / &v[k];
    is_zero_vector(&vec_sub(&mv, &vec_scale(v, &lambda))).then_some(lambda)
}

/// `images[k]` holds the coordinates of `S b_k` in the frame `b_0 = v, b_1, ...`;
/// returns `μ` if the block on `b_1..` modulo `b_0` is `μ I`.
fn scalar_quotient_block(images: &[Vector]) -> Option<Rational> {
    let rest = &images[1..];
    let mu = rest.first().map(|c| c[1].clone())?;
    let scalar = rest.iter().enumerate().all(|(k, c)| {
        c.iter()
            .enumerate()
            .skip(1)
            .all(|(j, x)| if j == k + 1 { *x == mu } else { x.is_zero() })
    });
    scalar.then_some(mu)
}

/// Verifies an element is a contact prolongation lying in `g`.
pub fn is_prolongation_of(a: &ProlongationElement, g: &LieSubalgebra) -> bool {
    csp_ok(a) && a.lies_in(g) && delta(a).is_zero()
}

fn csp_ok(a: &ProlongationElement) -> bool {
    a.maps.iter().all(|m| csp_membership(&a.space, m).is_some())
}
