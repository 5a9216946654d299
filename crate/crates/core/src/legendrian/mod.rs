//! Legendrian varieties `Z_P` built from nondegenerate cubic forms.

pub mod cubic;
pub mod stabilizer;
pub mod variety;

use thiserror::Error;

pub use cubic::{cubic_nondegenerate, CubicError, CubicForm, Monomial};
pub use stabilizer::{stabilizer_algebra, Ambient, SamplerConfig, Stabilizer};
pub use variety::{
    ambient_space, cone_spans, grading_element, osculating_flag, sample_at, zp_frame, zp_point,
    zp_tangent, LegendrianSample, OsculatingFlag, PointSampler, DEFAULT_SEED,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LegendrianError {
    #[error("cubic form is degenerate: its Hessian map is not onto")]
    Degenerate,
    #[error("tangent frame is degenerate (non-immersive point)")]
    NonImmersive,
    #[error("non-general point: osculating flag dimensions {dims:?}")]
    NonGeneralPoint { dims: [usize; 3] },
    #[error("stabilizer did not stabilize within {batches} batches")]
    Unstable { batches: usize },
    #[error("sampled stabilizer basis is linearly dependent")]
    DependentStabilizer,
    #[error("sampled stabilizer is not closed under the bracket")]
    NotClosed,
}
