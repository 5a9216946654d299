//! Exact computation of contact prolongations of subalgebras of `csp(V)`,
//! cubic-form Legendrian varieties and their stabilizers, and fiberwise
//! torsion normalization.

pub mod cli;
pub mod exactla;
pub mod formats;
pub mod legendrian;
pub mod prolong;
pub mod splitting;
pub mod symplectic;
pub mod verifier;
