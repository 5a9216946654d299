//! End-to-end scenarios: cubic form → Legendrian checks → stabilizers →
//! prolongation → point identities → Euler witness → normalization context.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::rational::{serde_rational_opt, serde_rational_vec, vec_scale};
use crate::exactla::{Rational, Vector};
use crate::legendrian::{
    ambient_space, cone_spans, cubic_nondegenerate, osculating_flag, stabilizer_algebra, zp_frame,
    zp_point, zp_tangent, Ambient, CubicForm, LegendrianError, Monomial, PointSampler,
    SamplerConfig,
};
use crate::prolong::{
    check_point_identities, euler_symmetry_witness, prolongation_space, ProlongError,
};
use crate::splitting::{build_context, ContextSummary};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("stage {stage}: {source}")]
    Legendrian {
        stage: &'static str,
        #[source]
        source: LegendrianError,
    },
    #[error("stage {stage}: {source}")]
    Prolong {
        stage: &'static str,
        #[source]
        source: ProlongError,
    },
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub sampler: SamplerConfig,
    pub isotropy_points: usize,
    pub flag_points: usize,
    pub identity_points: usize,
    pub span_points: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            sampler: SamplerConfig::default(),
            isotropy_points: 20,
            flag_points: 10,
            identity_points: 10,
            span_points: 40,
        }
    }
}

impl ScenarioConfig {
    pub fn with_seed(seed: u64) -> Self {
        ScenarioConfig {
            sampler: SamplerConfig::with_seed(seed),
            ..Self::default()
        }
    }

    fn sampler(&self, n: usize, stream: u64) -> PointSampler {
        PointSampler::new(
            n,
            self.sampler
                .seed
                .wrapping_mul(0x9E37_79B9)
                .wrapping_add(stream),
            self.sampler.grid_radius,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CubicDigest {
    pub n: usize,
    pub display: String,
    pub monomials: Vec<Monomial>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LegendrianChecks {
    pub isotropy_points: usize,
    pub isotropy_ok: bool,
    pub flag_points: usize,
    pub flag_dims: [usize; 3],
    pub flags_ok: bool,
    pub cone_spans: bool,
}

impl LegendrianChecks {
    pub fn passed(&self) -> bool {
        self.isotropy_ok && self.flags_ok && self.cone_spans
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub element: usize,
    #[serde(with = "serde_rational_vec")]
    pub point: Vector,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EulerSummary {
    pub elements_tested: usize,
    pub points_tested: usize,
    pub succeeded: bool,
    /// Common eigenvalue of `S_v` on `v`, when all witnesses agree.
    #[serde(with = "serde_rational_opt")]
    pub point_weight: Option<Rational>,
    /// Common scalar of `S_v` on tangent/line, when all witnesses agree.
    #[serde(with = "serde_rational_opt")]
    pub quotient_weight: Option<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScenarioReport {
    pub seed: u64,
    pub cubic: CubicDigest,
    pub nondegenerate: bool,
    pub legendrian_checks: Option<LegendrianChecks>,
    pub stabilizer_dim: usize,
    pub stabilizer_gl_dim: usize,
    pub gl_equals_csp: bool,
    pub stabilizer_samples: usize,
    pub prolongation_dim: usize,
    /// Per prolongation basis element: `Ā ≠ 0`.
    pub abar_nonzero: Vec<bool>,
    pub identity_checks: Vec<IdentityCheck>,
    pub euler_witness: Option<EulerSummary>,
    pub normalization: Option<ContextSummary>,
    pub anomalies: Vec<String>,
}

pub fn run_scenario(p: &CubicForm, config: &ScenarioConfig) -> Result<ScenarioReport, VerifyError> {
    let mut report = ScenarioReport {
        seed: config.sampler.seed,
        cubic: CubicDigest {
            n: p.n(),
            display: p.display(),
            monomials: p.monomials(),
        },
        nondegenerate: cubic_nondegenerate(p),
        legendrian_checks: None,
        stabilizer_dim: 0,
        stabilizer_gl_dim: 0,
        gl_equals_csp: false,
        stabilizer_samples: 0,
        prolongation_dim: 0,
        abar_nonzero: Vec::new(),
        identity_checks: Vec::new(),
        euler_witness: None,
        normalization: None,
        anomalies: Vec::new(),
    };
    if !report.nondegenerate {
        return Ok(report);
    }
    let n = p.n();
    let space = ambient_space(p);

    report.legendrian_checks =
        Some(
            legendrian_checks(p, config).map_err(|source| VerifyError::Legendrian {
                stage: "legendrian",
                source,
            })?,
        );

    let stab_err = |source| VerifyError::Legendrian {
        stage: "stabilizer",
        source,
    };
    let csp = stabilizer_algebra(p, Ambient::Csp, &config.sampler).map_err(stab_err)?;
    let gl = stabilizer_algebra(p, Ambient::Gl, &config.sampler).map_err(stab_err)?;
    report.stabilizer_dim = csp.algebra.dim();
    report.stabilizer_gl_dim = gl.algebra.dim();
    report.gl_equals_csp = csp.algebra.same_span(&gl.algebra);
    report.stabilizer_samples = csp.samples_used + gl.samples_used;
    let g = csp.algebra;

    let prolongation = prolongation_space(&g).map_err(|source| VerifyError::Prolong {
        stage: "prolongation",
        source,
    })?;
    report.prolongation_dim = prolongation.dim();
    report.abar_nonzero = prolongation
        .basis
        .iter()
        .map(|a| !a.abar_is_zero())
        .collect();

    let mut sampler = config.sampler(n, 3);
    let points: Vec<(Vector, crate::exactla::Subspace)> = (0..config.identity_points)
        .map(|_| {
            let x = sampler.rational_point();
            let t = sampler.scale();
            let v = vec_scale(&zp_point(p, &x), &t);
            let tangent = zp_tangent(p, &x).map_err(stab_err)?;
            Ok((v, tangent))
        })
        .collect::<Result<_, VerifyError>>()?;

    for (k, a) in prolongation.basis.iter().enumerate() {
        for (v, tangent) in &points {
            let check = match check_point_identities(a, v, tangent) {
                Ok(_) => IdentityCheck {
                    element: k,
                    point: v.clone(),
                    passed: true,
                    failure: None,
                },
                Err(e) => IdentityCheck {
                    element: k,
                    point: v.clone(),
                    passed: false,
                    failure: Some(e.to_string()),
                },
            };
            report.identity_checks.push(check);
        }
    }

    let with_abar: Vec<_> = prolongation
        .basis
        .iter()
        .filter(|a| !a.abar_is_zero())
        .collect();
    if report.prolongation_dim > 0 && with_abar.is_empty() {
        report
            .anomalies
            .push("nonzero prolongation with Ā = 0 for every basis element".to_string());
    }
    if !with_abar.is_empty() {
        let mut summary = EulerSummary {
            elements_tested: with_abar.len(),
            points_tested: 0,
            succeeded: true,
            point_weight: None,
            quotient_weight: None,
        };
        let mut weights: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
        for a in &with_abar {
            for (v, tangent) in &points {
                if space.form(a.abar(), v).is_zero() {
                    continue;
                }
                match euler_symmetry_witness(a, v, tangent) {
                    Ok(w) => {
                        summary.points_tested += 1;
                        summary.succeeded &= w.passed();
                        weights.push((w.point_weight, w.quotient_weight));
                    }
                    Err(e) => {
                        summary.succeeded = false;
                        report.anomalies.push(format!("euler witness: {e}"));
                    }
                }
            }
        }
        if summary.points_tested == 0 {
            summary.succeeded = false;
        }
        if let Some(first) = weights.first().cloned() {
            if weights.iter().all(|w| *w == first) {
                summary.point_weight = first.0;
                summary.quotient_weight = first.1;
            }
        }
        report.euler_witness = Some(summary);
    }

    let ctx = build_context(&g).map_err(|source| VerifyError::Prolong {
        stage: "normalization",
        source,
    })?;
    report.normalization = Some(ctx.summary());
    Ok(report)
}

/// Isotropy, osculating flags and cone spanning on sampled points.
pub fn legendrian_checks(
    p: &CubicForm,
    config: &ScenarioConfig,
) -> Result<LegendrianChecks, LegendrianError> {
    let space = ambient_space(p);
    let n = p.n();
    let mut sampler = config.sampler(n, 1);
    let isotropy_ok = (0..config.isotropy_points).all(|_| {
        let x = sampler.rational_point();
        space.is_isotropic(&zp_frame(p, &x))
    });

    let mut sampler = config.sampler(n, 2);
    let mut flags_ok = true;
    let mut flag_points = 0;
    let mut flag_dims = [0; 3];
    let mut attempts = 0;
    while flag_points < config.flag_points {
        attempts += 1;
        let x = sampler.rational_point();
        match osculating_flag(p, &x) {
            Ok(f) => {
                flag_points += 1;
                flag_dims = f.dims;
                flags_ok &= f.perp_check && f.span_check;
            }
            Err(LegendrianError::NonGeneralPoint { .. })
                if attempts < 20 * config.flag_points.max(1) => {}
            Err(e) => return Err(e),
        }
    }

    let mut sampler = config.sampler(n, 4);
    let xs: Vec<Vector> = (0..config.span_points)
        .map(|_| sampler.grid_point())
        .collect();
    Ok(LegendrianChecks {
        isotropy_points: config.isotropy_points,
        isotropy_ok,
        flag_points,
        flag_dims,
        flags_ok,
        cone_spans: cone_spans(p, &xs),
    })
}

/// Cross-module implications every report of a nondegenerate cubic must satisfy.
pub fn consistency_audit(report: &ScenarioReport) -> bool {
    if !report.nondegenerate {
        return report.legendrian_checks.is_none() && report.prolongation_dim == 0;
    }
    let Some(checks) = &report.legendrian_checks else {
        return false;
    };
    let Some(norm) = &report.normalization else {
        return false;
    };
    let some_abar = report.abar_nonzero.iter().any(|&b| b);
    let witness_ok = match &report.euler_witness {
        Some(w) => some_abar && report.prolongation_dim > 0 && w.succeeded && w.points_tested > 0,
        None => !(report.prolongation_dim > 0 && some_abar),
    };
    checks.passed()
        && report.gl_equals_csp
        && report.stabilizer_dim == report.stabilizer_gl_dim
        && report.abar_nonzero.len() == report.prolongation_dim
        && report.identity_checks.iter().all(|c| c.passed)
        && (report.prolongation_dim == 0 || !report.identity_checks.is_empty())
        && witness_ok
        && norm.unique == (report.prolongation_dim == 0)
        && norm.coset_dim == report.prolongation_dim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_cubic_exits_early() {
        let p = CubicForm::from_terms(2, &[(0, 0, 0, 1)]).unwrap();
        let r = run_scenario(&p, &ScenarioConfig::default()).unwrap();
        assert!(!r.nondegenerate);
        assert!(r.legendrian_checks.is_none());
        assert!(consistency_audit(&r));
    }

    #[test]
    fn twisted_cubic_scenario() {
        let p = CubicForm::from_terms(1, &[(0, 0, 0, 1)]).unwrap();
        let r = run_scenario(&p, &ScenarioConfig::default()).unwrap();
        assert_eq!(r.stabilizer_dim, 4);
        assert_eq!(r.prolongation_dim, 4);
        assert!(r.identity_checks.iter().all(|c| c.passed));
        let w = r.euler_witness.as_ref().unwrap();
        assert!(w.succeeded);
        assert_eq!(w.point_weight, Some(crate::exactla::rational::int(2)));
        assert_eq!(w.quotient_weight, Some(crate::exactla::rational::int(1)));
        assert!(!r.normalization.as_ref().unwrap().unique);
        assert!(consistency_audit(&r));
    }

    #[test]
    fn corrupted_report_fails_audit() {
        let p = CubicForm::from_terms(1, &[(0, 0, 0, 1)]).unwrap();
        let mut r = run_scenario(&p, &ScenarioConfig::default()).unwrap();
        r.identity_checks[0].passed = false;
        assert!(!consistency_audit(&r));
    }

    #[test]
    fn audit_is_vacuous_without_prolongation() {
        let p = CubicForm::from_terms(1, &[(0, 0, 0, 1)]).unwrap();
        let mut r = run_scenario(&p, &ScenarioConfig::default()).unwrap();
        r.prolongation_dim = 0;
        r.abar_nonzero.clear();
        r.identity_checks.clear();
        r.euler_witness = None;
        r.normalization = Some(ContextSummary {
            unique: true,
            coset_dim: 0,
            image_dim: 16,
            complement_dim: 8,
        });
        assert!(consistency_audit(&r));
    }
}
