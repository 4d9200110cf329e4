//! Scenario ingestion, certificate reports, and seeded randomized property
//! sweeps — the logic shared by the command-line and Python surfaces.
//!
//! Scenario files are JSON with an exact schema (unknown fields rejected);
//! structured reports round-trip through serde and are byte-stable for
//! identical inputs, flags, and seeds.

use serde::{Deserialize, Serialize};

use crate::betti_engine::{certify, BettiCertificate, CertifyOptions, HypersurfaceSample};
use crate::convexity_bounds::{qconvex_margin, ConvexityStatus};
use crate::curvature_bochner::{bochner_contract, kyfan_average, AmbientModel};
use crate::exterior_operators::{
    closed_form_spectrum, dense_spectrum, weitzenbock_extension, PrincipalSpectrum,
};
use crate::sampling;
use crate::Error;

/// Version stamp embedded in every structured report.
pub const SCHEMA_VERSION: &str = "1";

/// Parsed scenario file. Unknown fields are schema violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    pub q: usize,
    pub p: usize,
    pub ambient: AmbientSpec,
    pub points: Vec<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    #[serde(default)]
    pub flags: ScenarioFlags,
}

/// Exactly one of `c` (scalar Ky Fan lower bound) or `eigenvalues` (full
/// sorted ambient spectrum, binom(n + 1, 2) entries) must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub curvatures: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFlags {
    #[serde(default)]
    pub ambient_strict_at_point: bool,
}

/// Failure modes of scenario processing, mapped to distinct exit codes by
/// the command-line layer.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    /// Schema violation: malformed file, wrong field, wrong list length.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates the mathematical hypotheses.
    #[error("validation error: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Parse a scenario from JSON text.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
}

/// Per-point diagnostics attached to a certificate report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub index: usize,
    pub margin: f64,
    pub status: ConvexityStatus,
    pub mean_curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub tolerance: f64,
    pub certificate: BettiCertificate,
    pub points: Vec<PointDiagnostics>,
}

impl Report {
    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_structured(text: &str) -> Result<Report, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let c = &self.certificate;
        let mut out = String::new();
        writeln!(
            out,
            "certificate  n={} q={} p={} c={} tol={}",
            c.n, c.q, c.p, c.ambient_lower_bound, self.tolerance
        )
        .unwrap();
        for d in &c.degrees {
            let status = match &d.status {
                crate::betti_engine::DegreeStatus::Vanishes => "vanishes".to_string(),
                crate::betti_engine::DegreeStatus::BoundedBinomial { bound } => {
                    format!("bounded <= {bound}")
                }
                crate::betti_engine::DegreeStatus::ExponentialBound {
                    base,
                    exponent,
                    capped,
                } => format!(
                    "bounded <= {base} * exp(C * {exponent:.6}){}",
                    if *capped { " (capped)" } else { "" }
                ),
                crate::betti_engine::DegreeStatus::NoConclusion => "no conclusion".to_string(),
            };
            writeln!(
                out,
                "  beta_{:<2} {:<40} [{}]{}",
                d.degree,
                status,
                d.provenance,
                if d.rigidity_boundary { " rigid-boundary" } else { "" }
            )
            .unwrap();
            if let Some(note) = &d.note {
                writeln!(out, "          note: {note}").unwrap();
            }
        }
        writeln!(out, "points:").unwrap();
        for p in &self.points {
            writeln!(
                out,
                "  #{:<3} margin={:+.6e}  H={:+.6e}  {:?}",
                p.index, p.margin, p.mean_curvature, p.status
            )
            .unwrap();
        }
        out
    }
}

fn validation(e: Error) -> ScenarioError {
    ScenarioError::Validation(e.to_string())
}

/// Certify a parsed scenario.
pub fn run_scenario(
    scenario: &Scenario,
    options: &CertifyOptions,
) -> Result<Report, ScenarioError> {
    let n = scenario.n;
    // wrong curvature list lengths are schema violations, not math failures
    for (i, pt) in scenario.points.iter().enumerate() {
        if pt.curvatures.len() != n {
            return Err(ScenarioError::Parse(format!(
                "points[{i}].curvatures: expected {n} entries, found {}",
                pt.curvatures.len()
            )));
        }
    }
    let ambient = match (&scenario.ambient.c, &scenario.ambient.eigenvalues) {
        (Some(c), None) => AmbientModel::from_bound(n, scenario.p, *c).map_err(validation)?,
        (None, Some(values)) => {
            let expected = crate::exterior_basis::binomial(n + 1, 2);
            if values.len() != expected {
                return Err(ScenarioError::Parse(format!(
                    "ambient.eigenvalues: expected {expected} entries, found {}",
                    values.len()
                )));
            }
            AmbientModel::from_eigenvalues(n, scenario.p, values.clone()).map_err(validation)?
        }
        _ => {
            return Err(ScenarioError::Parse(
                "ambient: exactly one of `c` or `eigenvalues` must be given".to_string(),
            ))
        }
    };
    let curvatures = scenario
        .points
        .iter()
        .map(|pt| PrincipalSpectrum::new(pt.curvatures.clone()))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(validation)?;
    let sample = HypersurfaceSample::new(n, scenario.q, curvatures, scenario.diameter)
        .map_err(validation)?;
    let mut opts = *options;
    opts.ambient_strict_at_point |= scenario.flags.ambient_strict_at_point;
    let certificate = certify(&sample, &ambient, scenario.p, &opts).map_err(validation)?;
    let points = sample
        .points()
        .iter()
        .enumerate()
        .map(|(index, pt)| {
            let m = qconvex_margin(&pt.curvatures, scenario.q)
                .map_err(|e| ScenarioError::Internal(e.to_string()))?;
            Ok(PointDiagnostics {
                index,
                margin: m.margin,
                status: m.status,
                mean_curvature: pt.mean,
            })
        })
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok(Report {
        version: SCHEMA_VERSION.to_string(),
        tolerance: opts.tol,
        certificate,
        points,
    })
}

/// Randomized property suites runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Closed-form eigenvalues against the dense eigensolver.
    SpectrumEquivalence,
    /// Sharp lower bound for the extension of q-nonnegative spectra.
    TminBound,
    /// Hat contraction of the extrinsic operator equals the extension.
    ContractionIdentity,
    /// Ky Fan lower bound for the contracted curvature term.
    BresBound,
    /// Torus family stays on the correct side of every bound.
    TorusSharpness,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::SpectrumEquivalence,
        Suite::TminBound,
        Suite::ContractionIdentity,
        Suite::BresBound,
        Suite::TorusSharpness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::SpectrumEquivalence => "spectrum_equivalence",
            Suite::TminBound => "tmin_bound",
            Suite::ContractionIdentity => "contraction_identity",
            Suite::BresBound => "bres_bound",
            Suite::TorusSharpness => "torus_sharpness",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| {
                format!(
                    "unknown suite `{s}`; expected one of: {}",
                    Suite::ALL.map(|x| x.name()).join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    /// Base dimensions are drawn from 3..=n_max (clamped per suite where the
    /// dense oracle gets expensive).
    pub n_max: usize,
    pub samples: usize,
    pub suite: Suite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub version: String,
    pub suite: Suite,
    pub seed: u64,
    pub n_max: usize,
    pub samples: usize,
    pub tolerance: f64,
    pub passes: u64,
    pub failures: u64,
    /// Largest observed violation beyond the tolerance (0 when everything
    /// passes).
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample_seed: Option<u64>,
}

impl SweepReport {
    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        format!(
            "sweep {}  seed={} n<={} samples={} tol={}\n  passes={} failures={} max_violation={:.3e}{}\n",
            self.suite.name(),
            self.seed,
            self.n_max,
            self.samples,
            self.tolerance,
            self.passes,
            self.failures,
            self.max_violation,
            match self.first_counterexample_seed {
                Some(s) => format!("\n  first counterexample seed: {s}"),
                None => String::new(),
            }
        )
    }
}

/// Independent per-sample stream so a counterexample can be replayed from
/// its own seed.
fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

/// Run a property suite. Identical configs produce identical reports.
pub fn random_sweep(config: &SweepConfig) -> crate::Result<SweepReport> {
    if config.samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    if config.n_max < 3 || config.n_max > crate::exterior_basis::MAX_DIMENSION {
        return Err(Error::DimensionOutOfRange {
            n: config.n_max,
            min: 3,
            max: crate::exterior_basis::MAX_DIMENSION,
        });
    }
    let tolerance = match config.suite {
        Suite::SpectrumEquivalence | Suite::TminBound | Suite::BresBound => 1e-9,
        Suite::ContractionIdentity => 1e-10,
        Suite::TorusSharpness => 1e-9,
    };
    let mut passes = 0u64;
    let mut failures = 0u64;
    let mut max_violation = 0.0f64;
    let mut first_counterexample_seed = None;
    for index in 0..config.samples {
        let seed = sample_seed(config.seed, index);
        let violation = run_sample(config.suite, seed, config.n_max)?;
        if violation > tolerance {
            failures += 1;
            if first_counterexample_seed.is_none() {
                first_counterexample_seed = Some(seed);
            }
            max_violation = max_violation.max(violation);
        } else {
            passes += 1;
        }
    }
    Ok(SweepReport {
        version: SCHEMA_VERSION.to_string(),
        suite: config.suite,
        seed: config.seed,
        n_max: config.n_max,
        samples: config.samples,
        tolerance,
        passes,
        failures,
        max_violation,
        first_counterexample_seed,
    })
}

/// One sample of a suite; returns the measured violation magnitude
/// (normalized where the quantity scales with the input).
fn run_sample(suite: Suite, seed: u64, n_max: usize) -> crate::Result<f64> {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    match suite {
        Suite::SpectrumEquivalence => {
            let n = rng.random_range(3..=n_max);
            let p = rng.random_range(1..n);
            let a = sampling::random_symmetric(&mut rng, n, 1.0);
            let k = a.spectrum()?;
            let mut closed: Vec<f64> = closed_form_spectrum(&k, p)?
                .into_iter()
                .map(|(_, v)| v)
                .collect();
            closed.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let dense = dense_spectrum(&weitzenbock_extension(&a, p)?)?;
            let scale = 1.0 + k.values().iter().fold(0.0f64, |m, v| m.max(v * v));
            Ok(closed
                .iter()
                .zip(dense.iter())
                .map(|(c, d)| (c - d).abs())
                .fold(0.0f64, f64::max)
                / scale)
        }
        Suite::TminBound => {
            let n = rng.random_range(3..=n_max);
            let q = rng.random_range(1..=n - 1);
            let k = sampling::random_qnonneg_spectrum(&mut rng, n, q);
            let trace = k.trace();
            let scale = 1.0 + trace * trace;
            let mut worst = 0.0f64;
            for p in 1..=q.min(n - q) {
                let bound = crate::convexity_bounds::tmin_lower_bound(n, p, q, trace)?;
                let min = closed_form_spectrum(&k, p)?
                    .into_iter()
                    .map(|(_, v)| v)
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max((bound - min) / scale);
            }
            Ok(worst)
        }
        Suite::ContractionIdentity => {
            let n = rng.random_range(3..=n_max.min(6));
            let a = sampling::random_symmetric(&mut rng, n, 1.0);
            let r = crate::curvature_bochner::extrinsic_operator(&a);
            let mut worst = 0.0f64;
            for p in 1..n {
                let b = bochner_contract(&r, p)?;
                let t = weitzenbock_extension(&a, p)?;
                worst = worst.max((b.matrix() - t.matrix()).amax());
            }
            Ok(worst)
        }
        Suite::BresBound => {
            let n = rng.random_range(3..=n_max.min(6));
            let p = rng.random_range(1..n);
            let c = rng.random_range(-2.0..2.0);
            let big = sampling::random_two_vector_operator(&mut rng, n + 1, 1.0);
            let frame = sampling::random_frame(&mut rng, n + 1, n);
            let restricted = crate::curvature_bochner::compress_ambient(&big, &frame)?;
            let prescribed = sampling::with_kyfan_average(&restricted, n - p, c);
            debug_assert!((kyfan_average(&prescribed, n - p)? - c).abs() < 1e-9);
            let mut worst = 0.0f64;
            for l in 1..=p {
                let b = bochner_contract(&prescribed, l)?;
                let min = dense_spectrum(&b)?[0];
                let bound = c * (l * (n - l)) as f64;
                worst = worst.max((bound - min) / (1.0 + c.abs()));
            }
            Ok(worst)
        }
        Suite::TorusSharpness => {
            let n = rng.random_range(4..=n_max);
            let q = rng.random_range(2..n);
            let p_candidates: Vec<usize> =
                (1..q).filter(|&p| p <= n - q && p <= n / 2).collect();
            if p_candidates.is_empty() {
                return Ok(0.0);
            }
            let p = p_candidates[rng.random_range(0..p_candidates.len())];
            let r_lo = crate::sphere_lab::torus_qconvexity_threshold(p, q)?;
            let r = rng.random_range(r_lo..=0.99f64.max(r_lo));
            let t = crate::sphere_lab::TorusParams::new(n, p, r)?;
            let k = crate::sphere_lab::torus_spectrum(&t);
            // the torus has beta_p = 1, so the engine must not claim it
            // vanishes
            let sample = HypersurfaceSample::new(n, q, vec![k.clone()], None)?;
            let ambient = AmbientModel::from_bound(n, p, 1.0)?;
            let cert = certify(&sample, &ambient, p, &CertifyOptions::default())?;
            if cert.degree(p).status == crate::betti_engine::DegreeStatus::Vanishes {
                return Ok(f64::INFINITY);
            }
            // and the sharp eigenvalue bound must hold
            let trace = k.trace();
            let bound = crate::convexity_bounds::tmin_lower_bound(n, p, q, trace)?;
            let min = closed_form_spectrum(&k, p)?
                .into_iter()
                .map(|(_, v)| v)
                .fold(f64::INFINITY, f64::min);
            Ok(((bound - min) / (1.0 + trace * trace)).max(0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti_engine::DegreeStatus;

    fn torus_scenario() -> &'static str {
        r#"{
            "n": 4, "q": 2, "p": 1,
            "ambient": {"c": 1.0},
            "points": [{"curvatures": [-1.0, 1.0, 1.0, 1.0]}]
        }"#
    }

    #[test]
    fn torus_scenario_reports_boundary_case() {
        let scenario = parse_scenario(torus_scenario()).unwrap();
        let report = run_scenario(&scenario, &CertifyOptions::default()).unwrap();
        let d1 = report.certificate.degree(1);
        assert_eq!(d1.status, DegreeStatus::BoundedBinomial { bound: 4 });
        assert!(d1.rigidity_boundary);
        assert!(d1.note.is_some());
        assert_eq!(report.points[0].mean_curvature, 0.5);
    }

    #[test]
    fn strict_point_scenario_vanishes() {
        let text = r#"{
            "n": 6, "q": 2, "p": 3,
            "ambient": {"c": 0.0},
            "points": [
                {"curvatures": [-0.5, 0.5, 1.0, 1.0, 1.0, 1.0]},
                {"curvatures": [-0.5, 1.0, 1.0, 1.0, 1.0, 1.0]}
            ]
        }"#;
        let report =
            run_scenario(&parse_scenario(text).unwrap(), &CertifyOptions::default()).unwrap();
        for i in [2, 3, 4] {
            assert_eq!(report.certificate.degree(i).status, DegreeStatus::Vanishes);
        }
    }

    #[test]
    fn unknown_field_is_parse_error() {
        let text = r#"{"n": 4, "q": 2, "p": 1, "ambient": {"c": 1.0}, "points": [], "bogus": 1}"#;
        assert!(matches!(parse_scenario(text), Err(ScenarioError::Parse(_))));
    }

    #[test]
    fn wrong_curvature_length_is_parse_error() {
        let text = r#"{
            "n": 4, "q": 2, "p": 1,
            "ambient": {"c": 1.0},
            "points": [{"curvatures": [1.0, 1.0, 1.0]}]
        }"#;
        let err = run_scenario(&parse_scenario(text).unwrap(), &CertifyOptions::default())
            .unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(_)), "{err}");
    }

    #[test]
    fn convexity_violation_is_validation_error() {
        let text = r#"{
            "n": 4, "q": 2, "p": 1,
            "ambient": {"c": 1.0},
            "points": [{"curvatures": [-2.0, 1.0, 1.0, 1.0]}]
        }"#;
        let err = run_scenario(&parse_scenario(text).unwrap(), &CertifyOptions::default())
            .unwrap_err();
        match err {
            ScenarioError::Validation(msg) => {
                assert!(msg.contains("point 0"), "{msg}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn ambient_must_be_exactly_one_of_two() {
        let none = r#"{"n": 4, "q": 2, "p": 1, "ambient": {},
                       "points": [{"curvatures": [1.0, 1.0, 1.0, 1.0]}]}"#;
        let err =
            run_scenario(&parse_scenario(none).unwrap(), &CertifyOptions::default()).unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(_)));
    }

    #[test]
    fn report_round_trips() {
        let scenario = parse_scenario(torus_scenario()).unwrap();
        let report = run_scenario(&scenario, &CertifyOptions::default()).unwrap();
        let text = report.to_structured();
        let back = Report::from_structured(&text).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn sweeps_pass_and_are_deterministic() {
        for suite in Suite::ALL {
            let config = SweepConfig {
                seed: 42,
                n_max: 6,
                samples: 25,
                suite,
            };
            let a = random_sweep(&config).unwrap();
            let b = random_sweep(&config).unwrap();
            assert_eq!(a.failures, 0, "{}: {:?}", suite.name(), a);
            assert_eq!(a.to_structured(), b.to_structured());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            let parsed: Suite = suite.name().parse().unwrap();
            assert_eq!(parsed, suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
