//! Per-degree Betti-number certificates from pointwise curvature data.
//!
//! The engine consumes sampled principal-curvature data of a q-convex
//! hypersurface together with an ambient curvature model (a Ky Fan lower
//! bound c on the average of the smallest n - p eigenvalues of the ambient
//! curvature operator) and emits, for each degree, the strongest conclusion
//! the pointwise bounds support: vanishing, a binomial bound, an exponential
//! growth bound, or no conclusion. Certificates are always symmetric under
//! degree reflection i -> n - i.

use serde::{Deserialize, Serialize};

use crate::convexity_bounds::{
    bochner_pointwise_bound, qconvex_margin, ConvexityStatus,
};
use crate::curvature_bochner::AmbientModel;
use crate::exterior_basis::binomial;
use crate::exterior_operators::PrincipalSpectrum;
use crate::{Error, Result};

/// One sampled point: sorted principal curvatures and the derived mean
/// curvature H = trace / n.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub curvatures: PrincipalSpectrum,
    pub mean: f64,
}

/// Sampled shape-operator data of a closed hypersurface claiming q-convexity.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceSample {
    n: usize,
    q: usize,
    points: Vec<SamplePoint>,
    diameter: Option<f64>,
}

impl HypersurfaceSample {
    /// Validates the claim: every point must be q-nonnegative (the first
    /// violating point index and margin are reported otherwise).
    pub fn new(
        n: usize,
        q: usize,
        curvatures: Vec<PrincipalSpectrum>,
        diameter: Option<f64>,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 3,
                max: crate::exterior_basis::MAX_DIMENSION,
            });
        }
        if q < 1 || q > n - 1 {
            return Err(Error::invalid("q", format!("need 1 <= q <= n - 1, got {q}")));
        }
        if curvatures.is_empty() {
            return Err(Error::invalid("points", "at least one sample point required"));
        }
        if let Some(d) = diameter {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::invalid("diameter", format!("need D > 0, got {d}")));
            }
        }
        let mut points = Vec::with_capacity(curvatures.len());
        for (idx, k) in curvatures.into_iter().enumerate() {
            if k.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: k.dim(),
                });
            }
            let margin = qconvex_margin(&k, q)?;
            if margin.status == ConvexityStatus::Violated {
                return Err(Error::ConvexityViolated {
                    point: idx,
                    margin: margin.margin,
                });
            }
            let mean = k.mean();
            points.push(SamplePoint { curvatures: k, mean });
        }
        Ok(HypersurfaceSample {
            n,
            q,
            points,
            diameter,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn convexity_order(&self) -> usize {
        self.q
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    pub fn diameter(&self) -> Option<f64> {
        self.diameter
    }

    /// Some sampled point has a strictly positive q-margin.
    pub fn strict_somewhere(&self) -> bool {
        self.points.iter().any(|pt| {
            matches!(
                qconvex_margin(&pt.curvatures, self.q).map(|m| m.status),
                Ok(ConvexityStatus::Strict)
            )
        })
    }

    pub fn mean_curvature_max(&self) -> f64 {
        self.points.iter().map(|p| p.mean).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-degree conclusion, strongest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeStatus {
    Vanishes,
    BoundedBinomial { bound: u64 },
    /// binom(n, i) times exp(C * exponent) for an inexplicit constant C > 0
    /// depending only on (n, kappa * D^2); the certificate carries the
    /// computable structured part.
    ExponentialBound {
        base: u64,
        exponent: f64,
        capped: bool,
    },
    NoConclusion,
}

impl DegreeStatus {
    fn rank(&self) -> u8 {
        match self {
            DegreeStatus::Vanishes => 3,
            DegreeStatus::BoundedBinomial { .. } => 2,
            DegreeStatus::ExponentialBound { .. } => 1,
            DegreeStatus::NoConclusion => 0,
        }
    }

    fn stronger_than(&self, other: &DegreeStatus) -> bool {
        match (self, other) {
            (
                DegreeStatus::ExponentialBound { exponent: a, .. },
                DegreeStatus::ExponentialBound { exponent: b, .. },
            ) => a < b,
            _ => self.rank() > other.rank(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCertificate {
    pub degree: usize,
    pub status: DegreeStatus,
    /// Which certification route produced the status.
    pub provenance: String,
    /// Equality case of the pointwise bound attained at every sampled point.
    pub rigidity_boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiCertificate {
    pub n: usize,
    pub q: usize,
    pub p: usize,
    /// Ky Fan lower bound of the ambient model.
    pub ambient_lower_bound: f64,
    pub tolerance: f64,
    pub degrees: Vec<DegreeCertificate>,
}

impl BettiCertificate {
    pub fn degree(&self, i: usize) -> &DegreeCertificate {
        &self.degrees[i]
    }
}

/// Mean-curvature threshold below which the degree-l pinching route applies:
/// `(n - q)/n * sqrt(l / (q - l)) * c`.
pub fn pinching_threshold(n: usize, q: usize, l: usize, c: f64) -> Result<f64> {
    if q >= n {
        return Err(Error::invalid("q", format!("need q <= n - 1, got q = {q}, n = {n}")));
    }
    if l < 1 || l >= q {
        return Err(Error::invalid("l", format!("need 1 <= l < q, got l = {l}, q = {q}")));
    }
    let nn = n as f64;
    Ok((nn - q as f64) / nn * (l as f64 / (q - l) as f64).sqrt() * c)
}

/// The pointwise coefficient `c - ((q - l)/l) (n/(n - q))^2 H_max^2`
/// controlling the curvature term on l-forms.
pub fn kappa(c: f64, n: usize, q: usize, l: usize, h_max: f64) -> Result<f64> {
    if q >= n {
        return Err(Error::invalid("q", format!("need q <= n - 1, got q = {q}, n = {n}")));
    }
    if l < 1 || l > n - 1 {
        return Err(Error::DegreeOutOfRange { p: l, n });
    }
    if l >= q {
        return Ok(c);
    }
    let nn = n as f64;
    Ok(c - (q - l) as f64 / l as f64 * (nn / (nn - q as f64)).powi(2) * h_max * h_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentBound {
    pub exponent: f64,
    pub capped: bool,
}

/// Structured exponential bound `binom(n, i) * exp(C * exponent)` with
/// `exponent = sqrt(-kappa D^2 i (n - i))`. The multiplicative constant C is
/// not computable from the inputs and is not reported; an optional epsilon
/// marks the bound as capped at the plain binomial when
/// `kappa D^2 >= -epsilon`.
pub fn exponent_bound(
    n: usize,
    i: usize,
    kappa: f64,
    diameter: f64,
    epsilon: Option<f64>,
) -> Result<ExponentBound> {
    if kappa >= 0.0 {
        return Err(Error::invalid(
            "kappa",
            "nonnegative curvature bound: use the binomial route instead",
        ));
    }
    if !(diameter > 0.0) {
        return Err(Error::invalid("diameter", format!("need D > 0, got {diameter}")));
    }
    if i < 1 || i > n - 1 {
        return Err(Error::DegreeOutOfRange { p: i, n });
    }
    let kd2 = kappa * diameter * diameter;
    Ok(ExponentBound {
        exponent: (-kd2 * (i * (n - i)) as f64).sqrt(),
        capped: epsilon.map(|e| kd2 >= -e).unwrap_or(false),
    })
}

/// Knobs for certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Additive tolerance for boundary/equality classification.
    pub tol: f64,
    /// User-asserted: the ambient operator is strictly (n - p)-positive at
    /// some point on the image. Cannot be derived from finite samples, so it
    /// is recorded as an assumption when used.
    pub ambient_strict_at_point: bool,
    /// Optional epsilon for capping exponential bounds at the binomial.
    pub exponent_cap_epsilon: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            tol: crate::convexity_bounds::DEFAULT_TOL,
            ambient_strict_at_point: false,
            exponent_cap_epsilon: None,
        }
    }
}

struct Candidate {
    status: DegreeStatus,
    provenance: &'static str,
    rigidity: bool,
    note: Option<String>,
}

/// Certify the Betti numbers of the sampled hypersurface per degree.
///
/// Route priority (strongest admissible wins, evidence is monotone):
/// 1. degrees q <= i <= p with ambient bound c >= 0: binomial bound,
///    vanishing when c > 0 or strictness is available at a point;
/// 2. degrees below q inside the admissible pinching range: binomial bound
///    when the pointwise curvature term is nonnegative at every sampled
///    point, vanishing when it is strictly positive at one of them;
/// 3. negative curvature with a diameter: structured exponential bound;
/// 4. otherwise no conclusion.
///
/// Degrees 0 and n are outside the certified range (they equal 1 for a
/// closed connected oriented manifold). The result is symmetrized under
/// i -> n - i last.
pub fn certify(
    sample: &HypersurfaceSample,
    ambient: &AmbientModel,
    p: usize,
    options: &CertifyOptions,
) -> Result<BettiCertificate> {
    let n = sample.dim();
    let q = sample.convexity_order();
    if ambient.hypersurface_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ambient.hypersurface_dim(),
        });
    }
    if ambient.degree() != p {
        return Err(Error::invalid(
            "p",
            format!("ambient model refers to p = {}, certify called with p = {p}", ambient.degree()),
        ));
    }
    if p < 1 || p > n / 2 {
        return Err(Error::DegreeOutOfRange { p, n });
    }
    let c = ambient.lower_bound();
    let h_max = sample.mean_curvature_max();
    let strict_margin = sample.strict_somewhere();
    let tol = options.tol * (1.0 + c.abs() + h_max * h_max);

    // admissible range of the pinching route
    let range_max = if 2 * q <= n {
        p.min(q.saturating_sub(1))
    } else {
        p.min(n - q)
    };

    let mut raw: Vec<DegreeCertificate> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i == 0 || i == n {
            raw.push(DegreeCertificate {
                degree: i,
                status: DegreeStatus::NoConclusion,
                provenance: "outside-certified-range".to_string(),
                rigidity_boundary: false,
                note: Some("equals 1 for a closed connected oriented manifold".to_string()),
            });
            continue;
        }
        let mut candidates: Vec<Candidate> = Vec::new();

        // Route 1: nonnegative ambient operator at degrees q..=p.
        if q <= i && i <= p {
            if c > 0.0 {
                candidates.push(Candidate {
                    status: DegreeStatus::Vanishes,
                    provenance: "positive-curvature-operator",
                    rigidity: false,
                    note: None,
                });
            } else if c >= -tol {
                if strict_margin || options.ambient_strict_at_point {
                    let note = if !strict_margin {
                        Some("uses the asserted ambient strictness flag".to_string())
                    } else {
                        None
                    };
                    candidates.push(Candidate {
                        status: DegreeStatus::Vanishes,
                        provenance: "nonnegative-operator-strict-point",
                        rigidity: false,
                        note,
                    });
                } else {
                    candidates.push(Candidate {
                        status: DegreeStatus::BoundedBinomial {
                            bound: binomial(n, i) as u64,
                        },
                        provenance: "nonnegative-curvature-operator",
                        rigidity: false,
                        note: None,
                    });
                }
            } else if let Some(d) = sample.diameter() {
                let eb = exponent_bound(n, i, c, d, options.exponent_cap_epsilon)?;
                candidates.push(Candidate {
                    status: if eb.capped {
                        DegreeStatus::BoundedBinomial {
                            bound: binomial(n, i) as u64,
                        }
                    } else {
                        DegreeStatus::ExponentialBound {
                            base: binomial(n, i) as u64,
                            exponent: eb.exponent,
                            capped: false,
                        }
                    },
                    provenance: "diameter-growth",
                    rigidity: false,
                    note: None,
                });
            }
        }

        // Route 2/3: pinching at degrees below q, within the admissible range.
        if i <= range_max && i < q {
            let bounds: Vec<f64> = sample
                .points()
                .iter()
                .map(|pt| bochner_pointwise_bound(c, n, q, i, pt.mean))
                .collect::<Result<_>>()?;
            let min_bound = bounds.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            if min_bound >= -tol {
                let strict_point = bounds.iter().any(|b| *b > tol);
                if strict_point {
                    candidates.push(Candidate {
                        status: DegreeStatus::Vanishes,
                        provenance: "pinching-strict-point",
                        rigidity: false,
                        note: None,
                    });
                } else {
                    // boundary of the pinching inequality at every point
                    candidates.push(Candidate {
                        status: DegreeStatus::BoundedBinomial {
                            bound: binomial(n, i) as u64,
                        },
                        provenance: "pinching-boundary",
                        rigidity: true,
                        note: Some(
                            "equality case: a positive Betti number forces every harmonic form in this degree to be parallel"
                                .to_string(),
                        ),
                    });
                }
            } else if let Some(d) = sample.diameter() {
                let base = (i * (n - i)) as f64;
                let kappa_i = min_bound / base;
                let eb = exponent_bound(n, i, kappa_i, d, options.exponent_cap_epsilon)?;
                candidates.push(Candidate {
                    status: if eb.capped {
                        DegreeStatus::BoundedBinomial {
                            bound: binomial(n, i) as u64,
                        }
                    } else {
                        DegreeStatus::ExponentialBound {
                            base: binomial(n, i) as u64,
                            exponent: eb.exponent,
                            capped: false,
                        }
                    },
                    provenance: "pinched-diameter-growth",
                    rigidity: false,
                    note: None,
                });
            }
        }

        let best = candidates.into_iter().fold(None::<Candidate>, |acc, cand| match acc {
            None => Some(cand),
            Some(prev) => {
                if cand.status.stronger_than(&prev.status) {
                    Some(cand)
                } else {
                    Some(prev)
                }
            }
        });
        raw.push(match best {
            Some(cand) => DegreeCertificate {
                degree: i,
                status: cand.status,
                provenance: cand.provenance.to_string(),
                rigidity_boundary: cand.rigidity,
                note: cand.note,
            },
            None => DegreeCertificate {
                degree: i,
                status: DegreeStatus::NoConclusion,
                provenance: "no-applicable-route".to_string(),
                rigidity_boundary: false,
                note: None,
            },
        });
    }

    // Poincare duality: every route bounds beta_i and beta_{n-i} together.
    for i in 1..=(n - 1) / 2 + (n - 1) % 2 {
        let j = n - i;
        if i >= j {
            break;
        }
        let (stronger, weaker) = if raw[i].status.stronger_than(&raw[j].status) {
            (i, j)
        } else if raw[j].status.stronger_than(&raw[i].status) {
            (j, i)
        } else {
            continue;
        };
        let mut copy = raw[stronger].clone();
        copy.degree = raw[weaker].degree;
        copy.provenance = format!("{}+duality", raw[stronger].provenance);
        raw[weaker] = copy;
    }

    Ok(BettiCertificate {
        n,
        q,
        p,
        ambient_lower_bound: c,
        tolerance: options.tol,
        degrees: raw,
    })
}
