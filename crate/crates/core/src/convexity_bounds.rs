//! q-convexity margins, the sharp lower bound for the extrinsic curvature
//! term, its equality (rigidity) analysis, and the pointwise curvature-term
//! bound that feeds the certification engine.

use crate::exterior_operators::PrincipalSpectrum;
use crate::{Error, Result};

/// Default additive tolerance scale for margin and rigidity classification.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityStatus {
    Strict,
    Nonnegative,
    Violated,
}

/// The sum of the q smallest principal curvatures and its classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityMargin {
    pub q: usize,
    pub margin: f64,
    pub status: ConvexityStatus,
}

/// Margin of q-convexity: sum of the q smallest principal curvatures.
///
/// A nonnegative margin at order q implies nonnegativity at every order
/// q' >= q, since each added curvature is at least the largest of the first
/// q.
pub fn qconvex_margin(k: &PrincipalSpectrum, q: usize) -> Result<ConvexityMargin> {
    qconvex_margin_with_tol(k, q, default_margin_tol(k))
}

pub fn qconvex_margin_with_tol(
    k: &PrincipalSpectrum,
    q: usize,
    tol: f64,
) -> Result<ConvexityMargin> {
    let n = k.dim();
    if q < 1 || q > n {
        return Err(Error::invalid("q", format!("need 1 <= q <= {n}, got {q}")));
    }
    let margin = k.partial_sum(q);
    let status = if margin > tol {
        ConvexityStatus::Strict
    } else if margin >= -tol {
        ConvexityStatus::Nonnegative
    } else {
        ConvexityStatus::Violated
    };
    Ok(ConvexityMargin { q, margin, status })
}

fn default_margin_tol(k: &PrincipalSpectrum) -> f64 {
    let max_abs = k
        .values()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    DEFAULT_TOL * (1.0 + max_abs)
}

/// Sharp lower bound for the lowest eigenvalue of the extension T of a
/// q-nonnegative shape operator on p-forms:
/// `-(n - p)(q - p) / (n - q)^2 * trace^2` for p < q, and 0 for p >= q
/// (apply the bound with convexity order p, which q-nonnegativity implies).
pub fn tmin_lower_bound(n: usize, p: usize, q: usize, trace: f64) -> Result<f64> {
    if q < 1 || q > n - 1 {
        return Err(Error::invalid("q", format!("need 1 <= q <= n - 1 = {}", n - 1)));
    }
    if p < 1 || p > n {
        return Err(Error::DegreeOutOfRange { p, n });
    }
    if p >= q {
        // q-nonnegative implies p-nonnegative; at convexity order p the
        // (q - p) factor vanishes
        return Ok(0.0);
    }
    if p > n - q {
        return Err(Error::invalid(
            "p",
            format!("need p <= min(q, n - q) = {}, got {p}", q.min(n - q)),
        ));
    }
    Ok(-((n - p) as f64) * ((q - p) as f64) / ((n - q) as f64).powi(2) * trace * trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigidity {
    /// Strictly above the sharp bound.
    Interior,
    /// The spectrum shape forced by equality: first p entries summing to
    /// -(q - p)/(n - q) * trace, the rest all equal to trace/(n - q).
    BoundaryRigid,
    /// Hypotheses violated (not q-nonnegative).
    Invalid,
}

/// Detect the equality case of the sharp bound.
pub fn rigidity_check(k: &PrincipalSpectrum, p: usize, q: usize, tol: f64) -> Result<Rigidity> {
    let n = k.dim();
    if q < 1 || q > n - 1 || p < 1 || p > q.min(n - q) {
        return Err(Error::invalid(
            "p/q",
            format!("need 1 <= q <= n - 1 and 1 <= p <= min(q, n - q), got p = {p}, q = {q}, n = {n}"),
        ));
    }
    let margin = qconvex_margin(k, q)?;
    if margin.status == ConvexityStatus::Violated {
        return Ok(Rigidity::Invalid);
    }
    let trace = k.trace();
    let scaled_tol = tol * (1.0 + trace.abs());
    let head = k.partial_sum(p);
    let head_target = -((q - p) as f64) / ((n - q) as f64) * trace;
    if (head - head_target).abs() > scaled_tol {
        return Ok(Rigidity::Interior);
    }
    let tail_target = trace / ((n - q) as f64);
    for &v in &k.values()[p..] {
        if (v - tail_target).abs() > scaled_tol {
            return Ok(Rigidity::Interior);
        }
    }
    Ok(Rigidity::BoundaryRigid)
}

/// Pointwise lower bound for the curvature term on l-forms of a q-convex
/// hypersurface whose ambient operator has Ky Fan average at least c:
/// `l(n - l) * (c - ((q - l)/l) * (n/(n - q))^2 * H^2)` for l < q, and
/// `l(n - l) * c` for l >= q.
pub fn bochner_pointwise_bound(c: f64, n: usize, q: usize, l: usize, h: f64) -> Result<f64> {
    if q < 1 || q >= n {
        return Err(Error::invalid("q", format!("need 1 <= q <= n - 1, got q = {q}, n = {n}")));
    }
    if l < 1 || l > n - 1 {
        return Err(Error::DegreeOutOfRange { p: l, n });
    }
    let ll = l as f64;
    let nn = n as f64;
    let base = ll * (nn - ll);
    if l >= q {
        return Ok(base * c);
    }
    let ratio = (q - l) as f64 / ll * (nn / (nn - q as f64)).powi(2);
    Ok(base * (c - ratio * h * h))
}
