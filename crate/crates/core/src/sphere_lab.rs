//! The generalized Clifford-torus family S^p(r) x S^{n-p}(sqrt(1 - r^2))
//! inside the unit sphere: exact curvature data and sharpness scans against
//! the bounds of this crate.
//!
//! Every quantity depends only on (n, p, r); the ambient sphere enters as
//! the identity curvature operator on two-vectors (every Ky Fan average
//! equals 1).

use serde::{Deserialize, Serialize};

use crate::convexity_bounds::{qconvex_margin, rigidity_check, tmin_lower_bound, Rigidity};
use crate::exterior_basis::MAX_DIMENSION;
use crate::exterior_operators::{closed_form_spectrum, PrincipalSpectrum};
use crate::{Error, Result};

/// Default cap keeping r away from the curvature blowup at 1 and inside the
/// orientation convention H >= 0 (which needs r^2 >= p/n).
pub const R_CAP_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusParams {
    n: usize,
    p: usize,
    r: f64,
}

impl TorusParams {
    pub fn new(n: usize, p: usize, r: f64) -> Result<Self> {
        if n < 3 || n > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 3,
                max: MAX_DIMENSION,
            });
        }
        if p < 1 || p > n - 1 {
            return Err(Error::DegreeOutOfRange { p, n });
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::invalid("r", format!("need 0 < r < 1, got {r}")));
        }
        Ok(TorusParams { n, p, r })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn factor_dim(&self) -> usize {
        self.p
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Default admissible radius interval for this (n, p).
    pub fn radius_range(n: usize, p: usize) -> (f64, f64) {
        ((p as f64 / n as f64).sqrt() + R_CAP_MARGIN, 1.0 - R_CAP_MARGIN)
    }
}

/// Principal curvatures: -sqrt(1 - r^2)/r with multiplicity p and
/// r/sqrt(1 - r^2) with multiplicity n - p, ascending.
pub fn torus_spectrum(t: &TorusParams) -> PrincipalSpectrum {
    let r = t.r;
    let s = (1.0 - r * r).sqrt();
    let mut values = vec![-s / r; t.p];
    values.extend(std::iter::repeat(r / s).take(t.n - t.p));
    PrincipalSpectrum::new(values).expect("finite for 0 < r < 1")
}

/// Mean curvature (n r^2 - p) / (n r sqrt(1 - r^2)); nonnegative exactly
/// when r^2 >= p/n (the minimal torus sits at r^2 = p/n).
pub fn torus_mean_curvature(t: &TorusParams) -> f64 {
    let r = t.r;
    let (n, p) = (t.n as f64, t.p as f64);
    (n * r * r - p) / (n * r * (1.0 - r * r).sqrt())
}

/// The radius sqrt(p/q) at which the torus becomes q-convex: the q-margin of
/// the spectrum is exactly zero there and increasing in r.
pub fn torus_qconvexity_threshold(p: usize, q: usize) -> Result<f64> {
    if q <= p {
        return Err(Error::invalid(
            "q",
            format!("need q > p (the family is never q-convex for r < 1), got p = {p}, q = {q}"),
        ));
    }
    Ok((p as f64 / q as f64).sqrt())
}

/// One grid point of a sharpness scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    /// Sum of the q smallest principal curvatures.
    pub margin: f64,
    pub h: f64,
    /// H minus the degree-p pinching threshold at ambient bound c = 1.
    pub pinching_slack: f64,
    /// Smallest eigenvalue of the degree-p extension of the shape operator.
    pub lambda_min: f64,
    /// Sharp lower bound for lambda_min from the trace.
    pub tmin_bound: f64,
    pub rigid: bool,
}

/// Scan the torus family over a radius grid against every bound at once.
///
/// Needs p < q <= n - 1 and p <= n - q (the hypotheses of the sharp bound).
/// Grid radii are clamped into the default admissible interval.
pub fn sharpness_scan(n: usize, p: usize, q: usize, r_grid: &[f64]) -> Result<Vec<ScanRow>> {
    if r_grid.is_empty() {
        return Err(Error::invalid("r_grid", "empty grid"));
    }
    if q <= p || q > n - 1 {
        return Err(Error::invalid(
            "q",
            format!("need p < q <= n - 1, got p = {p}, q = {q}, n = {n}"),
        ));
    }
    if p > n - q {
        return Err(Error::invalid(
            "p",
            format!("need p <= n - q, got p = {p}, n - q = {}", n - q),
        ));
    }
    let (lo, hi) = TorusParams::radius_range(n, p);
    let threshold = crate::betti_engine::pinching_threshold(n, q, p, 1.0)?;
    let mut rows = Vec::with_capacity(r_grid.len());
    for &raw_r in r_grid {
        if !raw_r.is_finite() {
            return Err(Error::invalid("r_grid", format!("non-finite radius {raw_r}")));
        }
        let r = raw_r.clamp(lo, hi);
        let t = TorusParams::new(n, p, r)?;
        let k = torus_spectrum(&t);
        let margin = qconvex_margin(&k, q)?.margin;
        let h = torus_mean_curvature(&t);
        let lambda_min = closed_form_spectrum(&k, p)?
            .into_iter()
            .map(|(_, v)| v)
            .fold(f64::INFINITY, f64::min);
        let tmin_bound = tmin_lower_bound(n, p, q, k.trace())?;
        let rigid = matches!(
            rigidity_check(&k, p, q, 1e-9)?,
            Rigidity::BoundaryRigid
        );
        rows.push(ScanRow {
            r,
            margin,
            h,
            pinching_slack: h - threshold,
            lambda_min,
            tmin_bound,
            rigid,
        });
    }
    Ok(rows)
}
