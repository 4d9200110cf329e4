//! Python bindings: the main operations of the qconvex core, with plain
//! Python types in and out. Structured certificates and sweep reports cross
//! the boundary as JSON strings so the schema is identical to the command
//! line's `--format structured` output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qconvex::betti_engine::CertifyOptions;
use qconvex::convexity_bounds::Rigidity;
use qconvex::exterior_operators::PrincipalSpectrum;
use qconvex::reports::{ScenarioError, Suite, SweepConfig};
use qconvex::sphere_lab::TorusParams;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spectrum(curvatures: Vec<f64>) -> PyResult<PrincipalSpectrum> {
    PrincipalSpectrum::new(curvatures).map_err(value_err)
}

/// Eigenvalues of the extension T = (tr A) A^[p] - A^[p] A^[p] in closed
/// form: a list of (multi_index, value) pairs in lexicographic order.
#[pyfunction]
fn closed_form_spectrum(curvatures: Vec<f64>, p: usize) -> PyResult<Vec<(Vec<usize>, f64)>> {
    let k = spectrum(curvatures)?;
    Ok(qconvex::exterior_operators::closed_form_spectrum(&k, p)
        .map_err(value_err)?
        .into_iter()
        .map(|(idx, v)| (idx.elements().to_vec(), v))
        .collect())
}

/// Ascending eigenvalues of the extension of a dense symmetric matrix,
/// via the dense eigensolver.
#[pyfunction]
fn dense_extension_spectrum(matrix: Vec<Vec<f64>>, p: usize) -> PyResult<Vec<f64>> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let flat: Vec<f64> = matrix.into_iter().flatten().collect();
    let m = nalgebra_matrix(n, &flat);
    let a = qconvex::exterior_operators::SymmetricOperator::new(m).map_err(value_err)?;
    let t = qconvex::exterior_operators::weitzenbock_extension(&a, p).map_err(value_err)?;
    qconvex::exterior_operators::dense_spectrum(&t).map_err(value_err)
}

fn nalgebra_matrix(n: usize, row_major: &[f64]) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(n, n, row_major)
}

/// Sum of the q smallest principal curvatures and its classification:
/// (margin, "strict" | "nonnegative" | "violated").
#[pyfunction]
fn qconvex_margin(curvatures: Vec<f64>, q: usize) -> PyResult<(f64, String)> {
    let k = spectrum(curvatures)?;
    let m = qconvex::convexity_bounds::qconvex_margin(&k, q).map_err(value_err)?;
    let status = match m.status {
        qconvex::convexity_bounds::ConvexityStatus::Strict => "strict",
        qconvex::convexity_bounds::ConvexityStatus::Nonnegative => "nonnegative",
        qconvex::convexity_bounds::ConvexityStatus::Violated => "violated",
    };
    Ok((m.margin, status.to_string()))
}

/// Sharp lower bound -(n-p)(q-p)/(n-q)^2 * trace^2 for the smallest
/// eigenvalue of the extension of a q-nonnegative shape operator.
#[pyfunction]
fn tmin_lower_bound(n: usize, p: usize, q: usize, trace: f64) -> PyResult<f64> {
    qconvex::convexity_bounds::tmin_lower_bound(n, p, q, trace).map_err(value_err)
}

/// Equality-case detection for the sharp bound:
/// "interior" | "boundary_rigid" | "invalid".
#[pyfunction]
#[pyo3(signature = (curvatures, p, q, tol=qconvex::convexity_bounds::DEFAULT_TOL))]
fn rigidity_check(curvatures: Vec<f64>, p: usize, q: usize, tol: f64) -> PyResult<String> {
    let k = spectrum(curvatures)?;
    let r = qconvex::convexity_bounds::rigidity_check(&k, p, q, tol).map_err(value_err)?;
    Ok(match r {
        Rigidity::Interior => "interior",
        Rigidity::BoundaryRigid => "boundary_rigid",
        Rigidity::Invalid => "invalid",
    }
    .to_string())
}

/// Pointwise lower bound for the curvature term on l-forms.
#[pyfunction]
fn bochner_pointwise_bound(c: f64, n: usize, q: usize, l: usize, h: f64) -> PyResult<f64> {
    qconvex::convexity_bounds::bochner_pointwise_bound(c, n, q, l, h).map_err(value_err)
}

/// Mean-curvature threshold of the degree-l pinching route.
#[pyfunction]
fn pinching_threshold(n: usize, q: usize, l: usize, c: f64) -> PyResult<f64> {
    qconvex::betti_engine::pinching_threshold(n, q, l, c).map_err(value_err)
}

/// Principal curvatures of the torus family, ascending.
#[pyfunction]
fn torus_spectrum(n: usize, p: usize, r: f64) -> PyResult<Vec<f64>> {
    let t = TorusParams::new(n, p, r).map_err(value_err)?;
    Ok(qconvex::sphere_lab::torus_spectrum(&t).values().to_vec())
}

/// Mean curvature of the torus family.
#[pyfunction]
fn torus_mean_curvature(n: usize, p: usize, r: f64) -> PyResult<f64> {
    let t = TorusParams::new(n, p, r).map_err(value_err)?;
    Ok(qconvex::sphere_lab::torus_mean_curvature(&t))
}

/// Radius sqrt(p/q) at which the torus family becomes q-convex.
#[pyfunction]
fn torus_qconvexity_threshold(p: usize, q: usize) -> PyResult<f64> {
    qconvex::sphere_lab::torus_qconvexity_threshold(p, q).map_err(value_err)
}

/// Sharpness scan over a radius grid; one dict per grid point.
#[pyfunction]
fn sharpness_scan(
    py: Python<'_>,
    n: usize,
    p: usize,
    q: usize,
    r_grid: Vec<f64>,
) -> PyResult<Vec<Py<PyAny>>> {
    use pyo3::types::PyDict;
    let rows = qconvex::sphere_lab::sharpness_scan(n, p, q, &r_grid).map_err(value_err)?;
    rows.into_iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("r", row.r)?;
            d.set_item("margin", row.margin)?;
            d.set_item("h", row.h)?;
            d.set_item("pinching_slack", row.pinching_slack)?;
            d.set_item("lambda_min", row.lambda_min)?;
            d.set_item("tmin_bound", row.tmin_bound)?;
            d.set_item("rigid", row.rigid)?;
            Ok(d.into_any().unbind())
        })
        .collect()
}

fn scenario_err(e: ScenarioError) -> PyErr {
    value_err(e)
}

/// Certify a scenario given as JSON text; returns the structured report as
/// JSON text (same schema as the command line).
#[pyfunction]
#[pyo3(signature = (scenario_json, tol=qconvex::convexity_bounds::DEFAULT_TOL))]
fn certify_scenario(scenario_json: &str, tol: f64) -> PyResult<String> {
    let scenario = qconvex::reports::parse_scenario(scenario_json).map_err(scenario_err)?;
    let options = CertifyOptions {
        tol,
        ..CertifyOptions::default()
    };
    let report = qconvex::reports::run_scenario(&scenario, &options).map_err(scenario_err)?;
    Ok(report.to_structured())
}

/// Run a randomized property suite; returns the structured report as JSON
/// text. Identical arguments give byte-identical output.
#[pyfunction]
#[pyo3(signature = (suite, seed=42, n_max=6, samples=200))]
fn random_sweep(suite: &str, seed: u64, n_max: usize, samples: usize) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(value_err)?;
    let config = SweepConfig {
        seed,
        n_max,
        samples,
        suite,
    };
    let report = qconvex::reports::random_sweep(&config).map_err(value_err)?;
    Ok(report.to_structured())
}

#[pymodule]
fn qconvex_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(closed_form_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(dense_extension_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(qconvex_margin, m)?)?;
    m.add_function(wrap_pyfunction!(tmin_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(rigidity_check, m)?)?;
    m.add_function(wrap_pyfunction!(bochner_pointwise_bound, m)?)?;
    m.add_function(wrap_pyfunction!(pinching_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(torus_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(torus_mean_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(torus_qconvexity_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_scan, m)?)?;
    m.add_function(wrap_pyfunction!(certify_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(random_sweep, m)?)?;
    Ok(())
}
