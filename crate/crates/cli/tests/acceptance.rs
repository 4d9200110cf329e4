//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Tolerances are pinned here and must not be loosened.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::Rng;

use qconvex::betti_engine::{certify, CertifyOptions, DegreeStatus, HypersurfaceSample};
use qconvex::convexity_bounds::{rigidity_check, tmin_lower_bound, Rigidity};
use qconvex::curvature_bochner::{bochner_contract, extrinsic_operator, AmbientModel};
use qconvex::exterior_operators::{
    closed_form_spectrum, dense_spectrum, weitzenbock_extension, PrincipalSpectrum,
};
use qconvex::sampling;

fn report(criterion: usize, what: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("acceptance {criterion} PASS: {what} ({detail})"),
        Err(detail) => {
            println!("acceptance {criterion} FAIL: {what} ({detail})");
            panic!("criterion {criterion} failed: {detail}");
        }
    }
}

fn min_closed_form(k: &PrincipalSpectrum, p: usize) -> f64 {
    closed_form_spectrum(k, p)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_1_eigenvalue_formula() {
    let start = Instant::now();
    let mut rng = sampling::rng(0xC1);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.random_range(3..=8);
        let a = sampling::random_symmetric(&mut rng, n, 1.0);
        let k = a.spectrum().unwrap();
        let scale = 1.0 + k.values().iter().fold(0.0f64, |m, v| m.max(v * v));
        for p in 1..n {
            let mut closed: Vec<f64> = closed_form_spectrum(&k, p)
                .unwrap()
                .into_iter()
                .map(|(_, v)| v)
                .collect();
            closed.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let dense = dense_spectrum(&weitzenbock_extension(&a, p).unwrap()).unwrap();
            for (c, d) in closed.iter().zip(dense.iter()) {
                worst = worst.max((c - d).abs() / scale);
            }
        }
    }
    let elapsed = start.elapsed();
    let outcome = if worst <= 1e-9 && elapsed.as_secs() < 60 {
        Ok(format!("max normalized deviation {worst:.2e}, {elapsed:.1?}"))
    } else {
        Err(format!("max normalized deviation {worst:.2e}, {elapsed:.1?}"))
    };
    report(
        1,
        "closed-form spectrum equals dense eigensolver, 500 samples, n in 3..8, all p, 1e-9",
        outcome,
    );
}

#[test]
fn criterion_2_sharp_bound() {
    let start = Instant::now();
    let mut rng = sampling::rng(0xC2);
    let mut violations = 0usize;
    let mut min_strict_gap = f64::INFINITY;
    for _ in 0..100_000 {
        let n = rng.random_range(3..=8);
        let q = rng.random_range(1..=n - 1);
        let k = sampling::random_qnonneg_spectrum(&mut rng, n, q);
        let trace = k.trace();
        let scale = 1.0 + trace * trace;
        let strictly_positive = k.partial_sum(q) > 1e-9;
        for p in 1..=q.min(n - q) {
            let bound = tmin_lower_bound(n, p, q, trace).unwrap();
            let min = min_closed_form(&k, p);
            if min < bound - 1e-9 * scale {
                violations += 1;
            }
            if strictly_positive && p < q {
                min_strict_gap = min_strict_gap.min((min - bound) / scale);
            }
        }
    }
    let elapsed = start.elapsed();
    let outcome = if violations == 0 && min_strict_gap > 0.0 && elapsed.as_secs() < 120 {
        Ok(format!(
            "0 violations, smallest strict gap {min_strict_gap:.2e}, {elapsed:.1?}"
        ))
    } else {
        Err(format!(
            "{violations} violations, smallest strict gap {min_strict_gap:.2e}, {elapsed:.1?}"
        ))
    };
    report(
        2,
        "sharp lower bound over 1e5 q-nonnegative spectra, strict on q-positive",
        outcome,
    );
}

#[test]
fn criterion_3_rigidity() {
    let mut outcome = Ok(String::new());
    let mut families = 0usize;
    'outer: for n in 3..=8usize {
        for q in 1..n {
            for p in 1..=q.min(n - q) {
                if p >= q {
                    continue; // bound is 0 there, not the rigid family
                }
                for t in [0.25, 0.5, 1.0] {
                    // equality family: head entries sharing -(q-p)t/p, tail
                    // entries all t, trace (n-q)t
                    let head = -((q - p) as f64) * t / p as f64;
                    let mut values = vec![head; p];
                    values.extend(std::iter::repeat(t).take(n - p));
                    let k = PrincipalSpectrum::new(values).unwrap();
                    let trace = k.trace();
                    let bound = tmin_lower_bound(n, p, q, trace).unwrap();
                    let min = min_closed_form(&k, p);
                    if (min - bound).abs() > 1e-12 {
                        outcome = Err(format!(
                            "family n={n} p={p} q={q} t={t}: |{min} - {bound}| > 1e-12"
                        ));
                        break 'outer;
                    }
                    let flag = rigidity_check(&k, p, q, 1e-10).unwrap();
                    if flag != Rigidity::BoundaryRigid {
                        outcome = Err(format!(
                            "family n={n} p={p} q={q} t={t}: flagged {flag:?}"
                        ));
                        break 'outer;
                    }
                    families += 1;
                }
            }
        }
    }
    if outcome.is_ok() {
        // perturbations off the family must read interior
        let mut rng = sampling::rng(0xC3);
        let mut interior = 0usize;
        for _ in 0..1000 {
            let n = rng.random_range(4..=8);
            let q = rng.random_range(2..=n - 1);
            let p_max = (q - 1).min(n - q);
            if p_max < 1 {
                continue;
            }
            let p = rng.random_range(1..=p_max);
            let t = rng.random_range(0.2..2.0);
            let head = -((q - p) as f64) * t / p as f64;
            let mut values = vec![head; p];
            values.extend(std::iter::repeat(t).take(n - p));
            // bump the largest entry: stays q-nonnegative, leaves the family
            let delta = rng.random_range(1e-3..0.1);
            let last = values.len() - 1;
            values[last] += delta;
            let k = PrincipalSpectrum::new(values).unwrap();
            match rigidity_check(&k, p, q, 1e-10).unwrap() {
                Rigidity::Interior => interior += 1,
                other => {
                    outcome = Err(format!(
                        "perturbed n={n} p={p} q={q} t={t} delta={delta}: flagged {other:?}"
                    ));
                    break;
                }
            }
        }
        if outcome.is_ok() {
            outcome = Ok(format!(
                "{families} equality families rigid at 1e-12, {interior} perturbations interior"
            ));
        }
    }
    report(
        3,
        "equality family is boundary-rigid, perturbations are interior",
        outcome,
    );
}

#[test]
fn criterion_4_contraction_identity() {
    let mut rng = sampling::rng(0xC4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(3..=6);
        let a = sampling::random_symmetric(&mut rng, n, 1.0);
        let r = extrinsic_operator(&a);
        for p in 1..n {
            let b = bochner_contract(&r, p).unwrap();
            let t = weitzenbock_extension(&a, p).unwrap();
            worst = worst.max((b.matrix() - t.matrix()).amax());
        }
    }
    let outcome = if worst <= 1e-10 {
        Ok(format!("max entrywise deviation {worst:.2e}"))
    } else {
        Err(format!("max entrywise deviation {worst:.2e}"))
    };
    report(
        4,
        "hat contraction of the extrinsic operator equals the extension, 200 samples, 1e-10",
        outcome,
    );
}

#[test]
fn criterion_5_kyfan_lower_bound() {
    let mut rng = sampling::rng(0xC5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let n = rng.random_range(3..=6);
        let p = rng.random_range(1..n);
        let c = rng.random_range(-2.0..2.0);
        let base = sampling::random_two_vector_operator(&mut rng, n, 1.0);
        let prescribed = sampling::with_kyfan_average(&base, n - p, c);
        for l in 1..=p {
            let b = bochner_contract(&prescribed, l).unwrap();
            let min = dense_spectrum(&b).unwrap()[0];
            let bound = c * (l * (n - l)) as f64;
            worst = worst.max(bound - min);
        }
    }
    let outcome = if worst <= 1e-9 {
        Ok(format!("max bound excess {worst:.2e}"))
    } else {
        Err(format!("max bound excess {worst:.2e}"))
    };
    report(
        5,
        "contracted curvature term respects the Ky Fan lower bound, 200 operators",
        outcome,
    );
}

#[test]
fn criterion_6_torus_anchors() {
    let t = qconvex::sphere_lab::TorusParams::new(4, 1, 0.5f64.sqrt()).unwrap();
    let k = qconvex::sphere_lab::torus_spectrum(&t);
    let h = qconvex::sphere_lab::torus_mean_curvature(&t);
    let margin = k.partial_sum(2);
    let lambda_min = min_closed_form(&k, 1);
    let bound = tmin_lower_bound(4, 1, 2, k.trace()).unwrap();
    let slack = h - qconvex::betti_engine::pinching_threshold(4, 2, 1, 1.0).unwrap();
    let checks = [
        ("k1", k.values()[0] + 1.0),
        ("k2", k.values()[1] - 1.0),
        ("k3", k.values()[2] - 1.0),
        ("k4", k.values()[3] - 1.0),
        ("H - 1/2", h - 0.5),
        ("H - (n-2)/n", h - 2.0 / 4.0),
        ("q-margin", margin),
        ("lambda_min + 3", lambda_min + 3.0),
        ("lambda_min - bound", lambda_min - bound),
        ("pinching slack", slack),
    ];
    let worst = checks
        .iter()
        .map(|(_, v)| v.abs())
        .fold(0.0f64, f64::max);
    let outcome = if worst <= 1e-12 {
        Ok(format!("max anchor deviation {worst:.2e}"))
    } else {
        let bad = checks
            .iter()
            .filter(|(_, v)| v.abs() > 1e-12)
            .map(|(name, v)| format!("{name}={v:.2e}"))
            .collect::<Vec<_>>()
            .join(", ");
        Err(bad)
    };
    report(6, "torus anchors at n=4, p=1, r=1/sqrt(2), 1e-12", outcome);
}

#[test]
fn criterion_7_certification() {
    let mut outcome: Result<String, String> = Ok(String::new());

    // strict-point vanishing at degrees q..=p
    let sample = HypersurfaceSample::new(
        6,
        2,
        vec![
            PrincipalSpectrum::new(vec![-0.5, 0.5, 1.0, 1.0, 1.0, 1.0]).unwrap(),
            PrincipalSpectrum::new(vec![-0.5, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap(),
        ],
        None,
    )
    .unwrap();
    let cert = certify(
        &sample,
        &AmbientModel::from_bound(6, 3, 0.0).unwrap(),
        3,
        &CertifyOptions::default(),
    )
    .unwrap();
    for i in [2, 3, 4] {
        if cert.degree(i).status != DegreeStatus::Vanishes {
            outcome = Err(format!("strict-point example: degree {i} not vanishing"));
        }
    }

    // rational homology sphere: positive operator kills 1..=n-1
    let sample = HypersurfaceSample::new(
        4,
        1,
        vec![PrincipalSpectrum::new(vec![0.5, 1.0, 1.0, 2.0]).unwrap()],
        None,
    )
    .unwrap();
    let cert = certify(
        &sample,
        &AmbientModel::from_bound(4, 2, 0.5).unwrap(),
        2,
        &CertifyOptions::default(),
    )
    .unwrap();
    for i in 1..=3 {
        if cert.degree(i).status != DegreeStatus::Vanishes {
            outcome = Err(format!("positive-operator example: degree {i} not vanishing"));
        }
    }

    // torus boundary: bounded with rigidity flag, never vanishing
    let sample = HypersurfaceSample::new(
        4,
        2,
        vec![PrincipalSpectrum::new(vec![-1.0, 1.0, 1.0, 1.0]).unwrap()],
        None,
    )
    .unwrap();
    let cert = certify(
        &sample,
        &AmbientModel::from_bound(4, 1, 1.0).unwrap(),
        1,
        &CertifyOptions::default(),
    )
    .unwrap();
    let d1 = cert.degree(1);
    if d1.status != (DegreeStatus::BoundedBinomial { bound: 4 }) || !d1.rigidity_boundary {
        outcome = Err(format!("torus example: got {:?}", d1));
    }

    // soundness grid: never vanishes at degree p on a q-convex torus
    let mut grid_points = 0usize;
    if outcome.is_ok() {
        'grid: for n in 4..=8usize {
            for q in 2..n {
                for p in 1..q {
                    if p > n - q || p > n / 2 {
                        continue;
                    }
                    let r_lo = qconvex::sphere_lab::torus_qconvexity_threshold(p, q).unwrap();
                    for step in 0..12 {
                        let r = r_lo + (0.99 - r_lo) * step as f64 / 11.0;
                        let t = qconvex::sphere_lab::TorusParams::new(n, p, r).unwrap();
                        let k = qconvex::sphere_lab::torus_spectrum(&t);
                        let sample = HypersurfaceSample::new(n, q, vec![k], None).unwrap();
                        let cert = certify(
                            &sample,
                            &AmbientModel::from_bound(n, p, 1.0).unwrap(),
                            p,
                            &CertifyOptions::default(),
                        )
                        .unwrap();
                        grid_points += 1;
                        if cert.degree(p).status == DegreeStatus::Vanishes {
                            outcome = Err(format!(
                                "torus n={n} p={p} q={q} r={r}: vanishing claimed with beta_p = 1"
                            ));
                            break 'grid;
                        }
                    }
                }
            }
        }
    }
    if outcome.is_ok() {
        outcome = Ok(format!(
            "3 reference scenarios exact, {grid_points} torus grid points sound"
        ));
    }
    report(7, "certification examples and torus soundness grid", outcome);
}

#[test]
fn criterion_8_determinism() {
    let run = || {
        std::process::Command::new(env!("CARGO_BIN_EXE_qconvex"))
            .args([
                "sweep",
                "--suite",
                "tmin_bound",
                "--seed",
                "42",
                "--samples",
                "300",
                "--format",
                "structured",
            ])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let outcome = if !a.status.success() {
        Err(format!(
            "sweep exited with {:?}: {}",
            a.status.code(),
            String::from_utf8_lossy(&a.stderr)
        ))
    } else if a.stdout != b.stdout {
        Err("two runs with seed 42 differ".to_string())
    } else {
        Ok(format!("{} identical bytes", a.stdout.len()))
    };
    report(8, "sweep --seed 42 twice is byte-identical", outcome);
}
