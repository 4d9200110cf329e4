//! `qconvex` — certificates, torus scans, spectra, and randomized property
//! sweeps from the command line.
//!
//! Exit codes: 0 success, 2 validation failure, 3 parse/schema failure,
//! 4 internal error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qconvex::betti_engine::CertifyOptions;
use qconvex::exterior_operators::{
    closed_form_spectrum, dense_spectrum, weitzenbock_extension, PrincipalSpectrum,
    SymmetricOperator,
};
use qconvex::reports::{
    parse_scenario, random_sweep, run_scenario, ScenarioError, Suite, SweepConfig,
};
use qconvex::sphere_lab::{sharpness_scan, torus_spectrum, TorusParams};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "qconvex", version, about = "Spectral certificates for q-convex hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify Betti numbers from a scenario file.
    Certify {
        /// Scenario file (JSON; schema documented in the README).
        #[arg(long)]
        scenario: PathBuf,
        /// Additive tolerance for boundary/equality classification.
        #[arg(long, default_value_t = qconvex::convexity_bounds::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan the torus family against every bound over a radius grid.
    TorusScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Explicit grid radii (repeatable); a 50-point grid over the
        /// admissible interval when omitted.
        #[arg(long = "r")]
        radii: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a seeded randomized property suite.
    Sweep {
        /// One of: spectrum_equivalence, tmin_bound, contraction_identity,
        /// bres_bound, torus_sharpness.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest base dimension to draw.
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form and dense spectra of the curvature extension of a shape
    /// operator.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Torus radius: use the torus spectrum in dimension n with factor
        /// dimension given by --torus-factor.
        #[arg(long)]
        r: Option<f64>,
        /// Factor dimension of the torus family (with --r).
        #[arg(long, default_value_t = 1)]
        torus_factor: usize,
        /// Comma-separated principal curvatures (alternative to --r).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(output: &OutputArgs, text: String) -> Result<(), u8> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_INTERNAL
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scenario_exit(e: &ScenarioError) -> u8 {
    match e {
        ScenarioError::Parse(_) => EXIT_PARSE,
        ScenarioError::Validation(_) => EXIT_VALIDATION,
        ScenarioError::Internal(_) => EXIT_INTERNAL,
    }
}

fn run_certify(scenario: &PathBuf, tol: f64, output: &OutputArgs) -> Result<(), u8> {
    let text = std::fs::read_to_string(scenario).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", scenario.display());
        EXIT_PARSE
    })?;
    let parsed = parse_scenario(&text).map_err(|e| {
        eprintln!("error: {e}");
        scenario_exit(&e)
    })?;
    if !(tol > 0.0 && tol.is_finite()) {
        eprintln!("error: validation error: --tol must be positive and finite");
        return Err(EXIT_VALIDATION);
    }
    let options = CertifyOptions {
        tol,
        ..CertifyOptions::default()
    };
    let report = run_scenario(&parsed, &options).map_err(|e| {
        eprintln!("error: {e}");
        scenario_exit(&e)
    })?;
    let rendered = match output.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_structured(),
    };
    emit(output, rendered)
}

fn run_torus_scan(
    n: usize,
    p: usize,
    q: usize,
    radii: &[f64],
    output: &OutputArgs,
) -> Result<(), u8> {
    let grid: Vec<f64> = if radii.is_empty() {
        let (lo, hi) = TorusParams::radius_range(n.max(3), p.max(1));
        (0..50)
            .map(|i| lo + (hi - lo) * i as f64 / 49.0)
            .collect()
    } else {
        radii.to_vec()
    };
    let rows = sharpness_scan(n, p, q, &grid).map_err(|e| {
        eprintln!("error: validation error: {e}");
        EXIT_VALIDATION
    })?;
    let rendered = match output.format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "torus scan  n={n} p={p} q={q}  (rigidity tol 1e-9)").unwrap();
            writeln!(
                out,
                "{:>10} {:>13} {:>13} {:>13} {:>13} {:>13}  rigid",
                "r", "q-margin", "H", "slack", "lambda_min", "bound"
            )
            .unwrap();
            for row in &rows {
                writeln!(
                    out,
                    "{:>10.6} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}  {}",
                    row.r,
                    row.margin,
                    row.h,
                    row.pinching_slack,
                    row.lambda_min,
                    row.tmin_bound,
                    if row.rigid { "yes" } else { "no" }
                )
                .unwrap();
            }
            out
        }
        Format::Structured => {
            serde_json::to_string_pretty(&rows).map_err(|e| {
                eprintln!("error: internal error: {e}");
                EXIT_INTERNAL
            })? + "\n"
        }
    };
    emit(output, rendered)
}

fn run_sweep(
    suite: &str,
    seed: u64,
    n: usize,
    samples: usize,
    output: &OutputArgs,
) -> Result<(), u8> {
    let suite: Suite = suite.parse().map_err(|e| {
        eprintln!("error: validation error: {e}");
        EXIT_VALIDATION
    })?;
    let config = SweepConfig {
        seed,
        n_max: n,
        samples,
        suite,
    };
    let report = random_sweep(&config).map_err(|e| {
        eprintln!("error: validation error: {e}");
        EXIT_VALIDATION
    })?;
    let failed = report.failures > 0;
    let rendered = match output.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_structured() + "\n",
    };
    emit(output, rendered)?;
    if failed {
        // a counterexample to a certified property is a defect, not a report
        Err(EXIT_VALIDATION)
    } else {
        Ok(())
    }
}

fn run_spectrum(
    n: usize,
    p: usize,
    r: Option<f64>,
    torus_factor: usize,
    k: &[f64],
    output: &OutputArgs,
) -> Result<(), u8> {
    let spectrum = match (r, k.is_empty()) {
        (Some(radius), true) => {
            let t = TorusParams::new(n, torus_factor, radius).map_err(|e| {
                eprintln!("error: validation error: {e}");
                EXIT_VALIDATION
            })?;
            torus_spectrum(&t)
        }
        (None, false) => {
            if k.len() != n {
                eprintln!("error: parse error: --k needs exactly {n} values, got {}", k.len());
                return Err(EXIT_PARSE);
            }
            PrincipalSpectrum::new(k.to_vec()).map_err(|e| {
                eprintln!("error: validation error: {e}");
                EXIT_VALIDATION
            })?
        }
        _ => {
            eprintln!("error: validation error: give exactly one of --r or --k");
            return Err(EXIT_VALIDATION);
        }
    };
    let closed = closed_form_spectrum(&spectrum, p).map_err(|e| {
        eprintln!("error: validation error: {e}");
        EXIT_VALIDATION
    })?;
    let shape = SymmetricOperator::from_diagonal(spectrum.values()).map_err(|e| {
        eprintln!("error: internal error: {e}");
        EXIT_INTERNAL
    })?;
    let dense = weitzenbock_extension(&shape, p)
        .and_then(|t| dense_spectrum(&t))
        .map_err(|e| {
            eprintln!("error: internal error: {e}");
            EXIT_INTERNAL
        })?;
    let rendered = match output.format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "principal curvatures: {:?}", spectrum.values()).unwrap();
            writeln!(out, "extension spectrum (closed form, lexicographic):").unwrap();
            for (idx, v) in &closed {
                writeln!(out, "  {:?} -> {v:.12}", idx.elements()).unwrap();
            }
            writeln!(out, "dense eigensolver check (ascending): {dense:?}").unwrap();
            out
        }
        Format::Structured => {
            #[derive(serde::Serialize)]
            struct SpectrumReport<'a> {
                version: &'a str,
                n: usize,
                p: usize,
                curvatures: &'a [f64],
                closed_form: Vec<(Vec<usize>, f64)>,
                dense: Vec<f64>,
            }
            let report = SpectrumReport {
                version: qconvex::reports::SCHEMA_VERSION,
                n,
                p,
                curvatures: spectrum.values(),
                closed_form: closed
                    .iter()
                    .map(|(idx, v)| (idx.elements().to_vec(), *v))
                    .collect(),
                dense,
            };
            serde_json::to_string_pretty(&report).map_err(|e| {
                eprintln!("error: internal error: {e}");
                EXIT_INTERNAL
            })? + "\n"
        }
    };
    emit(output, rendered)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Certify {
            scenario,
            tol,
            output,
        } => run_certify(scenario, *tol, output),
        Command::TorusScan {
            n,
            p,
            q,
            radii,
            output,
        } => run_torus_scan(*n, *p, *q, radii, output),
        Command::Sweep {
            suite,
            seed,
            n,
            samples,
            output,
        } => run_sweep(suite, *seed, *n, *samples, output),
        Command::Spectrum {
            n,
            p,
            r,
            torus_factor,
            k,
            output,
        } => run_spectrum(*n, *p, *r, *torus_factor, k, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
