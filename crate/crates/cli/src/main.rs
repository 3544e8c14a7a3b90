mod golden;
mod output;
mod suites;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use donoghue_core::model::ModelSystem;
use donoghue_core::moebius::{rotated_parameters, solve_rotation_angles};
use donoghue_core::realize::{self, kappa_curve, realize_params, universal_main_parameter};
use donoghue_core::{Complex64, Family, PerturbedHerglotz, RotationAngle};
use serde_json::json;
use thiserror::Error;

use crate::output::{complex_json, Format, Report};

const SEED_ENV: &str = "DONOGHUE_LAB_SEED";

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] donoghue_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Check(_) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "donoghue-lab", version, about = "Realization parameters of perturbed Donoghue-class functions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveClass {
    #[value(name = "M")]
    M,
    #[value(name = "Mk")]
    Mk,
    #[value(name = "Mk_inv")]
    MkInv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class, kappa0 and perturbation flag of a function given as JSON.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Von Neumann parameters for (Q, a) or for a function given as JSON.
    Realize {
        #[arg(long = "Q", allow_negative_numbers = true, requires = "a", conflicts_with = "input")]
        q: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also report the universal-model parameters.
        #[arg(long)]
        universal: bool,
    },
    /// Adds a real constant to a function given as JSON.
    Perturb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        dq: f64,
    },
    /// Rotation angles removing Q from Q + ia, or the effect of a given angle.
    Rotate {
        #[arg(long = "Q", allow_negative_numbers = true)]
        q: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
    /// CSV of kappa and U over a grid of Q.
    Curve {
        #[arg(long, value_enum)]
        class: CurveClass,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long = "Q-range", num_args = 2, allow_negative_numbers = true, value_names = ["LO", "HI"], default_values_t = [-10.0, 10.0])]
        q_range: Vec<f64>,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        /// Also write an SVG polyline of kappa against Q.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Runs the randomized property suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only the named suite.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Resolvent matrices of the dissipative model operator.
    Resolvent {
        #[arg(long)]
        input: PathBuf,
        /// Evaluation point as "re,im"; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Main-operator parameter as "re,im"; defaults to the universal-model value.
        #[arg(long = "k", allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Replays the worked examples against their golden values.
    Examples,
}

fn read_function(path: &PathBuf) -> CliResult<PerturbedHerglotz> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid function JSON: {e}", path.display())))
}

fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Input(format!("{name} must be finite, got {x}")))
    }
}

fn parse_complex(text: &str) -> CliResult<Complex64> {
    let bad = || CliError::Input(format!("expected \"re,im\", got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(finite("re", re)?, finite("im", im)?))
}

fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SEED_ENV} must be an unsigned integer, got {text:?}"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let format = cli.format;
    match cli.command {
        Command::Classify { input } => {
            let f = read_function(&input)?;
            let c = f.classify();
            Report::new(serde_json::to_value(c).expect("classification serializes"))
                .row("family", format!("{:?}", c.tag.family))
                .row("kappa0", format!("{:.12}", c.tag.kappa0))
                .row("perturbed", c.tag.perturbed.to_string())
                .row("Q", format!("{:.12}", c.q))
                .row("a", format!("{:.12}", c.a))
                .print(format);
        }
        Command::Realize {
            q,
            a,
            input,
            universal,
        } => {
            let (q, a) = match (q, a, input) {
                (Some(q), Some(a), None) => (finite("Q", q)?, finite("a", a)?),
                (None, None, Some(path)) => {
                    let f = read_function(&path)?;
                    (f.q(), f.normalization())
                }
                _ => return Err(CliError::Input("give either --Q and --a, or --input".into())),
            };
            let p = realize_params(q, a)?;
            let mut value = serde_json::to_value(p).expect("parameters serialize");
            let mut report = Report::empty()
                .row("kappa", output::fmt_complex(p.kappa))
                .row("U", output::fmt_complex(p.u))
                .row("basis_phase", output::fmt_complex(p.basis_phase))
                .row("hypothesis", format!("{:?}", p.hypothesis));
            if universal {
                let u = realize::params_universal(q, a)?;
                value["universal"] = serde_json::to_value(u).expect("parameters serialize");
                report = report
                    .row("kappa_tilde", format!("{:.12}", u.kappa_tilde))
                    .row("U_tilde", output::fmt_complex(u.u_tilde))
                    .row("kappa_complex", output::fmt_complex(u.kappa_complex))
                    .row("kappa_original", output::fmt_complex(u.kappa_original_basis));
            }
            report.with_json(value).print(format);
        }
        Command::Perturb { input, dq } => {
            let f = read_function(&input)?.perturb(finite("dq", dq)?);
            let c = f.classify();
            Report::new(serde_json::to_value(&f).expect("function serializes"))
                .row("Q", format!("{:.12}", f.q()))
                .row("a", format!("{:.12}", f.normalization()))
                .row("family", format!("{:?}", c.tag.family))
                .print(format);
        }
        Command::Rotate { q, a, alpha } => {
            let (q, a) = (finite("Q", q)?, finite("a", a)?);
            let angles: Vec<(String, RotationAngle)> = match alpha {
                Some(alpha) => vec![("given".into(), RotationAngle::new(alpha)?)],
                None => {
                    let (plus, minus) = solve_rotation_angles(q, a)?;
                    vec![("plus".into(), plus), ("minus".into(), minus)]
                }
            };
            let mut rows = Vec::new();
            let mut report = Report::empty();
            for (label, r) in angles {
                let (qa, aa) = rotated_parameters(q, a, r)?;
                let factor = r.unimodular_factor();
                rows.push(json!({
                    "branch": label,
                    "alpha": r.alpha(),
                    "Q_alpha": qa,
                    "a_alpha": aa,
                    "unimodular_factor": complex_json(factor),
                }));
                report = report.row(
                    &label,
                    format!(
                        "alpha = {:.12}  Q_alpha = {:.3e}  a_alpha = {:.12}  factor = {}",
                        r.alpha(),
                        qa,
                        aa,
                        output::fmt_complex(factor)
                    ),
                );
            }
            report.with_json(json!(rows)).print(format);
        }
        Command::Curve {
            class,
            a,
            q_range,
            steps,
            svg: svg_path,
        } => {
            let a = match (class, a) {
                (CurveClass::M, None) => 1.0,
                (_, Some(a)) => finite("a", a)?,
                (_, None) => return Err(CliError::Input("--a is required for this class".into())),
            };
            let expected = match class {
                CurveClass::M => Family::M,
                CurveClass::Mk => Family::MKappa,
                CurveClass::MkInv => Family::MKappaInv,
            };
            let (family, _) = donoghue_core::herglotz::class_of_normalization(a);
            if family != expected {
                return Err(CliError::Input(format!(
                    "a = {a} does not belong to class {class:?}"
                )));
            }
            let (lo, hi) = (finite("Q range start", q_range[0])?, finite("Q range end", q_range[1])?);
            let points = kappa_curve(a, lo, hi, steps)?;
            print!("{}", output::curve_csv(a, &points));
            if let Some(path) = svg_path {
                fs::write(&path, svg::kappa_polyline(a, &points)).map_err(|source| {
                    CliError::Io { path, source }
                })?;
            }
        }
        Command::Verify { seed, suite } => {
            let seed = effective_seed(seed)?;
            let results = suites::run_all(seed, suite.as_deref())
                .map_err(CliError::Input)?;
            let failed = results.iter().filter(|r| !r.passed()).count();
            let mut report = Report::new(json!({
                "seed": seed,
                "passed": results.len() - failed,
                "failed": failed,
                "suites": results,
            }));
            for r in &results {
                report = report.row(
                    r.name,
                    format!(
                        "{}  cases = {}  failures = {}  max deviation = {:.3e}",
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.cases,
                        r.failures,
                        r.max_deviation
                    ),
                );
            }
            report.print(format);
            if failed > 0 {
                return Err(CliError::Check(format!("{failed} suite(s) failed")));
            }
        }
        Command::Resolvent { input, z, k } => {
            let f = read_function(&input)?;
            let zs = z.iter().map(|t| parse_complex(t)).collect::<CliResult<Vec<_>>>()?;
            let k = match k {
                Some(text) => parse_complex(&text)?,
                None => universal_main_parameter(f.q(), f.normalization())?,
            };
            let model = ModelSystem::unperturbed(f.measure())?;
            let mut entries = Vec::new();
            let mut report = Report::empty().row("k_param", output::fmt_complex(k));
            for z in zs {
                let r = model.dissipative_resolvent(k, z)?;
                let rows: Vec<Vec<serde_json::Value>> = (0..r.nrows())
                    .map(|i| (0..r.ncols()).map(|j| complex_json(r[(i, j)])).collect())
                    .collect();
                report = report.row(format!("R({})", output::fmt_complex(z)), output::fmt_matrix(&r));
                entries.push(json!({ "z": complex_json(z), "matrix": rows }));
            }
            report
                .with_json(json!({ "k_param": complex_json(k), "resolvents": entries }))
                .print(format);
        }
        Command::Examples => {
            let checks = golden::run_checks();
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let mut report = Report::new(json!({
                "passed": checks.len() - failed,
                "failed": failed,
                "checks": checks,
            }));
            for c in &checks {
                report = report.row(
                    c.name,
                    format!(
                        "{}  deviation = {:.3e}",
                        if c.passed() { "PASS" } else { "FAIL" },
                        c.deviation
                    ),
                );
            }
            report.print(format);
            if failed > 0 {
                return Err(CliError::Check(format!("{failed} example check(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
