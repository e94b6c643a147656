//! Argument parsing and subcommand execution.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use rearrange_core::dilation::{
    invariance_base, invariance_row, noncompactness_certificate, BallGeometry, DilationError,
};
use rearrange_core::rearrangement::{rearrangement, SimpleFunction};
use rearrange_core::separation::{
    falsify_uniform_separation, plane_counterexample_qnorm, separation_certificate,
    separation_epsilon_curve, theta, theta_numeric,
};
use rearrange_core::superadd::{classify_lambda, classify_lz, equal_split_ratio, SuperaddError};
use rearrange_core::weights::{
    lambda_quasinorm, lambda_quasinorm_distributional, lz_quasinorm, LambdaParams, Weight,
};
use rearrange_core::QuadratureConfig;

use crate::formats::{
    ext_real, to_json_line, CertificateJson, CertifyFailureJson, FalsifyJson, LinearProfileJson,
    NoncompactnessJson, OutcomeJson, SimpleFunctionJson, StepProfileJson, VerdictJson, WeightJson,
};
use crate::runner::{effective_jobs, parallel_map};
use crate::svg::emit_plotdata;
use crate::table::Table;
use crate::Exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

fn parse_ext_real(s: &str) -> Result<f64, String> {
    ext_real::parse(s).ok_or_else(|| format!("expected a number or INF, got {s:?}"))
}

#[derive(Debug, Parser)]
#[command(
    name = "rearrange-lab",
    version,
    about = "Rearrangements, Lorentz-Zygmund quasinorms, separation and noncompactness certificates",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,

    /// Parallelism degree (falls back to REARRANGE_LAB_JOBS, then 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Artifact format where the command supports several.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasinorm of a step profile or simple function.
    Qnorm {
        /// Step profile JSON ({"breakpoints", "values", "total_mass"}).
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Simple function JSON ({"pieces", "total_mass"}); used with --distributional.
        #[arg(long)]
        function: Option<PathBuf>,
        /// Weight JSON ({"kind": "powerlog"|"tabulated", ...}).
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Lambda exponent; INF selects the Lorentz-Zygmund supremum form.
        #[arg(long, value_parser = parse_ext_real)]
        q: f64,
        /// First Lorentz-Zygmund index (with --alpha, instead of --weight).
        #[arg(long, value_parser = parse_ext_real)]
        p: Option<f64>,
        /// Logarithm exponent of the Lorentz-Zygmund weight.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Evaluate through the distributional formula.
        #[arg(long)]
        distributional: bool,
    },
    /// Nonincreasing rearrangement of a simple function.
    Rearrange {
        #[arg(long)]
        function: PathBuf,
    },
    /// Dilation functional Theta at one or many lambdas.
    Theta {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
        /// Comma list or linspace:<from>,<to>,<count>.
        #[arg(long)]
        lambdas: Option<String>,
        /// Use the grid supremum instead of the closed form.
        #[arg(long)]
        numeric: bool,
    },
    /// Uniform-separation certificate (lambda0, epsilon).
    SeparationCert {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
        #[arg(long = "R")]
        big_r: f64,
    },
    /// Randomized search for a violation of a claimed separation bound.
    Falsify {
        /// plane | euclidean | lambda.
        #[arg(long)]
        qnorm: String,
        #[arg(long)]
        r: f64,
        #[arg(long = "R")]
        big_r: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Weight JSON for --qnorm lambda.
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Lambda exponent for --qnorm lambda.
        #[arg(long)]
        q: Option<f64>,
        /// Vector dimension (euclidean and lambda domains).
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Classify or measure disjoint superadditivity.
    Superadd {
        #[arg(long, value_parser = parse_ext_real)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum)]
        mode: SuperaddMode,
        /// Largest equal-split part count (empirical mode, powers of two).
        #[arg(long, default_value_t = 1 << 20)]
        kmax: u64,
        /// Total mass of the underlying space.
        #[arg(long = "M", default_value_t = 1.0)]
        m: f64,
        /// Split mass for the equal-split families.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Verify the dilation invariance identities over a kappa sweep.
    VerifyIdentities {
        /// Radial profile JSON ({"nodes", "total_mass"}).
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_ext_real)]
        q: f64,
        /// Comma list or geometric:<ratio>,<count>.
        #[arg(long)]
        kappas: String,
    },
    /// Noncompactness lower-bound certificate.
    Certify {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_ext_real)]
        q: f64,
        #[arg(long)]
        lambda: f64,
        /// Comma list or geometric:<ratio>,<count>.
        #[arg(long)]
        kappas: String,
    },
    /// Cartesian parameter sweep described by a grid JSON file.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuperaddMode {
    Classify,
    Empirical,
}

struct Failure {
    code: Exit,
    message: String,
    /// Artifact still written on failure (certificate failure reports).
    artifact: Option<String>,
}

impl Failure {
    fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: Exit::Precondition,
            message: message.into(),
            artifact: None,
        }
    }

    fn nonconvergence(message: impl Into<String>) -> Self {
        Self {
            code: Exit::NonConvergence,
            message: message.into(),
            artifact: None,
        }
    }
}

/// Parses the argument vector and executes it; returns the process exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    Exit::Ok as i32
                }
                _ => {
                    eprint!("{e}");
                    Exit::Usage as i32
                }
            };
        }
    };
    let out = cli.out.clone();
    match execute(cli) {
        Ok(artifact) => {
            if let Err(e) = write_artifact(out.as_deref(), &artifact) {
                eprintln!("error: {e}");
                return Exit::Precondition as i32;
            }
            Exit::Ok as i32
        }
        Err(failure) => {
            if let Some(artifact) = &failure.artifact {
                let _ = write_artifact(out.as_deref(), artifact);
            }
            eprintln!("error: {}", failure.message);
            failure.code as i32
        }
    }
}

fn write_artifact(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn quad_config(cli: &Cli) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(r) = cli.rel_tol {
        cfg.rel_tol = r;
    }
    if let Some(a) = cli.abs_tol {
        cfg.abs_tol = a;
    }
    cfg.validate().map_err(Failure::precondition)?;
    Ok(cfg)
}

fn parse_value_list(spec: &str, geometric_ok: bool) -> Result<Vec<f64>, Failure> {
    if let Some(rest) = spec.strip_prefix("linspace:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Failure::precondition(format!("linspace needs from,to,count: {spec:?}")));
        }
        let a: f64 = parts[0].parse().map_err(|_| Failure::precondition("bad linspace start"))?;
        let b: f64 = parts[1].parse().map_err(|_| Failure::precondition("bad linspace end"))?;
        let n: usize = parts[2].parse().map_err(|_| Failure::precondition("bad linspace count"))?;
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        return Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect());
    }
    if geometric_ok {
        if let Some(rest) = spec.strip_prefix("geometric:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(Failure::precondition(format!("geometric needs ratio,count: {spec:?}")));
            }
            let ratio: f64 = parts[0].parse().map_err(|_| Failure::precondition("bad geometric ratio"))?;
            let count: u32 = parts[1].parse().map_err(|_| Failure::precondition("bad geometric count"))?;
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Failure::precondition("geometric ratio must lie in (0, 1)"));
            }
            let mut v = Vec::with_capacity(count as usize);
            let mut cur = 1.0;
            for _ in 0..count {
                cur *= ratio;
                v.push(cur);
            }
            return Ok(v);
        }
    }
    spec.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::precondition(format!("bad number in list: {s:?}")))
        })
        .collect()
}

fn table_artifact(cli: &Cli, table: &Table, plot_kind: &str, default: Format) -> Result<String, Failure> {
    match cli.format.unwrap_or(default) {
        Format::Csv => Ok(table.to_csv()),
        Format::Svg => emit_plotdata(table, plot_kind).map_err(Failure::precondition),
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, value) in table.columns.iter().zip(row) {
                        obj.insert(name.clone(), json!(value));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut s = serde_json::to_string(&rows).expect("table serializes");
            s.push('\n');
            Ok(s)
        }
    }
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let cfg = quad_config(&cli)?;
    match &cli.command {
        Command::Qnorm {
            profile,
            function,
            weight,
            q,
            p,
            alpha,
            distributional,
        } => {
            let outcome = if *distributional {
                let path = function
                    .as_ref()
                    .ok_or_else(|| Failure::precondition("--distributional needs --function"))?;
                let f: SimpleFunctionJson = read_json(path)?;
                let f = f.to_core().map_err(Failure::precondition)?;
                let weight = load_weight(
                    weight
                        .as_ref()
                        .ok_or_else(|| Failure::precondition("--distributional needs --weight"))?,
                )?;
                let params = LambdaParams::new(*q, weight).map_err(|e| Failure::precondition(e.to_string()))?;
                lambda_quasinorm_distributional(&f, &params, &cfg)
                    .map_err(|e| Failure::precondition(e.to_string()))?
            } else {
                let path = profile
                    .as_ref()
                    .ok_or_else(|| Failure::precondition("qnorm needs --profile (or --distributional with --function)"))?;
                let prof: StepProfileJson = read_json(path)?;
                let prof = prof.to_core().map_err(Failure::precondition)?;
                match (weight, p) {
                    (Some(wpath), None) => {
                        let weight = load_weight(wpath)?;
                        if q.is_finite() {
                            let params =
                                LambdaParams::new(*q, weight).map_err(|e| Failure::precondition(e.to_string()))?;
                            lambda_quasinorm(&prof, &params, &cfg)
                                .map_err(|e| Failure::precondition(e.to_string()))?
                        } else {
                            // q = inf needs explicit (p, alpha)
                            return Err(Failure::precondition(
                                "q = INF requires --p and --alpha instead of --weight",
                            ));
                        }
                    }
                    (None, Some(p)) => {
                        let alpha = alpha.ok_or_else(|| Failure::precondition("--p requires --alpha"))?;
                        lz_quasinorm(&prof, *p, *q, alpha, &cfg)
                            .map_err(|e| Failure::precondition(e.to_string()))?
                    }
                    _ => {
                        return Err(Failure::precondition(
                            "qnorm needs exactly one of --weight or (--p, --alpha)",
                        ))
                    }
                }
            };
            if !outcome.converged {
                return Err(Failure::nonconvergence(format!(
                    "quadrature did not converge (value {}, error estimate {})",
                    outcome.value, outcome.abs_err_estimate
                )));
            }
            Ok(to_json_line(&OutcomeJson::from_core(&outcome)))
        }

        Command::Rearrange { function } => {
            let f: SimpleFunctionJson = read_json(function)?;
            let f = f.to_core().map_err(Failure::precondition)?;
            Ok(to_json_line(&StepProfileJson::from_core(&rearrangement(&f))))
        }

        Command::Theta {
            weight,
            lambda,
            lambdas,
            numeric,
        } => {
            let w = load_weight(weight)?;
            let eval = |l: f64| -> Result<f64, Failure> {
                if *numeric {
                    theta_numeric(&w, l).map_err(|e| Failure::precondition(e.to_string()))
                } else {
                    theta(&w, l).map_err(|e| Failure::precondition(e.to_string()))
                }
            };
            match (lambda, lambdas) {
                (Some(l), None) => {
                    let t = eval(*l)?;
                    Ok(to_json_line(&json!({ "lambda": l, "theta": t })))
                }
                (None, Some(spec)) => {
                    let ls = parse_value_list(spec, false)?;
                    let jobs = effective_jobs(cli.jobs);
                    let values = parallel_map(ls.len(), jobs, |i| eval(ls[i]));
                    let mut table = Table::new(&["lambda", "theta"]);
                    for (l, v) in ls.iter().zip(values) {
                        table.push(vec![*l, v?]);
                    }
                    table_artifact(&cli, &table, "theta-curve", Format::Csv)
                }
                _ => Err(Failure::precondition("theta needs exactly one of --lambda or --lambdas")),
            }
        }

        Command::SeparationCert { weight, q, r, big_r } => {
            let w = load_weight(weight)?;
            let params = LambdaParams::new(*q, w).map_err(|e| Failure::precondition(e.to_string()))?;
            let cert = separation_certificate(&params, *r, *big_r)
                .map_err(|e| Failure::precondition(e.to_string()))?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Ok(to_json_line(&CertificateJson::from_core(&cert))),
                other => {
                    let curve = separation_epsilon_curve(&params, *r, *big_r, 64)
                        .map_err(|e| Failure::precondition(e.to_string()))?;
                    let mut table = Table::new(&["lambda", "epsilon"]);
                    for (l, e) in curve {
                        table.push(vec![l, e]);
                    }
                    let _ = other;
                    table_artifact(&cli, &table, "epsilon-curve", Format::Csv)
                }
            }
        }

        Command::Falsify {
            qnorm,
            r,
            big_r,
            eps,
            budget,
            weight,
            q,
            dim,
        } => {
            let found = match qnorm.as_str() {
                "plane" => {
                    let f = |v: &[f64]| plane_counterexample_qnorm(v[0], v[1]);
                    falsify_uniform_separation(&f, 2, *r, *big_r, *eps, *budget, cli.seed)
                }
                "euclidean" => {
                    let f = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    falsify_uniform_separation(&f, *dim, *r, *big_r, *eps, *budget, cli.seed)
                }
                "lambda" => {
                    let wpath = weight
                        .as_ref()
                        .ok_or_else(|| Failure::precondition("--qnorm lambda needs --weight"))?;
                    let w = load_weight(wpath)?;
                    let q = q.ok_or_else(|| Failure::precondition("--qnorm lambda needs --q"))?;
                    let total = w.total_mass();
                    let params = LambdaParams::new(q, w).map_err(|e| Failure::precondition(e.to_string()))?;
                    let cell = total / (2.0 * *dim as f64);
                    let f = move |v: &[f64]| {
                        let pieces: Vec<(f64, f64)> = v.iter().map(|&x| (x.abs(), cell)).collect();
                        let f = SimpleFunction::new(&pieces, total).expect("bounded pieces");
                        lambda_quasinorm(&rearrangement(&f), &params, &cfg)
                            .expect("domain matches")
                            .value
                    };
                    falsify_uniform_separation(&f, *dim, *r, *big_r, *eps, *budget, cli.seed)
                }
                other => return Err(Failure::precondition(format!("unknown qnorm domain: {other}"))),
            };
            Ok(to_json_line(&FalsifyJson::from_core(found.as_ref())))
        }

        Command::Superadd {
            p,
            q,
            alpha,
            gamma,
            mode,
            kmax,
            m,
            t,
        } => {
            let weight = Weight::power_log(*p, *q, *alpha, *m).map_err(|e| Failure::precondition(e.to_string()))?;
            let params = LambdaParams::new(*q, weight).map_err(|e| Failure::precondition(e.to_string()))?;
            match mode {
                SuperaddMode::Classify => {
                    let table = match classify_lz(*p, *q, *alpha, *gamma) {
                        Ok(v) => Some(VerdictJson::from_core(&v)),
                        Err(SuperaddError::OutOfScope(_)) => None,
                        Err(e) => return Err(Failure::precondition(e.to_string())),
                    };
                    let envelope = classify_lambda(&params, *gamma, &cfg)
                        .map_err(|e| Failure::precondition(e.to_string()))?;
                    Ok(to_json_line(&json!({
                        "table": table,
                        "envelope": VerdictJson::from_core(&envelope),
                    })))
                }
                SuperaddMode::Empirical => {
                    let split_mass = t.unwrap_or(0.5 * *m);
                    let mut ks = Vec::new();
                    let mut k = 1u64;
                    while k <= *kmax {
                        ks.push(k as usize);
                        k *= 2;
                    }
                    let jobs = effective_jobs(cli.jobs);
                    let ratios = parallel_map(ks.len(), jobs, |i| {
                        equal_split_ratio(&params, *gamma, split_mass, ks[i], &cfg).map_err(|e| e.to_string())
                    });
                    let mut table = Table::new(&["k", "ratio"]);
                    for (k, ratio) in ks.iter().zip(ratios) {
                        table.push(vec![*k as f64, ratio.map_err(Failure::precondition)?]);
                    }
                    table_artifact(&cli, &table, "superadd-growth", Format::Csv)
                }
            }
        }

        Command::VerifyIdentities { profile, n, q, kappas } => {
            let prof: LinearProfileJson = read_json(profile)?;
            let prof = prof.to_core().map_err(Failure::precondition)?;
            let geom = BallGeometry::from_measure(*n, prof.total_mass())
                .map_err(|e| Failure::precondition(e.to_string()))?;
            let ks = parse_value_list(kappas, true)?;
            let base = invariance_base(&prof, &geom, *q, &cfg)
                .map_err(|e| Failure::precondition(e.to_string()))?;
            let jobs = effective_jobs(cli.jobs);
            let rows = parallel_map(ks.len(), jobs, |i| {
                invariance_row(&prof, &geom, *q, ks[i], &base, &cfg).map_err(|e| e.to_string())
            });
            let mut table = Table::new(&[
                "kappa",
                "R_kappa",
                "grad_rel_err",
                "qnorm_rel_err",
                "qnorm_value",
                "support_mass",
            ]);
            for row in rows {
                let row = row.map_err(Failure::precondition)?;
                table.push(vec![
                    row.kappa,
                    row.r_kappa,
                    row.grad_rel_err,
                    row.qnorm_rel_err,
                    row.qnorm_value,
                    row.support_mass,
                ]);
            }
            table_artifact(&cli, &table, "invariance", Format::Csv)
        }

        Command::Certify {
            profile,
            n,
            q,
            lambda,
            kappas,
        } => {
            let prof: LinearProfileJson = read_json(profile)?;
            let prof = prof.to_core().map_err(Failure::precondition)?;
            let geom = BallGeometry::from_measure(*n, prof.total_mass())
                .map_err(|e| Failure::precondition(e.to_string()))?;
            let ks = parse_value_list(kappas, true)?;
            match noncompactness_certificate(&prof, &geom, *q, &ks, *lambda, &cfg) {
                Ok(cert) => Ok(to_json_line(&NoncompactnessJson::from_core(&cert))),
                Err(DilationError::QuasinormBelowLambda { kappa, value, lambda }) => Err(Failure {
                    code: Exit::CertificateFailure,
                    message: format!("quasinorm {value} at kappa = {kappa} below lambda = {lambda}"),
                    artifact: Some(to_json_line(&CertifyFailureJson {
                        error: "quasinorm_below_lambda".to_string(),
                        failing_kappa: kappa,
                        quasinorm: value,
                        lambda,
                    })),
                }),
                Err(e) => Err(Failure::precondition(e.to_string())),
            }
        }

        Command::Sweep { grid } => {
            let spec: GridSpec = read_json(grid)?;
            let table = run_sweep(&spec, &cfg, effective_jobs(cli.jobs))?;
            let kind = match spec.op.as_str() {
                "theta" => "theta-curve",
                "superadd-empirical" => "superadd-growth",
                _ => "theta-curve",
            };
            table_artifact(&cli, &table, kind, Format::Csv)
        }
    }
}

fn load_weight(path: &Path) -> Result<Weight, Failure> {
    let w: WeightJson = read_json(path)?;
    w.to_core().map_err(Failure::precondition)
}

#[derive(Debug, Deserialize)]
struct GridSpec {
    op: String,
    axes: Vec<GridAxis>,
}

#[derive(Debug, Deserialize)]
struct GridAxis {
    name: String,
    values: Vec<serde_json::Value>,
}

const MAX_SWEEP_POINTS: usize = 1_000_000;

fn axis_values(axis: &GridAxis) -> Result<Vec<f64>, Failure> {
    axis.values
        .iter()
        .map(|v| match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Failure::precondition(format!("axis {}: bad number", axis.name))),
            serde_json::Value::String(s) => ext_real::parse(s)
                .ok_or_else(|| Failure::precondition(format!("axis {}: bad value {s:?}", axis.name))),
            other => Err(Failure::precondition(format!(
                "axis {}: unsupported value {other}",
                axis.name
            ))),
        })
        .collect()
}

fn run_sweep(spec: &GridSpec, cfg: &QuadratureConfig, jobs: usize) -> Result<Table, Failure> {
    let axes: Vec<(String, Vec<f64>)> = spec
        .axes
        .iter()
        .map(|a| Ok((a.name.clone(), axis_values(a)?)))
        .collect::<Result<_, Failure>>()?;
    let mut total: usize = 1;
    for (_, values) in &axes {
        total = total.saturating_mul(values.len());
    }
    if total > MAX_SWEEP_POINTS {
        return Err(Failure::precondition(format!(
            "sweep grid has {total} points, more than the {MAX_SWEEP_POINTS} allowed"
        )));
    }

    let result_column = match spec.op.as_str() {
        "theta" => "theta",
        "support-radius" => "R_kappa",
        "superadd-empirical" => "ratio",
        other => return Err(Failure::precondition(format!("unknown sweep op: {other}"))),
    };
    let mut columns: Vec<&str> = axes.iter().map(|(n, _)| n.as_str()).collect();
    columns.push(result_column);
    let mut table = Table::new(&columns);
    if total == 0 || axes.is_empty() {
        return Ok(table);
    }

    // point i maps to axis indices with the last axis fastest
    let point = |i: usize| -> Vec<f64> {
        let mut idx = i;
        let mut coords = vec![0.0; axes.len()];
        for (k, (_, values)) in axes.iter().enumerate().rev() {
            coords[k] = values[idx % values.len()];
            idx /= values.len();
        }
        coords
    };
    let get = |coords: &[f64], name: &str, default: Option<f64>| -> Result<f64, String> {
        axes.iter()
            .position(|(n, _)| n == name)
            .map(|k| coords[k])
            .or(default)
            .ok_or_else(|| format!("sweep op {} needs axis {name}", spec.op))
    };

    let op = spec.op.clone();
    let rows = parallel_map(total, jobs, |i| -> Result<Vec<f64>, String> {
        let coords = point(i);
        let value = match op.as_str() {
            "theta" => {
                let p = get(&coords, "p", None)?;
                let q = get(&coords, "q", None)?;
                let alpha = get(&coords, "alpha", None)?;
                let m = get(&coords, "M", Some(1.0))?;
                let lambda = get(&coords, "lambda", None)?;
                let w = Weight::power_log(p, q, alpha, m).map_err(|e| e.to_string())?;
                theta(&w, lambda).map_err(|e| e.to_string())?
            }
            "support-radius" => {
                let kappa = get(&coords, "kappa", None)?;
                let r_tilde = get(&coords, "r_tilde", None)?;
                let r = get(&coords, "R", None)?;
                let n = get(&coords, "n", None)? as u32;
                rearrange_core::dilation::support_radius(kappa, r_tilde, r, n).map_err(|e| e.to_string())?
            }
            "superadd-empirical" => {
                let p = get(&coords, "p", None)?;
                let q = get(&coords, "q", None)?;
                let alpha = get(&coords, "alpha", None)?;
                let gamma = get(&coords, "gamma", None)?;
                let m = get(&coords, "M", Some(1.0))?;
                let t = get(&coords, "t", Some(0.5 * m))?;
                let k = get(&coords, "k", None)? as usize;
                let w = Weight::power_log(p, q, alpha, m).map_err(|e| e.to_string())?;
                let params = LambdaParams::new(q, w).map_err(|e| e.to_string())?;
                equal_split_ratio(&params, gamma, t, k, cfg).map_err(|e| e.to_string())?
            }
            _ => unreachable!("op validated above"),
        };
        let mut row = coords;
        row.push(value);
        Ok(row)
    });
    for row in rows {
        table.push(row.map_err(Failure::precondition)?);
    }
    Ok(table)
}
