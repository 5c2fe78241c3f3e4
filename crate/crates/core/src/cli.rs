//! `purity` command-line front end.
//!
//! Every subcommand renders its whole output into a string and writes it once,
//! to `--output` or stdout. Summaries meant for humans go to stderr so that
//! CSV on stdout stays machine readable.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::channels::{wh_channel, wh_linear_form, Channel};
use crate::error::Error;
use crate::injective::{antisymmetric_vector, check_mu_multiplicativity, mu_with_starts, AlternatingConfig};
use crate::linalg::{eig_hermitian, Exponent, PureState, ZERO};
use crate::purity::{
    delta_max_entangled, delta_sweep, find_p0, nu_p_numeric, nu_p_wh_analytic, schmidt_coefficients, schmidt_scan,
    sign_changes, AscentConfig,
};
use crate::random::{haar_unitary, random_density, random_matrix, rng_for};
use crate::tensor::TensorVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "PURITY_SEED";
/// Residual tolerance for `verify`.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "purity", version, about = "Maximal output purity, injective norms and the Werner-Holevo counterexample")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed; defaults to $PURITY_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of random restarts (defaults depend on the command).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: Option<u64>,

    /// Optimizer stopping tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: OutputFormat,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal output p-norm of a channel (`wh:<d>`, `id:<d>` or a JSON file).
    #[command(name = "nu-p")]
    NuP {
        channel: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Use the channel tensored with itself.
        #[arg(long)]
        tensor_square: bool,
        /// Exit with status 3 if the best restart did not converge.
        #[arg(long)]
        strict: bool,
        /// Ascent steps per restart.
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
    },
    /// Δ(p, Φ_m) for d = 3 on an evenly spaced range of p.
    #[command(name = "delta-sweep")]
    DeltaSweep {
        #[arg(long, default_value_t = 2.0)]
        p_min: f64,
        #[arg(long, default_value_t = 10.0)]
        p_max: f64,
        #[arg(long, default_value_t = 81)]
        steps: usize,
        /// Extra exponents appended after the sweep (e.g. `inf`).
        #[arg(long = "p")]
        extra: Vec<String>,
    },
    /// Zero of Δ(p, Φ_m) by bisection.
    #[command(name = "find-p0")]
    FindP0 {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Δ(p, Φ) for d = 3 over a grid of Schmidt parameters.
    #[command(name = "schmidt-scan")]
    SchmidtScan {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 60)]
        grid_n: usize,
    },
    /// Injective norm of `antisym3`, `antisym3-squared` or a JSON tensor file.
    Mu { vector: String },
    /// Structural checks on a channel: TP, CP, and for Werner-Holevo channels
    /// the linear form, covariance and Hilbert-Schmidt hermiticity.
    Verify {
        channel: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

/// Resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: Option<usize>,
    pub tolerance: Option<f64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs, env_seed: Option<&str>) -> Result<Self, Error> {
        let seed = match (args.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(s)) => s.trim().parse().map_err(|_| Error::Parse(format!("{SEED_ENV}={s} is not an integer")))?,
            (None, None) => 0,
        };
        if let Some(t) = args.tolerance {
            if !(t > 0.0) {
                return Err(Error::Parse(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(Self {
            seed,
            restarts: args.restarts.map(|r| r as usize),
            tolerance: args.tolerance,
            output_format: args.format,
            output_path: args.output.clone(),
        })
    }
}

/// Decimal text with 17 significant digits; `inf` for infinity.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_p(p: Exponent) -> String {
    fmt_f64(p.as_f64())
}

fn json_num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_f64(x))
    }
}

struct Outcome {
    body: String,
    summary: String,
    code: i32,
}

impl Outcome {
    fn ok(body: String, summary: String) -> Self {
        Self { body, summary, code: EXIT_OK }
    }
}

/// Parses arguments and runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = match RunConfig::resolve(&cli.run, env_seed.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(out) => {
            if let Err(e) = emit(&out.body, cfg.output_path.as_deref(), stdout) {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if !out.summary.is_empty() {
                let _ = stderr.write_all(out.summary.as_bytes());
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(body: &str, path: Option<&Path>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => stdout.write_all(body.as_bytes()),
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Error> {
    match cmd {
        Command::NuP { channel, p, tensor_square, strict, max_iterations } => {
            cmd_nu_p(channel, p.parse()?, *tensor_square, *strict, *max_iterations, cfg)
        }
        Command::DeltaSweep { p_min, p_max, steps, extra } => cmd_delta_sweep(*p_min, *p_max, *steps, extra, cfg),
        Command::FindP0 { tol } => cmd_find_p0(*tol, cfg),
        Command::SchmidtScan { p, grid_n } => cmd_schmidt_scan(p.parse()?, *grid_n, cfg),
        Command::Mu { vector } => cmd_mu(vector, cfg),
        Command::Verify { channel, trials } => cmd_verify(channel, *trials, cfg),
    }
}

/// A channel named on the command line.
pub struct ChannelSource {
    pub channel: Channel,
    /// Dimension `d` when the source is the Werner-Holevo channel.
    pub wh_dim: Option<usize>,
}

fn parse_builtin_dim(spec: &str, prefix: &str) -> Option<Result<usize, Error>> {
    spec.strip_prefix(prefix)
        .map(|d| d.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension in {spec:?}"))))
}

/// `wh:<d>`, `id:<d>`, or a path to a channel JSON file.
/// With `checked`, file channels must be trace preserving.
pub fn load_channel(spec: &str, checked: bool) -> Result<ChannelSource, Error> {
    if let Some(d) = parse_builtin_dim(spec, "wh:") {
        let d = d?;
        return Ok(ChannelSource { channel: wh_channel(d)?, wh_dim: Some(d) });
    }
    if let Some(d) = parse_builtin_dim(spec, "id:") {
        let d = d?;
        if d == 0 {
            return Err(Error::InvalidDimension("identity channel needs d >= 1".into()));
        }
        return Ok(ChannelSource { channel: Channel::identity(d), wh_dim: None });
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    let channel = if checked { Channel::from_json(&text)? } else { Channel::from_json_unchecked(&text)? };
    Ok(ChannelSource { channel, wh_dim: None })
}

fn cmd_nu_p(
    source: &str,
    p: Exponent,
    tensor_square: bool,
    strict: bool,
    max_iterations: usize,
    cfg: &RunConfig,
) -> Result<Outcome, Error> {
    let src = load_channel(source, true)?;
    let base_dim = src.channel.dim_in();
    let channel = if tensor_square { src.channel.tensor(&src.channel) } else { src.channel.clone() };
    let mut ascent = AscentConfig { max_iterations, ..AscentConfig::default() };
    if let Some(r) = cfg.restarts {
        ascent.restarts = r;
    }
    if let Some(t) = cfg.tolerance {
        ascent.tol = t;
    }
    let report = nu_p_numeric(&channel, p, &ascent, cfg.seed)?;

    let analytic_single = src.wh_dim.map(|d| nu_p_wh_analytic(d, p)).transpose()?;
    let (analytic, product_bound) = match (analytic_single, tensor_square) {
        (Some(a), false) => (Some(a), None),
        (Some(a), true) => (None, Some(a * a)),
        (None, _) => (None, None),
    };
    let reference = analytic.or(product_bound);
    let gap = reference.map(|r| report.value - r);
    let schmidt = if tensor_square { Some(schmidt_coefficients(&report.maximizer, (base_dim, base_dim))?) } else { None };

    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let body = match cfg.output_format {
        OutputFormat::Csv => {
            let profile = schmidt.as_ref().map(|c| c.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";")).unwrap_or_default();
            format!(
                "channel,p,analytic,product_bound,numeric,gap,converged,restarts_used,schmidt_profile\n{},{},{},{},{},{},{},{},{}\n",
                source,
                fmt_p(p),
                opt(analytic),
                opt(product_bound),
                fmt_f64(report.value),
                opt(gap),
                report.converged,
                report.restarts_used,
                profile
            )
        }
        OutputFormat::Json => {
            let v = json!({
                "channel": source,
                "p": json_num(p.as_f64()),
                "analytic": analytic,
                "product_bound": product_bound,
                "numeric": report.value,
                "gap": gap,
                "converged": report.converged,
                "restarts_used": report.restarts_used,
                "schmidt_profile": schmidt,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        }
    };
    let code = if strict && !report.converged { EXIT_NO_CONVERGENCE } else { EXIT_OK };
    Ok(Outcome { body, summary: String::new(), code })
}

fn cmd_delta_sweep(p_min: f64, p_max: f64, steps: usize, extra: &[String], cfg: &RunConfig) -> Result<Outcome, Error> {
    let rows = delta_sweep(p_min, p_max, steps)?;
    let changes = sign_changes(&rows);
    let mut all: Vec<(f64, f64)> = rows;
    for e in extra {
        let p: Exponent = e.parse()?;
        all.push((p.as_f64(), delta_max_entangled(p)?));
    }
    let body = match cfg.output_format {
        OutputFormat::Csv => {
            let mut s = String::from("p,delta\n");
            for (p, d) in &all {
                s.push_str(&format!("{},{}\n", fmt_f64(*p), fmt_f64(*d)));
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = all.iter().map(|(p, d)| json!({"p": json_num(*p), "delta": d})).collect();
            let ch: Vec<_> = changes.iter().map(|(a, b)| json!([a, b])).collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"rows": rows, "sign_changes": ch})).expect("serializable"))
        }
    };
    let summary = if changes.is_empty() {
        "no sign change in sweep\n".to_string()
    } else {
        changes.iter().map(|(a, b)| format!("sign change between p={a} and p={b}\n")).collect()
    };
    Ok(Outcome::ok(body, summary))
}

fn cmd_find_p0(tol: f64, cfg: &RunConfig) -> Result<Outcome, Error> {
    let p0 = find_p0(tol)?;
    let residual = delta_max_entangled(Exponent::finite(p0)?)?;
    let body = match cfg.output_format {
        OutputFormat::Csv => format!("p0,delta\n{},{}\n", fmt_f64(p0), fmt_f64(residual)),
        OutputFormat::Json => format!("{}\n", json!({"p0": p0, "delta": residual, "tol": tol})),
    };
    Ok(Outcome::ok(body, String::new()))
}

fn cmd_schmidt_scan(p: Exponent, grid_n: usize, cfg: &RunConfig) -> Result<Outcome, Error> {
    let scan = schmidt_scan(p, grid_n)?;
    let best = scan.best();
    let kind = if best.is_center() {
        "center"
    } else if best.is_corner() {
        "corner"
    } else {
        "interior"
    };
    let body = match cfg.output_format {
        OutputFormat::Csv => {
            let mut s = String::from("c1sq,c2sq,delta\n");
            for r in &scan.rows {
                s.push_str(&format!("{},{},{}\n", fmt_f64(r.c1sq), fmt_f64(r.c2sq), fmt_f64(r.delta)));
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = scan.rows.iter().map(|r| json!({"c1sq": r.c1sq, "c2sq": r.c2sq, "delta": r.delta})).collect();
            let v = json!({
                "p": json_num(p.as_f64()),
                "grid_n": grid_n,
                "rows": rows,
                "argmax": {"c1sq": best.c1sq, "c2sq": best.c2sq, "delta": best.delta, "kind": kind},
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        }
    };
    let summary = format!("argmax c1sq={} c2sq={} delta={} ({kind})\n", best.c1sq, best.c2sq, fmt_f64(best.delta));
    Ok(Outcome::ok(body, summary))
}

/// `antisym3`, `antisym3-squared`, or a path to a tensor JSON file.
/// The second element lists warm-start tuples appropriate for the source.
pub fn load_vector(spec: &str) -> Result<(TensorVector, Vec<Vec<PureState>>), Error> {
    match spec {
        "antisym3" => Ok((antisymmetric_vector(3)?, Vec::new())),
        "antisym3-squared" => {
            let a = antisymmetric_vector(3)?;
            let mut amps = vec![ZERO; 9];
            for k in 0..3 {
                amps[4 * k] = num_complex::Complex64::new(1.0 / 3f64.sqrt(), 0.0);
            }
            let phi = PureState::new(amps)?;
            Ok((a.regrouped_product(&a)?, vec![vec![phi.clone(), phi.clone(), phi]]))
        }
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            Ok((TensorVector::from_json(&text)?, Vec::new()))
        }
    }
}

fn cmd_mu(source: &str, cfg: &RunConfig) -> Result<Outcome, Error> {
    let (v, warm) = load_vector(source)?;
    let mut alt = AlternatingConfig::default();
    alt.restarts = cfg.restarts;
    if let Some(t) = cfg.tolerance {
        alt.tol = t;
    }
    let fit = mu_with_starts(&v, &alt, cfg.seed, &warm)?;
    let body = match cfg.output_format {
        OutputFormat::Csv => format!(
            "source,value,norm,restarts_used,converged\n{},{},{},{},{}\n",
            source,
            fmt_f64(fit.value),
            fmt_f64(v.norm()),
            fit.restarts_used,
            fit.converged
        ),
        OutputFormat::Json => format!(
            "{}\n",
            json!({"source": source, "value": fit.value, "norm": v.norm(), "dims": v.dims(),
                   "restarts_used": fit.restarts_used, "converged": fit.converged})
        ),
    };
    Ok(Outcome::ok(body, String::new()))
}

/// Largest residual of one structural check over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

/// Runs the structural checks on `trials` random instances.
///
/// TP and CP (via the Choi matrix) are checked for every channel; the linear
/// form, unitary covariance and Hilbert-Schmidt hermiticity only for
/// Werner-Holevo sources.
pub fn verify_channel(src: &ChannelSource, trials: usize, seed: u64) -> Result<Vec<CheckResult>, Error> {
    let ch = &src.channel;
    let mut out = Vec::new();
    let tp = ch.tp_residual();
    out.push(CheckResult { name: "trace_preservation", residual: tp, passed: tp <= VERIFY_TOL });
    let choi = ch.choi();
    let min_eig = eig_hermitian(&choi)?.min();
    let cp_residual = (-min_eig).max(0.0);
    out.push(CheckResult { name: "choi_psd", residual: cp_residual, passed: min_eig >= -VERIFY_TOL });
    let choi_tp = ch.choi_tp_residual();
    out.push(CheckResult { name: "choi_trace_preservation", residual: choi_tp, passed: choi_tp <= VERIFY_TOL });

    if let Some(d) = src.wh_dim {
        let mut rng = rng_for(seed, 0);
        let (mut linear, mut cov, mut hs) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..trials {
            let rho = random_density(&mut rng, d);
            linear = linear.max(ch.apply(&rho)?.max_abs_diff(&wh_linear_form(&rho)));
            let u = haar_unitary(&mut rng, d);
            cov = cov.max(crate::channels::verify_covariance(ch, &u, &rho)?);
            let a = random_matrix(&mut rng, d, d);
            let b = random_matrix(&mut rng, d, d);
            hs = hs.max(crate::channels::verify_hs_hermitian(ch, &a, &b)?);
        }
        out.push(CheckResult { name: "kraus_vs_linear", residual: linear, passed: linear <= VERIFY_TOL });
        out.push(CheckResult { name: "covariance", residual: cov, passed: cov <= VERIFY_TOL });
        out.push(CheckResult { name: "hs_hermitian", residual: hs, passed: hs <= VERIFY_TOL });
    }
    Ok(out)
}

fn cmd_verify(source: &str, trials: usize, cfg: &RunConfig) -> Result<Outcome, Error> {
    let src = load_channel(source, false)?;
    let checks = verify_channel(&src, trials, cfg.seed)?;
    let all_ok = checks.iter().all(|c| c.passed);
    let body = match cfg.output_format {
        OutputFormat::Csv => {
            let mut s = String::from("check,residual,tolerance,status\n");
            for c in &checks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name,
                    fmt_f64(c.residual),
                    fmt_f64(VERIFY_TOL),
                    if c.passed { "pass" } else { "fail" }
                ));
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| json!({"check": c.name, "residual": c.residual, "tolerance": VERIFY_TOL, "passed": c.passed}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({"channel": source, "trials": trials, "checks": rows, "passed": all_ok})).expect("serializable"))
        }
    };
    let summary = format!("verify {source}: {}\n", if all_ok { "pass" } else { "FAIL" });
    Ok(Outcome { body, summary, code: if all_ok { EXIT_OK } else { EXIT_VERIFY_FAILED } })
}

/// Convenience for the multiplicativity check from code and examples.
pub fn antisym_multiplicativity(seed: u64) -> Result<crate::injective::MultiplicativityCheck, Error> {
    let a = antisymmetric_vector(3)?;
    check_mu_multiplicativity(&a, &a, &AlternatingConfig::default(), seed)
}
