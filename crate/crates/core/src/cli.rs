//! Command-line front end: `run`, `sweep` and `verify`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::extraction::{conditional_probabilities, extract_povm, scheme_for};
use crate::interferometer::{Experiment, MzConfig};
use crate::oracle::direct_probabilities;
use crate::povm::{
    bias_and_direction, contrast, marginal, unsharpness, DiscretePovm, BY_COINCIDENCE,
    BY_FIRST_INDEX, BY_SECOND_INDEX,
};
use crate::qubit::{schmidt, StateVector2, C64};
use crate::relations::{
    contrasts, distinguishability, entropic_bound, erasure_duality, reduced_marked_state,
    triple_relations, variance_ur, visibility_reduced, RelationKind, RelationReport,
};
use crate::suite::{format_table, run_suite, SuiteOptions};

/// Inputs whose norm² is further than this from 1 are normalized with a warning.
pub const INPUT_NORM_TOL: f64 = 1e-6;
pub const MAX_SWEEP_STEPS: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "mzpovm", version, about = "POVMs of Mach-Zehnder path-marking experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one experiment and print a JSON report.
    Run(ExperimentArgs),
    /// Vary one angle and print CSV rows.
    Sweep(SweepArgs),
    /// Run the invariant suite and oracle cross-checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, value_parser = clap::value_parser!(Experiment))]
    experiment: Option<Experiment>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Input amplitudes as re,im,re,im.
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,
    /// JSON file with the same fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read angle flags in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Param {
    Delta,
    Gamma,
    Theta,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    base: ExperimentArgs,
    #[arg(long, value_enum)]
    param: Param,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long)]
    steps: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Add this multiple of I to one extracted effect (fault injection).
    #[arg(long, allow_hyphen_values = true)]
    perturb: Option<f64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    experiment: Option<Experiment>,
    delta: Option<f64>,
    gamma: Option<f64>,
    theta: Option<f64>,
    input: Option<[f64; 4]>,
}

/// Invalid invocation; maps to exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn parse_input(s: &str) -> std::result::Result<[f64; 4], Usage> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Usage(format!("--input expects re,im,re,im; got `{s}`")));
    }
    let mut out = [0.0; 4];
    for (dst, p) in out.iter_mut().zip(&parts) {
        *dst = p
            .parse()
            .map_err(|_| Usage(format!("--input component `{p}` is not a number")))?;
    }
    Ok(out)
}

/// Normalizes the amplitudes, warning when the norm is off by more than
/// [`INPUT_NORM_TOL`].
pub fn normalize_input(raw: [f64; 4], warn: &mut dyn Write) -> Result<StateVector2> {
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("input amplitudes"));
    }
    let norm_sq: f64 = raw.iter().map(|x| x * x).sum();
    let psi = StateVector2::normalize([C64::new(raw[0], raw[1]), C64::new(raw[2], raw[3])])?;
    if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
        let _ = writeln!(warn, "warning: input renormalized (|alpha|^2+|beta|^2 = {norm_sq})");
    }
    Ok(psi)
}

fn resolve(args: &ExperimentArgs, warn: &mut dyn Write) -> std::result::Result<(MzConfig, StateVector2), Usage> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Usage(format!("invalid config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let experiment = args
        .experiment
        .or(file.experiment)
        .ok_or_else(|| Usage("missing --experiment".into()))?;
    let angle = |flag: Option<f64>| flag.map(|x| if args.degrees { x.to_radians() } else { x });
    let delta = angle(args.delta).or(file.delta).unwrap_or(experiment.default_delta());
    let gamma = angle(args.gamma).or(file.gamma).unwrap_or(0.0);
    let theta = angle(args.theta).or(file.theta).unwrap_or(0.0);
    let config = MzConfig::new(experiment, delta, gamma, theta)?;
    let raw = match &args.input {
        Some(s) => parse_input(s)?,
        None => file
            .input
            .unwrap_or([std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0]),
    };
    Ok((config, normalize_input(raw, warn)?))
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn povm_json(p: &DiscretePovm) -> Result<Value> {
    let kind = p.validate()?.kind();
    let mut v = json!({
        "effects": serde_json::to_value(p).expect("POVM serializes"),
        "kind": kind.to_string(),
    });
    if p.len() == 2 {
        v["contrast"] = json!(contrast(p)?);
        v["unsharpness"] = json!(unsharpness(p)?);
    }
    Ok(v)
}

/// U_F + U_G ≥ 1, reported when both marginals are unbiased with orthogonal directions.
fn unsharpness_sum(f: &DiscretePovm, g: &DiscretePovm) -> Result<Option<RelationReport>> {
    let (bf, uf) = bias_and_direction(f)?;
    let (bg, ug) = bias_and_direction(g)?;
    let dot: f64 = uf.iter().zip(ug.iter()).map(|(a, b)| a * b).sum();
    if bf.abs() > 1e-12 || bg.abs() > 1e-12 || dot.abs() > 1e-12 {
        return Ok(None);
    }
    Ok(Some(RelationReport::new(
        "U_F+U_G >= 1",
        unsharpness(f)? + unsharpness(g)?,
        1.0,
        RelationKind::Geq,
    )))
}

/// Full report for one experiment and input, with keys in sorted order.
pub fn run_report(config: &MzConfig, psi: &StateVector2) -> Result<Value> {
    let scheme = scheme_for(config);
    let povm = extract_povm(&scheme)?;
    let probs: Map<String, Value> = direct_probabilities(&scheme, psi)?
        .into_iter()
        .map(|(label, p)| (label, json!(p)))
        .collect();

    let probes = config.probes();
    let rho_in = psi.density();
    let rho_e = reduced_marked_state(psi, &probes.p1, &probes.p2);
    let dist = distinguishability(psi, &probes.p1, &probes.p2);
    let (ve, n_opt) = visibility_reduced(&rho_e);
    let ce = contrasts(&rho_e);
    let out = crate::interferometer::final_state(psi, &probes, config)?;

    let mut relations = vec![];
    let ur = variance_ur(&rho_in);
    relations.push(ur.relation);
    relations.push(ur.positivity);
    relations.push(entropic_bound(
        &crate::povm::pauli_pvm(crate::qubit::Pauli::Z),
        &crate::povm::pauli_pvm(crate::qubit::Pauli::X),
        psi,
    )?);
    relations.extend(triple_relations(&rho_e));
    relations.extend(erasure_duality(psi, &probes.p1, &probes.p2)?);

    let (marginals, conditional) = if config.experiment.has_marking() {
        let f = marginal(&povm, BY_FIRST_INDEX)?;
        let g = marginal(&povm, BY_SECOND_INDEX)?;
        let h = marginal(&povm, BY_COINCIDENCE)?;
        if let Some(r) = unsharpness_sum(&f, &g)? {
            relations.push(r);
        }
        let mut cond = Map::new();
        for l in ["1", "2"] {
            let v = match conditional_probabilities(&povm, l, psi) {
                Ok([d1, d2]) => json!({ "D1": d1, "D2": d2 }),
                Err(Error::ZeroProbabilityCondition { .. }) => Value::Null,
                Err(e) => return Err(e),
            };
            cond.insert(l.to_string(), v);
        }
        (
            json!({
                "detector": povm_json(&f)?,
                "probe": povm_json(&g)?,
                "coincidence": povm_json(&h)?,
            }),
            Value::Object(cond),
        )
    } else {
        (Value::Null, Value::Null)
    };

    Ok(json!({
        "config": serde_json::to_value(config).expect("config serializes"),
        "input": { "alpha": complex_json(psi.alpha()), "beta": complex_json(psi.beta()) },
        "probabilities": probs,
        "povm": povm_json(&povm)?,
        "marginals": marginals,
        "conditional": conditional,
        "quantities": {
            "C_P": ce.path,
            "C_Ix": ce.interference_x,
            "C_Iy": ce.interference_y,
            "V": ce.visibility,
            "D": dist.d,
            "L": dist.l,
            "r0": dist.r0,
            "V_e": ve,
            "n_opt": n_opt,
            "schmidt_weight": schmidt(&out).weight,
        },
        "relations": serde_json::to_value(&relations).expect("reports serialize"),
    }))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub const SWEEP_HEADER: &str =
    "param_value,p11,p12,p21,p22,F_contrast,G_contrast,H_contrast,C_P,C_Ix,D,V_e,duality_slack";

fn with_param(base: &MzConfig, param: Param, value: f64) -> MzConfig {
    let mut c = *base;
    match param {
        Param::Delta => c.delta = value,
        Param::Gamma => c.gamma = value,
        Param::Theta => c.theta = value,
    }
    c
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One CSV data row (no trailing newline). `shown` is the parameter as the
/// user supplied it.
pub fn sweep_row(config: &MzConfig, psi: &StateVector2, shown: f64) -> Result<String> {
    let scheme = scheme_for(config);
    let povm = extract_povm(&scheme)?;
    let probs = direct_probabilities(&scheme, psi)?;
    let get = |label: &str| probs.iter().find(|(l, _)| l == label).map(|(_, p)| *p);
    let (p, f, g, h) = if config.experiment.has_marking() {
        (
            [get("11"), get("12"), get("21"), get("22")].map(|x| x.unwrap_or(0.0)),
            Some(contrast(&marginal(&povm, BY_FIRST_INDEX)?)?),
            Some(contrast(&marginal(&povm, BY_SECOND_INDEX)?)?),
            Some(contrast(&marginal(&povm, BY_COINCIDENCE)?)?),
        )
    } else {
        let (d1, d2) = (get("1").unwrap_or(0.0), get("2").unwrap_or(0.0));
        ([d1, 0.0, d2, 0.0], Some(contrast(&povm)?), None, None)
    };
    let probes = config.probes();
    let rho_e = reduced_marked_state(psi, &probes.p1, &probes.p2);
    let ce = contrasts(&rho_e);
    let d = distinguishability(psi, &probes.p1, &probes.p2).d;
    let ve = visibility_reduced(&rho_e).0;
    let slack = erasure_duality(psi, &probes.p1, &probes.p2)?[0].slack;
    let mut row = shown.to_string();
    for x in p {
        let _ = write!(row, ",{x}");
    }
    for x in [f, g, h] {
        let _ = write!(row, ",{}", fmt_opt(x));
    }
    for x in [ce.path, ce.interference_x, d, ve, slack] {
        let _ = write!(row, ",{x}");
    }
    Ok(row)
}

fn sweep(args: &SweepArgs, warn: &mut dyn Write) -> std::result::Result<String, Usage> {
    if args.steps < 2 {
        return Err(Usage(format!("--steps must be at least 2 (got {})", args.steps)));
    }
    if args.steps > MAX_SWEEP_STEPS {
        return Err(Usage(format!("--steps must not exceed {MAX_SWEEP_STEPS}")));
    }
    if !args.from.is_finite() || !args.to.is_finite() || args.from >= args.to {
        return Err(Usage(format!("--from ({}) must be less than --to ({})", args.from, args.to)));
    }
    let (base, psi) = resolve(&args.base, warn)?;
    let n = args.steps;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let shown = args.from + (args.to - args.from) * i as f64 / (n - 1) as f64;
            let value = if args.base.degrees { shown.to_radians() } else { shown };
            sweep_row(&with_param(&base, args.param, value), &psi, shown)
        })
        .collect::<Result<Vec<String>>>()?;
    let mut out = String::with_capacity(rows.len() * 200);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

/// Runs the CLI and returns the process exit code: 0 success, 1 verification
/// failure, 2 usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let _ = writeln!(stderr, "{}", msg.lines().next().unwrap_or("error: invalid arguments"));
            return 2;
        }
    };
    let usage = |stderr: &mut dyn Write, u: Usage| {
        let _ = writeln!(stderr, "error: {}", u.0);
        2
    };
    match cli.command {
        Command::Run(args) => match resolve(&args, stderr) {
            Ok((config, psi)) => match run_report(&config, &psi) {
                Ok(v) => {
                    let _ = stdout.write_all(to_canonical_json(&v).as_bytes());
                    0
                }
                Err(e) => usage(stderr, e.into()),
            },
            Err(u) => usage(stderr, u),
        },
        Command::Sweep(args) => match sweep(&args, stderr) {
            Ok(csv) => {
                let _ = stdout.write_all(csv.as_bytes());
                0
            }
            Err(u) => usage(stderr, u),
        },
        Command::Verify(args) => {
            if args.samples == 0 {
                return usage(stderr, Usage("--samples must be at least 1".into()));
            }
            if !args.tol.is_finite() || args.tol <= 0.0 {
                return usage(stderr, Usage(format!("--tol must be positive (got {})", args.tol)));
            }
            if args.perturb.is_some_and(|p| !p.is_finite()) {
                return usage(stderr, Usage("--perturb must be finite".into()));
            }
            let opts = SuiteOptions {
                seed: args.seed,
                samples: args.samples,
                tol: args.tol,
                perturb: args.perturb,
            };
            let results = run_suite(&opts);
            let _ = stdout.write_all(format_table(&results).as_bytes());
            if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            }
        }
    }
}

pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
