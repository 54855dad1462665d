//! `khinchin`: sharp constants, moments, verification suites and sweeps.
//!
//! Exit codes: 0 success, 1 a check or computation failed, 2 bad input,
//! 3 moment engines disagree.

mod output;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use khinchin::khinchin::constants;
use khinchin::moments::{density, moment_density, moment_fourier_with, moment_mc, MCConfig};
use khinchin::npverify::{h_integral, i_p};
use khinchin::renyi::{renyi_entropy, shannon_entropy};
use khinchin::{Error, QuadratureResult, Weights};
use output::{num, write_atomic, Csv, RunManifest};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "khinchin", version, about = "Sharp Khinchin constants for sums of uniforms")]
struct Cli {
    /// Write a JSON run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print c_p and C_p with the formulas used.
    Constants {
        #[arg(short, long, allow_negative_numbers = true)]
        p: f64,
    },
    /// E|Σ a_j U_j|^p for the normalized weights.
    Moment {
        #[arg(short, long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        weights: Vec<f64>,
        #[arg(short, long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, value_enum, default_value_t = Engine::Fourier)]
        engine: Engine,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Target error of the Fourier engine.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// CSV output instead of the table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Restrict p-indexed suites (sign-change, phi, sandwich) to one p.
        #[arg(short, long)]
        p: Option<f64>,
        /// Weights for the sandwich suite.
        #[arg(short, long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// JSON array of reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a quantity over p as CSV `p,value,err_bound`.
    Sweep {
        #[arg(value_enum)]
        quantity: Quantity,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// s for H and I.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Weights for moment and entropy.
        #[arg(short, long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Engine for the moment sweep (fourier or density).
        #[arg(long, value_enum, default_value_t = Engine::Fourier)]
        engine: Engine,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Fourier,
    Density,
    Mc,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    #[value(name = "H")]
    H,
    #[value(name = "I")]
    I,
    Moment,
    Entropy,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Failed(String),
    Disagree(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Disagree(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Weights(_) | Error::Size { .. } => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Deterministic engines must agree this closely.
const AGREEMENT: f64 = 1e-5;

fn cmd_constants(p: f64) -> Result<(), CliError> {
    let c = constants(p)?;
    let (lo, hi) = c.formulas();
    let tag = serde_json::to_value(c.regime_tag).unwrap();
    println!("p       {}", c.p);
    println!("regime  {}", tag.as_str().unwrap_or_default());
    println!("c_p     {:.12}   {lo}", c.c_p);
    println!("C_p     {:.12}   {hi}", c.C_p);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_moment(
    raw: &[f64],
    p: f64,
    engine: Engine,
    seed: u64,
    samples: u64,
    tol: f64,
    out: Option<&Path>,
) -> Result<Option<PathBuf>, CliError> {
    let w = Weights::new(raw)?;
    let want = |e: Engine| engine == e || engine == Engine::All;
    let mut rows: Vec<(&str, f64, f64)> = Vec::new();
    if want(Engine::Fourier) {
        let r = moment_fourier_with(&w, p, tol)?;
        rows.push(("fourier", r.value, r.err_bound));
    }
    if want(Engine::Density) {
        let r = moment_density(&w, p)?;
        rows.push(("density", r.value, r.err_bound));
    }
    if want(Engine::Mc) {
        let r = moment_mc(&w, p, &MCConfig::new(samples, seed)?)?;
        rows.push(("mc", r.estimate, r.stderr));
    }

    let mut csv = Csv::new(&["engine", "p", "value", "err_bound"]);
    for (name, v, e) in &rows {
        csv.row(&[name.to_string(), num(p), num(*v), num(*e)]);
    }
    let written = if out.is_some() {
        csv.emit(out)?
    } else {
        // Echo in input order; the engines use the sorted canonical form.
        let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
        let shown: Vec<String> = raw.iter().map(|a| format!("{:.6}", a.abs() / norm)).collect();
        println!("weights  ({})", shown.join(", "));
        println!("p        {p}");
        for (name, v, e) in &rows {
            let label = if *name == "mc" { "stderr" } else { "err" };
            println!("{name:<8} {v:.9}   {label} {e:.2e}");
        }
        None
    };

    check_agreement(&rows)?;
    Ok(written)
}

/// Deterministic engines agree to AGREEMENT with the first of them; Monte
/// Carlo within four standard errors on top of that.
fn check_agreement(rows: &[(&str, f64, f64)]) -> Result<(), CliError> {
    let Some(first) = rows.iter().find(|r| r.0 != "mc") else {
        return Ok(());
    };
    for r in rows {
        let gap = (r.1 - first.1).abs();
        let allowed = if r.0 == "mc" { AGREEMENT + 4.0 * r.2 } else { AGREEMENT };
        if gap > allowed {
            return Err(CliError::Disagree(format!(
                "{} = {} and {} = {} differ by {gap:.3e} (allowed {allowed:.1e})",
                first.0, first.1, r.0, r.1
            )));
        }
    }
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    p: Option<f64>,
    weights: Option<&[f64]>,
    out: Option<&Path>,
) -> Result<Option<PathBuf>, CliError> {
    let w = weights.map(Weights::new).transpose()?;
    if let Some(p) = p {
        let ok = match suite {
            Suite::Phi => p > 0.0 && p < 2.0,
            _ => p > 0.0 && p < 1.0,
        };
        if !ok {
            return Err(CliError::Input(format!("--p {p} is outside the range of suite {suite:?}")));
        }
    }
    let reports = suites::run(suite, p, w.as_ref());
    for r in &reports {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("{verdict}  {:<36} min_margin {:>12.4e}  ({} points)", r.lemma_id, r.min_margin, r.grid.points);
    }
    let written = match out {
        Some(path) => {
            let json = serde_json::to_vec_pretty(&reports).map_err(|e| CliError::Failed(e.to_string()))?;
            write_atomic(path, &json)?;
            Some(path.to_path_buf())
        }
        None => None,
    };
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} checks failed", reports.len())));
    }
    println!("all {} checks passed", reports.len());
    Ok(written)
}

/// from, from + step, … up to `to` inclusive (with a little rounding room).
fn p_range(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(CliError::Input(format!("empty range: from {from} to {to}")));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::Input(format!("step {step} must be positive")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::Input(format!("{} points is too many", n + 1)));
    }
    Ok((0..=n).map(|k| from + k as f64 * step).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    q: Quantity,
    from: f64,
    to: f64,
    step: f64,
    s: f64,
    weights: Option<&[f64]>,
    engine: Engine,
    tol: f64,
    out: Option<&Path>,
) -> Result<Option<PathBuf>, CliError> {
    let ps = p_range(from, to, step)?;
    let w = match (q, weights) {
        (Quantity::Moment | Quantity::Entropy, None) => {
            return Err(CliError::Input("moment and entropy sweeps need --weights".into()))
        }
        (_, Some(raw)) => Some(Weights::new(raw)?),
        (_, None) => None,
    };
    if q == Quantity::Moment && !matches!(engine, Engine::Fourier | Engine::Density) {
        return Err(CliError::Input("moment sweeps use --engine fourier or density".into()));
    }
    let d = match (q, &w) {
        (Quantity::Entropy, Some(w)) => Some(density(w)?),
        _ => None,
    };
    let point = |p: f64| -> Result<QuadratureResult, Error> {
        match q {
            Quantity::H => h_integral(p, s),
            Quantity::I => i_p(s, p),
            Quantity::Moment => {
                let w = w.as_ref().unwrap();
                match engine {
                    Engine::Density => moment_density(w, p),
                    _ => moment_fourier_with(w, p, tol),
                }
            }
            Quantity::Entropy => {
                let d = d.as_ref().unwrap();
                let r = if p == 1.0 { shannon_entropy(d)? } else { renyi_entropy(d, p)? };
                Ok(QuadratureResult {
                    value: r.value,
                    err_bound: r.err_bound,
                    blocks_used: 0,
                })
            }
        }
    };
    let values: Vec<QuadratureResult> = ps.par_iter().map(|&p| point(p)).collect::<Result<_, _>>()?;
    let mut csv = Csv::new(&["p", "value", "err_bound"]);
    for (p, r) in ps.iter().zip(&values) {
        csv.row(&[num(*p), num(r.value), num(r.err_bound)]);
    }
    csv.emit(out)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("KHINCHIN_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("KHINCHIN_THREADS={v} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let started = Instant::now();
    let (name, seed, written) = match &cli.cmd {
        Cmd::Constants { p } => {
            cmd_constants(*p)?;
            ("constants", None, None)
        }
        Cmd::Moment {
            weights,
            p,
            engine,
            seed,
            samples,
            tol,
            out,
        } => {
            let uses_seed = matches!(engine, Engine::Mc | Engine::All);
            let w = cmd_moment(weights, *p, *engine, *seed, *samples, *tol, out.as_deref())?;
            ("moment", uses_seed.then_some(*seed), w)
        }
        Cmd::Verify { suite, p, weights, out } => {
            let w = cmd_verify(*suite, *p, weights.as_deref(), out.as_deref())?;
            ("verify", None, w)
        }
        Cmd::Sweep {
            quantity,
            from,
            to,
            step,
            s,
            weights,
            engine,
            tol,
            out,
        } => {
            let w = cmd_sweep(*quantity, *from, *to, *step, *s, weights.as_deref(), *engine, *tol, out.as_deref())?;
            ("sweep", None, w)
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest::new(name, seed, started, written.into_iter().collect());
        let json = serde_json::to_vec_pretty(&m).map_err(|e| CliError::Failed(e.to_string()))?;
        write_atomic(path, &json)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = match &e {
                CliError::Input(m) | CliError::Failed(m) | CliError::Disagree(m) => m,
            };
            eprintln!("khinchin: {msg}");
            ExitCode::from(e.code())
        }
    }
}
