use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use nccalc_cli::{render_markdown, run_eval, run_verify, Fault, VerifyOptions};
use nccalc_core::algebra::AlgebraId;
use nccalc_core::oracle::{self, MatrixRep};

#[derive(Parser)]
#[command(name = "nccalc", version, about = "Levi-Civita connections and curvature on the noncommutative torus and 3-sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Torus,
    Sphere,
}

impl From<Target> for AlgebraId {
    fn from(t: Target) -> Self {
        match t {
            Target::Torus => AlgebraId::Torus,
            Target::Sphere => AlgebraId::Sphere,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(clap::Args)]
struct RepArgs {
    /// Deformation parameter as `p/N`; q = exp(2 pi i p / N).
    #[arg(long)]
    theta: Option<String>,
    /// Matrix dimension N (with p = 1 unless --theta is given).
    #[arg(long)]
    dim: Option<u32>,
    /// Value of |Z|^2 in the sphere representation, e.g. `1/3` or `0.25`.
    #[arg(long)]
    lambda2: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a calculus, solve for its connection and curvature, and check everything.
    Verify {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        rep: RepArgs,
        /// Operator-norm tolerance for the numeric checks.
        #[arg(long, default_value_t = oracle::DEFAULT_TOL)]
        tol: f64,
        /// Corrupt one stage on purpose (negate-R1212, flip-gamma311,
        /// perturb-gamma123, imaginary-gamma311, non-hermitian-metric).
        #[arg(long)]
        inject_fault: Option<String>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Print the normal form of an expression.
    Eval {
        expr: String,
        #[arg(long, value_enum, default_value = "sphere")]
        target: Target,
        #[command(flatten)]
        rep: RepArgs,
    },
}

fn parse_theta(s: &str) -> anyhow::Result<(u32, u32)> {
    let (p, n) = s.split_once('/').context("--theta must look like p/N")?;
    Ok((p.trim().parse()?, n.trim().parse()?))
}

fn parse_real(s: &str) -> anyhow::Result<f64> {
    match s.split_once('/') {
        Some((a, b)) => Ok(a.trim().parse::<f64>()? / b.trim().parse::<f64>()?),
        None => Ok(s.trim().parse()?),
    }
}

/// `None` when no representation flag was given.
fn reps_from(args: &RepArgs, alg: AlgebraId) -> anyhow::Result<Option<Vec<MatrixRep>>> {
    if args.theta.is_none() && args.dim.is_none() && args.lambda2.is_none() {
        return Ok(None);
    }
    let thetas = match (&args.theta, args.dim) {
        (Some(t), dim) => {
            let (p, n) = parse_theta(t)?;
            if dim.is_some_and(|d| d != n) {
                bail!("--dim {} disagrees with --theta {t}", dim.unwrap_or_default());
            }
            vec![(p, n)]
        }
        (None, Some(n)) => vec![(1, n)],
        (None, None) => oracle::DEFAULT_THETAS.to_vec(),
    };
    let lambda2 = match &args.lambda2 {
        Some(l) => vec![parse_real(l)?],
        None => oracle::DEFAULT_LAMBDA2.iter().map(|&(a, b)| a as f64 / b as f64).collect(),
    };
    Ok(Some(oracle::reps_for(alg, &thetas, &lambda2)?))
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Verify { target, format, out, rep, tol, inject_fault, timing } => {
            let alg = AlgebraId::from(target);
            let mut opts = VerifyOptions::new(alg);
            if let Some(reps) = reps_from(&rep, alg)? {
                opts.reps = reps;
            }
            opts.tol = tol;
            opts.timing = timing;
            opts.fault = inject_fault.map(|f| f.parse::<Fault>()).transpose().map_err(anyhow::Error::msg)?;
            let report = run_verify(&opts).map_err(anyhow::Error::msg)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Md => render_markdown(&report),
            };
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            if let Some(f) = &report.first_failure {
                eprintln!("verification failed: {f}");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { expr, target, rep } => {
            let alg = AlgebraId::from(target);
            let reps = reps_from(&rep, alg)?;
            let text = run_eval(&expr, alg, reps.as_ref().and_then(|r| r.first()))?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
