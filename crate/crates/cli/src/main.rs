//! cubirr: exact-arithmetic toolkit for effective irrationality measures of
//! cube roots. Every subcommand writes its results plus a manifest into the
//! output directory; exit codes are 0 pass, 1 check failed, 2 indeterminate
//! or capped, 3 usage.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cubirr_core::{Error, Result};

use config::RunConfig;
use report::Run;

#[derive(Parser)]
#[command(name = "cubirr", version, about = "exact arithmetic for cube-root irrationality measures")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// directory for result files and manifests
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// worker cap for parallel scans
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Chebyshev sums θ, ψ over residue classes up to x_max, block extrema to TSV
    Sieve {
        #[arg(long)]
        xmax: Option<u64>,
        #[arg(long)]
        segment: Option<u64>,
        #[arg(long)]
        block: Option<u64>,
    },
    /// check |θ(y;k,l) − y/φ(k)| and the ψ twin against c·√y up to x_max
    VerifyTheta {
        /// bound constant, at most six decimals (e.g. 1.798158)
        #[arg(long)]
        c: String,
        #[arg(long)]
        modulus: u64,
        /// single residue; defaults to every coprime residue of the modulus
        #[arg(long)]
        residue: Option<u64>,
        #[arg(long)]
        xmax: Option<u64>,
        #[arg(long)]
        segment: Option<u64>,
        #[arg(long)]
        block: Option<u64>,
    },
    /// exact crossover check (c/ε)² ≤ x₀
    Crossover {
        #[arg(long)]
        c: String,
        /// epsilon, at most seven decimals (e.g. 0.0000351)
        #[arg(long)]
        eps: String,
        #[arg(long)]
        x0: u64,
    },
    /// exact vs criterion denominator report, or the full equality scan
    Denoms {
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long)]
        r: Option<u64>,
        /// scan r = 1..=R for criterion/exact mismatches
        #[arg(long, value_name = "R")]
        equality_scan: Option<u64>,
    },
    /// continued fraction of ∛n or ∛(a/b): quotient maximum, checkpointing
    Cf {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        terms: Option<u64>,
        /// resume/save path; defaults under CUBIRR_CACHE_DIR when set
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// also write every partial quotient to TSV (fresh runs only)
        #[arg(long)]
        emit_quotients: bool,
    },
    /// theorem parameters E, Q, κ, c₁ for a pair (a, b)
    Measure {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// also classify the pair against ∛n and scale the constant
        #[arg(long)]
        n: Option<u64>,
    },
    /// sweep the convergents of ∛n below Q1 against the measure
    Verify {
        #[arg(long)]
        n: u64,
        /// defaults to the published value for n
        #[arg(long)]
        c2: Option<String>,
        /// defaults to the published value for n
        #[arg(long)]
        kappa_table: Option<String>,
        #[arg(long, default_value_t = 50)]
        direct_first: u64,
        #[arg(long, default_value_t = 20_000)]
        max_steps: u64,
    },
    /// denominator-ratio scans: exact small mode, log-backed large mode
    ScanRatio {
        #[arg(long)]
        rmax: Option<u64>,
        #[arg(long, default_value = "small")]
        mode: String,
        /// chunked evaluation for long large-mode scans
        #[arg(long)]
        chunk: Option<u64>,
        /// 3^{dr} weight: 0, 1 or 3/2
        #[arg(long, default_value = "3/2")]
        dmode: String,
    },
    /// reproduce the published measure rows from their pairs
    ReportTable1 {
        #[arg(long)]
        n: Option<u64>,
    },
    /// envelope-backed exponent for the decimal-expansion bound
    DrlExponent {
        #[arg(long, default_value_t = 600_000_000)]
        ymax: u64,
        #[arg(long, default_value_t = 200)]
        nmax: u64,
        /// pass/fail threshold for the exponent's upper end
        #[arg(long)]
        below: Option<String>,
    },
    /// scan the feasibility quantity v(a, b) over pairs with a ≤ amax
    Extremal {
        #[arg(long)]
        amax: u64,
    },
    /// approximant polynomials X_r, Y_r and the algebraic identity
    Poly {
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long)]
        r: u64,
        /// rational in (0, 1): check the identity residual at z
        #[arg(long)]
        z: Option<String>,
        /// write coefficient TSVs
        #[arg(long)]
        emit: bool,
    },
}

fn dispatch(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = cli.out_dir {
        cfg.out_dir = dir;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    match &cli.command {
        Cmd::Sieve { xmax, segment, block }
        | Cmd::VerifyTheta { xmax, segment, block, .. } => {
            cfg.x_max = xmax.unwrap_or(cfg.x_max);
            cfg.segment = segment.unwrap_or(cfg.segment);
            cfg.block = block.unwrap_or(cfg.block);
        }
        _ => {}
    }
    cfg.validate()?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();

    let name = match &cli.command {
        Cmd::Sieve { .. } => "sieve",
        Cmd::VerifyTheta { .. } => "verify-theta",
        Cmd::Crossover { .. } => "crossover",
        Cmd::Denoms { .. } => "denoms",
        Cmd::Cf { .. } => "cf",
        Cmd::Measure { .. } => "measure",
        Cmd::Verify { .. } => "verify",
        Cmd::ScanRatio { .. } => "scan-ratio",
        Cmd::ReportTable1 { .. } => "report-table1",
        Cmd::DrlExponent { .. } => "drl-exponent",
        Cmd::Extremal { .. } => "extremal",
        Cmd::Poly { .. } => "poly",
    };
    let mut run = Run::new(name, &cfg)?;
    let pass = match cli.command {
        Cmd::Sieve { .. } => commands::sieve_cmd(&mut run, &cfg)?,
        Cmd::VerifyTheta { c, modulus, residue, .. } => {
            commands::verify_theta(&mut run, &cfg, &c, modulus, residue)?
        }
        Cmd::Crossover { c, eps, x0 } => commands::crossover(&mut run, &c, &eps, x0)?,
        Cmd::Denoms { m, n, r, equality_scan } => {
            commands::denoms_cmd(&mut run, m, n, r, equality_scan)?
        }
        Cmd::Cf { n, a, b, terms, checkpoint, emit_quotients } => {
            commands::cf_cmd(&mut run, &cfg, n, a, b, terms, checkpoint, emit_quotients)?
        }
        Cmd::Measure { a, b, n } => commands::measure(&mut run, &cfg, &a, &b, n)?,
        Cmd::Verify { n, c2, kappa_table, direct_first, max_steps } => commands::verify(
            &mut run,
            &cfg,
            n,
            c2.as_deref(),
            kappa_table.as_deref(),
            direct_first,
            max_steps,
        )?,
        Cmd::ScanRatio { rmax, mode, chunk, dmode } => {
            commands::scan_ratio(&mut run, &cfg, &mode, rmax, chunk, &dmode)?
        }
        Cmd::ReportTable1 { n } => commands::report_table1(&mut run, n)?,
        Cmd::DrlExponent { ymax, nmax, below } => {
            commands::drl_exponent(&mut run, ymax, nmax, below.as_deref())?
        }
        Cmd::Extremal { amax } => commands::extremal(&mut run, amax)?,
        Cmd::Poly { m, n, r, z, emit } => {
            commands::poly(&mut run, &cfg, m, n, r, z.as_deref(), emit)?
        }
    };
    run.finish()?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Indeterminate(_) | Error::Cap(_) => ExitCode::from(2),
                Error::Invariant(_) => ExitCode::from(1),
                _ => ExitCode::from(3),
            }
        }
    }
}
