//! Artifact plumbing: JSON rendering of core types, result files, and the
//! per-run manifest written beside every output.

use std::path::PathBuf;
use std::time::Instant;

use cubirr_core::{Dyadic, RealInterval, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Exact rational value of a dyadic mant·2^exp.
pub fn dyadic_rational(d: &Dyadic) -> BigRational {
    if d.exp >= 0 {
        BigRational::from_integer(d.mant.clone() << d.exp as u64)
    } else {
        BigRational::new(d.mant.clone(), BigInt::one() << (-d.exp) as u64)
    }
}

/// {"lo", "hi", "approx"}: endpoint f64s round toward the interval, the
/// midpoint approximation is display-only.
pub fn interval_json(iv: &RealInterval) -> Value {
    json!({
        "lo": iv.lo.approx_f64(),
        "hi": iv.hi.approx_f64(),
        "approx": iv.approx_f64(),
    })
}

pub struct Run {
    command: String,
    cfg: RunConfig,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl Run {
    pub fn new(command: &str, cfg: &RunConfig) -> Result<Self> {
        std::fs::create_dir_all(&cfg.out_dir)?;
        Ok(Run {
            command: command.to_string(),
            cfg: cfg.clone(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    /// Writes pretty JSON with a trailing newline and records the artifact.
    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<PathBuf> {
        let path = self.out_path(name);
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| cubirr_core::Error::Format(e.to_string()))?;
        text.push('\n');
        std::fs::write(&path, text)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn record(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    /// Echo of the effective config, result paths, version and wall time;
    /// reruns differ only in wall_ms.
    pub fn finish(self) -> Result<()> {
        let manifest = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": {
                "x_max": self.cfg.x_max,
                "segment": self.cfg.segment,
                "block": self.cfg.block,
                "cf_terms": self.cfg.cf_terms,
                "cf_checkpoint": self.cfg.cf_checkpoint.as_ref().map(|p| p.display().to_string()),
                "r_max_small": self.cfg.r_max_small,
                "r_max_large": self.cfg.r_max_large,
                "prec": self.cfg.prec,
                "out_dir": self.cfg.out_dir.display().to_string(),
                "jobs": self.cfg.jobs,
            },
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "wall_ms": self.started.elapsed().as_millis() as u64,
        });
        let path = self.cfg.out_dir.join(format!("{}.manifest.json", self.command));
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| cubirr_core::Error::Format(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

pub fn print_value(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).unwrap_or_else(|_| value.to_string()));
}

/// Records a TSV artifact produced through a writer callback.
pub fn write_tsv(run: &mut Run, name: &str, f: impl FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<()>) -> Result<PathBuf> {
    let path = run.out_path(name);
    let file = std::fs::File::create(&path)?;
    let mut w = std::io::BufWriter::new(file);
    f(&mut w)?;
    use std::io::Write;
    w.flush()?;
    run.record(path.clone());
    Ok(path)
}
