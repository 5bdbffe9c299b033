//! Run configuration: key=value file, command-line overrides, numeric
//! parsing helpers shared by the subcommands.

use std::path::{Path, PathBuf};

use cubirr_core::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub x_max: u64,
    pub segment: u64,
    pub block: u64,
    pub cf_terms: u64,
    pub cf_checkpoint: Option<PathBuf>,
    pub r_max_small: u64,
    pub r_max_large: u64,
    pub prec: u64,
    pub out_dir: PathBuf,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            x_max: 10_000_000,
            segment: 1_000_000,
            block: 1_000_000,
            cf_terms: 1000,
            cf_checkpoint: None,
            r_max_small: 200,
            r_max_large: 2500,
            prec: 256,
            out_dir: PathBuf::from("out"),
            jobs: 1,
        }
    }
}

impl RunConfig {
    /// Reads a key=value file; blank lines and #-comments are skipped,
    /// unknown keys rejected.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Domain(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| -> Result<u64> {
            v.parse::<u64>().map_err(|_| Error::Domain(format!("bad integer {v:?} for {key}")))
        };
        match key {
            "x_max" => self.x_max = int(value)?,
            "segment" => self.segment = int(value)?,
            "block" => self.block = int(value)?,
            "cf_terms" => self.cf_terms = int(value)?,
            "cf_checkpoint" => self.cf_checkpoint = Some(PathBuf::from(value)),
            "r_max_small" => self.r_max_small = int(value)?,
            "r_max_large" => self.r_max_large = int(value)?,
            "prec" => self.prec = int(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "jobs" => self.jobs = int(value)? as usize,
            other => return Err(Error::Domain(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("x_max", self.x_max),
            ("segment", self.segment),
            ("block", self.block),
            ("cf_terms", self.cf_terms),
            ("r_max_small", self.r_max_small),
            ("r_max_large", self.r_max_large),
            ("prec", self.prec),
            ("jobs", self.jobs as u64),
        ] {
            if v == 0 {
                return Err(Error::Domain(format!("{name} must be positive")));
            }
        }
        if self.block % self.segment != 0 {
            return Err(Error::Domain(format!(
                "block {} must be a multiple of segment {}",
                self.block, self.segment
            )));
        }
        Ok(())
    }
}

/// Accepts "3/4", "0.25", "1e-12", "2.5e3" or a plain integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Domain(format!("cannot parse {s:?} as a rational"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { return Err(bad()) } else { digits.parse().map_err(|_| bad())? };
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * ten.pow(shift as u32))
    } else {
        BigRational::new(n, ten.pow((-shift) as u32))
    })
}

/// Parses a decimal and scales it by 10^scale; the result must be an
/// integer (the sieve constants live on fixed 10⁻⁶/10⁻⁷ grids).
pub fn parse_scaled(s: &str, scale: u32) -> Result<i64> {
    let v = parse_rational(s)? * BigRational::from_integer(BigInt::from(10).pow(scale));
    if !v.is_integer() {
        return Err(Error::Domain(format!("{s} has more than {scale} decimal places")));
    }
    v.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Domain(format!("{s} out of range at scale 10^-{scale}")))
}

/// Parses a rational and requires it positive.
pub fn parse_positive(s: &str) -> Result<BigRational> {
    let v = parse_rational(s)?;
    if !v.is_positive() {
        return Err(Error::Domain(format!("{s} must be positive")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(
            parse_rational("1e-12").unwrap(),
            BigRational::new(1.into(), BigInt::from(10).pow(12))
        );
        assert_eq!(parse_rational("2.5e3").unwrap(), BigRational::from_integer(2500.into()));
        assert_eq!(parse_rational("17").unwrap(), BigRational::from_integer(17.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn scaled_parse_is_exact() {
        assert_eq!(parse_scaled("1.798158", 6).unwrap(), 1_798_158);
        assert_eq!(parse_scaled("0.0000351", 7).unwrap(), 351);
        assert!(parse_scaled("1.7981585", 6).is_err());
    }

    #[test]
    fn config_file_roundtrip() {
        let dir = std::env::temp_dir().join("cubirr-cfg-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "x_max = 500\nsegment = 50\nblock = 100 # comment\n\njobs = 2\n").unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!((cfg.x_max, cfg.segment, cfg.block, cfg.jobs), (500, 50, 100, 2));
        cfg.validate().unwrap();

        std::fs::write(&path, "block = 150\nsegment = 100\n").unwrap();
        assert!(RunConfig::from_file(&path).unwrap().validate().is_err());
        std::fs::write(&path, "nope = 1\n").unwrap();
        assert!(RunConfig::from_file(&path).is_err());
    }
}
