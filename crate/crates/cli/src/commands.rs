//! One function per subcommand. Each returns pass/fail for the exit code;
//! anything indeterminate or capped propagates as an error.

use std::path::PathBuf;

use cubirr_core::cf::{CfRun, CfSource};
use cubirr_core::denoms::{self, DMode};
use cubirr_core::hypergeom::{self, HGParams};
use cubirr_core::measures::{self, MeasureStatus, Scaling};
use cubirr_core::sieve;
use cubirr_core::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::config::{parse_positive, parse_scaled, RunConfig};
use crate::report::{dyadic_rational, interval_json, print_value, write_tsv, Run};

fn emit(run: &mut Run, name: &str, value: &Value) -> Result<()> {
    run.write_json(name, value)?;
    print_value(value);
    Ok(())
}

pub fn sieve_cmd(run: &mut Run, cfg: &RunConfig) -> Result<bool> {
    let stats = sieve::accumulate(cfg.x_max, cfg.segment, cfg.block)?;
    let name = format!("sieve_stats_{}.tsv", cfg.x_max);
    write_tsv(run, &name, |w| sieve::write_block_stats_tsv(&stats, w))?;
    let pi = stats.blocks.last().map(|b| b.pi).unwrap_or(0);
    let value = json!({
        "x_max": stats.x_max,
        "segment": stats.segment,
        "block": stats.block,
        "blocks": stats.blocks.len(),
        "pi_x_max": pi,
        "stats_tsv": name,
    });
    emit(run, "sieve.json", &value)?;
    Ok(true)
}

pub fn verify_theta(run: &mut Run, cfg: &RunConfig, c: &str, modulus: u64, residue: Option<u64>) -> Result<bool> {
    let c_scaled = parse_scaled(c, 6)?;
    if c_scaled <= 0 {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    let classes: Vec<(u64, u64)> = match residue {
        Some(l) => vec![(modulus, l)],
        None => sieve::SLOT_CLASSES
            .iter()
            .copied()
            .filter(|&(k, l)| k == modulus && l.gcd(&k) == 1)
            .collect(),
    };
    if classes.is_empty() {
        return Err(Error::Domain(format!("modulus {modulus} is not tracked")));
    }
    let stats = sieve::accumulate(cfg.x_max, cfg.segment, cfg.block)?;
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (k, l) in classes {
        let v = sieve::verify_sqrt_bound(&stats, k, l, c_scaled)?;
        all_pass &= v.pass;
        rows.push(json!({
            "k": k,
            "l": l,
            "pass": v.pass,
            "worst_scaled_1e6": v.worst_scaled,
            "worst_at": v.worst_at,
        }));
    }
    let value = json!({
        "x_max": cfg.x_max,
        "c": c,
        "classes": rows,
        "pass": all_pass,
    });
    emit(run, "verify_theta.json", &value)?;
    Ok(all_pass)
}

pub fn crossover(run: &mut Run, c: &str, eps: &str, x0: u64) -> Result<bool> {
    let c6 = parse_scaled(c, 6)?;
    let e7 = parse_scaled(eps, 7)?;
    if c6 <= 0 || e7 <= 0 {
        return Err(Error::Domain("c and eps must be positive".into()));
    }
    let pass = sieve::crossover_check(c6 as u64, e7 as u64, x0);
    let value = json!({ "c": c, "eps": eps, "x0": x0, "pass": pass });
    emit(run, "crossover.json", &value)?;
    Ok(pass)
}

pub fn denoms_cmd(run: &mut Run, m: u64, n: u64, r: Option<u64>, equality_scan: Option<u64>) -> Result<bool> {
    match (r, equality_scan) {
        (Some(r), None) => {
            let report = denoms::denom_report(HGParams::new(m, n, r)?)?;
            let valuations: Vec<Value> = report
                .valuations
                .iter()
                .map(|(p, (ve, vc))| json!({ "p": p, "exact": ve, "criterion": vc }))
                .collect();
            let value = json!({
                "m": m,
                "n": n,
                "r": r,
                "d_exact": report.d_exact.to_string(),
                "d_criterion": report.d_criterion.to_string(),
                "equal": report.d_exact == report.d_criterion,
                "valuations": valuations,
            });
            emit(run, "denoms.json", &value)?;
            Ok(true)
        }
        (None, Some(r_max)) => {
            let mismatches = denoms::criterion_equality_scan(m, n, r_max)?;
            let value = json!({
                "m": m,
                "n": n,
                "r_max": r_max,
                "mismatches": mismatches,
                "pass": mismatches.is_empty(),
            });
            let pass = mismatches.is_empty();
            emit(run, "denoms_scan.json", &value)?;
            Ok(pass)
        }
        _ => Err(Error::Domain("pass exactly one of --r or --equality-scan".into())),
    }
}

fn cf_source_tag(source: &CfSource) -> String {
    match source {
        CfSource::Integer(n) => format!("n{n}"),
        CfSource::Ratio(a, b) => format!("r{a}_{b}"),
    }
}

fn same_source(a: &CfSource, b: &CfSource) -> bool {
    match (a, b) {
        (CfSource::Integer(x), CfSource::Integer(y)) => x == y,
        (CfSource::Ratio(x1, x2), CfSource::Ratio(y1, y2)) => x1 == y1 && x2 == y2,
        _ => false,
    }
}

pub fn cf_cmd(
    run: &mut Run,
    cfg: &RunConfig,
    n: Option<u64>,
    a: Option<u64>,
    b: Option<u64>,
    terms: Option<u64>,
    checkpoint: Option<PathBuf>,
    emit_quotients: bool,
) -> Result<bool> {
    let source = match (n, a, b) {
        (Some(n), None, None) => CfSource::Integer(n),
        (None, Some(a), Some(b)) => CfSource::Ratio(a, b),
        _ => return Err(Error::Domain("pass --n, or --a with --b".into())),
    };
    let terms = terms.unwrap_or(cfg.cf_terms);
    let ckpt = checkpoint
        .or_else(|| cfg.cf_checkpoint.clone())
        .or_else(|| {
            std::env::var_os("CUBIRR_CACHE_DIR")
                .map(|d| PathBuf::from(d).join(format!("cf_{}.ckpt", cf_source_tag(&source))))
        });

    let mut walk = match &ckpt {
        Some(p) if p.exists() => {
            let loaded = CfRun::load(p)?;
            if !same_source(&loaded.source, &source) {
                return Err(Error::Domain(format!(
                    "checkpoint {} holds a different expansion",
                    p.display()
                )));
            }
            loaded
        }
        _ => CfRun::new(source)?,
    };
    let resumed_at = walk.produced();
    if emit_quotients && resumed_at > 0 {
        return Err(Error::Domain("--emit-quotients needs a fresh run, not a checkpoint resume".into()));
    }

    let mut quotients = Vec::new();
    while walk.produced() < terms {
        let q = walk.step()?;
        if emit_quotients {
            quotients.push(q);
        }
    }
    if let Some(p) = &ckpt {
        if let Some(dir) = p.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        walk.save(p)?;
    }

    if emit_quotients {
        let name = format!("cf_{}_quotients.tsv", cf_source_tag(&walk.source));
        write_tsv(run, &name, |w| {
            use std::io::Write;
            writeln!(w, "i\ta_i")?;
            for (i, q) in quotients.iter().enumerate() {
                writeln!(w, "{i}\t{q}")?;
            }
            Ok(())
        })?;
    }

    let (max_a, argmax) = walk.max_quotient();
    let value = json!({
        "source": cf_source_tag(&walk.source),
        "terms": walk.produced(),
        "resumed_at": resumed_at,
        "max_a": max_a.to_string(),
        "argmax": argmax,
        "q_digits_lb": walk.q_digits_lb(),
        "checkpoint": ckpt.as_ref().map(|p| p.display().to_string()),
    });
    emit(run, "cf.json", &value)?;
    Ok(true)
}

fn dmode_str(d: DMode) -> &'static str {
    match d {
        DMode::Zero => "0",
        DMode::One => "1",
        DMode::ThreeHalves => "3/2",
    }
}

fn status_str(s: &MeasureStatus) -> &'static str {
    match s {
        MeasureStatus::Measure => "measure",
        MeasureStatus::LiouvilleFallback => "liouville-fallback",
        MeasureStatus::Inapplicable => "inapplicable",
    }
}

fn scaling_json(s: &Scaling) -> Value {
    match s {
        Scaling::CaseI { s, t } => json!({ "case": "i", "s": s.to_string(), "t": t.to_string() }),
        Scaling::CaseII { s, t } => json!({ "case": "ii", "s": s.to_string(), "t": t.to_string() }),
        Scaling::Unscaled => json!({ "case": "unscaled" }),
    }
}

pub fn measure(run: &mut Run, cfg: &RunConfig, a: &str, b: &str, n: Option<u64>) -> Result<bool> {
    let bad = |s: &str| Error::Domain(format!("cannot parse {s:?} as an integer"));
    let a: BigInt = a.parse().map_err(|_| bad(a))?;
    let b: BigInt = b.parse().map_err(|_| bad(b))?;
    let p = measures::theorem_params(&a, &b)?;
    let mut value = json!({
        "a": a.to_string(),
        "b": b.to_string(),
        "d": dmode_str(p.d),
        "status": status_str(&p.status),
        "e": interval_json(&p.e),
        "q": interval_json(&p.q),
        "kappa": p.kappa.as_ref().map(interval_json),
        "c1": p.c1.as_ref().map(interval_json),
        "c1_no_a": p.c1_no_a.as_ref().map(interval_json),
    });
    if let Some(n) = n {
        let scaling = measures::classify_scaling(n, &a, &b)?;
        value["scaling"] = scaling_json(&scaling);
        if !matches!(scaling, Scaling::Unscaled) {
            if let (Some(c1), Some(kappa)) = (p.c1.as_ref(), p.kappa.as_ref()) {
                let c = measures::scaled_constant(n, c1, kappa, &scaling, cfg.prec)?;
                value["c_scaled"] = interval_json(&c);
            }
            if let (Some(c1), Some(kappa)) = (p.c1_no_a.as_ref(), p.kappa.as_ref()) {
                let c = measures::scaled_constant(n, c1, kappa, &scaling, cfg.prec)?;
                value["c_scaled_no_a"] = interval_json(&c);
            }
        }
    }
    emit(run, "measure.json", &value)?;
    Ok(true)
}

pub fn verify(
    run: &mut Run,
    cfg: &RunConfig,
    n: u64,
    c2: Option<&str>,
    kappa_table: Option<&str>,
    direct_first: u64,
    max_steps: u64,
) -> Result<bool> {
    let t4 = measures::table4_row(n)
        .ok_or_else(|| Error::Domain(format!("no published pair for n = {n}")))?;
    let t1 = measures::table1_row(n).unwrap();
    let c2 = match c2 {
        Some(s) => parse_positive(s)?,
        None => t1.c2(),
    };
    let kt = match kappa_table {
        Some(s) => parse_positive(s)?,
        None => t1.kappa_table(),
    };
    let (a, b) = (t4.a(), t4.b());
    let p = measures::theorem_params(&a, &b)?;
    let kappa = p
        .kappa
        .as_ref()
        .ok_or_else(|| Error::Domain(format!("pair ({a}, {b}) is not applicable")))?;
    let scaling = measures::classify_scaling(n, &a, &b)?;
    let c = measures::scaled_constant(n, p.c1.as_ref().unwrap(), kappa, &scaling, cfg.prec)?;
    let rec = measures::corollary_verify(n, &c2, &kt, kappa, &c, direct_first, max_steps)?;
    let value = json!({
        "n": n,
        "a": a.to_string(),
        "b": b.to_string(),
        "c2": c2.to_string(),
        "kappa_table": kt.to_string(),
        "scaling": scaling_json(&scaling),
        "q1_ln": interval_json(&rec.q1_ln),
        "q2": interval_json(&rec.q2),
        "checked": rec.checked,
        "direct_checked": rec.direct_checked,
        "shortcut_checked": rec.shortcut_checked,
        "max_quotient": { "a_i": rec.max_quotient.0.to_string(), "i": rec.max_quotient.1 },
        "steps": rec.steps,
        "q_digits_lb": rec.q_digits_lb,
        "failures": rec.failures,
        "pass": rec.pass,
    });
    emit(run, "verify.json", &value)?;
    Ok(rec.pass)
}

pub fn scan_ratio(run: &mut Run, cfg: &RunConfig, mode: &str, rmax: Option<u64>, chunk: Option<u64>, dmode: &str) -> Result<bool> {
    match mode {
        "small" => {
            let r_max = rmax.unwrap_or(cfg.r_max_small);
            let scan = denoms::scan_ratio_small(r_max)?;
            let value = json!({
                "mode": "small",
                "r_max": r_max,
                "argmin": scan.argmin,
                "min": interval_json(&scan.min),
            });
            emit(run, "scan_ratio_small.json", &value)?;
            Ok(true)
        }
        "large" => {
            let r_max = rmax.unwrap_or(cfg.r_max_large);
            let d = match dmode {
                "0" => DMode::Zero,
                "1" => DMode::One,
                "3/2" | "1.5" => DMode::ThreeHalves,
                other => return Err(Error::Domain(format!("dmode must be 0, 1 or 3/2, got {other}"))),
            };
            let scan = match chunk {
                Some(c) => denoms::scan_ratio_large_chunked(r_max, d, c)?,
                None => denoms::scan_ratio_large(r_max, d)?,
            };
            let below_k0 = scan.max1_below_sci(1161, 36);
            let below_l0 = scan.max2_below_sci(1176, 37);
            let value = json!({
                "mode": "large",
                "r_max": r_max,
                "d": dmode_str(d),
                "argmax1": scan.argmax1,
                "max1": interval_json(&scan.max1),
                "argmax2": scan.argmax2,
                "max2": interval_json(&scan.max2),
                "flagged": scan.flagged,
                "below_1161e36": below_k0,
                "below_1176e37": below_l0,
            });
            emit(run, "scan_ratio_large.json", &value)?;
            Ok(below_k0 && below_l0)
        }
        other => Err(Error::Domain(format!("mode must be small or large, got {other}"))),
    }
}

pub fn report_table1(run: &mut Run, n: Option<u64>) -> Result<bool> {
    let rows: Vec<&measures::Table4Row> = match n {
        Some(n) => vec![measures::table4_row(n)
            .ok_or_else(|| Error::Domain(format!("no published pair for n = {n}")))?],
        None => measures::TABLE4.iter().collect(),
    };
    let mut out = Vec::new();
    let mut all_pass = true;
    for row in rows {
        let t1 = measures::table1_row(row.n).unwrap();
        let (a, b) = (row.a(), row.b());
        let p = measures::theorem_params(&a, &b)?;
        let scaling = measures::classify_scaling(row.n, &a, &b)?;
        let below = match p.kappa.as_ref() {
            Some(k) => dyadic_rational(&k.hi) < t1.kappa_table(),
            None => false,
        };
        let ok = below && p.status == MeasureStatus::Measure;
        all_pass &= ok;
        out.push(json!({
            "n": row.n,
            "a": a.to_string(),
            "b": b.to_string(),
            "c2": t1.c2().to_string(),
            "kappa_table": format!("{}.{:04}", t1.kappa_e4 / 10_000, t1.kappa_e4 % 10_000),
            "kappa": p.kappa.as_ref().map(interval_json),
            "status": status_str(&p.status),
            "scaling": scaling_json(&scaling),
            "below_table": below,
        }));
    }
    let value = json!({ "rows": out, "pass": all_pass });
    emit(run, "report_table1.json", &value)?;
    Ok(all_pass)
}

pub fn drl_exponent(run: &mut Run, y_max: u64, n_max: u64, below: Option<&str>) -> Result<bool> {
    let points = sieve::drl_points(y_max, n_max);
    let table = sieve::envelope(&points, y_max)?;
    let exp = sieve::drl_exponent(n_max, &table)?;
    let pass = match below {
        Some(s) => dyadic_rational(&exp.hi) <= parse_positive(s)?,
        None => true,
    };
    let value = json!({
        "y_max": y_max,
        "n_max": n_max,
        "exponent": interval_json(&exp),
        "below": below,
        "pass": pass,
    });
    emit(run, "drl_exponent.json", &value)?;
    Ok(pass)
}

pub fn extremal(run: &mut Run, a_max: u64) -> Result<bool> {
    let scan = measures::extremal_scan(a_max)?;
    let value = json!({
        "a_max": scan.a_max,
        "feasible": scan.feasible,
        "arg": [scan.arg.0, scan.arg.1],
        "max": interval_json(&scan.max),
    });
    emit(run, "extremal.json", &value)?;
    Ok(true)
}

pub fn poly(run: &mut Run, cfg: &RunConfig, m: u64, n: u64, r: u64, z: Option<&str>, emit_tsv: bool) -> Result<bool> {
    let params = HGParams::new(m, n, r)?;
    let x = hypergeom::x_poly(params);
    let y = hypergeom::y_poly(params);
    if emit_tsv {
        let xname = format!("x_poly_{m}_{n}_{r}.tsv");
        write_tsv(run, &xname, |w| x.write_tsv(w))?;
        let yname = format!("y_poly_{m}_{n}_{r}.tsv");
        write_tsv(run, &yname, |w| y.write_tsv(w))?;
    }
    let mut pass = true;
    let mut value = json!({
        "m": m,
        "n": n,
        "r": r,
        "x_degree": x.degree(),
        "y_degree": y.degree(),
    });
    if let Some(zs) = z {
        let z = parse_positive(zs)?;
        if z >= BigRational::one() {
            return Err(Error::Domain(format!("z must lie in (0, 1), got {zs}")));
        }
        let residual = hypergeom::check_identity(params, &z, cfg.prec)?;
        pass = residual.contains_zero();
        value["identity"] = json!({
            "z": z.to_string(),
            "residual": interval_json(&residual),
            "contains_zero": pass,
        });
    }
    emit(run, "poly.json", &value)?;
    Ok(pass)
}
