//! Denominators D_{m,n,r} of the hypergeometric polynomials: exact values by
//! a prime-valuation walk over the coefficients, the congruence criterion
//! that upper-bounds them, the numerator gcd N_r, per-lemma consistency
//! checks, and the two long-range ratio scans.

use crate::error::{Error, Result};
use crate::fixedlog::q40_ln;
use crate::hypergeom::{substitute_affine, x_poly, HGParams};
use crate::interval::{decide, Dyadic, RealInterval};
use crate::primes::{small_primes, Spf};
use crate::valuation::digit_sum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Exact computation refuses r beyond this; the criterion handles the rest.
pub const DEFAULT_EXACT_CAP: u64 = 5000;

/// One admissible exponent i in the valuation criterion, with its window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionWitness {
    pub i: u32,
    pub l: u64,
    /// (l·p^i + m)/n ≤ r mod p^i
    pub lower: BigRational,
    /// r mod p^i ≤ ((n−l)·p^i − m − n)/n
    pub upper: BigRational,
}

/// Exact vs criterion-based denominator data for one parameter triple.
#[derive(Debug, Clone)]
pub struct DenomReport {
    pub params: HGParams,
    pub d_exact: BigInt,
    pub d_criterion: BigInt,
    /// prime → (v_exact, v_criterion); criterion dominates prime-by-prime.
    pub valuations: BTreeMap<u64, (u32, u32)>,
}

/// Criterion count for v_p(D_{m,n,r}): the number of i ≥ 1 with p^i ≤ nr
/// admitting l with (l,n) = 1, l·p^i ≡ −m (mod n), and
/// l·p^i + m ≤ n·(r mod p^i) ≤ (n−l)·p^i − m − n.
pub fn criterion_valuation(p: u64, m: u64, n: u64, r: u64) -> (u32, Vec<CriterionWitness>) {
    use num_integer::Integer;
    if p.gcd(&n) != 1 {
        return (0, Vec::new());
    }
    let mut count = 0u32;
    let mut witnesses = Vec::new();
    let bound = (n as u128) * (r as u128);
    let mut pi: u128 = 1;
    let mut i = 0u32;
    loop {
        pi = pi.saturating_mul(p as u128);
        i += 1;
        if pi > bound {
            break;
        }
        // Unique l in [1, n−1] with l·p^i ≡ −m (mod n); coprimality follows.
        let pin = (pi % n as u128) as u64;
        let l = match (1..n).find(|l| (l * pin + m) % n == 0) {
            Some(l) => l,
            None => continue,
        };
        let residue = (r as u128 % pi) as i128;
        let lhs = (l as i128) * (pi as i128) + m as i128;
        let rhs = (n - l) as i128 * pi as i128 - m as i128 - n as i128;
        if lhs <= n as i128 * residue && n as i128 * residue <= rhs {
            count += 1;
            witnesses.push(CriterionWitness {
                i,
                l,
                lower: BigRational::new(BigInt::from(lhs), BigInt::from(n)),
                upper: BigRational::new(BigInt::from(rhs), BigInt::from(n)),
            });
        }
    }
    (count, witnesses)
}

/// Reusable buffers for the coefficient valuation walk.
struct WalkBuf {
    val: Vec<i32>,
    best: Vec<i32>,
    seen: Vec<bool>,
    touched: Vec<u32>,
    step: Vec<u32>,
}

impl WalkBuf {
    fn new(size: usize) -> Self {
        WalkBuf {
            val: vec![0; size],
            best: vec![0; size],
            seen: vec![false; size],
            touched: Vec::new(),
            step: Vec::new(),
        }
    }

    fn ensure(&mut self, size: usize) {
        if self.val.len() < size {
            self.val.resize(size, 0);
            self.best.resize(size, 0);
            self.seen.resize(size, false);
        }
    }

    fn reset(&mut self) {
        for &p in &self.touched {
            self.val[p as usize] = 0;
            self.best[p as usize] = 0;
            self.seen[p as usize] = false;
        }
        self.touched.clear();
    }
}

/// v_p over h of the coefficient denominators, walked incrementally:
/// the reduced a_{r,h} has denominator valuation
/// max(0, v_p(B_h) − v_p(C(r,h)) − v_p(C_h)), and D is the lcm over h.
fn walk_valuations(params: HGParams, spf: &Spf, buf: &mut WalkBuf) -> BTreeMap<u64, u32> {
    let HGParams { m, n, r } = params;
    buf.ensure((n * r + m + 1) as usize);
    buf.reset();
    for h in 1..=r {
        // B gains (hn − m); C gains ((r−h+1)n + m); C(r,h) multiplies by
        // (r−h+1)/h. Signs follow v_B − v_binom − v_C.
        for (x, sign) in [
            (h * n - m, 1i32),
            (h, 1),
            ((r - h + 1) * n + m, -1),
            (r - h + 1, -1),
        ] {
            for (p, e) in spf.factorize(x) {
                let idx = p as usize;
                if !buf.seen[idx] {
                    buf.seen[idx] = true;
                    buf.touched.push(p as u32);
                }
                buf.val[idx] += sign * e as i32;
                buf.step.push(p as u32);
            }
        }
        for &p in &buf.step {
            let idx = p as usize;
            if buf.val[idx] > buf.best[idx] {
                buf.best[idx] = buf.val[idx];
            }
        }
        buf.step.clear();
    }
    let mut out = BTreeMap::new();
    for &p in &buf.touched {
        let b = buf.best[p as usize];
        if b > 0 {
            out.insert(p as u64, b as u32);
        }
    }
    out
}

/// Exact per-prime valuations of D_{m,n,r}.
pub fn denom_exact_valuations(params: HGParams) -> Result<BTreeMap<u64, u32>> {
    if params.r > DEFAULT_EXACT_CAP {
        return Err(Error::Cap(format!(
            "r = {} exceeds the exact-denominator cap {DEFAULT_EXACT_CAP}; use denom_criterion",
            params.r
        )));
    }
    let spf = Spf::new(params.n * params.r + params.m);
    let mut buf = WalkBuf::new((params.n * params.r + params.m + 1) as usize);
    Ok(walk_valuations(params, &spf, &mut buf))
}

fn product_of(valuations: &BTreeMap<u64, u32>) -> BigInt {
    let mut d = BigInt::one();
    for (&p, &v) in valuations {
        d *= BigInt::from(p).pow(v);
    }
    d
}

/// Exact D_{m,n,r}: the lcm of the reduced coefficient denominators.
pub fn denom_exact(params: HGParams) -> Result<BigInt> {
    Ok(product_of(&denom_exact_valuations(params)?))
}

/// Criterion-based per-prime valuations (an upper bound prime-by-prime).
pub fn denom_criterion_valuations(params: HGParams) -> BTreeMap<u64, u32> {
    let HGParams { m, n, r } = params;
    let mut out = BTreeMap::new();
    for p in small_primes(n * r) {
        let (count, _) = criterion_valuation(p, m, n, r);
        if count > 0 {
            out.insert(p, count);
        }
    }
    out
}

/// ∏ p^{criterion count} over primes p ≤ nr with gcd(p, n) = 1.
pub fn denom_criterion(params: HGParams) -> BigInt {
    product_of(&denom_criterion_valuations(params))
}

/// Exact and criterion denominators side by side.
pub fn denom_report(params: HGParams) -> Result<DenomReport> {
    let exact = denom_exact_valuations(params)?;
    let crit = denom_criterion_valuations(params);
    let mut valuations = BTreeMap::new();
    for (&p, &v) in &exact {
        valuations.insert(p, (v, 0u32));
    }
    for (&p, &v) in &crit {
        valuations.entry(p).or_insert((0, 0)).1 = v;
    }
    Ok(DenomReport {
        params,
        d_exact: product_of(&exact),
        d_criterion: product_of(&crit),
        valuations,
    })
}

/// r values in 1..=r_max where any prime valuation differs between the exact
/// walk and the criterion; empty means observed equality throughout.
pub fn criterion_equality_scan(m: u64, n: u64, r_max: u64) -> Result<Vec<u64>> {
    HGParams::new(m, n, 1)?;
    let spf = Spf::new(n * r_max + m);
    let primes = small_primes(n * r_max);
    let mut buf = WalkBuf::new((n * r_max + m + 1) as usize);
    let mut mismatches = Vec::new();
    for r in 1..=r_max {
        let params = HGParams { m, n, r };
        let exact = walk_valuations(params, &spf, &mut buf);
        let mut ok = true;
        for &p in primes.iter().take_while(|&&p| p <= n * r) {
            let crit = criterion_valuation(p, m, n, r).0;
            let ex = exact.get(&p).copied().unwrap_or(0);
            if ex != crit {
                ok = false;
                break;
            }
        }
        if !ok {
            mismatches.push(r);
        }
    }
    Ok(mismatches)
}

/// N_r: gcd of the numerators of the coefficients of X_{1,3,r}(1 − (a−b)z/a).
pub fn numerator_gcd(a: u64, b: u64, r: u64) -> Result<BigInt> {
    if b == 0 || b >= a {
        return Err(Error::Domain(format!("need 0 < b < a, got a={a}, b={b}")));
    }
    let params = HGParams::new(1, 3, r)?;
    let c = BigRational::new(BigInt::from(a as i64 - b as i64), BigInt::from(a));
    Ok(substitute_affine(&x_poly(params), &c).numerator_gcd())
}

/// One verified statement inside a consistency report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

/// Outcome of checking a denominator against the structural lemmas.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    pub pass: bool,
    pub checks: Vec<ConsistencyCheck>,
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Largest e ≥ 0 with p^e ≤ x.
fn ilog_le(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut acc: u128 = 1;
    loop {
        acc *= p as u128;
        if acc > x as u128 {
            return e;
        }
        e += 1;
    }
}

/// Checks every prime dividing D_{m,n,r} against the valuation caps, the
/// congruence class and window membership (m = 1, n ∈ {3,4,6} only), and the
/// guaranteed-divisor range.
pub fn lemma_consistency(params: HGParams) -> Result<ConsistencyReport> {
    let HGParams { m, n, r } = params;
    let exact = denom_exact_valuations(params)?;
    let nr = n * r;
    let denom3 = m == 1 && matches!(n, 3 | 4 | 6);
    let mut checks = Vec::new();
    let mut push = |label: String, ok: bool, detail: String| {
        checks.push(ConsistencyCheck { label, ok, detail });
    };

    for (&p, &v) in &exact {
        let e_gen = ilog_le(p, nr);
        push(
            format!("cap-gen p={p}"),
            v <= e_gen,
            format!("v_{p} = {v} vs floor(log({nr})/log({p})) = {e_gen}"),
        );
        let crit = criterion_valuation(p, m, n, r).0;
        push(
            format!("criterion-dominates p={p}"),
            v <= crit,
            format!("v_{p} = {v} vs criterion count {crit}"),
        );
        if denom3 {
            push(
                format!("congruence p={p}"),
                p % n == n - 1,
                format!("{p} mod {n} = {} (needs {})", p % n, n - 1),
            );
            let cap3 = (e_gen + 1) / 2;
            push(
                format!("cap-quadratic p={p}"),
                v <= cap3,
                format!("v_{p} = {v} vs floor(log({nr})/(2 log {p}) + 1/2) = {cap3}"),
            );
            if (p as u128).pow(3) > nr as u128 {
                // Window (nr+n+1)/(nA+n−1) ≤ p ≤ (nr−1)/(nA+1) for some A ≥ 0.
                let (pn, ni, nri) = (p as i128 * n as i128, n as i128, nr as i128);
                let a_min = ceil_div(nri + ni + 1 - p as i128 * (ni - 1), pn).max(0);
                let a_max = (nri - 1 - p as i128).div_euclid(pn);
                push(
                    format!("window p={p}"),
                    v == 1 && a_min <= a_max,
                    format!("v_{p} = {v}, admissible A range [{a_min}, {a_max}]"),
                );
            }
        }
    }

    if denom3 {
        // Every prime ≡ n−1 (mod n) above √(nr+1) inside the A = 0 window
        // [(nr+n+1)/(n−1), nr−1] must divide D.
        let lo = ceil_div((nr + n + 1) as i128, (n - 1) as i128) as u64;
        for q in small_primes(nr.saturating_sub(1)) {
            if q % n == n - 1 && q >= lo && (q as u128) * (q as u128) > (nr + 1) as u128 {
                let present = exact.contains_key(&q);
                push(
                    format!("guaranteed-divisor q={q}"),
                    present,
                    format!("prime {q} in [{lo}, {}] must divide D", nr - 1),
                );
            }
        }
    }

    let pass = checks.iter().all(|c| c.ok);
    Ok(ConsistencyReport { m, n, r, pass, checks })
}

/// Result of the small ratio scan: min over r of 0.29·D_r²/(r^{1/6}·4^r).
#[derive(Debug, Clone)]
pub struct SmallScan {
    pub argmin: u64,
    pub min: RealInterval,
}

/// Enclosure of r^{1/6} via nested roots.
fn sixth_root(r: u64, prec: u64) -> Result<RealInterval> {
    RealInterval::from_int(r as i64).sqrt(prec).map(|iv| iv.cbrt(prec))
}

/// Minimum of 0.29·D_r²/(r^{1/6}·4^r) over 1 ≤ r ≤ r_max for (m,n) = (1,3),
/// with exact D via the valuation walk. Comparisons straddling the fast log
/// window are settled by an exact sixth-power rational comparison.
pub fn scan_ratio_small(r_max: u64) -> Result<SmallScan> {
    if r_max == 0 {
        return Err(Error::Domain("scan needs r_max >= 1".into()));
    }
    if r_max > DEFAULT_EXACT_CAP {
        return Err(Error::Cap(format!("scan_ratio_small capped at {DEFAULT_EXACT_CAP}")));
    }
    let spf = Spf::new(3 * r_max + 1);
    let mut buf = WalkBuf::new((3 * r_max + 2) as usize);

    // value(r) = Q_r·r^{−1/6}, Q_r = 29·D_r²/(100·4^r); compare candidates by
    // ln with 2⁻⁴⁰ bookkeeping, exact fallback Q_a⁶·r_b <?> Q_b⁶·r_a.
    let (ln29_lo, ln29_hi) = q40w(29);
    let (ln100_lo, ln100_hi) = q40w(100);
    let (ln4_lo, ln4_hi) = q40w(4);

    struct Cand {
        r: u64,
        q: BigRational,
        lo: i128,
        hi: i128,
    }
    let mut best: Option<Cand> = None;

    for r in 1..=r_max {
        let vals = walk_valuations(HGParams { m: 1, n: 3, r }, &spf, &mut buf);
        let (mut lnd_lo, mut lnd_hi) = (0u128, 0u128);
        for (&p, &v) in &vals {
            let (l, h) = q40w(p);
            lnd_lo += v as u128 * l;
            lnd_hi += v as u128 * h;
        }
        let (lnr_lo, lnr_hi) = q40w(r);
        let lo = ln29_lo as i128 + 2 * lnd_lo as i128
            - ln100_hi as i128
            - (r as u128 * ln4_hi) as i128
            - (lnr_hi / 6 + 1) as i128;
        let hi = ln29_hi as i128 + 2 * lnd_hi as i128
            - ln100_lo as i128
            - (r as u128 * ln4_lo) as i128
            - (lnr_lo / 6) as i128;
        let cand = || -> Cand {
            let d = product_of(&vals);
            let q = BigRational::new(
                BigInt::from(29) * &d * &d,
                BigInt::from(100) * (BigInt::one() << (2 * r)),
            );
            Cand { r, q, lo, hi }
        };
        match &best {
            None => best = Some(cand()),
            Some(b) => {
                if hi < b.lo {
                    best = Some(cand());
                } else if lo <= b.hi {
                    // Straddle: value(r) < value(b) ⟺ Q_r⁶·r_b < Q_b⁶·r_r.
                    let c = cand();
                    let lhs = c.q.clone().pow(6i32) * BigRational::from(BigInt::from(b.r));
                    let rhs = b.q.clone().pow(6i32) * BigRational::from(BigInt::from(c.r));
                    if lhs < rhs {
                        best = Some(c);
                    }
                }
            }
        }
    }

    let b = best.unwrap();
    let prec = 128;
    let q_iv = RealInterval::from_rational(&b.q, prec)?;
    let min = q_iv.div(&sixth_root(b.r, prec)?, prec)?;
    Ok(SmallScan { argmin: b.r, min })
}

fn q40w(x: u64) -> (u128, u128) {
    let (lo, hi) = q40_ln(x);
    (lo as u128, hi as u128)
}

/// Which N_r lower bound the large scan divides out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DMode {
    /// d = 0: N_r ≥ 1.
    Zero,
    /// d = 1: N_r ≥ 3^r, cancelling 3^{dr} exactly.
    One,
    /// d = 3/2: N_r ≥ 3^{r+v₃(r!)}, leaving the 3^{s₃(r)/2} residue.
    ThreeHalves,
}

/// Running maxima of term₁ = 3^{dr}·D_r/(N_r^{lb}·e^{0.911r}) and
/// term₂ = term₁·(1/3)⋯(r+1/3)/r!, with D criterion-based.
#[derive(Debug, Clone)]
pub struct LargeScan {
    pub argmax1: u64,
    pub argmax2: u64,
    pub max1: RealInterval,
    pub max2: RealInterval,
    /// ln enclosures at scale 2⁻⁴⁰ backing the exact comparisons.
    pub max1_ln_q40: (i128, i128),
    pub max2_ln_q40: (i128, i128),
    /// r where either term exceeded 95% of its target constant.
    pub flagged: Vec<u64>,
}

impl LargeScan {
    /// Certifies max₁ < mant·10^{exp10} (both terms via ln comparison).
    pub fn max1_below_sci(&self, mant: u64, exp10: u32) -> bool {
        self.max1_ln_q40.1 < sci_ln_lo(mant, exp10)
    }

    pub fn max2_below_sci(&self, mant: u64, exp10: u32) -> bool {
        self.max2_ln_q40.1 < sci_ln_lo(mant, exp10)
    }

    /// Certifies max₁ > mant·10^{exp10}.
    pub fn max1_exceeds_sci(&self, mant: u64, exp10: u32) -> bool {
        self.max1_ln_q40.0 > sci_ln_hi(mant, exp10)
    }

    pub fn max2_exceeds_sci(&self, mant: u64, exp10: u32) -> bool {
        self.max2_ln_q40.0 > sci_ln_hi(mant, exp10)
    }
}

fn sci_ln_lo(mant: u64, exp10: u32) -> i128 {
    (q40w(mant).0 + exp10 as u128 * q40w(10).0) as i128
}

fn sci_ln_hi(mant: u64, exp10: u32) -> i128 {
    (q40w(mant).1 + exp10 as u128 * q40w(10).1) as i128
}

/// Shared context for the large scan: primes ≡ 2 (mod 3) with ln prefix sums.
struct ScanCtx {
    primes: Vec<u64>,
    pre_lo: Vec<u128>,
    pre_hi: Vec<u128>,
    d_mode: DMode,
}

impl ScanCtx {
    fn new(r_max: u64, d_mode: DMode) -> Self {
        let primes: Vec<u64> = small_primes(3 * r_max)
            .into_iter()
            .filter(|&p| p % 3 == 2)
            .collect();
        let mut pre_lo = Vec::with_capacity(primes.len() + 1);
        let mut pre_hi = Vec::with_capacity(primes.len() + 1);
        pre_lo.push(0u128);
        pre_hi.push(0u128);
        for &p in &primes {
            let (l, h) = q40w(p);
            pre_lo.push(pre_lo.last().unwrap() + l);
            pre_hi.push(pre_hi.last().unwrap() + h);
        }
        ScanCtx { primes, pre_lo, pre_hi, d_mode }
    }

    /// Factor layout of the criterion D_r: index ranges of large primes
    /// (v = 1, from the per-A windows) plus explicit small-prime powers.
    fn d_ranges(&self, r: u64) -> (Vec<(usize, usize)>, Vec<(u64, u32)>) {
        let three_r = 3 * r;
        // Smallest integer with cube above 3r: primes ≥ c are "large".
        let mut c = (three_r as f64).cbrt() as u64;
        while c * c * c <= three_r {
            c += 1;
        }
        while c > 1 && (c - 1) * (c - 1) * (c - 1) > three_r {
            c -= 1;
        }
        let mut ranges = Vec::new();
        let mut a = 0u64;
        loop {
            let hi = (three_r - 1) / (3 * a + 1);
            if hi < c {
                break;
            }
            let lo = ((three_r + 4) + (3 * a + 1)) / (3 * a + 2); // ceil
            let lo = lo.max(c);
            if lo <= hi {
                let start = self.primes.partition_point(|&p| p < lo);
                let end = self.primes.partition_point(|&p| p <= hi);
                if start < end {
                    ranges.push((start, end));
                }
            }
            a += 1;
        }
        let mut small = Vec::new();
        for &p in &self.primes {
            if p >= c {
                break;
            }
            let v = criterion_valuation(p, 1, 3, r).0;
            if v > 0 {
                small.push((p, v));
            }
        }
        (ranges, small)
    }

    fn lnd(&self, r: u64) -> (u128, u128) {
        let (ranges, small) = self.d_ranges(r);
        let mut lo = 0u128;
        let mut hi = 0u128;
        for (s, e) in ranges {
            lo += self.pre_lo[e] - self.pre_lo[s];
            hi += self.pre_hi[e] - self.pre_hi[s];
        }
        for (p, v) in small {
            let (l, h) = q40w(p);
            lo += v as u128 * l;
            hi += v as u128 * h;
        }
        (lo, hi)
    }

    fn d_big(&self, r: u64) -> BigInt {
        let (ranges, small) = self.d_ranges(r);
        let mut d = BigInt::one();
        for (s, e) in ranges {
            for &p in &self.primes[s..e] {
                d *= BigInt::from(p);
            }
        }
        for (p, v) in small {
            d *= BigInt::from(p).pow(v);
        }
        d
    }

    /// 3-exponent contributed by 3^{dr}/N_r^{lb} under the active mode, ×2.
    fn twice_mode_exp(&self, r: u64) -> u64 {
        match self.d_mode {
            DMode::Zero | DMode::One => 0,
            DMode::ThreeHalves => digit_sum(r, 3),
        }
    }

    /// Exact order of value(r_a) vs value(r_b) for term 1 or term 2.
    fn cmp_exact(&self, ra: u64, rb: u64, term2: bool) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if ra == rb {
            return Ordering::Equal;
        }
        // value² ratio: (D_b²·3^{s_b}·G_b²)/(D_a²·3^{s_a}·G_a²) vs e^{1.822(b−a)}.
        let da = self.d_big(ra);
        let db = self.d_big(rb);
        let mut num = &db * &db * BigInt::from(3).pow(self.twice_mode_exp(rb) as u32);
        let mut den = &da * &da * BigInt::from(3).pow(self.twice_mode_exp(ra) as u32);
        if term2 {
            // G_r = ∏_{j=0}^{r}(3j+1) / (3^{r+1}·r!), squared into the ratio.
            let g = |r: u64| -> (BigInt, BigInt) {
                let mut p = BigInt::one();
                let mut f = BigInt::one();
                for j in 1..=r {
                    p *= BigInt::from(3 * j + 1);
                    f *= BigInt::from(j);
                }
                (p, f * BigInt::from(3).pow(r as u32 + 1))
            };
            let (pb, qb) = g(rb);
            let (pa, qa) = g(ra);
            num *= &pb * &pb * &qa * &qa;
            den *= &pa * &pa * &qb * &qb;
        }
        let ratio = BigRational::new(num, den);
        // ln(ratio) vs 1.822·(rb − ra): transcendence of e^q separates them.
        let target = BigRational::new(
            BigInt::from(911) * (BigInt::from(rb) - BigInt::from(ra)),
            BigInt::from(500),
        );
        decide(
            |prec| RealInterval::from_rational(&ratio, prec)?.ln(prec),
            |iv| {
                let t = RealInterval::from_rational(&target, 4096).ok()?;
                if t.strictly_below(iv) {
                    Some(Ordering::Greater) // value(rb) > value(ra)
                } else if iv.strictly_below(&t) {
                    Some(Ordering::Less)
                } else {
                    None
                }
            },
        )
        .unwrap_or(Ordering::Less)
    }
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    r: u64,
    lo: i128,
    hi: i128,
}

fn merge_cand(ctx: &ScanCtx, cur: Option<Cand>, new: Cand, term2: bool) -> Cand {
    match cur {
        None => new,
        Some(b) => {
            if new.lo > b.hi {
                new
            } else if new.hi <= b.lo {
                b
            } else if ctx.cmp_exact(b.r, new.r, term2) == std::cmp::Ordering::Greater {
                new
            } else {
                b
            }
        }
    }
}

/// Large ratio scan with the default chunk width.
pub fn scan_ratio_large(r_max: u64, d_mode: DMode) -> Result<LargeScan> {
    scan_ratio_large_chunked(r_max, d_mode, 4096)
}

/// Deterministic chunked scan: each chunk re-seeds its running factorial
/// logs, chunks merge by exact-value maxima, so any chunk width agrees.
pub fn scan_ratio_large_chunked(r_max: u64, d_mode: DMode, chunk: u64) -> Result<LargeScan> {
    if r_max == 0 || chunk == 0 {
        return Err(Error::Domain("scan needs r_max >= 1 and chunk >= 1".into()));
    }
    let ctx = ScanCtx::new(r_max, d_mode);
    let (ln3_lo, ln3_hi) = q40w(3);
    // Flag thresholds: 95% of 1.161e39 and of 1.176e40.
    let flag1 = sci_ln_lo(110295, 34); // 0.95·1.161e39 = 110295·10^34
    let flag2 = sci_ln_lo(11172, 36); // 0.95·1.176e40 = 11172·10^36

    struct ChunkOut {
        cand1: Option<Cand>,
        cand2: Option<Cand>,
        flagged: Vec<u64>,
    }

    let starts: Vec<u64> = (1..=r_max).step_by(chunk as usize).collect();
    let outs: Vec<ChunkOut> = starts
        .par_iter()
        .map(|&r0| {
            let r1 = (r0 + chunk - 1).min(r_max);
            // Seed Σ ln(3j+1) and Σ ln j for j < r0.
            let (mut lnp_lo, mut lnp_hi) = (0u128, 0u128);
            let (mut lnfact_lo, mut lnfact_hi) = (0u128, 0u128);
            for j in 1..r0 {
                let (a, b) = q40w(3 * j + 1);
                lnp_lo += a;
                lnp_hi += b;
                let (c, d) = q40w(j);
                lnfact_lo += c;
                lnfact_hi += d;
            }
            let mut out = ChunkOut { cand1: None, cand2: None, flagged: Vec::new() };
            for r in r0..=r1 {
                let (a, b) = q40w(3 * r + 1);
                lnp_lo += a;
                lnp_hi += b;
                let (c, d) = q40w(r);
                lnfact_lo += c;
                lnfact_hi += d;

                let (dlo, dhi) = ctx.lnd(r);
                let s2 = ctx.twice_mode_exp(r);
                let e911 = (r as u128) * 911;
                let e_lo = (e911 << 40) / 1000;
                let e_hi = e_lo + if (e911 << 40) % 1000 == 0 { 0 } else { 1 };
                let l1_lo =
                    dlo as i128 + ((s2 as u128 * ln3_lo) / 2) as i128 - e_hi as i128;
                let l1_hi =
                    dhi as i128 + ((s2 as u128 * ln3_hi + 1) / 2) as i128 - e_lo as i128;
                let g_lo = lnp_lo as i128
                    - ((r + 1) as u128 * ln3_hi) as i128
                    - lnfact_hi as i128;
                let g_hi = lnp_hi as i128
                    - ((r + 1) as u128 * ln3_lo) as i128
                    - lnfact_lo as i128;
                let l2_lo = l1_lo + g_lo;
                let l2_hi = l1_hi + g_hi;

                out.cand1 = Some(merge_cand(&ctx, out.cand1, Cand { r, lo: l1_lo, hi: l1_hi }, false));
                out.cand2 = Some(merge_cand(&ctx, out.cand2, Cand { r, lo: l2_lo, hi: l2_hi }, true));
                if l1_hi >= flag1 || l2_hi >= flag2 {
                    out.flagged.push(r);
                }
            }
            out
        })
        .collect();

    let mut cand1: Option<Cand> = None;
    let mut cand2: Option<Cand> = None;
    let mut flagged = Vec::new();
    for o in outs {
        if let Some(c) = o.cand1 {
            cand1 = Some(merge_cand(&ctx, cand1, c, false));
        }
        if let Some(c) = o.cand2 {
            cand2 = Some(merge_cand(&ctx, cand2, c, true));
        }
        flagged.extend(o.flagged);
    }
    let c1 = cand1.unwrap();
    let c2 = cand2.unwrap();
    Ok(LargeScan {
        argmax1: c1.r,
        argmax2: c2.r,
        max1: exp_of_q40(c1.lo, c1.hi)?,
        max2: exp_of_q40(c2.lo, c2.hi)?,
        max1_ln_q40: (c1.lo, c1.hi),
        max2_ln_q40: (c2.lo, c2.hi),
        flagged,
    })
}

fn exp_of_q40(lo: i128, hi: i128) -> Result<RealInterval> {
    let iv = RealInterval {
        lo: Dyadic::new(BigInt::from(lo), -40),
        hi: Dyadic::new(BigInt::from(hi), -40),
    };
    iv.exp(128)
}
