//! Segmented Chebyshev sieve over residue classes: θ(x;k,l) and ψ(x;k,l)
//! accumulated in directed 10⁻⁶ fixed point, per-block statistics with
//! rigorous deviation extrema, √x-deviation verification, the θ(y;3,2)/y
//! envelope, and the exponent sum bounding the large-prime denominator part.
//!
//! Deviation bookkeeping relies on θ and ψ being step functions: on a run of
//! integers with no jump the deviation (f(y) − y/φ(k))/√y is strictly
//! decreasing, so per-block extrema are exact once evaluated at jump points,
//! pre-jump points, and block boundaries.

use crate::error::{Error, Result};
use crate::fixedlog::fixed_log;
use crate::interval::RealInterval;
use crate::primes::small_primes;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::io::Write;
use std::path::Path;

pub const DEFAULT_SEGMENT: u64 = 10_000_000;
pub const DEFAULT_BLOCK: u64 = 100_000_000;
pub const MODULI: [u64; 4] = [1, 3, 4, 6];
/// All residue classes per modulus, ramified ones included, so prime-power
/// mass is conserved across each modulus.
pub const SLOT_CLASSES: [(u64, u64); 14] = [
    (1, 0),
    (3, 0),
    (3, 1),
    (3, 2),
    (4, 0),
    (4, 1),
    (4, 2),
    (4, 3),
    (6, 0),
    (6, 1),
    (6, 2),
    (6, 3),
    (6, 4),
    (6, 5),
];
const SLOT_OFFSET: [usize; 4] = [0, 1, 4, 8];

fn phi(k: u64) -> u64 {
    match k {
        1 => 1,
        3 | 4 | 6 => 2,
        _ => unreachable!("untracked modulus"),
    }
}

fn slot_of(k_idx: usize, l: u64) -> usize {
    SLOT_OFFSET[k_idx] + l as usize
}

fn slot_lookup(k: u64, l: u64) -> Option<usize> {
    SLOT_CLASSES.iter().position(|&c| c == (k, l))
}

fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as u64;
    while (s as u128) * (s as u128) > n as u128 {
        s -= 1;
    }
    while ((s + 1) as u128) * ((s + 1) as u128) <= n as u128 {
        s += 1;
    }
    s
}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Enclosure of 10⁶·√y so deviation denominators carry √y to relative
/// precision 10⁻⁶ at every y, not just large ones.
fn sqrt6(y: u64) -> (u128, u128) {
    let r = isqrt_u128(y as u128 * 1_000_000_000_000);
    (r, r + 1)
}

fn ceil_div_i128(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Bounds on 10⁶·(S/10⁶ − y/φ)/√y = (Sφ − 10⁶y)/(φ√y), with √y replaced by
/// its 10⁶-scaled enclosure in the direction matching each numerator's sign.
fn dev_bounds(s_lo: i64, s_hi: i64, y: u64, phi: u64, sq: (u128, u128)) -> (i64, i64) {
    let (r_lo, r_hi) = sq;
    let num_hi = (s_hi as i128 * phi as i128 - y as i128 * 1_000_000) * 1_000_000;
    let num_lo = (s_lo as i128 * phi as i128 - y as i128 * 1_000_000) * 1_000_000;
    let ub = ceil_div_i128(num_hi, phi as i128 * if num_hi >= 0 { r_lo } else { r_hi } as i128);
    let lb = num_lo.div_euclid(phi as i128 * if num_lo >= 0 { r_hi } else { r_lo } as i128);
    (lb as i64, ub as i64)
}

/// Two-sided enclosure of a block deviation extremum; `at` locates the
/// candidate attaining the outward bound.
#[derive(Debug, Clone, Copy)]
pub struct DevBound {
    pub lb: i64,
    pub ub: i64,
    pub at: u64,
}

impl DevBound {
    fn new_max() -> Self {
        DevBound { lb: i64::MIN, ub: i64::MIN, at: 0 }
    }

    fn new_min() -> Self {
        DevBound { lb: i64::MAX, ub: i64::MAX, at: 0 }
    }

    fn update_max(&mut self, lb: i64, ub: i64, y: u64) {
        if ub > self.ub {
            self.ub = ub;
            self.at = y;
        }
        if lb > self.lb {
            self.lb = lb;
        }
    }

    fn update_min(&mut self, lb: i64, ub: i64, y: u64) {
        if lb < self.lb {
            self.lb = lb;
            self.at = y;
        }
        if ub < self.ub {
            self.ub = ub;
        }
    }
}

/// Cumulative sums and deviation extrema of one residue class over one block.
#[derive(Debug, Clone)]
pub struct ClassBlock {
    pub k: u64,
    pub l: u64,
    pub theta_lo: i64,
    pub theta_hi: i64,
    pub psi_lo: i64,
    pub psi_hi: i64,
    pub max_theta: DevBound,
    pub min_theta: DevBound,
    pub max_psi: DevBound,
    pub min_psi: DevBound,
}

#[derive(Debug, Clone)]
pub struct BlockRecord {
    pub index: u64,
    /// Block covers (block_size·(index−1), end].
    pub end: u64,
    /// Cumulative prime count π(end).
    pub pi: u64,
    pub classes: Vec<ClassBlock>,
}

#[derive(Debug, Clone)]
pub struct SieveStats {
    pub x_max: u64,
    pub segment: u64,
    pub block: u64,
    pub blocks: Vec<BlockRecord>,
}

#[derive(Clone, Copy, Default)]
struct Acc {
    th_lo: i64,
    th_hi: i64,
    ps_lo: i64,
    ps_hi: i64,
}

struct Walk {
    accs: [Acc; 14],
    pi: u64,
    block_size: u64,
    blocks: Vec<BlockRecord>,
}

impl Walk {
    fn new(x_max: u64, block: u64) -> Self {
        let nblocks = x_max.div_ceil(block);
        let blocks = (1..=nblocks)
            .map(|i| BlockRecord {
                index: i,
                end: (i * block).min(x_max),
                pi: 0,
                classes: SLOT_CLASSES
                    .iter()
                    .map(|&(k, l)| ClassBlock {
                        k,
                        l,
                        theta_lo: 0,
                        theta_hi: 0,
                        psi_lo: 0,
                        psi_hi: 0,
                        max_theta: DevBound::new_max(),
                        min_theta: DevBound::new_min(),
                        max_psi: DevBound::new_max(),
                        min_psi: DevBound::new_min(),
                    })
                    .collect(),
            })
            .collect();
        Walk { accs: [Acc::default(); 14], pi: 0, block_size: block, blocks }
    }

    fn touch_slot(&mut self, slot: usize, y: u64, sq: (u128, u128)) {
        let acc = self.accs[slot];
        let ph = phi(SLOT_CLASSES[slot].0);
        let (tlb, tub) = dev_bounds(acc.th_lo, acc.th_hi, y, ph, sq);
        let (plb, pub_) = dev_bounds(acc.ps_lo, acc.ps_hi, y, ph, sq);
        let idx = ((y + self.block_size - 1) / self.block_size - 1) as usize;
        let cb = &mut self.blocks[idx].classes[slot];
        cb.max_theta.update_max(tlb, tub, y);
        cb.min_theta.update_min(tlb, tub, y);
        cb.max_psi.update_max(plb, pub_, y);
        cb.min_psi.update_min(plb, pub_, y);
    }

    fn touch_all(&mut self, y: u64) {
        let sq = sqrt6(y);
        for slot in 0..14 {
            self.touch_slot(slot, y, sq);
        }
    }

    fn event(&mut self, y: u64, p: u64, is_prime: bool) -> Result<()> {
        let lg = fixed_log(p)?;
        let sq_pre = sqrt6(y - 1);
        let sq_at = sqrt6(y);
        for (k_idx, &k) in MODULI.iter().enumerate() {
            let l = if k == 1 { 0 } else { y % k };
            let slot = slot_of(k_idx, l);
            if y > 1 {
                self.touch_slot(slot, y - 1, sq_pre);
            }
            let acc = &mut self.accs[slot];
            if is_prime {
                acc.th_lo += lg.lo;
                acc.th_hi += lg.hi;
            }
            acc.ps_lo += lg.lo;
            acc.ps_hi += lg.hi;
            self.touch_slot(slot, y, sq_at);
        }
        if is_prime {
            self.pi += 1;
        }
        Ok(())
    }

    fn flush_block(&mut self, end: u64, x_max: u64) {
        self.touch_all(end);
        let idx = ((end + self.block_size - 1) / self.block_size - 1) as usize;
        self.blocks[idx].pi = self.pi;
        for slot in 0..14 {
            let cb = &mut self.blocks[idx].classes[slot];
            cb.theta_lo = self.accs[slot].th_lo;
            cb.theta_hi = self.accs[slot].th_hi;
            cb.psi_lo = self.accs[slot].ps_lo;
            cb.psi_hi = self.accs[slot].ps_hi;
        }
        if end < x_max {
            self.touch_all(end + 1);
        }
    }
}

fn sieve_into(buf: &mut Vec<u8>, lo: u64, hi: u64, base: &[u64]) {
    let len = (hi - lo) as usize;
    buf.clear();
    buf.resize(len, 0);
    for &p in base {
        if p * p > hi {
            break;
        }
        let mut m = ((lo + 1).div_ceil(p) * p).max(p * p);
        while m <= hi {
            buf[(m - lo - 1) as usize] = 1;
            m += p;
        }
    }
}

/// Primes in (lo, hi]. The base slice must contain every prime up to √hi.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let s = isqrt(hi);
    let b = base.last().copied().unwrap_or(1);
    if b < s {
        for q in b + 1..=s {
            assert!(
                base.iter().take_while(|&&p| p * p <= q).any(|&p| q % p == 0),
                "base primes must cover sqrt(hi)"
            );
        }
    }
    let mut buf = Vec::new();
    sieve_into(&mut buf, lo, hi, base);
    (lo + 1..=hi).filter(|&n| n >= 2 && buf[(n - lo - 1) as usize] == 0).collect()
}

fn power_events(base: &[u64], x_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for &p in base {
        let mut y = p as u128 * p as u128;
        while y <= x_max as u128 {
            out.push((y as u64, p));
            y *= p as u128;
        }
    }
    out.sort_unstable();
    out
}

/// Sweeps 1..=x_max once, accumulating every modulus and recording per-block
/// statistics. ψ gets fixed_log(p) at every p^j ≤ x_max in class p^j mod k,
/// θ at primes only.
pub fn accumulate(x_max: u64, segment: u64, block: u64) -> Result<SieveStats> {
    if x_max < 2 || segment < 16 || block % segment != 0 {
        return Err(Error::Domain(format!(
            "need x_max >= 2, segment >= 16, block multiple of segment; got {x_max}/{segment}/{block}"
        )));
    }
    // ψ(x) < 1.04x for all x, so scaled hi-sums stay below 1.1·10⁶·x.
    if x_max as u128 * 1_100_000 > 1u128 << 62 {
        return Err(Error::Cap(format!("10^6-scaled accumulators would overflow i64 at x_max={x_max}")));
    }
    let base = small_primes(isqrt(x_max));
    let powers = power_events(&base, x_max);
    let mut pp = 0usize;
    let mut walk = Walk::new(x_max, block);
    walk.touch_all(1);
    let mut buf = Vec::new();
    let mut lo = 0u64;
    while lo < x_max {
        let hi = (lo + segment).min(x_max);
        sieve_into(&mut buf, lo, hi, &base);
        for n in lo + 1..=hi {
            if n >= 2 && buf[(n - lo - 1) as usize] == 0 {
                while pp < powers.len() && powers[pp].0 < n {
                    walk.event(powers[pp].0, powers[pp].1, false)?;
                    pp += 1;
                }
                walk.event(n, n, true)?;
            }
        }
        while pp < powers.len() && powers[pp].0 <= hi {
            walk.event(powers[pp].0, powers[pp].1, false)?;
            pp += 1;
        }
        if hi % block == 0 || hi == x_max {
            walk.flush_block(hi, x_max);
        }
        lo = hi;
    }
    Ok(SieveStats { x_max, segment, block, blocks: walk.blocks })
}

pub fn accumulate_default(x_max: u64) -> Result<SieveStats> {
    let block = if x_max >= DEFAULT_BLOCK { DEFAULT_BLOCK } else { x_max };
    let segment = DEFAULT_SEGMENT.min(block);
    accumulate(x_max, segment, block)
}

/// Outcome of the √x-deviation verification for one class.
#[derive(Debug, Clone, Copy)]
pub struct SqrtVerdict {
    pub pass: bool,
    /// Largest certified |deviation| bound, scale 10⁻⁶.
    pub worst_scaled: i64,
    pub worst_at: u64,
}

/// Checks max(|θ(y;k,l) − y/φ(k)|, |ψ(y;k,l) − y/φ(k)|) ≤ c·√y for every
/// y ≤ x_max against the recorded extrema; c is given at scale 10⁻⁶. The
/// verdict uses the outward bounds, so pass and fail are both rigorous; a
/// straddle reports Indeterminate with the offending location.
pub fn verify_sqrt_bound(stats: &SieveStats, k: u64, l: u64, c_scaled: i64) -> Result<SqrtVerdict> {
    let slot = slot_lookup(k, l)
        .ok_or_else(|| Error::Domain(format!("class ({k},{l}) not tracked")))?;
    let mut worst_ub = 0i64;
    let mut worst_lb = 0i64;
    let mut at_ub = 0u64;
    let mut at_lb = 0u64;
    for b in &stats.blocks {
        let cb = &b.classes[slot];
        for (ub, lb, at_hi, at_lo) in [
            (cb.max_theta.ub, cb.max_theta.lb, cb.max_theta.at, cb.max_theta.at),
            (cb.max_psi.ub, cb.max_psi.lb, cb.max_psi.at, cb.max_psi.at),
            (-cb.min_theta.lb, -cb.min_theta.ub, cb.min_theta.at, cb.min_theta.at),
            (-cb.min_psi.lb, -cb.min_psi.ub, cb.min_psi.at, cb.min_psi.at),
        ] {
            if ub > worst_ub {
                worst_ub = ub;
                at_ub = at_hi;
            }
            if lb > worst_lb {
                worst_lb = lb;
                at_lb = at_lo;
            }
        }
    }
    if worst_ub <= c_scaled {
        return Ok(SqrtVerdict { pass: true, worst_scaled: worst_ub, worst_at: at_ub });
    }
    if worst_lb > c_scaled {
        return Ok(SqrtVerdict { pass: false, worst_scaled: worst_lb, worst_at: at_lb });
    }
    Err(Error::Indeterminate(format!(
        "deviation enclosure [{worst_lb}, {worst_ub}]·10⁻⁶ straddles c at y={at_ub} for ({k},{l})"
    )))
}

/// Exact check of (c/ε)² ≤ x₀ with c at scale 10⁻⁶ and ε at scale 10⁻⁷.
pub fn crossover_check(c_scaled6: u64, eps_scaled7: u64, x0: u64) -> bool {
    (c_scaled6 as u128).pow(2) * 100 <= (eps_scaled7 as u128).pow(2) * x0 as u128
}

/// First y ≥ from where θ(y;k,l) or ψ(y;k,l) reaches (num/den)·y, or None if
/// the strict bound holds up to x_max. Uses hi-sums, so None is rigorous.
pub fn linear_bound_check(
    x_max: u64,
    k: u64,
    l: u64,
    num: u64,
    den: u64,
    from: u64,
) -> Result<Option<u64>> {
    slot_lookup(k, l).ok_or_else(|| Error::Domain(format!("class ({k},{l}) not tracked")))?;
    let base = small_primes(isqrt(x_max));
    let powers = power_events(&base, x_max);
    let mut pp = 0usize;
    let (mut th_hi, mut ps_hi) = (0i64, 0i64);
    let check = |y: u64, th: i64, ps: i64| -> Option<u64> {
        if y >= from {
            let rhs = num as u128 * y as u128 * 1_000_000;
            if th as u128 * den as u128 >= rhs || ps as u128 * den as u128 >= rhs {
                return Some(y);
            }
        }
        None
    };
    let mut buf = Vec::new();
    let mut lo = 0u64;
    while lo < x_max {
        let hi = (lo + DEFAULT_SEGMENT).min(x_max);
        sieve_into(&mut buf, lo, hi, &base);
        for n in lo + 1..=hi {
            if n >= 2 && buf[(n - lo - 1) as usize] == 0 {
                while pp < powers.len() && powers[pp].0 < n {
                    let (y, p) = powers[pp];
                    if y % k == l {
                        ps_hi += fixed_log(p)?.hi;
                        if let Some(v) = check(y, th_hi, ps_hi) {
                            return Ok(Some(v));
                        }
                    }
                    pp += 1;
                }
                if n % k == l {
                    let lg = fixed_log(n)?;
                    th_hi += lg.hi;
                    ps_hi += lg.hi;
                    if let Some(v) = check(n, th_hi, ps_hi) {
                        return Ok(Some(v));
                    }
                }
            }
        }
        while pp < powers.len() && powers[pp].0 <= hi {
            let (y, p) = powers[pp];
            if y % k == l {
                ps_hi += fixed_log(p)?.hi;
                if let Some(v) = check(y, th_hi, ps_hi) {
                    return Ok(Some(v));
                }
            }
            pp += 1;
        }
        lo = hi;
    }
    Ok(None)
}

/// Writes rows (block_index, k, l, theta_lo, theta_hi, psi_lo, psi_hi,
/// pi_count, min_dev_theta, max_dev_theta, min_dev_psi, max_dev_psi) with
/// deviations outward-rounded at scale 10⁻⁶.
pub fn write_block_stats_tsv<W: Write>(stats: &SieveStats, w: &mut W) -> Result<()> {
    writeln!(
        w,
        "#block_index\tk\tl\ttheta_lo\ttheta_hi\tpsi_lo\tpsi_hi\tpi_count\tmin_dev_theta\tmax_dev_theta\tmin_dev_psi\tmax_dev_psi"
    )?;
    for b in &stats.blocks {
        for cb in &b.classes {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                b.index,
                cb.k,
                cb.l,
                cb.theta_lo,
                cb.theta_hi,
                cb.psi_lo,
                cb.psi_hi,
                b.pi,
                cb.min_theta.lb,
                cb.max_theta.ub,
                cb.min_psi.lb,
                cb.max_psi.ub,
            )?;
        }
    }
    Ok(())
}

pub const PRIME_CACHE_MAGIC: &[u8; 8] = b"CBIRPRM1";

/// Binary prime cache: 8-byte magic, u64 LE count, then u64 LE primes.
pub fn write_prime_cache(path: &Path, primes: &[u64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 + 8 * primes.len());
    bytes.extend_from_slice(PRIME_CACHE_MAGIC);
    bytes.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    for &p in primes {
        bytes.extend_from_slice(&p.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_prime_cache(path: &Path) -> Result<Vec<u64>> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 16 || &bytes[..8] != PRIME_CACHE_MAGIC {
        return Err(Error::Format("prime cache missing CBIRPRM1 header".into()));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    if bytes.len() != 16 + 8 * count {
        return Err(Error::Format(format!(
            "prime cache length {} does not match count {count}",
            bytes.len()
        )));
    }
    Ok(bytes[16..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Rational enclosure of an envelope value.
#[derive(Debug, Clone)]
pub struct RatBounds {
    pub lo: BigRational,
    pub hi: BigRational,
}

#[derive(Debug, Clone)]
pub struct EnvelopeRow {
    pub x: u64,
    /// max(0.5000351, sup_{y ≥ x} θ(y;3,2)/y) over the computed range.
    pub t_plus: RatBounds,
    /// min(0.4999649, inf_{y ≥ x} θ(y;3,2)/y).
    pub t_minus: RatBounds,
}

#[derive(Debug, Clone)]
pub struct EnvelopeTable {
    pub y_max: u64,
    pub rows: Vec<EnvelopeRow>,
}

impl EnvelopeTable {
    pub fn row(&self, x: u64) -> Option<&EnvelopeRow> {
        self.rows.binary_search_by_key(&x, |r| r.x).ok().map(|i| &self.rows[i])
    }
}

#[derive(Clone, Copy)]
struct Extremum {
    s: i64,
    y: u64,
}

fn frac_gt(a: Extremum, b: Extremum) -> bool {
    a.s as i128 * b.y as i128 > b.s as i128 * a.y as i128
}

struct Buckets {
    xs: Vec<u64>,
    max_hi: Vec<Option<Extremum>>,
    max_lo: Vec<Option<Extremum>>,
    min_lo: Vec<Option<Extremum>>,
    min_hi: Vec<Option<Extremum>>,
}

impl Buckets {
    fn candidate(&mut self, y: u64, s_lo: i64, s_hi: i64) {
        let j = self.xs.partition_point(|&x| x <= y);
        if j == 0 {
            return;
        }
        let j = j - 1;
        let hi = Extremum { s: s_hi, y };
        let lo = Extremum { s: s_lo, y };
        if self.max_hi[j].is_none_or(|cur| frac_gt(hi, cur)) {
            self.max_hi[j] = Some(hi);
        }
        if self.max_lo[j].is_none_or(|cur| frac_gt(lo, cur)) {
            self.max_lo[j] = Some(lo);
        }
        if self.min_lo[j].is_none_or(|cur| frac_gt(cur, lo)) {
            self.min_lo[j] = Some(lo);
        }
        if self.min_hi[j].is_none_or(|cur| frac_gt(cur, hi)) {
            self.min_hi[j] = Some(hi);
        }
    }
}

/// Sweeps the (3,2) class to y_max and returns envelope bounds at each
/// requested threshold, capped by 1/2 ± 0.0000351 beyond the computed range.
pub fn envelope(points: &[u64], y_max: u64) -> Result<EnvelopeTable> {
    if points.is_empty() || y_max < 2 {
        return Err(Error::Domain("envelope needs points and y_max >= 2".into()));
    }
    let mut xs: Vec<u64> = points.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs[0] == 0 || *xs.last().unwrap() > y_max {
        return Err(Error::Domain(format!(
            "envelope points must lie in [1, {y_max}]"
        )));
    }
    let m = xs.len();
    let mut bk = Buckets {
        xs: xs.clone(),
        max_hi: vec![None; m],
        max_lo: vec![None; m],
        min_lo: vec![None; m],
        min_hi: vec![None; m],
    };
    let base = small_primes(isqrt(y_max));
    let (mut s_lo, mut s_hi) = (0i64, 0i64);
    let mut bptr = 0usize;
    let mut buf = Vec::new();
    let mut lo = 0u64;
    while lo < y_max {
        let hi = (lo + DEFAULT_SEGMENT).min(y_max);
        sieve_into(&mut buf, lo, hi, &base);
        for n in lo + 1..=hi {
            if n >= 2 && buf[(n - lo - 1) as usize] == 0 && n % 3 == 2 {
                while bptr < m && xs[bptr] < n {
                    if xs[bptr] > 1 {
                        bk.candidate(xs[bptr] - 1, s_lo, s_hi);
                    }
                    bk.candidate(xs[bptr], s_lo, s_hi);
                    bptr += 1;
                }
                if n > 1 {
                    bk.candidate(n - 1, s_lo, s_hi);
                }
                let lg = fixed_log(n)?;
                s_lo += lg.lo;
                s_hi += lg.hi;
                bk.candidate(n, s_lo, s_hi);
                if bptr < m && xs[bptr] == n {
                    bptr += 1;
                }
            }
        }
        lo = hi;
    }
    while bptr < m {
        if xs[bptr] > 1 {
            bk.candidate(xs[bptr] - 1, s_lo, s_hi);
        }
        bk.candidate(xs[bptr], s_lo, s_hi);
        bptr += 1;
    }
    bk.candidate(y_max, s_lo, s_hi);

    let rat = |e: Extremum| BigRational::new(BigInt::from(e.s), BigInt::from(1_000_000u64) * BigInt::from(e.y));
    let cap_plus = BigRational::new(BigInt::from(5_000_351), BigInt::from(10_000_000));
    let cap_minus = BigRational::new(BigInt::from(4_999_649), BigInt::from(10_000_000));
    let mut rows: Vec<EnvelopeRow> = Vec::with_capacity(m);
    let (mut run_max_hi, mut run_max_lo): (Option<Extremum>, Option<Extremum>) = (None, None);
    let (mut run_min_lo, mut run_min_hi): (Option<Extremum>, Option<Extremum>) = (None, None);
    for j in (0..m).rev() {
        let fold_max = |run: &mut Option<Extremum>, v: Option<Extremum>| {
            if let Some(v) = v {
                if run.is_none_or(|cur| frac_gt(v, cur)) {
                    *run = Some(v);
                }
            }
        };
        let fold_min = |run: &mut Option<Extremum>, v: Option<Extremum>| {
            if let Some(v) = v {
                if run.is_none_or(|cur| frac_gt(cur, v)) {
                    *run = Some(v);
                }
            }
        };
        fold_max(&mut run_max_hi, bk.max_hi[j]);
        fold_max(&mut run_max_lo, bk.max_lo[j]);
        fold_min(&mut run_min_lo, bk.min_lo[j]);
        fold_min(&mut run_min_hi, bk.min_hi[j]);
        let t_plus = RatBounds {
            lo: cap_plus.clone().max(run_max_lo.map(rat).unwrap_or_else(|| cap_plus.clone())),
            hi: cap_plus.clone().max(run_max_hi.map(rat).unwrap_or_else(|| cap_plus.clone())),
        };
        let t_minus = RatBounds {
            lo: cap_minus.clone().min(run_min_lo.map(rat).unwrap_or_else(|| cap_minus.clone())),
            hi: cap_minus.clone().min(run_min_hi.map(rat).unwrap_or_else(|| cap_minus.clone())),
        };
        rows.push(EnvelopeRow { x: xs[j], t_plus, t_minus });
    }
    rows.reverse();
    Ok(EnvelopeTable { y_max, rows })
}

/// Thresholds the exponent sum evaluates the envelope at: ⌊y_max/(3A+1)⌋ for
/// A ≤ n_max and ⌊y_max/(3A+2)⌋ for A < n_max.
pub fn drl_points(y_max: u64, n_max: u64) -> Vec<u64> {
    let mut xs = Vec::with_capacity(2 * n_max as usize + 1);
    for a in 0..=n_max {
        xs.push(y_max / (3 * a + 1));
        if a < n_max {
            xs.push(y_max / (3 * a + 2));
        }
    }
    xs.sort_unstable();
    xs.dedup();
    xs
}

/// Rigorous enclosure of
/// 3·(Σ_{A=0}^{N} t₊(y/(3A+1))/(3A+1) − Σ_{A=0}^{N−1} t₋(y/(3A+2))/(3A+2)).
pub fn drl_exponent(n_max: u64, table: &EnvelopeTable) -> Result<RealInterval> {
    let y = table.y_max;
    let need = |x: u64| -> Result<&EnvelopeRow> {
        table.row(x).ok_or_else(|| Error::Domain(format!("envelope missing x={x}")))
    };
    let mut sum_lo = BigRational::new(BigInt::from(0), BigInt::from(1));
    let mut sum_hi = sum_lo.clone();
    for a in 0..=n_max {
        let d = BigRational::new(BigInt::from(1), BigInt::from(3 * a + 1));
        let row = need(y / (3 * a + 1))?;
        sum_lo += &row.t_plus.lo * &d;
        sum_hi += &row.t_plus.hi * &d;
        if a < n_max {
            let d2 = BigRational::new(BigInt::from(1), BigInt::from(3 * a + 2));
            let row2 = need(y / (3 * a + 2))?;
            sum_lo -= &row2.t_minus.hi * &d2;
            sum_hi -= &row2.t_minus.lo * &d2;
        }
    }
    let three = BigRational::new(BigInt::from(3), BigInt::from(1));
    let lo = RealInterval::from_rational(&(&sum_lo * &three), 160)?;
    let hi = RealInterval::from_rational(&(&sum_hi * &three), 160)?;
    Ok(RealInterval { lo: lo.lo, hi: hi.hi })
}
