//! Bit-exact fixed-point logarithms.
//!
//! The sieve accumulates ln p at scale 10⁻⁶ with every value individually
//! floored and ceiled, so sums carry rigorous lower/upper bounds. The kernel
//! works in Q64 (u128 holding x·2⁶⁴) via the atanh series after binary range
//! reduction; the ratio scans reuse the same kernel at scale 2⁻⁴⁰.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// ⌊ln 2·2⁶⁴⌋; the true value lies in [lo, lo+1).
const LN2_Q64_LO: u128 = 12786308645202655659;

/// Enclosure of 10⁶·ln x between consecutive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLog {
    pub lo: i64,
    pub hi: i64,
}

/// Q64 enclosure of ln x for an integer x ≥ 1. Width is a few ulps of 2⁻⁶⁴;
/// x = 1 yields the exact (0, 0).
pub fn q64_ln(x: u64) -> (u128, u128) {
    assert!(x >= 1);
    let s = 63 - x.leading_zeros() as u64; // x / 2^s in [1, 2)
    // t = (x/2^s - 1)/(x/2^s + 1) = (x - 2^s)/(x + 2^s) in [0, 1/3)
    let num = (x - (1u64 << s)) as u128;
    let den = (x + (1u64 << s)) as u128;
    let t_lo = (num << 64) / den;
    let t_hi = if (num << 64) % den == 0 { t_lo } else { t_lo + 1 };

    // ln(x/2^s) = 2·atanh(t) = 2·(t + t³/3 + t⁵/5 + ...)
    let (t2_lo, t2_hi) = (mul_q64_lo(t_lo, t_lo), mul_q64_hi(t_hi, t_hi));
    let (mut pow_lo, mut pow_hi) = (t_lo, t_hi);
    let (mut sum_lo, mut sum_hi) = (t_lo, t_hi);
    let mut k = 1u128;
    loop {
        pow_lo = mul_q64_lo(pow_lo, t2_lo);
        pow_hi = mul_q64_hi(pow_hi, t2_hi);
        k += 2;
        sum_lo += pow_lo / k;
        sum_hi += pow_hi / k + if pow_hi % k == 0 { 0 } else { 1 };
        if pow_hi == 0 {
            break;
        }
        if pow_hi >> 64 == 0 && (pow_hi as u64) < k as u64 {
            // Remaining tail < pow_hi · t² / (1 − t²) ≤ pow_hi / 8 < 2⁶⁴/8·ulp,
            // but bound it directly: geometric ratio ≤ 1/9, so tail ≤ pow_hi/8 + 1.
            sum_hi += pow_hi / 8 + 1;
            break;
        }
    }
    let lo = 2 * sum_lo + s as u128 * LN2_Q64_LO;
    let hi = 2 * sum_hi + s as u128 * (LN2_Q64_LO + 1);
    (lo, hi)
}

fn mul_q64_lo(a: u128, b: u128) -> u128 {
    // a, b < 2^64 here (both represent values < 1), so the product fits.
    (a * b) >> 64
}

fn mul_q64_hi(a: u128, b: u128) -> u128 {
    let p = a * b;
    (p >> 64) + if p & ((1 << 64) - 1) == 0 { 0 } else { 1 }
}

/// ⌊10⁶·ln x⌋ and ⌈10⁶·ln x⌉ for an integer x ≥ 2.
///
/// ln x is irrational for integer x ≥ 2, so lo and hi always differ by one.
pub fn fixed_log(x: u64) -> Result<FixedLog> {
    if x < 2 {
        return Err(Error::Domain(format!("fixed_log needs x >= 2, got {x}")));
    }
    let (q_lo, q_hi) = q64_ln(x);
    let lo6 = (q_lo * 1_000_000) >> 64;
    let hi6 = {
        let p = q_hi * 1_000_000;
        (p >> 64) + if p & ((1 << 64) - 1) == 0 { 0 } else { 1 }
    };
    if hi6 - lo6 == 1 {
        return Ok(FixedLog { lo: lo6 as i64, hi: hi6 as i64 });
    }
    // The Q64 enclosure straddles a 10⁻⁶ grid point. Refine with the
    // arbitrary-precision kernel; a second straddle cannot occur because no
    // integer log sits within 2⁻¹⁸⁰ of the grid at these magnitudes.
    let iv = crate::interval::RealInterval::ln_of_int(x, 192)?;
    let scaled = iv.scale_rational(1_000_000, 1);
    let (flo, fhi) = (scaled.lo_floor(), scaled.hi_ceil());
    if &fhi - &flo == num_bigint::BigInt::from(1) {
        use num_traits::ToPrimitive;
        return Ok(FixedLog {
            lo: flo.to_i64().ok_or_else(|| Error::Invariant("fixed_log overflow".into()))?,
            hi: fhi.to_i64().ok_or_else(|| Error::Invariant("fixed_log overflow".into()))?,
        });
    }
    Err(Error::Invariant(format!("fixed_log({x}) straddles the grid after refinement")))
}

/// ⌊2⁴⁰·ln x⌋ with true value in [lo, lo+1): the scan-grade log.
pub fn q40_ln(x: u64) -> (u64, u64) {
    let (q_lo, q_hi) = q64_ln(x);
    let lo = (q_lo >> 24) as u64;
    let hi = ((q_hi >> 24) + if q_hi & ((1 << 24) - 1) == 0 { 0 } else { 1 }) as u64;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q64_kernel_brackets_known_logs() {
        // ⌊ln 3·2⁶⁴⌋, cross-checked against the arbitrary-precision kernel.
        const LN3_Q64_LO: u128 = 20265819725292939638;
        let (lo, hi) = q64_ln(2);
        assert!(lo <= LN2_Q64_LO && LN2_Q64_LO < hi);
        assert!(hi - lo < 256);
        let (lo, hi) = q64_ln(3);
        assert!(lo <= LN3_Q64_LO && LN3_Q64_LO < hi);
        assert!(hi - lo < 256);
    }

    #[test]
    fn fixed_log_frozen_values() {
        assert_eq!(fixed_log(2).unwrap(), FixedLog { lo: 693147, hi: 693148 });
        assert_eq!(fixed_log(3).unwrap(), FixedLog { lo: 1098612, hi: 1098613 });
        assert_eq!(fixed_log(1_000_000).unwrap(), FixedLog { lo: 13815510, hi: 13815511 });
    }

    #[test]
    fn fixed_log_rejects_small_input() {
        assert!(fixed_log(1).is_err());
        assert!(fixed_log(0).is_err());
    }

    #[test]
    fn fixed_log_monotone() {
        let mut prev = fixed_log(2).unwrap();
        for x in 3..2000u64 {
            let cur = fixed_log(x).unwrap();
            assert!(cur.lo >= prev.lo && cur.hi >= prev.hi, "x={x}");
            assert_eq!(cur.hi - cur.lo, 1, "x={x}");
            prev = cur;
        }
    }

    #[test]
    fn fixed_log_additive_within_width() {
        // ln(6) = ln(2) + ln(3): summed bounds must bracket the direct ones.
        let (two, three, six) = (
            fixed_log(2).unwrap(),
            fixed_log(3).unwrap(),
            fixed_log(6).unwrap(),
        );
        assert!(two.lo + three.lo <= six.lo);
        assert!(two.hi + three.hi >= six.hi);
    }

    #[test]
    fn q40_values_consistent_with_q64() {
        for x in [2u64, 3, 5, 97, 1_000_003, u32::MAX as u64] {
            let (lo, hi) = q40_ln(x);
            assert!(hi - lo <= 2, "x={x}");
            let (q_lo, q_hi) = q64_ln(x);
            assert!((lo as u128) << 24 <= q_lo);
            assert!((hi as u128) << 24 >= q_hi);
        }
    }
}
