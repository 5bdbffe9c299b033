//! The two families of hypergeometric polynomials X, Y, the remainder
//! series R, and their defining identity z^{m/n}·X(z) − Y(z) = (z−1)^{2r+1}·R(z).
//!
//! Polynomials are exact rationals throughout; only the fractional power
//! z^{m/n} and R's truncation tail need intervals.

use crate::error::{Error, Result};
use crate::fixedlog::q40_ln;
use crate::interval::RealInterval;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Parameters (m, n, r) with 0 < m < n, gcd(m, n) = 1, r ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGParams {
    pub m: u64,
    pub n: u64,
    pub r: u64,
}

impl HGParams {
    pub fn new(m: u64, n: u64, r: u64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::Domain(format!("need 0 < m < n, got m={m}, n={n}")));
        }
        if m.gcd(&n) != 1 {
            return Err(Error::Domain(format!("need gcd(m,n) = 1, got m={m}, n={n}")));
        }
        Ok(HGParams { m, n, r })
    }
}

/// Dense polynomial over the rationals, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn one() -> Self {
        RatPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<u64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() as u64 - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Gcd of the numerators of the reduced coefficients; zero polynomial → 1.
    pub fn numerator_gcd(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c.numer());
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// TSV rows: degree, numerator, denominator (reduced).
    pub fn write_tsv(&self, out: &mut impl std::io::Write) -> Result<()> {
        for (deg, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{}\t{}\t{}", deg, c.numer(), c.denom())?;
        }
        Ok(())
    }
}

/// Coefficient a_{r,h} = C(r,h)·∏_{i=r−h+1}^{r}(in+m) / ∏_{i=1}^{h}(in−m).
pub fn y_coeff(params: HGParams, h: u64) -> Result<BigRational> {
    let HGParams { m, n, r } = params;
    if h > r {
        return Err(Error::Domain(format!("coefficient index {h} exceeds degree {r}")));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..h {
        // C(r,h) built as ∏ (r−i)/(i+1) merged into the same fraction.
        num *= BigInt::from(r - i);
        den *= BigInt::from(i + 1);
        num *= BigInt::from((r - i) * n + m);
        den *= BigInt::from((i + 1) * n - m);
    }
    Ok(BigRational::new(num, den))
}

/// Y_{m,n,r}(z): coefficient a_{r,h} at degree h; constant term 1.
pub fn y_poly(params: HGParams) -> RatPoly {
    let HGParams { m, n, r } = params;
    let mut coeffs = Vec::with_capacity(r as usize + 1);
    let mut cur = BigRational::one();
    coeffs.push(cur.clone());
    for h in 0..r {
        // a_{r,h+1}/a_{r,h} = (r−h)((r−h)n+m) / ((h+1)((h+1)n−m)).
        let num = BigInt::from(r - h) * BigInt::from((r - h) * n + m);
        let den = BigInt::from(h + 1) * BigInt::from((h + 1) * n - m);
        cur *= BigRational::new(num, den);
        coeffs.push(cur.clone());
    }
    RatPoly::new(coeffs)
}

/// X_{m,n,r}(z): the degree-reversal of Y; monic of degree r.
pub fn x_poly(params: HGParams) -> RatPoly {
    let mut coeffs = y_poly(params).coeffs.clone();
    coeffs.reverse();
    RatPoly::new(coeffs)
}

/// p(1 − c·z), expanded exactly.
pub fn substitute_affine(p: &RatPoly, c: &BigRational) -> RatPoly {
    if p.is_zero() {
        return RatPoly::new(vec![]);
    }
    let mut acc: Vec<BigRational> = vec![p.coeffs.last().unwrap().clone()];
    for k in (0..p.coeffs.len() - 1).rev() {
        // acc ← acc·(1 − c·z) + coeff_k.
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (j, a) in acc.iter().enumerate() {
            next[j] += a;
            let t = a * c;
            next[j + 1] -= t;
        }
        next[0] += &p.coeffs[k];
        acc = next;
    }
    RatPoly::new(acc)
}

/// Enclosure of q^{1/n} for rational q ≥ 0 and n a product of 2s and 3s.
pub fn rat_root_interval(q: &BigRational, n: u64, prec: u64) -> Result<RealInterval> {
    if q.is_negative() {
        return Err(Error::Domain("root of a negative rational".into()));
    }
    let mut rest = n;
    let mut iv = RealInterval::from_rational(q, prec + 16)?;
    while rest % 2 == 0 {
        iv = iv.sqrt(prec + 16)?;
        rest /= 2;
    }
    while rest % 3 == 0 {
        iv = iv.cbrt(prec + 16);
        rest /= 3;
    }
    if rest != 1 {
        return Err(Error::Domain(format!(
            "roots of index {n} are out of scope (only 2^a·3^b supported)"
        )));
    }
    Ok(iv)
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Enclosure of R_{m,n,r}(z) for rational z ∈ (0,1).
///
/// R(z) = [(m/n)(1+m/n)⋯(r+m/n) / ((r+1)⋯(2r+1))] · ₂F₁(r+1−m/n, r+1; 2r+2; 1−z).
/// The Gauss series has positive terms; past the index where the term ratio
/// drops below x = 1−z the tail is bounded geometrically, all in exact
/// rationals.
pub fn remainder_value(params: HGParams, z: &BigRational, prec: u64) -> Result<RealInterval> {
    let HGParams { m, n, r } = params;
    if !z.is_positive() || *z >= BigRational::one() {
        return Err(Error::Domain("remainder series needs z in (0,1)".into()));
    }
    let x = BigRational::one() - z;
    let m_over_n = rational(m as i64, n as i64);

    let mut prefactor = BigRational::one();
    for j in 0..=r {
        prefactor *= rational(j as i64, 1) + &m_over_n;
    }
    for j in (r + 1)..=(2 * r + 1) {
        prefactor /= rational(j as i64, 1);
    }

    let alpha = rational(r as i64 + 1, 1) - &m_over_n;
    let beta = rational(r as i64 + 1, 1);
    let gamma = rational(2 * r as i64 + 2, 1);

    // Term ratio t_{k+1}/t_k = (α+k)(β+k)x/((γ+k)(k+1)) ≤ x once
    // k ≥ (αβ−γ)/(1+m/n); after that the tail is geometric with ratio x.
    let k0_rat = (&alpha * &beta - &gamma) / (BigRational::one() + &m_over_n);
    let k0 = if k0_rat.is_positive() {
        k0_rat.ceil().to_integer()
    } else {
        BigInt::zero()
    };

    let threshold_shift = prec + 8;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    let tail = loop {
        sum += &term;
        let kq = rational(k as i64, 1);
        let next = &term
            * (&alpha + &kq)
            * (&beta + &kq)
            * &x
            / ((&gamma + &kq) * rational(k as i64 + 1, 1));
        if BigInt::from(k + 1) >= k0 {
            // next·2^shift ≤ sum ⟺ next is small enough to stop; the geometric
            // tail ratio is x, and 1 − x = z.
            let scaled = &next * BigRational::new(BigInt::one() << threshold_shift, BigInt::one());
            if scaled <= sum {
                break &next / z;
            }
        }
        term = next;
        k += 1;
        if k > 10_000_000 {
            return Err(Error::Cap("remainder series did not converge in 10^7 terms".into()));
        }
    };

    let lo = &prefactor * &sum;
    let hi = &prefactor * (&sum + &tail);
    let lo_iv = RealInterval::from_rational(&lo, prec + 8)?;
    let hi_iv = RealInterval::from_rational(&hi, prec + 8)?;
    Ok(RealInterval { lo: lo_iv.lo, hi: hi_iv.hi })
}

/// Enclosure of z^{m/n}·X(z) − Y(z) − (z−1)^{2r+1}·R(z) at rational z ∈ (0,1).
pub fn check_identity(params: HGParams, z: &BigRational, prec: u64) -> Result<RealInterval> {
    if !z.is_positive() || *z >= BigRational::one() {
        return Err(Error::Domain("identity check needs z in (0,1)".into()));
    }
    let w = prec + 32;
    let x_val = x_poly(params).eval(z);
    let y_val = y_poly(params).eval(z);
    let r_iv = remainder_value(params, z, w)?;
    let root = rat_root_interval(&z.pow(params.m as i32), params.n, w)?;

    let power = (z - BigRational::one()).pow((2 * params.r + 1) as i32);
    let lhs = root.mul(&RealInterval::from_rational(&x_val, w)?, w);
    let correction = RealInterval::from_rational(&power, w)?.mul(&r_iv, w);
    let residual = lhs
        .sub(&RealInterval::from_rational(&y_val, w)?, w)
        .sub(&correction, w);
    residual.point_check()?;
    Ok(residual)
}

/// True iff the identity residual enclosure fits inside (−tol, tol).
pub fn identity_holds(params: HGParams, z: &BigRational, tol: &BigRational, prec: u64) -> Result<bool> {
    let residual = check_identity(params, z, prec)?;
    let bound = RealInterval::from_rational(tol, prec)?;
    Ok(residual.hi.cmp(&bound.lo) == std::cmp::Ordering::Less
        && bound.lo.neg().cmp(&residual.lo) == std::cmp::Ordering::Less)
}

/// Checked scan of the two factorial-ratio bounds for (m,n) = (1,3):
/// (1/3)⋯(r+1/3)/((r+1)⋯(2r+1)) > 0.29/(4^r·r^{1/6}) and
/// (1/3)⋯(r+1/3)/r! ≤ (4/9)·r^{1/3}, for 1 ≤ r ≤ r_max.
///
/// Fast path compares 2⁻⁴⁰-scale log sums; a straddle falls back to an exact
/// integer comparison with the roots cleared by powering.
pub fn factorial_ratio_bounds(r_max: u64) -> Result<()> {
    // Running logs of P_r = ∏_{j=0}^{r}(3j+1), F_r = (r+1)⋯(2r+1), r!.
    let (mut lnp_lo, mut lnp_hi) = (0u128, 0u128); // P_0 = 1
    let (mut lnf_lo, mut lnf_hi) = (0u128, 0u128);
    let mut lnfact_lo = 0u128;
    let (ln3_lo, ln3_hi) = q40w(3);
    let (ln4_lo, ln4_hi) = q40w(4);
    let (ln29_lo, ln29_hi) = q40w(29);
    let (ln100_lo, ln100_hi) = q40w(100);
    let ln9_hi = q40w(9).1;

    for r in 1..=r_max {
        let (a_lo, a_hi) = q40w(3 * r + 1);
        lnp_lo += a_lo;
        lnp_hi += a_hi;
        // F_r = F_{r−1}·(2r)(2r+1)/r.
        let (b_lo, b_hi) = q40w(2 * r);
        let (c_lo, c_hi) = q40w(2 * r + 1);
        let (d_lo, d_hi) = q40w(r);
        lnf_lo = lnf_lo + b_lo + c_lo - d_hi;
        lnf_hi = lnf_hi + b_hi + c_hi - d_lo;
        lnfact_lo += d_lo;

        let (lnr_lo, lnr_hi) = q40w(r);

        // Bound 1: ln P − (r+1)ln3 − ln F > ln29 − ln100 − r·ln4 − (1/6)ln r.
        // Signed comparison via i128; magnitudes stay far below i128::MAX.
        let lhs_lo = lnp_lo as i128 - ((r + 1) as u128 * ln3_hi) as i128 - lnf_hi as i128;
        let lhs_hi = lnp_hi as i128 - ((r + 1) as u128 * ln3_lo) as i128 - lnf_lo as i128;
        let rhs_lo = ln29_lo as i128
            - ln100_hi as i128
            - (r as u128 * ln4_hi) as i128
            - (lnr_hi / 6 + 1) as i128;
        let rhs_hi =
            ln29_hi as i128 - ln100_lo as i128 - (r as u128 * ln4_lo) as i128 - (lnr_lo / 6) as i128;
        if lhs_lo <= rhs_hi {
            // Straddle or failure: settle exactly.
            if !exact_lower_bound_holds(r) {
                return Err(Error::Invariant(format!(
                    "ratio lower bound 0.29/(4^r r^(1/6)) fails at r = {r}"
                )));
            }
        }
        debug_assert!(lhs_hi > rhs_lo, "log bookkeeping inverted at r = {r}");

        // Bound 2: ln P − (r+1)ln3 − ln r! ≤ ln4 − ln9 + (1/3)ln r.
        let lhs2_hi = lnp_hi as i128 - ((r + 1) as u128 * ln3_lo) as i128 - lnfact_lo as i128;
        let rhs2_lo = ln4_lo as i128 - ln9_hi as i128 + (lnr_lo / 3) as i128;
        if lhs2_hi > rhs2_lo && !exact_upper_bound_holds(r) {
            return Err(Error::Invariant(format!(
                "factorial ratio upper bound (4/9)r^(1/3) fails at r = {r}"
            )));
        }
    }
    Ok(())
}

fn q40w(x: u64) -> (u128, u128) {
    let (lo, hi) = q40_ln(x);
    (lo as u128, hi as u128)
}

fn prod_3j_plus_1(r: u64) -> BigInt {
    let mut p = BigInt::one();
    for j in 0..=r {
        p *= BigInt::from(3 * j + 1);
    }
    p
}

/// r·(100·4^r·P_r)⁶ > (29·3^{r+1}·F_r)⁶, the sixth power clearing the
/// r^{1/6} sitting in the bound's denominator.
fn exact_lower_bound_holds(r: u64) -> bool {
    let p = prod_3j_plus_1(r);
    let mut f = BigInt::one();
    for j in (r + 1)..=(2 * r + 1) {
        f *= BigInt::from(j);
    }
    let lhs = BigInt::from(100) * (BigInt::one() << (2 * r)) * p;
    let rhs = BigInt::from(29) * BigInt::from(3).pow(r as u32 + 1) * f;
    BigInt::from(r) * lhs.pow(6u32) > rhs.pow(6u32)
}

/// 729·P_r³ ≤ 64·r·(3^{r+1}·r!)³, the cube clearing r^{1/3}.
fn exact_upper_bound_holds(r: u64) -> bool {
    let p = prod_3j_plus_1(r);
    let mut fact = BigInt::one();
    for j in 2..=r {
        fact *= BigInt::from(j);
    }
    let rhs_base = BigInt::from(3).pow(r as u32 + 1) * fact;
    BigInt::from(729) * p.pow(3u32) <= BigInt::from(64) * BigInt::from(r) * rhs_base.pow(3u32)
}
