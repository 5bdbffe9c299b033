//! Dyadic arbitrary-precision arithmetic with directed rounding.
//!
//! `Dyadic` is mant·2^exp with a `BigInt` mantissa. `RealInterval` pairs two
//! dyadics [lo, hi] and rounds every operation outward, so any real computed
//! through it is enclosed rigorously. Transcendental kernels (ln, exp) carry
//! explicit truncation-tail bounds on the hi side.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// mant · 2^exp, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic { mant: BigInt::from(v), exp: 0 }.normalized()
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic { mant: v, exp: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn cmp(&self, rhs: &Dyadic) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let (sa, sb) = (self.mant.sign(), rhs.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let d = self.sub(rhs);
        if d.mant.is_zero() {
            Ordering::Equal
        } else if d.mant.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Keep at most `prec` mantissa bits, rounding toward −∞ or +∞.
    pub fn round_dir(&self, prec: u64, up: bool) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = (bits - prec) as i64;
        let m = if up {
            -((-&self.mant) >> drop as u64)
        } else {
            &self.mant >> drop as u64
        };
        Dyadic::new(m, self.exp + drop)
    }

    /// Directed quotient num/den at `prec` significant bits; den ≠ 0.
    pub fn div_dir(num: &Dyadic, den: &Dyadic, prec: u64, up: bool) -> Result<Dyadic> {
        if den.is_zero() {
            return Err(Error::Domain("dyadic division by zero".into()));
        }
        if num.is_zero() {
            return Ok(Dyadic::zero());
        }
        let shift = (prec + 2 + den.bits()).saturating_sub(num.bits());
        let a = &num.mant << shift;
        let q = if up {
            -(-&a).div_floor(&den.mant)
        } else {
            a.div_floor(&den.mant)
        };
        Ok(Dyadic::new(q, num.exp - den.exp - shift as i64))
    }

    /// Directed a/k for an integer k ≥ 1.
    pub fn div_u64_dir(&self, k: u64, prec: u64, up: bool) -> Dyadic {
        Dyadic::div_dir(self, &Dyadic::from_int(k as i64), prec, up)
            .expect("nonzero divisor")
    }

    /// Directed square root of a nonnegative dyadic.
    pub fn sqrt_dir(&self, prec: u64, up: bool) -> Result<Dyadic> {
        if self.is_negative() {
            return Err(Error::Domain("sqrt of negative dyadic".into()));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        // Make the exponent even and the mantissa ≥ 2·prec bits wide.
        let want = 2 * (prec + 2);
        let cur = m.bits();
        let mut extra = want.saturating_sub(cur) as i64;
        if (e - extra) % 2 != 0 {
            extra += 1;
        }
        m <<= extra as u64;
        e -= extra;
        let root = m.sqrt();
        let r = if up && &root * &root != m { root + 1 } else { root };
        Ok(Dyadic::new(r, e / 2))
    }

    /// Directed cube root, any sign.
    pub fn cbrt_dir(&self, prec: u64, up: bool) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if self.is_negative() {
            return self.neg().cbrt_dir(prec, !up).neg();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        let want = 3 * (prec + 2);
        let cur = m.bits();
        let mut extra = want.saturating_sub(cur) as i64;
        while (e - extra) % 3 != 0 {
            extra += 1;
        }
        m <<= extra as u64;
        e -= extra;
        let root = num_integer::Roots::cbrt(&m);
        let r = if up && &root * &root * &root != m { root + 1 } else { root };
        Dyadic::new(r, e / 3)
    }

    /// Floor of the represented value as a BigInt.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Ceiling of the represented value as a BigInt.
    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    /// Nearest-ish f64 for reporting only; never used in proofs.
    pub fn approx_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        if bits <= 63 {
            return self.mant.to_i64().unwrap() as f64 * ((self.exp as f64).exp2());
        }
        let drop = bits - 63;
        let top = (&self.mant >> drop).to_i64().unwrap();
        top as f64 * (((self.exp + drop as i64) as f64).exp2())
    }
}

/// Closed interval [lo, hi] of reals; every operation rounds outward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RealInterval {
    pub fn exact(d: Dyadic) -> Self {
        RealInterval { lo: d.clone(), hi: d }
    }

    pub fn from_int(v: i64) -> Self {
        Self::exact(Dyadic::from_int(v))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::exact(Dyadic::from_bigint(v.clone()))
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u64) -> Result<Self> {
        let n = Dyadic::from_bigint(num.clone());
        let d = Dyadic::from_bigint(den.clone());
        Ok(RealInterval {
            lo: Dyadic::div_dir(&n, &d, prec, false)?,
            hi: Dyadic::div_dir(&n, &d, prec, true)?,
        })
    }

    pub fn from_rational(r: &BigRational, prec: u64) -> Result<Self> {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn point_check(&self) -> Result<()> {
        if self.lo.cmp(&self.hi) == std::cmp::Ordering::Greater {
            return Err(Error::Invariant("interval with lo > hi".into()));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, rhs: &Self, prec: u64) -> Self {
        RealInterval {
            lo: self.lo.add(&rhs.lo).round_dir(prec, false),
            hi: self.hi.add(&rhs.hi).round_dir(prec, true),
        }
    }

    pub fn sub(&self, rhs: &Self, prec: u64) -> Self {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Self, prec: u64) -> Self {
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo) == std::cmp::Ordering::Less {
                lo = c.clone();
            }
            if c.cmp(&hi) == std::cmp::Ordering::Greater {
                hi = c.clone();
            }
        }
        RealInterval { lo: lo.round_dir(prec, false), hi: hi.round_dir(prec, true) }
    }

    pub fn div(&self, rhs: &Self, prec: u64) -> Result<Self> {
        if !rhs.lo.is_positive() && !rhs.hi.is_negative() {
            return Err(Error::Indeterminate("division by interval containing zero".into()));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for num in [&self.lo, &self.hi] {
            for den in [&rhs.lo, &rhs.hi] {
                let l = Dyadic::div_dir(num, den, prec, false)?;
                let h = Dyadic::div_dir(num, den, prec, true)?;
                lo = Some(match lo {
                    Some(v) if v.cmp(&l) != std::cmp::Ordering::Greater => v,
                    _ => l,
                });
                hi = Some(match hi {
                    Some(v) if v.cmp(&h) != std::cmp::Ordering::Less => v,
                    _ => h,
                });
            }
        }
        Ok(RealInterval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn sqrt(&self, prec: u64) -> Result<Self> {
        Ok(RealInterval {
            lo: self.lo.sqrt_dir(prec, false)?,
            hi: self.hi.sqrt_dir(prec, true)?,
        })
    }

    pub fn cbrt(&self, prec: u64) -> Self {
        RealInterval {
            lo: self.lo.cbrt_dir(prec, false),
            hi: self.hi.cbrt_dir(prec, true),
        }
    }

    /// Integer power by binary exponentiation, outward at each step.
    pub fn powi(&self, n: u64, prec: u64) -> Self {
        let mut result = Self::from_int(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        result
    }

    /// Exact scale by num/den with outward rounding.
    pub fn scale_rational(&self, num: i64, den: u64) -> Self {
        let prec = self.lo.bits().max(self.hi.bits()).max(64) + 64;
        let n = RealInterval::from_int(num);
        let scaled = self.mul(&n, prec);
        if den == 1 {
            return scaled;
        }
        RealInterval {
            lo: scaled.lo.div_u64_dir(den, prec, false),
            hi: scaled.hi.div_u64_dir(den, prec, true),
        }
    }

    pub fn lo_floor(&self) -> BigInt {
        self.lo.floor_int()
    }

    pub fn hi_ceil(&self) -> BigInt {
        self.hi.ceil_int()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// True iff every point of self is strictly below every point of rhs.
    pub fn strictly_below(&self, rhs: &Self) -> bool {
        self.hi.cmp(&rhs.lo) == std::cmp::Ordering::Less
    }

    /// True iff every point of self is ≤ every point of rhs.
    pub fn below_or_eq(&self, rhs: &Self) -> bool {
        self.hi.cmp(&rhs.lo) != std::cmp::Ordering::Greater
    }

    pub fn approx_f64(&self) -> f64 {
        0.5 * (self.lo.approx_f64() + self.hi.approx_f64())
    }

    /// Enclosure of ln 2 at `prec` bits.
    pub fn ln2(prec: u64) -> Self {
        let at = atanh_ratio(&BigInt::from(1), &BigInt::from(3), prec + 8);
        at.scale_rational(2, 1)
    }

    /// Enclosure of ln x for integer x ≥ 1.
    pub fn ln_of_int(x: u64, prec: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::Domain("ln of zero".into()));
        }
        Self::exact(Dyadic::from_int(x as i64)).ln(prec)
    }

    /// Enclosure of ln over a strictly positive interval.
    pub fn ln(&self, prec: u64) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::Domain("ln needs a strictly positive interval".into()));
        }
        Ok(RealInterval {
            lo: ln_dyadic(&self.lo, prec, false),
            hi: ln_dyadic(&self.hi, prec, true),
        })
    }

    /// Enclosure of exp over an interval; |x| must stay below ~2⁵⁰.
    pub fn exp(&self, prec: u64) -> Result<Self> {
        Ok(RealInterval {
            lo: exp_dyadic(&self.lo, prec, false)?,
            hi: exp_dyadic(&self.hi, prec, true)?,
        })
    }
}

/// Enclosure of atanh(num/den) for 0 ≤ num/den ≤ 1/3, via the odd series.
fn atanh_ratio(num: &BigInt, den: &BigInt, prec: u64) -> RealInterval {
    let w = prec + 16;
    let t = RealInterval::from_ratio(num, den, w).expect("den > 0");
    if t.hi.is_zero() {
        return RealInterval::from_int(0);
    }
    let t2 = t.mul(&t, w);
    let mut pow = t.clone();
    let mut sum = t.clone();
    let mut k: u64 = 1;
    let eps = Dyadic::new(BigInt::from(1), -(w as i64) - 4);
    loop {
        let next_pow = pow.mul(&t2, w);
        let next_k = k + 2;
        // Tail from the next term on: ≤ t^(k+2)/(k+2) · 1/(1−t²) ≤ hi·9/8/(k+2).
        let bound = next_pow
            .hi
            .mul(&Dyadic::from_int(9))
            .div_u64_dir(8 * next_k, w, true);
        if bound.cmp(&eps) == std::cmp::Ordering::Less {
            sum.hi = sum.hi.add(&bound);
            return sum;
        }
        pow = next_pow;
        k = next_k;
        let term = RealInterval {
            lo: pow.lo.div_u64_dir(k, w, false),
            hi: pow.hi.div_u64_dir(k, w, true),
        };
        sum = sum.add(&term, w);
    }
}

/// One-sided ln of a positive dyadic at `prec` bits.
fn ln_dyadic(x: &Dyadic, prec: u64, up: bool) -> Dyadic {
    debug_assert!(x.is_positive());
    let w = prec + 16;
    // x = m·2^e2 with m ∈ [1, 2): e2 = exp + bits − 1.
    let bits = x.bits() as i64;
    let e2 = x.exp + bits - 1;
    // m as the exact rational mant/2^(bits−1); t = (m−1)/(m+1) ∈ [0, 1/3).
    let half = BigInt::from(1) << (bits - 1) as u64;
    let num = &x.mant - &half;
    let den = &x.mant + &half;
    let at = atanh_ratio(&num, &den, w);
    let frac = at.scale_rational(2, 1);
    if e2 == 0 {
        return if up { frac.hi } else { frac.lo };
    }
    let ln2 = RealInterval::ln2(w);
    let shift = ln2.scale_rational(e2, 1);
    let total = frac.add(&shift, w);
    if up {
        total.hi
    } else {
        total.lo
    }
}

/// One-sided exp of a dyadic at `prec` bits.
fn exp_dyadic(x: &Dyadic, prec: u64, up: bool) -> Result<Dyadic> {
    let w = prec + 16;
    if x.is_zero() {
        return Ok(Dyadic::from_int(1));
    }
    let xf = x.approx_f64();
    if !xf.is_finite() || xf.abs() > 1e15 {
        return Err(Error::Cap(format!("exp argument too large: {xf:e}")));
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let ln2 = RealInterval::ln2(w);
    let s = RealInterval::exact(x.clone()).sub(&ln2.scale_rational(k, 1), w);
    // |s| ≤ 0.5·ln2 + slack from the f64 rounding of k; insist on |s| < 1.
    let one = Dyadic::from_int(1);
    if s.hi.cmp(&one) == std::cmp::Ordering::Greater
        || s.lo.cmp(&one.neg()) == std::cmp::Ordering::Less
    {
        return Err(Error::Invariant("exp range reduction failed".into()));
    }
    // exp(s) = Σ sⁿ/n! with |s| < 1: once n ≥ 2 the tail after term n is
    // bounded by |term_n|·Σ_{j≥1} (1/(n+1))^j ≤ |term_n|/n.
    let mut term = RealInterval::from_int(1);
    let mut sum = RealInterval::from_int(1);
    let eps = Dyadic::new(BigInt::from(1), -(w as i64) - 4);
    let mut n: u64 = 0;
    loop {
        n += 1;
        term = term.mul(&s, w);
        term = RealInterval {
            lo: term.lo.div_u64_dir(n, w, false),
            hi: term.hi.div_u64_dir(n, w, true),
        };
        sum = sum.add(&term, w);
        let mag = if term.lo.neg().cmp(&term.hi) == std::cmp::Ordering::Greater {
            term.lo.neg()
        } else {
            term.hi.clone()
        };
        if n >= 2 {
            let tail = mag.div_u64_dir(n, w, true);
            if tail.cmp(&eps) == std::cmp::Ordering::Less {
                sum = RealInterval { lo: sum.lo.sub(&tail), hi: sum.hi.add(&tail) };
                break;
            }
        }
    }
    let shifted = RealInterval { lo: sum.lo.shl(k), hi: sum.hi.shl(k) };
    Ok(if up { shifted.hi } else { shifted.lo })
}

/// Refine `compute` at doubling precision until `judge` decides.
///
/// Starts at 64 bits and doubles up to 16 times before giving up with
/// `Error::Indeterminate`.
pub fn decide<T>(
    mut compute: impl FnMut(u64) -> Result<RealInterval>,
    mut judge: impl FnMut(&RealInterval) -> Option<T>,
) -> Result<T> {
    let mut prec = 64u64;
    for _ in 0..=16 {
        let iv = compute(prec)?;
        iv.point_check()?;
        if let Some(v) = judge(&iv) {
            return Ok(v);
        }
        prec *= 2;
    }
    Err(Error::Indeterminate(
        "interval refinement exhausted 16 precision doublings".into(),
    ))
}
