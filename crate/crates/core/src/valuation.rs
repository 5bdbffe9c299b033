//! p-adic valuations: plain valuations of integers and rationals,
//! factorial and binomial valuations by digit sums, and the floor-sum
//! valuation of products of the form n·j − m over a range of j.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Exponent of the exact power of `p` dividing `x`. `x` must be nonzero.
pub fn vp_u64(mut x: u64, p: u64) -> u32 {
    assert!(x != 0 && p >= 2);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Exponent of the exact power of `p` dividing the integer `x` (nonzero).
pub fn vp_int(x: &BigInt, p: &BigInt) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::Domain("vp of zero".into()));
    }
    let mut v = 0u64;
    let mut cur = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, p);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        cur = q;
    }
}

/// Valuation of a nonzero rational; negative when `p` divides the denominator.
///
/// Primality of `p` is trusted from the caller, matching how every prime
/// in this crate originates from a sieve.
pub fn vp(x: &BigRational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Domain("vp of zero".into()));
    }
    let vn = vp_int(x.numer(), p)? as i64;
    let vd = vp_int(x.denom(), p)? as i64;
    Ok(vn - vd)
}

/// v_p(r!) by Legendre's formula.
pub fn vp_factorial(r: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut q = r;
    while q > 0 {
        q /= p;
        s += q;
    }
    s
}

/// Base-p digit sum.
pub fn digit_sum(mut r: u64, p: u64) -> u64 {
    let mut s = 0;
    while r > 0 {
        s += r % p;
        r /= p;
    }
    s
}

/// v_p(C(r, h)) by Kummer's theorem: carries when adding h and r−h in base p.
pub fn vp_binomial(r: u64, h: u64, p: u64) -> u64 {
    assert!(h <= r);
    (digit_sum(h, p) + digit_sum(r - h, p) - digit_sum(r, p)) / (p - 1)
}

/// Modular inverse of `a` mod `m` for coprime inputs.
fn mod_inverse(a: u128, m: u128) -> Option<u128> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u128)
}

/// k in [1, p^i] with k·n ≡ m (mod p^i); `pi` is p^i. None if gcd(n, p) > 1.
pub fn residue_k(n: u64, m: u64, pi: u128) -> Option<u128> {
    let inv = mod_inverse(n as u128, pi)?;
    let k = (inv * (m as u128 % pi)) % pi;
    Some(if k == 0 { pi } else { k })
}

/// v_p of the product of (n·j − m) for j = u..=v, via the floor-sum identity
///
///   Σ_i ( ⌊(v−k_i)/p^i⌋ − ⌊(u−1−k_i)/p^i⌋ ),   k_i·n ≡ m (mod p^i),
///
/// truncated once p^i exceeds n·max(|u|,|v|) + m, beyond which no factor can
/// be divisible by p^i. Requires 0 < m < n and gcd(m,n) = gcd(p,n) = 1.
pub fn vp_product(n: u64, m: u64, p: u64, u: i64, v: i64) -> Result<u64> {
    if m == 0 || m >= n {
        return Err(Error::Domain(format!("vp_product needs 0 < m < n, got ({m}, {n})")));
    }
    if num_integer::gcd(m, n) != 1 {
        return Err(Error::Domain(format!("vp_product needs gcd(m,n)=1, got ({m}, {n})")));
    }
    if num_integer::gcd(p, n) != 1 {
        return Err(Error::Domain(format!("vp_product needs gcd(p,n)=1, got p={p}, n={n}")));
    }
    if u > v {
        return Ok(0);
    }
    let bound = n as u128 * u.unsigned_abs().max(v.unsigned_abs()) as u128 + m as u128;
    let mut total = 0i128;
    let mut pi = p as u128;
    while pi <= bound {
        let k = residue_k(n, m, pi).expect("gcd(p,n)=1 checked above") as i128;
        total += (v as i128 - k).div_euclid(pi as i128) - (u as i128 - 1 - k).div_euclid(pi as i128);
        match pi.checked_mul(p as u128) {
            Some(next) => pi = next,
            None => break,
        }
    }
    debug_assert!(total >= 0);
    Ok(total as u64)
}

/// v_p of the product of (n·j + m) for j = u..=v, by reflection: the factor
/// at j equals −(n·(−j) − m), and valuations ignore signs (no factor is zero
/// because gcd(m,n)=1 forces n·j + m ≠ 0).
pub fn vp_product_plus(n: u64, m: u64, p: u64, u: i64, v: i64) -> Result<u64> {
    vp_product(n, m, p, -v, -u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn vp_basics() {
        assert_eq!(vp(&BigRational::from_integer(big(80)), &big(5)).unwrap(), 1);
        assert_eq!(vp(&BigRational::new(big(14), big(5)), &big(5)).unwrap(), -1);
        assert_eq!(vp(&BigRational::one(), &big(7)).unwrap(), 0);
    }

    #[test]
    fn vp_multiplicative() {
        let p = big(3);
        let xs = [
            BigRational::new(big(9), big(4)),
            BigRational::new(big(-2), big(27)),
            BigRational::new(big(15), big(7)),
        ];
        for x in &xs {
            for y in &xs {
                let lhs = vp(&(x * y), &p).unwrap();
                assert_eq!(lhs, vp(x, &p).unwrap() + vp(y, &p).unwrap());
            }
        }
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(vp_factorial(10, 3), 4);
        assert_eq!(vp_factorial(100, 5), 24);
        // C(10, 5) = 252 = 2^2 * 3^2 * 7
        assert_eq!(vp_binomial(10, 5, 2), 2);
        assert_eq!(vp_binomial(10, 5, 3), 2);
        assert_eq!(vp_binomial(10, 5, 7), 1);
        assert_eq!(vp_binomial(10, 5, 5), 0);
    }

    #[test]
    fn product_valuation_examples() {
        // prod_{j=1}^{3} (3j-1) = 2*5*8 = 80
        assert_eq!(vp_product(3, 1, 5, 1, 3).unwrap(), 1);
        // prod_{j=1}^{4} (3j-1) = 2*5*8*11 = 880, v2 = 4
        assert_eq!(vp_product(3, 1, 2, 1, 4).unwrap(), 4);
        // empty range
        assert_eq!(vp_product(3, 1, 7, 2, 1).unwrap(), 0);
    }

    #[test]
    fn product_valuation_matches_brute_force() {
        for p in [2u64, 5, 7, 11, 13] {
            for (u, v) in [(1i64, 40i64), (-15, 22), (-30, -3), (5, 5)] {
                let mut prod = BigInt::one();
                for j in u..=v {
                    prod *= big(3 * j - 1);
                }
                let expect = vp_int(&prod, &big(p as i64)).unwrap();
                assert_eq!(vp_product(3, 1, p, u, v).unwrap(), expect, "p={p} u={u} v={v}");
            }
        }
    }

    #[test]
    fn plus_product_matches_brute_force() {
        for p in [2u64, 5, 7, 13] {
            for (u, v) in [(1i64, 35i64), (3, 60), (-9, 14)] {
                let mut prod = BigInt::one();
                for j in u..=v {
                    prod *= big(3 * j + 1);
                }
                let expect = vp_int(&prod, &big(p as i64)).unwrap();
                assert_eq!(vp_product_plus(3, 1, p, u, v).unwrap(), expect, "p={p} u={u} v={v}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(vp_product(3, 3, 5, 1, 4).is_err());
        assert!(vp_product(4, 2, 5, 1, 4).is_err());
        assert!(vp_product(3, 1, 3, 1, 4).is_err());
    }
}
