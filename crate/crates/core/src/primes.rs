//! Small prime utilities shared by the denominator walks and ratio scans:
//! a plain sieve and a smallest-prime-factor table for fast factorization of
//! numbers up to a few hundred thousand.

/// All primes ≤ limit, ascending.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for 2..=limit.
pub struct Spf {
    table: Vec<u32>,
}

impl Spf {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut table = vec![0u32; n + 1];
        for p in 2..=n {
            if table[p] == 0 {
                let mut q = p;
                while q <= n {
                    if table[q] == 0 {
                        table[q] = p as u32;
                    }
                    q += p;
                }
            }
        }
        Spf { table }
    }

    pub fn limit(&self) -> u64 {
        self.table.len() as u64 - 1
    }

    /// Prime factorization of x ≤ limit as (p, multiplicity) pairs, ascending.
    pub fn factorize(&self, x: u64) -> Vec<(u64, u32)> {
        debug_assert!(x as usize <= self.table.len() - 1);
        let mut x = x as usize;
        let mut out = Vec::new();
        while x > 1 {
            let p = self.table[x] as usize;
            let mut e = 0u32;
            while x % p == 0 {
                x /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    pub fn is_prime(&self, x: u64) -> bool {
        x >= 2 && self.table[x as usize] as u64 == x
    }
}
