//! Integer-only continued fractions of real cubic roots: Lang–Trotter
//! expansion states, convergents, partial-quotient scans, and resumable
//! checkpoints for long runs.
//!
//! Indexing convention: quotient a₀ is the integer part and carries index 0,
//! so the expansion reads [a₀; a₁, a₂, …] and a_i is the i-th entry of the
//! quotient stream.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Write as _;
use std::path::Path;

/// Cubic with integer coefficients c₃x³ + c₂x² + c₁x + c₀ tracking one real
/// root in (1, ∞); each quotient step substitutes x → a + 1/x and
/// renormalizes the sign so f(1) < 0 < f(+∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicCFState {
    c3: BigInt,
    c2: BigInt,
    c1: BigInt,
    c0: BigInt,
    step_index: u64,
}

fn is_cube(x: u64) -> bool {
    let c = BigInt::from(x).cbrt();
    &c * &c * &c == BigInt::from(x)
}

impl CubicCFState {
    fn from_coeffs(c3: BigInt, c2: BigInt, c1: BigInt, c0: BigInt) -> Result<Self> {
        let state = CubicCFState { c3, c2, c1, c0, step_index: 0 };
        // Root localization: f(1) < 0 and f(M) > 0 for some doubling M.
        if state.eval(&BigInt::one()).sign() != Sign::Minus {
            return Err(Error::Invariant("cubic has no sign change past x = 1".into()));
        }
        let mut m = BigInt::from(2);
        while state.eval(&m).sign() != Sign::Plus {
            m <<= 1;
        }
        Ok(state)
    }

    fn eval(&self, x: &BigInt) -> BigInt {
        ((&self.c3 * x + &self.c2) * x + &self.c1) * x + &self.c0
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.c3, &self.c2, &self.c1, &self.c0]
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    /// Largest coefficient size in bits, for growth reporting.
    pub fn coeff_bits(&self) -> u64 {
        self.coefficients().iter().map(|c| c.bits()).max().unwrap()
    }

    /// Extracts a_i = ⌊root⌋ by exponential bracketing plus binary search on
    /// the sign of f, then replaces f by the normalized x³·f(a_i + 1/x).
    pub fn next_quotient(&mut self) -> Result<BigInt> {
        let zero_hit = || Error::Invariant("integer root in a cubic tracking an irrational".into());
        if self.eval(&BigInt::one()).sign() != Sign::Minus {
            return Err(zero_hit());
        }
        let mut hi = BigInt::from(2);
        loop {
            match self.eval(&hi).sign() {
                Sign::Plus => break,
                Sign::NoSign => return Err(zero_hit()),
                Sign::Minus => hi <<= 1,
            }
        }
        let mut lo = BigInt::one();
        while &hi - &lo > BigInt::one() {
            let mid = (&hi + &lo) >> 1;
            match self.eval(&mid).sign() {
                Sign::Minus => lo = mid,
                Sign::Plus => hi = mid,
                Sign::NoSign => return Err(zero_hit()),
            }
        }
        let a = lo;
        // x³·f(a + 1/x) = f(a)x³ + f'(a)x² + (f''(a)/2)x + c₃, negated so the
        // leading coefficient −f(a) is positive again.
        let fa = self.eval(&a);
        let three_c3 = BigInt::from(3) * &self.c3;
        let fpa = (&three_c3 * &a + BigInt::from(2) * &self.c2) * &a + &self.c1;
        let half_fppa = three_c3 * &a + &self.c2;
        let d0 = std::mem::take(&mut self.c3);
        self.c3 = -fa;
        self.c2 = -fpa;
        self.c1 = -half_fppa;
        self.c0 = -d0;
        self.step_index += 1;
        Ok(a)
    }

    /// Next `count` quotients in order.
    pub fn quotients(&mut self, count: usize) -> Result<Vec<BigInt>> {
        (0..count).map(|_| self.next_quotient()).collect()
    }
}

/// Expansion state for ∛n, n a non-cube integer ≥ 2.
pub fn init(n: u64) -> Result<CubicCFState> {
    if n < 2 || is_cube(n) {
        return Err(Error::Domain(format!("{n} has a rational cube root")));
    }
    CubicCFState::from_coeffs(BigInt::one(), BigInt::zero(), BigInt::zero(), -BigInt::from(n))
}

/// Expansion state for (a/b)^{1/3} via b·x³ − a, requiring a > b ≥ 1 (root
/// above 1) and a/b not a rational cube.
pub fn init_ratio(a: u64, b: u64) -> Result<CubicCFState> {
    if b == 0 || a <= b {
        return Err(Error::Domain(format!("need a > b >= 1, got a={a}, b={b}")));
    }
    let g = a.gcd(&b);
    if is_cube(a / g) && is_cube(b / g) {
        return Err(Error::Domain(format!("{a}/{b} has a rational cube root")));
    }
    CubicCFState::from_coeffs(BigInt::from(b), BigInt::zero(), BigInt::zero(), -BigInt::from(a))
}

/// Convergent p_i/q_i of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub i: u64,
}

/// p_i = a_i p_{i−1} + p_{i−2} and likewise for q, from p_{−1} = 1,
/// p_{−2} = 0, q_{−1} = 0, q_{−2} = 1.
pub fn convergents(quotients: &[BigInt]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    for (i, a) in quotients.iter().enumerate() {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Convergent { p, q, i: i as u64 });
    }
    out
}

/// 1/((a_{i+1} + 2)·q_i²), a strict lower bound on |α − p_i/q_i|.
pub fn gap_lower_bound(conv: &Convergent, a_next: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), (a_next + BigInt::from(2)) * &conv.q * &conv.q)
}

/// What a run is expanding, kept for checkpoint identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfSource {
    Integer(u64),
    Ratio(u64, u64),
}

/// A resumable expansion: the cubic state plus the trailing convergent pair
/// and the running quotient maximum.
#[derive(Debug, Clone)]
pub struct CfRun {
    pub source: CfSource,
    pub state: CubicCFState,
    p1: BigInt,
    p2: BigInt,
    q1: BigInt,
    q2: BigInt,
    max_a: BigInt,
    argmax: u64,
}

impl CfRun {
    pub fn new(source: CfSource) -> Result<Self> {
        let state = match source {
            CfSource::Integer(n) => init(n)?,
            CfSource::Ratio(a, b) => init_ratio(a, b)?,
        };
        Ok(CfRun {
            source,
            state,
            p1: BigInt::one(),
            p2: BigInt::zero(),
            q1: BigInt::zero(),
            q2: BigInt::one(),
            max_a: BigInt::zero(),
            argmax: 0,
        })
    }

    /// Produces a_i for i = step_index, extending convergents and maximum.
    pub fn step(&mut self) -> Result<BigInt> {
        let i = self.state.step_index;
        let a = self.state.next_quotient()?;
        let p = &a * &self.p1 + &self.p2;
        let q = &a * &self.q1 + &self.q2;
        self.p2 = std::mem::replace(&mut self.p1, p);
        self.q2 = std::mem::replace(&mut self.q1, q);
        if a > self.max_a {
            self.max_a = a.clone();
            self.argmax = i;
        }
        Ok(a)
    }

    /// Number of quotients produced so far.
    pub fn produced(&self) -> u64 {
        self.state.step_index
    }

    pub fn max_quotient(&self) -> (&BigInt, u64) {
        (&self.max_a, self.argmax)
    }

    /// Convergent of the last produced quotient.
    pub fn last_convergent(&self) -> Option<Convergent> {
        if self.state.step_index == 0 {
            return None;
        }
        Some(Convergent { p: self.p1.clone(), q: self.q1.clone(), i: self.state.step_index - 1 })
    }

    /// Exponent E certifying q_last ≥ 10^E, from the bit length and the
    /// underestimate 301029/10⁶ < log₁₀2.
    pub fn q_digits_lb(&self) -> u64 {
        let bits = self.q1.bits();
        if bits <= 1 {
            return 0;
        }
        (bits - 1) * 301_029 / 1_000_000
    }

    /// Serializes the run as versioned decimal text.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut s = String::from("CBIRCF1\n");
        match self.source {
            CfSource::Integer(n) => writeln!(s, "source n {n}").unwrap(),
            CfSource::Ratio(a, b) => writeln!(s, "source ratio {a} {b}").unwrap(),
        }
        writeln!(s, "steps {}", self.state.step_index).unwrap();
        for (name, v) in [
            ("c3", &self.state.c3),
            ("c2", &self.state.c2),
            ("c1", &self.state.c1),
            ("c0", &self.state.c0),
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("q1", &self.q1),
            ("q2", &self.q2),
            ("max_a", &self.max_a),
        ] {
            writeln!(s, "{name} {v}").unwrap();
        }
        writeln!(s, "argmax {}", self.argmax).unwrap();
        std::fs::write(path, s)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        if lines.next() != Some("CBIRCF1") {
            return Err(Error::Format("checkpoint missing CBIRCF1 header".into()));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("checkpoint truncated before {name}")))?;
            line.strip_prefix(name)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| Error::Format(format!("expected field {name}, got {line:?}")))
        };
        let bad = |what: &str| Error::Format(format!("unparsable {what} in checkpoint"));
        let source_line = field("source")?;
        let source = match source_line.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", n] => CfSource::Integer(n.parse().map_err(|_| bad("source"))?),
            ["ratio", a, b] => CfSource::Ratio(
                a.parse().map_err(|_| bad("source"))?,
                b.parse().map_err(|_| bad("source"))?,
            ),
            _ => return Err(bad("source")),
        };
        let steps: u64 = field("steps")?.parse().map_err(|_| bad("steps"))?;
        let mut big = |name: &str| -> Result<BigInt> {
            field(name)?.parse().map_err(|_| bad(name))
        };
        let state = CubicCFState {
            c3: big("c3")?,
            c2: big("c2")?,
            c1: big("c1")?,
            c0: big("c0")?,
            step_index: steps,
        };
        let run = CfRun {
            source,
            state,
            p1: big("p1")?,
            p2: big("p2")?,
            q1: big("q1")?,
            q2: big("q2")?,
            max_a: big("max_a")?,
            argmax: field("argmax")?.parse().map_err(|_| bad("argmax"))?,
        };
        if run.state.step_index > 0 && run.state.eval(&BigInt::one()).sign() != Sign::Minus {
            return Err(Error::Format("checkpoint state violates root localization".into()));
        }
        Ok(run)
    }
}

/// Scan result: the largest quotient over i ≤ count and a digit lower bound
/// on the final convergent denominator.
#[derive(Debug, Clone)]
pub struct MaxScan {
    pub argmax: u64,
    pub max: BigInt,
    /// q_count ≥ 10^{q_digits_lb}.
    pub q_digits_lb: u64,
}

/// Max of a_i over 0 ≤ i ≤ count for ∛n.
pub fn max_quotient_scan(n: u64, count: u64) -> Result<MaxScan> {
    let mut run = CfRun::new(CfSource::Integer(n))?;
    for _ in 0..=count {
        run.step()?;
    }
    let (max, argmax) = run.max_quotient();
    Ok(MaxScan { argmax, max: max.clone(), q_digits_lb: run.q_digits_lb() })
}
