//! Acceptance gates, one test per criterion. Each test prints its headline
//! numbers under --nocapture; cargo's per-test line is the pass/fail verdict.
//! Variants marked #[ignore] run far past the desk horizons and are meant for
//! `cargo test --test acceptance -- --ignored --nocapture`.

use cubirr_core::cf;
use cubirr_core::denoms::{self, DMode};
use cubirr_core::hypergeom::{self, HGParams};
use cubirr_core::measures::{self, MeasureStatus, Scaling};
use cubirr_core::sieve;
use cubirr_core::{Dyadic, RealInterval};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rat(num: i128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a dyadic mant·2^exp.
fn dy_rat(d: &Dyadic) -> BigRational {
    if d.exp >= 0 {
        BigRational::from_integer(d.mant.clone() << d.exp as u64)
    } else {
        BigRational::new(d.mant.clone(), BigInt::one() << (-d.exp) as u64)
    }
}

/// lo ≤ iv ≤ hi, endpoints compared exactly.
fn iv_within(iv: &RealInterval, lo: &BigRational, hi: &BigRational) -> bool {
    dy_rat(&iv.lo) >= *lo && dy_rat(&iv.hi) <= *hi
}

/// Plain Euclidean continued fraction of a rational, at most `count` terms.
fn rational_cf(x: &BigRational, count: usize) -> Vec<BigInt> {
    let mut x = x.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let fl = x.floor().to_integer();
        out.push(fl.clone());
        x -= BigRational::from_integer(fl);
        if x.is_zero() {
            break;
        }
        x = x.recip();
    }
    out
}

/// 1. The valuation criterion reproduces the exact denominator D_r for
/// (m, n) = (1, 3) over every r ≤ 2000.
#[test]
fn acceptance_01_criterion_equals_exact() {
    let mismatches = denoms::criterion_equality_scan(1, 3, 2000).unwrap();
    assert!(mismatches.is_empty(), "criterion != exact at r = {mismatches:?}");
    println!("acceptance 01: criterion == D_r for (1,3), all r <= 2000");
}

/// 2. Frozen divisibility facts about specific denominators.
#[test]
fn acceptance_02_denominator_divisibility() {
    let val = |m, n, r, p: u64| -> u32 {
        let map = denoms::denom_exact_valuations(HGParams::new(m, n, r).unwrap()).unwrap();
        map.get(&p).copied().unwrap_or(0)
    };
    assert!(val(2, 3, 17, 7) >= 2, "49 must divide D_17 for (2,3)");
    assert!(val(2, 3, 10, 5) >= 1, "5 must divide D_10 for (2,3)");
    assert!(val(1, 3, 42, 5) >= 2, "25 must divide D_42 for (1,3)");
    assert!(val(1, 3, 1042, 5) >= 3, "125 must divide D_1042 for (1,3)");
    assert_eq!(val(1, 3, 43, 5), 1, "v_5(D_43) for (1,3)");
    println!("acceptance 02: all five divisibility facts hold");
}

/// 3. min over 1 ≤ r ≤ 2000 of 0.29·D_r²/(r^{1/6}·4^r) sits in
/// [0.00501, 0.00502] and is attained at r = 13.
#[test]
fn acceptance_03_small_ratio_minimum() {
    let scan = denoms::scan_ratio_small(2000).unwrap();
    assert_eq!(scan.argmin, 13, "argmin");
    assert!(
        iv_within(&scan.min, &rat(501, 100_000), &rat(502, 100_000)),
        "min enclosure {:?} outside [0.00501, 0.00502]",
        scan.min
    );
    println!(
        "acceptance 03: min ≈ {:.6} at r = {}",
        scan.min.approx_f64(),
        scan.argmin
    );
}

/// 4 (desk horizon). The two large-ratio maxima over r ≤ 2500 match their
/// frozen enclosures, stay below the global constants 1.161·10³⁹ and
/// 1.176·10⁴⁰, and nothing is flagged.
#[test]
fn acceptance_04_large_ratio_scan_desk() {
    let scan = denoms::scan_ratio_large(2500, DMode::ThreeHalves).unwrap();
    assert_eq!(scan.argmax1, 2346, "argmax1");
    assert_eq!(scan.argmax2, 2346, "argmax2");
    assert!(scan.max1_exceeds_sci(212_332, 10) && scan.max1_below_sci(212_333, 10));
    assert!(scan.max2_exceeds_sci(1_053_266, 10) && scan.max2_below_sci(1_053_267, 10));
    assert!(scan.max1_below_sci(1161, 36));
    assert!(scan.max2_below_sci(1176, 37));
    assert!(scan.flagged.is_empty(), "flagged r = {:?}", scan.flagged);
    println!(
        "acceptance 04 (desk): max1 ≈ {:.4e}, max2 ≈ {:.4e} at r = {}",
        scan.max1.approx_f64(),
        scan.max2.approx_f64(),
        scan.argmax1
    );
}

/// 4 (full horizon, hours). Same two constants over r ≤ 25000 with the
/// lower-bound N_r: the plain gcd bound is known to overshoot by a factor
/// 3² at r = 19946, so this records the honest outcome rather than pass.
#[test]
#[ignore]
fn acceptance_04_large_ratio_scan_full() {
    let scan = denoms::scan_ratio_large_chunked(25_000, DMode::ThreeHalves, 2500).unwrap();
    println!(
        "acceptance 04 (full): max1 ≈ {:.6e} at r = {}, max2 ≈ {:.6e} at r = {}",
        scan.max1.approx_f64(),
        scan.argmax1,
        scan.max2.approx_f64(),
        scan.argmax2
    );
    println!("acceptance 04 (full): flagged r = {:?}", scan.flagged);
    println!(
        "acceptance 04 (full): ln enclosures q40 max1 = {:?}, max2 = {:?}",
        scan.max1_ln_q40, scan.max2_ln_q40
    );
    assert!(scan.max1_below_sci(1161, 36), "max1 exceeds 1.161e39");
    assert!(scan.max2_below_sci(1176, 37), "max2 exceeds 1.176e40");
}

/// 5. Sieve to 10⁹ and verify the |θ − y/φ(k)|, |ψ − y/φ(k)| ≤ c√y bounds
/// for the seven tracked classes, plus the exact (c/ε)² ≤ x₀ crossovers.
#[test]
fn acceptance_05_sqrt_deviation_bounds() {
    let stats = sieve::accumulate(1_000_000_000, 10_000_000, 100_000_000).unwrap();
    let cases: [(u64, u64, i64); 7] = [
        (1, 0, 2_052_818),
        (3, 1, 1_798_158),
        (3, 2, 1_798_158),
        (6, 1, 1_798_158),
        (6, 5, 1_798_158),
        (4, 1, 1_780_719),
        (4, 3, 1_780_719),
    ];
    for (k, l, c) in cases {
        let v = sieve::verify_sqrt_bound(&stats, k, l, c).unwrap();
        assert!(
            v.pass,
            "class ({k},{l}): deviation {}·10⁻⁶ at y = {} exceeds c = {c}·10⁻⁶",
            v.worst_scaled, v.worst_at
        );
        println!(
            "acceptance 05: ({k},{l}) worst {}·10⁻⁶ at y = {} within c = {c}·10⁻⁶",
            v.worst_scaled, v.worst_at
        );
    }
    assert!(sieve::crossover_check(2_052_818, 186, 12_200_000_000));
    assert!(sieve::crossover_check(1_798_158, 351, 2_700_000_000));
    assert!(sieve::crossover_check(1_780_719, 511, 2_700_000_000));
    println!("acceptance 05: all three (c/ε)² ≤ x₀ crossovers hold exactly");
}

/// 6. The digit-reversal-lemma exponent from the θ(y;3,2) envelope on
/// (0, 6·10⁸] stays below 0.910993 for n ≤ 200.
#[test]
fn acceptance_06_drl_exponent() {
    let y_max = 600_000_000;
    let points = sieve::drl_points(y_max, 200);
    let table = sieve::envelope(&points, y_max).unwrap();
    let exp = sieve::drl_exponent(200, &table).unwrap();
    assert!(
        dy_rat(&exp.hi) <= rat(910_993, 1_000_000),
        "exponent enclosure {:?} exceeds 0.910993",
        exp
    );
    assert!(dy_rat(&exp.lo) > rat(9, 10), "exponent implausibly small");
    println!("acceptance 06: exponent ∈ [{:.9}, {:.9}]", exp.lo.approx_f64(), exp.hi.approx_f64());
}

/// 7 (desk horizon). The largest partial quotient of ∛3 over the first
/// 14000 terms is a_13628 = 738358, and the first 1000 quotients of ∛2
/// match a self-contained oracle: the continued fractions of the two exact
/// rational endpoints of an 8192-bit enclosure of ∛2 agree past 1000 terms,
/// so that shared prefix is the true expansion.
#[test]
fn acceptance_07_cf_quotients() {
    let scan = cf::max_quotient_scan(3, 14_000).unwrap();
    assert_eq!((scan.max.clone(), scan.argmax), (BigInt::from(738_358), 13_628));
    println!("acceptance 07: ∛3 max quotient {} at i = {}", scan.max, scan.argmax);

    let encl = RealInterval::from_int(2).cbrt(8192);
    let cf_lo = rational_cf(&dy_rat(&encl.lo), 1100);
    let cf_hi = rational_cf(&dy_rat(&encl.hi), 1100);
    let agree = cf_lo.iter().zip(&cf_hi).take_while(|(x, y)| x == y).count();
    assert!(agree >= 1000, "oracle endpoints only agree on {agree} quotients");
    let got = cf::init(2).unwrap().quotients(1000).unwrap();
    assert_eq!(got.as_slice(), &cf_lo[..1000], "∛2 quotients diverge from oracle");
    println!("acceptance 07: first 1000 quotients of ∛2 match the endpoint oracle (prefix {agree})");
}

/// 7 (full horizon, days). Deep scan of ∛2: largest quotient 4156269 at
/// i = 484708, with the denominator past 10²⁵⁷⁰⁰⁰.
#[test]
#[ignore]
fn acceptance_07_cf_deep_scan_full() {
    let scan = cf::max_quotient_scan(2, 484_709).unwrap();
    println!(
        "acceptance 07 (full): max quotient {} at i = {}, q > 10^{}",
        scan.max, scan.argmax, scan.q_digits_lb
    );
    assert_eq!((scan.max.clone(), scan.argmax), (BigInt::from(4_156_269), 484_708));
    assert!(scan.q_digits_lb > 257_000);
}

/// 8. Every published (n, κ_t) row is reproduced from its pair: status
/// Measure and κ strictly below κ_t with gap under 7.5·10⁻⁴. The table's
/// rounding has a small safety margin that varies by row (n = 5, 25 carry
/// two extra units, n = 17, 20, 65 two fewer), so the rounded
/// ⌈(κ + 0.0005)·10⁴⌉ is pinned to ±1 on the named subset and to ±2
/// everywhere. Five rows also pin down their scaling class and (s, t).
#[test]
fn acceptance_08_published_table_rows() {
    let ten4 = BigRational::from_integer(BigInt::from(10_000));
    let subset = [2u64, 3, 7, 41, 57];
    let mut worst_gap = BigRational::zero();
    let mut deltas = std::collections::BTreeMap::new();
    for row in measures::TABLE4.iter() {
        let t1 = measures::table1_row(row.n).unwrap();
        let p = measures::theorem_params(&row.a(), &row.b()).unwrap();
        assert_eq!(p.status, MeasureStatus::Measure, "n = {}", row.n);
        let kappa = p.kappa.as_ref().unwrap();
        let (klo, khi) = (dy_rat(&kappa.lo), dy_rat(&kappa.hi));
        let kt = t1.kappa_table();
        assert!(khi < kt, "n = {}: κ not strictly below table", row.n);
        let gap = &kt - &klo;
        assert!(gap < rat(75, 100_000), "n = {}: gap {} too wide", row.n, gap);
        if gap > worst_gap {
            worst_gap = gap;
        }
        let c_lo = (&klo * &ten4).ceil().to_integer() + BigInt::from(5);
        let c_hi = (&khi * &ten4).ceil().to_integer() + BigInt::from(5);
        assert_eq!(c_lo, c_hi, "n = {}: κ·10⁴ enclosure straddles an integer", row.n);
        let delta = (&c_lo - BigInt::from(t1.kappa_e4)).to_i64().unwrap();
        let limit = if subset.contains(&row.n) { 1 } else { 2 };
        assert!(delta.abs() <= limit, "n = {}: rounded κ off the table by {delta}", row.n);
        *deltas.entry(delta).or_insert(0u32) += 1;
    }
    println!(
        "acceptance 08: 51 rows reproduced, worst gap ≈ {:.6}, rounding deltas {:?}",
        worst_gap.to_f64().unwrap(),
        deltas
    );

    let classes: [(u64, bool, i64, i64); 5] = [
        (2, true, 4, 5),
        (3, false, 3, 2),
        (7, false, 44, 23),
        (41, false, 100, 29),
        (57, true, 33, 127),
    ];
    for (n, case_i, s, t) in classes {
        let row = measures::table4_row(n).unwrap();
        let got = measures::classify_scaling(n, &row.a(), &row.b()).unwrap();
        let want = if case_i {
            Scaling::CaseI { s: s.into(), t: t.into() }
        } else {
            Scaling::CaseII { s: s.into(), t: t.into() }
        };
        assert_eq!(got, want, "n = {n}");
    }
    println!("acceptance 08: scaling classes for n ∈ {{2, 3, 7, 41, 57}} as published");
}

/// 9. Scan of v(a, b) = 3^d·e^{−0.911}·(√a + √b)/(b(√a − √b)) over feasible
/// pairs with a ≤ 1000: 4564 pairs, maximum at (14, 11), strictly below
/// 1.822 with the frozen leading digits.
#[test]
fn acceptance_09_extremal_scan() {
    let scan = measures::extremal_scan(1000).unwrap();
    assert_eq!(scan.arg, (14, 11), "argmax");
    assert_eq!(scan.feasible, 4564, "feasible pair count");
    assert!(dy_rat(&scan.max.hi) < rat(1822, 1000), "max not below 1.822");
    assert!(
        iv_within(&scan.max, &rat(18_212_227_854, 10_000_000_000), &rat(18_212_227_855, 10_000_000_000)),
        "max enclosure {:?} off the frozen digits",
        scan.max
    );
    println!(
        "acceptance 09: {} feasible pairs, max ≈ {:.10} at {:?}",
        scan.feasible,
        scan.max.approx_f64(),
        scan.arg
    );
}

/// 10. End-to-end approximant checks: the algebraic identity at random
/// points, the polynomial sandwich, integrality with growth and remainder
/// bounds, continued-fraction invariants, and a desk-scale corollary run.
#[test]
fn acceptance_10_approximant_pipeline() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);

    // (a) z^{m/n}X − Y − (z−1)^{2r+1}R vanishes at 50 random (m, n, r, z).
    // The remainder series needs ~prec/z exact terms, so z stays off the
    // slow corner near 0.
    let coprime: [(u64, u64); 10] =
        [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 6), (5, 6), (3, 8), (2, 9), (4, 9)];
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(40u32));
    for _ in 0..50 {
        let (m, n) = coprime[rng.gen_range(0..coprime.len())];
        let r = rng.gen_range(0..=20u64);
        let den = rng.gen_range(8..=64u64);
        let num = rng.gen_range(den.div_ceil(8)..den);
        let z = rat(num as i128, den as u128);
        let params = HGParams::new(m, n, r).unwrap();
        let residual = hypergeom::check_identity(params, &z, 320).unwrap();
        assert!(residual.contains_zero(), "residual misses zero at {params:?}, z = {z}");
        assert!(
            hypergeom::identity_holds(params, &z, &tol, 320).unwrap(),
            "residual wider than 10⁻⁴⁰ at {params:?}, z = {z}"
        );
    }
    println!("acceptance 10a: identity residual ⊂ (−10⁻⁴⁰, 10⁻⁴⁰) at 50 random points");

    // (b) (1 + z)^r ≤ Y(z) ≤ (1 + √z)^{2r} on [0, 1] for m ≤ n/2; the lower
    // bound exactly, the upper through an outward √z enclosure.
    let halves: [(u64, u64); 6] = [(1, 2), (1, 3), (1, 4), (1, 6), (3, 8), (2, 9)];
    let sandwich = |m: u64, n: u64, r: u64, z: BigRational| {
        let y = hypergeom::y_poly(HGParams::new(m, n, r).unwrap()).eval(&z);
        let lower = (BigRational::one() + &z).pow(r as i32);
        assert!(lower <= y, "(1+z)^r > Y(z) at ({m},{n},{r}), z = {z}");
        let sz = RealInterval::from_rational(&z, 320).unwrap().sqrt(320).unwrap();
        let upper = sz.add(&RealInterval::from_int(1), 320).powi(2 * r, 320);
        let y_iv = RealInterval::from_rational(&y, 320).unwrap();
        assert!(
            y_iv.hi.cmp(&upper.lo) != std::cmp::Ordering::Greater,
            "Y(z) > (1+√z)^{{2r}} at ({m},{n},{r}), z = {z}"
        );
    };
    sandwich(1, 3, 50, rat(0, 1));
    sandwich(1, 3, 50, rat(1, 1));
    for _ in 0..48 {
        let (m, n) = halves[rng.gen_range(0..halves.len())];
        let r = rng.gen_range(1..=50u64);
        let den = rng.gen_range(2..=1000u64);
        let z = rat(rng.gen_range(0..=den) as i128, den as u128);
        sandwich(m, n, r, z);
    }
    println!("acceptance 10b: polynomial sandwich holds at 50 points, r ≤ 50");

    // (c) For (128, 125) and (9, 8), r ≤ 50: p_r, q_r integral, consecutive
    // determinants nonzero, (D_r/N_r)(a+b)^r ≤ q_r < k₀·Q^r, and both
    // remainder bounds.
    for (a, b) in [(128u64, 125u64), (9, 8)] {
        let p = measures::theorem_params(&BigInt::from(a), &BigInt::from(b)).unwrap();
        for r in 0..=50u64 {
            let pair = measures::approx_pair(a, b, r).unwrap();
            assert!(measures::determinant_nonzero(a, b, r).unwrap(), "determinant zero at r = {r}");
            let qest = BigRational::new(&pair.d_r * BigInt::from(a + b).pow(r as u32), pair.n_r.clone());
            assert!(qest <= BigRational::from_integer(pair.q.clone()), "q_{r} below (D/N)(a+b)^r");
            let growth = RealInterval::from_rational(&p.k0, 256).unwrap().mul(&p.q.powi(r, 256), 256);
            assert!(
                RealInterval::from_bigint(&pair.q).strictly_below(&growth),
                "q_{r} reaches k₀·Q^{r} for ({a},{b})"
            );
            assert_eq!(measures::remainder_check(a, b, r).unwrap(), (true, true), "remainder at r = {r}");
        }
    }
    println!("acceptance 10c: integrality, determinant, growth and remainder bounds for r ≤ 50");

    // (d) Convergent invariants for ∛2 and ∛3 up to i = 200: unit
    // determinant and 1/((a_{i+1}+2)q²) < |∛n − p/q| < 1/(a_{i+1}q²).
    for n in [2u64, 3] {
        let quotients = cf::init(n).unwrap().quotients(202).unwrap();
        let convs = cf::convergents(&quotients);
        let root = RealInterval::from_int(n as i64).cbrt(2048);
        for i in 0..=200usize {
            let det = (&convs[i + 1].p * &convs[i].q - &convs[i].p * &convs[i + 1].q).abs();
            assert!(det.is_one(), "determinant at i = {i} for ∛{n}");
            let c = &convs[i];
            let a_next = &quotients[i + 1];
            let pq = RealInterval::from_ratio(&c.p, &c.q, 2048).unwrap();
            let gap = root.sub(&pq, 2048);
            assert!(!gap.contains_zero(), "gap undecided at i = {i} for ∛{n}");
            let gap = if gap.hi.is_negative() { gap.neg() } else { gap };
            let lower = cf::gap_lower_bound(c, a_next);
            let upper = BigRational::new(BigInt::one(), a_next * &c.q * &c.q);
            assert!(
                RealInterval::from_rational(&lower, 2048).unwrap().strictly_below(&gap),
                "gap lower bound at i = {i} for ∛{n}"
            );
            assert!(
                gap.strictly_below(&RealInterval::from_rational(&upper, 2048).unwrap()),
                "gap upper bound at i = {i} for ∛{n}"
            );
        }
    }
    println!("acceptance 10d: CF determinant and gap sandwich for i ≤ 200, n ∈ {{2, 3}}");

    // (e) Desk corollary for ∛3 from the pair (9, 8) with a loosened
    // exponent: c₂ = 10⁻¹², κ_desk = 1.70689 gives ln Q1 ≈ 2.26·10⁴, short
    // enough to sweep every convergent below Q1. Q2 < 1, so the 50 direct
    // interval checks cover everything the counting shortcut cannot.
    let nine = BigInt::from(9);
    let eight = BigInt::from(8);
    let p = measures::theorem_params(&nine, &eight).unwrap();
    let kappa = p.kappa.clone().unwrap();
    let scaling = measures::classify_scaling(3, &nine, &eight).unwrap();
    assert_eq!(scaling, Scaling::CaseII { s: 3.into(), t: 2.into() });
    let c = measures::scaled_constant(3, p.c1.as_ref().unwrap(), &kappa, &scaling, 256).unwrap();
    let c2 = BigRational::new(BigInt::one(), BigInt::from(10).pow(12u32));
    let kt = rat(170_689, 100_000);
    let rec = measures::corollary_verify(3, &c2, &kt, &kappa, &c, 50, 20_000).unwrap();
    assert!(rec.pass, "desk corollary failed at convergents {:?}", rec.failures);
    assert!(rec.failures.is_empty());
    assert!(iv_within(&rec.q1_ln, &rat(22_500, 1), &rat(22_700, 1)), "ln Q1 = {:?}", rec.q1_ln);
    assert!(dy_rat(&rec.q2.hi) < BigRational::one(), "Q2 must sit below every convergent");
    assert_eq!(rec.direct_checked, 50);
    assert!(rec.checked >= 18_000 && rec.checked <= 19_500, "checked = {}", rec.checked);
    println!(
        "acceptance 10e: desk corollary pass, ln Q1 ≈ {:.2}, {} convergents ({} direct, {} shortcut), q > 10^{}",
        rec.q1_ln.approx_f64(),
        rec.checked,
        rec.direct_checked,
        rec.shortcut_checked,
        rec.q_digits_lb
    );
}

/// 10 (full horizon, days). The published ∛2 corollary itself: c₂ = 1/4
/// against κ_t = 1.4326 from the pair (128, 125), sweeping every convergent
/// below Q1 ≈ 10¹⁹⁰⁰⁰⁰.
#[test]
#[ignore]
fn acceptance_10_published_corollary_full() {
    let a = BigInt::from(128);
    let b = BigInt::from(125);
    let p = measures::theorem_params(&a, &b).unwrap();
    let kappa = p.kappa.clone().unwrap();
    let scaling = measures::classify_scaling(2, &a, &b).unwrap();
    let c = measures::scaled_constant(2, p.c1.as_ref().unwrap(), &kappa, &scaling, 256).unwrap();
    let t1 = measures::table1_row(2).unwrap();
    let rec = measures::corollary_verify(2, &t1.c2(), &t1.kappa_table(), &kappa, &c, 50, 600_000).unwrap();
    println!(
        "acceptance 10 (full): pass = {}, ln Q1 ≈ {:.1}, {} convergents, max quotient {} at i = {}",
        rec.pass,
        rec.q1_ln.approx_f64(),
        rec.checked,
        rec.max_quotient.0,
        rec.max_quotient.1
    );
    assert!(rec.pass, "failures at {:?}", rec.failures);
    assert!(dy_rat(&rec.q2.hi) < rat(90_000_000_000_000, 1), "Q2 = {:?}", rec.q2);
}
