//! Acceptance suite: one test per exit criterion, every comparison exact,
//! every runtime budget pinned. Run with `--nocapture` to see the
//! per-criterion pass lines.

use std::time::{Duration, Instant};

use num::bigint::BigInt;
use num::integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use smallknot::cert::{
    admissible_k, certify_lens, certify_spherical, check_case_identity, check_family_identity,
    check_table_laws, LensSpace, Verdict,
};
use smallknot::cfrac::{seifert_family_exclusion, ContinuedFraction, SimpleCF};
use smallknot::error::Error;
use smallknot::rational::{ExtendedSlope, Fraction, MobiusMap, Solutions};
use smallknot::slope_table::{pair_in_table, table_families, SlopeFamily, SlopePair};

fn budget(started: Instant, limit: Duration, what: &str) -> Duration {
    let elapsed = started.elapsed();
    assert!(
        elapsed < limit,
        "{what} took {elapsed:?}, over the {limit:?} budget"
    );
    elapsed
}

#[test]
fn criterion_1_family_identity_sweep() {
    let started = Instant::now();
    let failures: Vec<String> = (2i64..=10_000)
        .into_par_iter()
        .filter_map(|k| check_family_identity(k).err())
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
    let elapsed = budget(started, Duration::from_secs(5), "criterion 1");
    println!(
        "[PASS] criterion 1: [2,2k,-2] = [2,2k-1,2] = 8k/(4k-1) for k = 2..=10000, exact ({elapsed:?})"
    );
}

#[test]
fn criterion_2_case_identity_sweep() {
    let started = Instant::now();
    for w in 1..=50 {
        for u in -50..=-3 {
            check_case_identity(w, u).unwrap();
        }
    }
    let elapsed = budget(started, Duration::from_secs(1), "criterion 2");
    println!(
        "[PASS] criterion 2: [2w+1,2u+1] = [2w,1,-2u-2] for w = 1..=50, u = -50..=-3, exact ({elapsed:?})"
    );
}

#[test]
fn criterion_3_odd_form_exclusion_sweep() {
    let started = Instant::now();
    let failures: Vec<i64> = (2i64..=1_000)
        .into_par_iter()
        .filter(|&k| !seifert_family_exclusion(k).unwrap().excluded())
        .collect();
    assert!(failures.is_empty(), "counterexamples at k = {failures:?}");
    let elapsed = budget(started, Duration::from_secs(10), "criterion 3");
    println!(
        "[PASS] criterion 3: no [2w+1,2u+1] presentation matches C(2,2k,-2) for k = 2..=1000 ({elapsed:?})"
    );
}

fn random_slope(rng: &mut ChaCha8Rng, allow_empty: bool) -> ExtendedSlope {
    match rng.gen_range(0..12u8) {
        0 => ExtendedSlope::Infinity,
        1 if allow_empty => ExtendedSlope::Empty,
        _ => {
            let n = rng.gen_range(-12i64..=12);
            let d = rng.gen_range(1i64..=4);
            ExtendedSlope::from_ratio(n, d).unwrap()
        }
    }
}

fn random_pair(rng: &mut ChaCha8Rng, families: &[SlopeFamily]) -> SlopePair {
    if rng.gen_bool(0.4) {
        // Draw from a parametric row so member pairs occur.
        let parametric: Vec<&SlopeFamily> =
            families.iter().filter(|f| f.is_parametric()).collect();
        let family = parametric[rng.gen_range(0..parametric.len())];
        let interval = family.interval().unwrap();
        let mut t = ExtendedSlope::Infinity;
        while !interval.contains(&t) {
            t = random_slope(rng, false);
        }
        let pair = family.pair_at(&t).unwrap();
        if rng.gen_bool(0.5) {
            pair.swapped()
        } else {
            pair
        }
    } else {
        loop {
            let a = random_slope(rng, true);
            let b = random_slope(rng, true);
            if let Ok(pair) = SlopePair::new(a, b) {
                return pair;
            }
        }
    }
}

#[test]
fn criterion_4_table_laws() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5406);
    for k in [1i64, 2, 5, 100] {
        // Partner laws and grid sampling (denominators up to 26 give at
        // least 200 grid parameters per parametric row).
        let families = table_families(k).unwrap();
        let parametric_rows = families.iter().filter(|f| f.is_parametric()).count();
        let sampled = check_table_laws(k, 26).unwrap();
        assert!(
            sampled >= 200 * parametric_rows,
            "k = {k}: only {sampled} grid samples across {parametric_rows} rows"
        );

        // Swap closure on 1000 random pairs.
        let extended: Vec<SlopeFamily> = families
            .iter()
            .cloned()
            .chain(families.iter().map(|f| f.swapped()))
            .collect();
        for _ in 0..1_000 {
            let pair = random_pair(&mut rng, &families);
            let on_extended = extended.iter().any(|f| f.contains(&pair).is_some());
            let swapped = pair_in_table(k, &pair.swapped(), false).unwrap().is_member();
            assert_eq!(on_extended, swapped, "swap closure fails at k = {k} for {pair}");
            let direct = pair_in_table(k, &pair, false).unwrap().is_member();
            assert_eq!(direct, swapped, "table is not swap-closed at k = {k} for {pair}");
        }
    }
    let elapsed = budget(started, Duration::from_secs(10), "criterion 4");
    println!(
        "[PASS] criterion 4: inf/empty partner laws, swap closure (1000 random pairs), and \
         grid completeness (>= 200 parameters per row) at k = 1, 2, 5, 100 ({elapsed:?})"
    );
}

#[test]
fn criterion_5_lens_certificate_sweep() {
    let started = Instant::now();
    let inputs: Vec<(i64, i64)> = (1..=30)
        .flat_map(|p| (-30..=30).map(move |q| (p, q)))
        .collect();
    let failures: Vec<String> = inputs
        .into_par_iter()
        .flat_map_iter(|(p, q)| {
            let mut bad = Vec::new();
            match LensSpace::new(p, q) {
                Err(_) => {
                    // Malformed input: invalid, never refuted.
                    for k in [0, 1, 2, 5] {
                        let cert = certify_lens(p, q, k);
                        if cert.verdict() != Verdict::Invalid {
                            bad.push(format!("L({p},{q}) k={k}: {}", cert.verdict()));
                        }
                    }
                }
                Ok(ls) => {
                    // Below-range k: invalid.
                    for k in [0, 1] {
                        let cert = certify_lens(p, q, k);
                        if cert.verdict() != Verdict::Invalid {
                            bad.push(format!("L({p},{q}) k={k}: {}", cert.verdict()));
                        }
                    }
                    // First five admissible k: certified.
                    let ks: Vec<i64> = admissible_k(&ls).take(5).collect();
                    for &k in &ks {
                        let cert = certify_lens(p, q, k);
                        if cert.verdict() != Verdict::Certified {
                            bad.push(format!("L({p},{q}) k={k}: {}", cert.verdict()));
                        }
                    }
                    // The skipped k (p = 4k|q|), when in range: invalid.
                    for k in 2..=*ks.last().unwrap() {
                        if !ks.contains(&k) {
                            let cert = certify_lens(p, q, k);
                            if cert.verdict() != Verdict::Invalid {
                                bad.push(format!("L({p},{q}) skipped k={k}: {}", cert.verdict()));
                            }
                        }
                    }
                }
            }
            bad
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
    let elapsed = budget(started, Duration::from_secs(60), "criterion 5");
    println!(
        "[PASS] criterion 5: certified the first 5 admissible k for every valid (p, q) with \
         p <= 30, |q| <= 30; every hypothesis violation is invalid, never refuted ({elapsed:?})"
    );
}

#[test]
fn criterion_6_spherical_certificate_sweep() {
    let started = Instant::now();
    let inputs: Vec<(i64, i64)> = (-200i64..=200)
        .flat_map(|a3| (3..=5).map(move |b3| (a3, b3)))
        .collect();
    let failures: Vec<String> = inputs
        .into_par_iter()
        .filter_map(|(a3, b3)| {
            let coprime = a3 != 0 && a3.unsigned_abs().gcd(&b3.unsigned_abs()) == 1;
            match certify_spherical(a3, b3) {
                Ok(cert) if a3.abs() >= 2 && coprime => {
                    // Certified slopes are non-integral (hence avoid the
                    // exceptional integers 1, 2, 3).
                    if let smallknot::cert::ManifoldDescriptor::Spherical {
                        surgery_slope, ..
                    } = &cert.manifold
                    {
                        if cert.verdict() == Verdict::Certified && surgery_slope.is_integer() {
                            return Some(format!("({a3},{b3}): integral slope {surgery_slope}"));
                        }
                    }
                    (cert.verdict() != Verdict::Certified)
                        .then(|| format!("({a3},{b3}): {}", cert.verdict()))
                }
                Ok(_) => Some(format!("({a3},{b3}): expected a rejection")),
                Err(Error::ExcludedCase(_)) if a3.abs() == 1 && coprime => None,
                Err(Error::InvalidInput(_)) if !coprime => None,
                Err(e) => Some(format!("({a3},{b3}): {e}")),
            }
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
    let elapsed = budget(started, Duration::from_secs(10), "criterion 6");
    println!(
        "[PASS] criterion 6: certified every (a3, b3) with 2 <= |a3| <= 200, b3 in {{3,4,5}}, \
         gcd = 1; a3 = ±1 rejected as the excluded family ({elapsed:?})"
    );
}

#[test]
fn criterion_7_negative_controls() {
    // (8, 1, 2) violates exactly the slope hypothesis, citing 4k.
    let cert = certify_lens(8, 1, 2);
    assert_eq!(cert.verdict(), Verdict::Invalid);
    let failed = cert.failed_hypotheses();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("4k"), "reason was: {}", failed[0]);

    // The checker is not vacuous: (empty, -8) at k = 2 is a member.
    let pair = SlopePair::new(
        ExtendedSlope::Empty,
        ExtendedSlope::Finite(Fraction::from_integer(-8)),
    )
    .unwrap();
    let report = pair_in_table(2, &pair, true).unwrap();
    let witness = report.witness().expect("(empty, -8) is in the k = 2 table");
    assert_eq!(witness.family, "(-4k,empty),(empty,-4k)");

    // (inf, 0) is a member at every k, through the reciprocal row at t = 0.
    for k in [1i64, 2, 5, 100] {
        let pair = SlopePair::new(ExtendedSlope::Infinity, ExtendedSlope::zero()).unwrap();
        let report = pair_in_table(k, &pair, true).unwrap();
        let witness = report.witness().expect("(inf, 0) is always a member");
        assert_eq!(witness.family, "(2/t,2t)");
        assert_eq!(witness.parameter, Some(ExtendedSlope::zero()));
    }
    println!(
        "[PASS] criterion 7: (8,1,2) invalid citing 4k != ±p/q; (empty,-8) found at k = 2; \
         (inf,0) found via (2/t,2t) at t = 0"
    );
}

#[test]
fn criterion_8_randomized_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5408);

    // Simple-form round trip on 10^4 random rationals above 1.
    for _ in 0..10_000 {
        let a = rng.gen_range(1i64..=1_000_000);
        let b = rng.gen_range(1i64..=1_000_000);
        if a == b {
            continue;
        }
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        let r = Fraction::new(hi, lo).unwrap();
        assert_eq!(SimpleCF::of(&r).unwrap().value(), r);
    }

    // Reversal law q * q' = (-1)^(n+1) (mod p) on 10^3 random simple forms.
    for _ in 0..1_000 {
        let len = rng.gen_range(1usize..=9);
        let mut terms: Vec<i64> = (0..len).map(|_| rng.gen_range(1i64..=10)).collect();
        if len > 1 {
            *terms.last_mut().unwrap() = rng.gen_range(2i64..=10);
        }
        let n = terms.len();
        let cf = ContinuedFraction::new(terms).unwrap();
        let value = cf.evaluate().as_fraction().cloned().unwrap();
        let reversed = cf.reversed().evaluate().as_fraction().cloned().unwrap();
        assert_eq!(reversed.numer(), value.numer());
        let p = value.numer();
        let sign = BigInt::from(if n.is_multiple_of(2) { -1 } else { 1 });
        assert_eq!(
            (value.denom() * reversed.denom()).mod_floor(p),
            sign.mod_floor(p)
        );
    }

    // Möbius solve/eval round trip on 10^4 random nondegenerate maps and
    // points.
    let mut done = 0;
    while done < 10_000 {
        let (a, b, c, d) = (
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
            rng.gen_range(-50i64..=50),
        );
        if a * d - b * c == 0 {
            continue;
        }
        let m = MobiusMap::new(a, b, c, d).unwrap();
        let t = random_slope(&mut rng, false);
        let v = m.eval(&t).unwrap();
        assert_eq!(m.solve(&v), Solutions::Unique(t));
        done += 1;
    }

    println!(
        "[PASS] criterion 8: 10^4 simple-form round trips, 10^3 reversal-law checks, \
         10^4 Möbius solve/eval round trips, all exact"
    );
}
