//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test -- --nocapture`).
//!
//! Two published figures are unattainable as stated and their lines print
//! FAIL with the certified analysis instead of papering over the gap:
//! criterion 1's affine cell (the certified product rounds to 4329, not the
//! published 4328, which matches a truncated product) and criterion 9's 0.93
//! threshold (the truncated quadratic product at 10^6 is certifiably
//! 0.8898…, and reaching 0.93 needs primes beyond ~3·10^9). Every other
//! criterion both prints PASS and asserts.

use std::collections::BTreeSet;
use std::process::Command;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use eisenstein::density::partial_density;
use eisenstein::detect::candidate_primes;
use eisenstein::oracle::{
    brute_force_classify, enumerate_local_classes, verify_affine_lemmas,
    verify_coset_disjointness,
};
use eisenstein::sim::{sample_poly, trial_stream};
use eisenstein::{
    classify, density, expected_count, local_measure, render_table, run_experiment,
    CosetRep, FactorBudget, IntPoly, Kind, SimConfig, TableFormat, DEFAULT_SEED,
};

const CENSUS_GRID_CAP: u64 = 250_000_000; // admits the 5^12 windows at (5,5)

fn line(criterion: u32, what: &str, passed: bool, detail: &str) {
    println!(
        "criterion {} ({}): {} — {}",
        criterion,
        what,
        if passed { "PASS" } else { "FAIL" },
        detail
    );
}

#[test]
fn criterion_01_exact_densities_degree_3() {
    let tol = 1e-6;
    let mut counts = Vec::new();
    for kind in Kind::ALL {
        let enc = density(kind, 3, tol).unwrap();
        assert!(enc.width().to_f64().unwrap() <= tol);
        counts.push(expected_count(kind, 3, 20_000).unwrap());
    }
    assert_eq!(counts[0], 1112, "plain cell");
    assert_eq!(counts[1], 3353, "shifted cell");
    // the certified affine product rounds to 4329; the published 4328 is a
    // truncation artifact (cutting the product near P = 10^4 lands below the
    // rounding boundary, as checked here)
    assert_eq!(counts[2], 4329, "affine cell, certified value");
    let truncated = partial_density(Kind::Affine, 3, 10_000).unwrap();
    let truncated_count = 20_000.0 * truncated.lo_f64();
    assert!(
        truncated_count < 4328.5,
        "truncated product no longer explains the published 4328"
    );
    line(
        1,
        "exact densities, n=3",
        false,
        &format!(
            "plain 1112 and shifted 3353 reproduce the published cells; affine is \
             certifiably {} (20000·ρ ∈ [4328.52, 4328.54]) while the published 4328 \
             matches a product truncated near 10^4 (≈{:.1})",
            counts[2], truncated_count
        ),
    );
}

#[test]
fn criterion_02_exact_densities_degree_4_and_formula_identity() {
    let tol = 1e-6;
    let expected = [449u64, 1112, 1547];
    for (kind, want) in Kind::ALL.into_iter().zip(expected) {
        assert_eq!(expected_count(kind, 4, 20_000).unwrap(), want);
    }
    let plain3 = density(Kind::Plain, 3, tol).unwrap();
    let shifted4 = density(Kind::Shifted, 4, tol).unwrap();
    assert_eq!(plain3, shifted4, "formula identity must be bit-identical");
    line(
        2,
        "exact densities, n=4",
        true,
        "449 / 1112 / 1547 reproduced; plain(n=3) enclosure is bit-identical to shifted(n=4)",
    );
}

#[test]
fn criterion_03_monte_carlo_tables_within_4_sigma() {
    let mut details = Vec::new();
    for n in [3usize, 4] {
        let config = SimConfig {
            n,
            bound: 1_000_000,
            trials: 20_000,
            seed: DEFAULT_SEED,
            budget: FactorBudget::default(),
            workers: 0,
        };
        let r = run_experiment(&config).unwrap();
        assert_eq!(r.unknowns, 0, "unknowns at n = {}", n);
        assert_eq!(r.trials, 20_000);
        for kind in Kind::ALL {
            let z = r.z_scores[&kind];
            assert!(
                z.abs() <= 4.0,
                "n = {}, {}: found {} vs expected {} (z = {:.2})",
                n,
                kind,
                r.counts[&kind],
                r.expected[&kind],
                z
            );
        }
        details.push(format!(
            "n={}: found {}/{}/{} vs expected {}/{}/{}, max |z| = {:.2}, unknowns 0",
            n,
            r.counts[&Kind::Plain],
            r.counts[&Kind::Shifted],
            r.counts[&Kind::Affine],
            r.expected[&Kind::Plain],
            r.expected[&Kind::Shifted],
            r.expected[&Kind::Affine],
            Kind::ALL
                .iter()
                .map(|k| r.z_scores[k].abs())
                .fold(0.0f64, f64::max)
        ));
    }
    line(
        3,
        "Monte Carlo tables, 20000 trials each",
        true,
        &details.join("; "),
    );
}

#[test]
fn criterion_04_local_measure_exactness_on_the_grid() {
    for p in [2u64, 3, 5] {
        for n in 2..=5 {
            let census = enumerate_local_classes(p, n, CENSUS_GRID_CAP).unwrap();
            for kind in Kind::ALL {
                assert_eq!(
                    census.measure(kind),
                    local_measure(kind, p, n).unwrap(),
                    "(p, n) = ({}, {}), {}",
                    p,
                    n,
                    kind
                );
            }
        }
    }
    line(
        4,
        "local measure exactness",
        true,
        "census ratios equal (p-1)²/p^(n+2), (p-1)²/p^(n+1), (p+1)(p-1)²/p^(n+2) \
         exactly for all p ∈ {2,3,5}, n ∈ {2,3,4,5}",
    );
}

#[test]
fn criterion_05_coset_disjointness_on_the_grid() {
    for p in [2u64, 3, 5] {
        for n in 2..=5 {
            assert!(
                verify_coset_disjointness(p, n, CENSUS_GRID_CAP).unwrap(),
                "(p, n) = ({}, {})",
                p,
                n
            );
        }
    }
    line(
        5,
        "coset disjointness",
        true,
        "no residue window mod p² is Eisenstein under two distinct coset \
         representatives, for all p ∈ {2,3,5}, n ∈ {2,3,4,5}",
    );
}

#[test]
fn criterion_06_affine_lemmas_exhaustive_and_sampled() {
    let mut pairs = 0u64;
    for n in [2usize, 3, 4] {
        let report = verify_affine_lemmas(2, n, None).unwrap();
        assert!(report.passed, "exhaustive (2, {}): {:?}", n, report.counterexample);
        pairs += report.pairs_checked;
    }
    let sampled = verify_affine_lemmas(3, 3, Some(10_000)).unwrap();
    assert!(sampled.passed, "sampled (3, 3): {:?}", sampled.counterexample);
    line(
        6,
        "affine transformation lemmas",
        true,
        &format!(
            "exhaustive at p=2 for n ∈ {{2,3,4}} ({} pairs, singular matrices included) \
             and 10^4 sampled pairs at (3, 3)",
            pairs
        ),
    );
}

#[test]
fn criterion_07_detector_equals_brute_force() {
    let budget = FactorBudget::default();
    // every degree-3 polynomial with coefficients in [-2, 2], leading != 0
    let mut exhaustive = 0u64;
    for a3 in [-2i64, -1, 1, 2] {
        for a2 in -2i64..=2 {
            for a1 in -2i64..=2 {
                for a0 in -2i64..=2 {
                    let f = IntPoly::from_coeffs([a0, a1, a2, a3]);
                    let fast = classify(&f, &budget).unwrap();
                    let slow = brute_force_classify(&f).unwrap();
                    assert_eq!(fast, slow, "mismatch at {}", f);
                    exhaustive += 1;
                }
            }
        }
    }
    assert_eq!(exhaustive, 500);
    // plus seeded random polynomials of height <= 10 for n in {2, 3, 4}
    let mut random = 0u64;
    for n in [2usize, 3, 4] {
        for trial in 0..1_000u64 {
            let mut rng = trial_stream(DEFAULT_SEED ^ n as u64, trial);
            let f = sample_poly(&mut rng, n, 10);
            let fast = classify(&f, &budget).unwrap();
            let slow = brute_force_classify(&f).unwrap();
            assert_eq!(fast, slow, "mismatch at {}", f);
            random += 1;
        }
    }
    line(
        7,
        "detector–oracle equivalence",
        true,
        &format!(
            "classify agrees with exhaustive-shift brute force on all {} small cubics \
             and {} random polynomials of height ≤ 10",
            exhaustive, random
        ),
    );
}

#[test]
fn criterion_08_worked_example_fidelity() {
    let budget = FactorBudget::default();

    let quad = IntPoly::from_coeffs([-16, 8, 1]);
    let c = classify(&quad, &budget).unwrap();
    assert_eq!(c.discriminant, 128.into());
    let (candidates, complete) = candidate_primes(&quad, &budget).unwrap();
    assert!(complete);
    assert_eq!(candidates, BTreeSet::from([BigUint::from(2u32)]));
    assert!(!c.is_shifted_eisenstein() && !c.is_affine_eisenstein());

    let cubic = IntPoly::from_coeffs([2, 0, 0, 1]);
    let c = classify(&cubic, &budget).unwrap();
    assert!(c.eisenstein_primes.contains(&BigUint::from(2u32)));
    assert_eq!(
        c.shifted_witnesses.get(&BigUint::from(2u32)),
        Some(&BigUint::from(0u32))
    );

    let recip = IntPoly::from_coeffs([1, 0, 0, 2]);
    let c = classify(&recip, &budget).unwrap();
    assert_eq!(
        c.affine_witnesses.get(&BigUint::from(2u32)),
        Some(&CosetRep::Reciprocal)
    );
    line(
        8,
        "worked example fidelity",
        true,
        "x²+8x−16: disc 128, candidates {2}, no witnesses; x³+2: Eisenstein at 2 \
         via shift 0; 2x³+1: affine at 2 via the reciprocal",
    );
}

#[test]
fn criterion_09_quadratic_degeneracy_and_divergence_trend() {
    for kind in [Kind::Shifted, Kind::Affine] {
        let enc = density(kind, 2, 1e-6).unwrap();
        assert!(enc.lo().is_one() && enc.hi().is_one(), "{} at n = 2", kind);
    }
    // the truncated quadratic product grows toward 1 but is certifiably
    // 0.8898… at P = 10^6, short of the 0.93 the criterion text names;
    // 1 - Π_P ≈ 1 - 1.52/ln P needs P ≈ 3·10^9 to clear 0.93
    let mut lows = Vec::new();
    for limit in [10_000u64, 100_000, 1_000_000] {
        lows.push(partial_density(Kind::Shifted, 2, limit).unwrap().lo_f64());
    }
    assert!(lows[0] < lows[1] && lows[1] < lows[2], "trend must increase");
    assert!(
        lows[2] > 0.8898 && lows[2] < 0.8899,
        "certified bracket at 10^6 moved: {}",
        lows[2]
    );
    let passed_as_written = lows[2] > 0.93;
    line(
        9,
        "n=2 degeneracy and divergence trend",
        passed_as_written,
        &format!(
            "shifted and affine densities at n=2 are exactly [1,1]; the partial lower \
             bound rises {:.4} → {:.4} → {:.4} over P ∈ {{10^4,10^5,10^6}} but is \
             certifiably below the 0.93 named for P = 10^6 (that threshold needs \
             P ≈ 3·10^9 since 1 − Π_P ≈ 1 − 1.52/ln P)",
            lows[0], lows[1], lows[2]
        ),
    );
}

#[test]
fn criterion_10_simulation_determinism_across_workers() {
    // library level: identical results and renders for any worker count
    let base = SimConfig {
        n: 3,
        bound: 1_000_000,
        trials: 2_000,
        seed: DEFAULT_SEED,
        budget: FactorBudget::default(),
        workers: 1,
    };
    let one = run_experiment(&base).unwrap();
    let two = run_experiment(&SimConfig {
        workers: 2,
        ..base.clone()
    })
    .unwrap();
    assert_eq!(one, two);
    for format in [TableFormat::Text, TableFormat::Csv, TableFormat::Json] {
        assert_eq!(render_table(&one, format), render_table(&two, format));
    }
    // binary level: byte-identical stdout for the same flags
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_eisenstein"))
            .args([
                "simulate",
                "--n",
                "3",
                "--trials",
                "500",
                "--workers",
                workers,
                "--format",
                "csv",
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("2"));
    line(
        10,
        "simulation determinism",
        true,
        "identical SimResult and byte-identical text/csv/json renders for workers \
         ∈ {1, 2}; byte-identical binary stdout across worker counts",
    );
}
