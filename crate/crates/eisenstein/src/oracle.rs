//! Brute-force ground truth for everything the fast paths claim.
//!
//! The census enumerates *all* coefficient tuples mod p² and counts which are
//! Eisenstein after each of the p+1 coset representatives. Working mod p² is
//! lossless: every predicate involved — the Eisenstein conditions, shifts,
//! the reciprocal — depends on α_0 mod p² and the remaining coefficients mod
//! p (a fortiori mod p²). The enumeration never calls the detector's
//! candidate-prime or closed-form-shift machinery, so agreement between the
//! two is real evidence.
//!
//! The only shortcut taken is a *sound pruning*: tuples are enumerated as a
//! base (mod p) plus a lift (mod p² given the base), and a coset
//! representative is tested against a lift only if the base already satisfies
//! the mod-p part of the Eisenstein conditions after that representative.
//! Those conditions depend on the base alone, and they are necessary, so
//! skipped (base, rep) pairs contribute exactly zero hits; no tuple is ever
//! miscounted.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::Kind;
use crate::detect::{discriminant, is_eisenstein_at, Classification, CosetRep};
use crate::error::{Error, Result};
use crate::factor::{is_prime_u64, primes_up_to};
use crate::poly::{IntPoly, Matrix2};

/// Default ceiling on p^(2(n+1)), the number of residue tuples a census may
/// visit. (5, 5) needs ~2.44·10^8 and therefore an explicitly raised cap.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// Largest prime bound `brute_force_classify` will sweep.
pub const BRUTE_FORCE_PRIME_CAP: u64 = 2_000_000;

/// Exhaustive counts of Eisenstein-after-transformation tuples mod p².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCensus {
    pub p: u64,
    pub n: usize,
    /// p^(2(n+1)), the number of tuples enumerated.
    pub total: u64,
    /// Tuples Eisenstein as written (= the Shift(0) coset count).
    pub plain_count: u64,
    /// Tuples Eisenstein after at least one shift.
    pub shifted_count: u64,
    /// Tuples Eisenstein after at least one shift or the reciprocal.
    pub affine_count: u64,
    pub per_coset_counts: BTreeMap<CosetRep, u64>,
}

impl LocalCensus {
    /// Census ratio for a kind, as an exact rational — directly comparable
    /// to `density::local_measure`.
    pub fn measure(&self, kind: Kind) -> BigRational {
        let count = match kind {
            Kind::Plain => self.plain_count,
            Kind::Shifted => self.shifted_count,
            Kind::Affine => self.affine_count,
        };
        BigRational::new(BigInt::from(count), BigInt::from(self.total))
    }
}

fn check_census_args(p: u64, n: usize, cap: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if n < 2 {
        return Err(Error::DegreeTooSmall { need: 2 });
    }
    let total = (p as u128)
        .checked_pow(2 * (n as u32 + 1))
        .unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            needed: total,
            cap: cap as u128,
        });
    }
    Ok(total as u64)
}

/// Taylor shift of a coefficient window, all arithmetic mod m (u64 domain;
/// fine for the tiny census moduli).
fn shift_window_u64(w: &[u64], i: u64, m: u64) -> Vec<u64> {
    let mut a = w.to_vec();
    let n = a.len() - 1;
    for j in 0..n {
        for k in (j..n).rev() {
            a[k] = (a[k] + i * a[k + 1]) % m;
        }
    }
    a
}

/// Mod-p part of the Eisenstein conditions on a window: unit lead, all lower
/// coefficients divisible by p.
fn base_pattern_ok(w: &[u64], p: u64) -> bool {
    let n = w.len() - 1;
    w[n] % p != 0 && w[..n].iter().all(|&c| c % p == 0)
}

fn advance_odometer(digits: &mut [u64], radix: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Core enumeration: census plus the number of lifts hit by two or more
/// distinct coset representatives (zero iff the cosets are disjoint).
fn census_with_overlaps(p: u64, n: usize, cap: u64) -> Result<(LocalCensus, u64)> {
    let total = check_census_args(p, n, cap)?;
    let m = n + 1;
    let p2 = p * p;

    let mut per_coset: Vec<u64> = vec![0; p as usize + 1]; // shifts 0..p, then reciprocal
    let mut plain = 0u64;
    let mut shifted = 0u64;
    let mut affine = 0u64;
    let mut overlaps = 0u64;

    let mut base = vec![0u64; m];
    loop {
        // which representatives survive the mod-p screen for this base?
        let live_shifts: Vec<u64> = (0..p)
            .filter(|&i| base_pattern_ok(&shift_window_u64(&base, i, p), p))
            .collect();
        // reversed window: unit constant term, everything else divisible by p
        let live_recip = base[0] % p != 0 && base[1..].iter().all(|&c| c % p == 0);

        if !live_shifts.is_empty() || live_recip {
            let mut lift = vec![0u64; m];
            loop {
                let coeff =
                    |k: usize| -> u64 { base[k] + p * lift[k] };
                let mut hits = 0u32;
                let mut hit_zero_shift = false;
                let mut hit_any_shift = false;
                for &i in &live_shifts {
                    // mod-p conditions are certified by the screen; only the
                    // p² condition on the constant term f(i) remains
                    let mut acc = coeff(n);
                    for k in (0..n).rev() {
                        acc = (acc * i + coeff(k)) % p2;
                    }
                    if acc != 0 {
                        hits += 1;
                        hit_any_shift = true;
                        if i == 0 {
                            hit_zero_shift = true;
                        }
                        per_coset[i as usize] += 1;
                    }
                }
                // reversed window is Eisenstein iff its constant term — the
                // original lead — is nonzero mod p²
                if live_recip && coeff(n) != 0 {
                    hits += 1;
                    per_coset[p as usize] += 1;
                }
                if hit_zero_shift {
                    plain += 1;
                }
                if hit_any_shift {
                    shifted += 1;
                }
                if hits > 0 {
                    affine += 1;
                }
                if hits > 1 {
                    overlaps += 1;
                }
                if !advance_odometer(&mut lift, p) {
                    break;
                }
            }
        }
        if !advance_odometer(&mut base, p) {
            break;
        }
    }

    let mut per_coset_counts = BTreeMap::new();
    for i in 0..p {
        per_coset_counts.insert(CosetRep::Shift(BigUint::from(i)), per_coset[i as usize]);
    }
    per_coset_counts.insert(CosetRep::Reciprocal, per_coset[p as usize]);

    let census = LocalCensus {
        p,
        n,
        total,
        plain_count: plain,
        shifted_count: shifted,
        affine_count: affine,
        per_coset_counts,
    };
    Ok((census, overlaps))
}

/// Exhaustively counts, over all p^(2(n+1)) coefficient tuples mod p², how
/// many are Eisenstein after each coset representative.
pub fn enumerate_local_classes(p: u64, n: usize, cap: u64) -> Result<LocalCensus> {
    census_with_overlaps(p, n, cap).map(|(census, _)| census)
}

/// True iff no residue tuple mod p² is Eisenstein under two distinct coset
/// representatives.
pub fn verify_coset_disjointness(p: u64, n: usize, cap: u64) -> Result<bool> {
    census_with_overlaps(p, n, cap).map(|(_, overlaps)| overlaps == 0)
}

/// One (f, A) pair refuting the affine transformation lemma, kept for the
/// verification report.
#[derive(Clone, Debug)]
pub struct AffineCounterexample {
    pub poly: IntPoly,
    pub matrix: Matrix2,
    pub in_subgroup: bool,
    pub invertible: bool,
    pub transformed_eisenstein: bool,
}

/// Outcome of `verify_affine_lemmas`.
#[derive(Clone, Debug)]
pub struct AffineLemmaReport {
    pub passed: bool,
    pub pairs_checked: u64,
    pub counterexample: Option<AffineCounterexample>,
}

/// Window Eisenstein test on an exact polynomial viewed through coefficients
/// 0..=n (a transformed polynomial may have dropped degree; it then fails the
/// unit-lead condition, as it should).
fn window_eisenstein(g: &IntPoly, n: usize, p: u64) -> bool {
    let pb = BigInt::from(p);
    let p2 = &pb * &pb;
    if (g.coeff(n) % &pb).is_zero() {
        return false;
    }
    for k in 1..n {
        if !(g.coeff(k) % &pb).is_zero() {
            return false;
        }
    }
    let c0 = g.coeff(0);
    (&c0 % &pb).is_zero() && !(&c0 % &p2).is_zero()
}

/// The subgroup membership predicate: p | b, p ∤ a, p ∤ d.
fn in_subgroup(a: u64, b: u64, _c: u64, d: u64, p: u64) -> bool {
    b % p == 0 && a % p != 0 && d % p != 0
}

fn lemma_expectation_holds(f: &IntPoly, abcd: [u64; 4], n: usize, p: u64) -> (bool, Matrix2, bool, bool, bool) {
    let [a, b, c, d] = abcd;
    let mat = Matrix2::new(a, b, c, d);
    let invertible = (a * d % p + p - b * c % p) % p != 0;
    let member = in_subgroup(a, b, c, d, p);
    let eis = window_eisenstein(&f.affine_transform(&mat, n), n, p);
    // invertible matrices preserve Eisenstein-ness exactly on the subgroup;
    // singular ones never produce an Eisenstein window of full degree
    let expected = if invertible { member } else { false };
    (eis == expected, mat, member, invertible, eis)
}

/// Checks the affine transformation lemma against direct expansion: for
/// every (enumerated or sampled) p-Eisenstein f mod p² and matrix A mod p²,
/// f*A is p-Eisenstein iff A is invertible mod p and lies in the subgroup
/// {p | b, p ∤ a, p ∤ d}; singular A never yields an Eisenstein window.
///
/// `samples = None` enumerates all pairs (kept feasible by the p ≤ 5, n ≤ 5
/// precondition); `samples = Some(k)` draws k seeded pseudorandom pairs with
/// forced coverage of the subgroup and singular strata.
pub fn verify_affine_lemmas(p: u64, n: usize, samples: Option<u64>) -> Result<AffineLemmaReport> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if !(2..=5).contains(&n) || p > 5 {
        return Err(Error::InvalidConfig(format!(
            "affine lemma verification is desk-scale only (need p <= 5, 2 <= n <= 5; got p = {}, n = {})",
            p, n
        )));
    }
    let p2 = p * p;
    let mut pairs_checked = 0u64;
    let mut check = |f: &IntPoly, abcd: [u64; 4]| -> Option<AffineCounterexample> {
        pairs_checked += 1;
        let (ok, matrix, in_subgroup, invertible, transformed_eisenstein) =
            lemma_expectation_holds(f, abcd, n, p);
        if ok {
            None
        } else {
            Some(AffineCounterexample {
                poly: f.clone(),
                matrix,
                in_subgroup,
                invertible,
                transformed_eisenstein,
            })
        }
    };

    let mut counterexample = None;
    match samples {
        None => {
            // all Eisenstein tuples mod p² ...
            let m = n + 1;
            let mut digits = vec![0u64; m];
            'outer: loop {
                let eis = digits[n] % p != 0
                    && digits[1..n].iter().all(|&c| c % p == 0)
                    && digits[0] % p == 0
                    && digits[0] != 0;
                if eis {
                    let f = IntPoly::from_coeffs(digits.iter().map(|&c| c as i64));
                    // ... against all matrices mod p²
                    let mut abcd = [0u64; 4];
                    loop {
                        counterexample = check(&f, abcd);
                        if counterexample.is_some() {
                            break 'outer;
                        }
                        if !advance_odometer(&mut abcd, p2) {
                            break;
                        }
                    }
                }
                if !advance_odometer(&mut digits, p2) {
                    break;
                }
            }
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(0xAFF1_4E5A);
            for s in 0..k {
                // a random Eisenstein tuple mod p²
                let mut coeffs = vec![0u64; n + 1];
                coeffs[0] = p * rng.gen_range(1..p);
                for c in coeffs.iter_mut().take(n).skip(1) {
                    *c = p * rng.gen_range(0..p);
                }
                coeffs[n] = rng.gen_range(1..p) + p * rng.gen_range(0..p);
                let f = IntPoly::from_coeffs(coeffs.iter().map(|&c| c as i64));
                let mut abcd = [
                    rng.gen_range(0..p2),
                    rng.gen_range(0..p2),
                    rng.gen_range(0..p2),
                    rng.gen_range(0..p2),
                ];
                if s % 3 == 0 {
                    // force the p | b stratum so membership gets exercised
                    abcd[1] = p * rng.gen_range(0..p);
                }
                if s % 5 == 4 {
                    // force a singular matrix: second row ≡ λ · first row
                    let lambda = rng.gen_range(0..p);
                    abcd[2] = (lambda * abcd[0] + p * rng.gen_range(0..p)) % p2;
                    abcd[3] = (lambda * abcd[1] + p * rng.gen_range(0..p)) % p2;
                }
                counterexample = check(&f, abcd);
                if counterexample.is_some() {
                    break;
                }
            }
        }
    }

    Ok(AffineLemmaReport {
        passed: counterexample.is_none(),
        pairs_checked,
        counterexample,
    })
}

/// Classifies by sheer enumeration: every prime p with p^(n-1) possibly
/// dividing disc(f) — i.e. all p ≤ |disc|^(1/(n-1)) — is tested against all
/// p shifts (constructed exactly) and the reciprocal. No factorization, no
/// candidate filtering, no closed-form shift.
pub fn brute_force_classify(f: &IntPoly) -> Result<Classification> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(Error::DegreeTooSmall { need: 2 }),
    };
    let disc = discriminant(f)?;
    let mut out = Classification {
        degree: n,
        discriminant: disc.clone(),
        eisenstein_primes: Default::default(),
        shifted_witnesses: Default::default(),
        affine_witnesses: Default::default(),
        complete: true,
    };
    if disc.is_zero() {
        return Ok(out);
    }
    let bound_big = disc.magnitude().nth_root((n - 1) as u32);
    let bound = match bound_big.to_u64() {
        Some(b) if b <= BRUTE_FORCE_PRIME_CAP => b,
        _ => {
            return Err(Error::CapExceeded {
                needed: bound_big.to_u128().unwrap_or(u128::MAX),
                cap: BRUTE_FORCE_PRIME_CAP as u128,
            })
        }
    };
    for p in primes_up_to(bound) {
        let pb = BigUint::from(p);
        let mut shift_hit: Option<BigUint> = None;
        for i in 0..p {
            if is_eisenstein_at(&f.taylor_shift(&BigInt::from(i)), &pb)? {
                assert!(
                    shift_hit.is_none(),
                    "two distinct shift witnesses at p = {}",
                    p
                );
                shift_hit = Some(BigUint::from(i));
            }
        }
        let recip_hit = !f.coeff(0).is_zero() && is_eisenstein_at(&f.reciprocal(n), &pb)?;
        match shift_hit {
            Some(i) => {
                assert!(!recip_hit, "shift and reciprocal both witness at p = {}", p);
                if i.is_zero() {
                    out.eisenstein_primes.insert(pb.clone());
                }
                out.shifted_witnesses.insert(pb.clone(), i.clone());
                out.affine_witnesses.insert(pb, CosetRep::Shift(i));
            }
            None => {
                if recip_hit {
                    out.affine_witnesses.insert(pb, CosetRep::Reciprocal);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::local_measure;
    use crate::detect::classify;
    use crate::FactorBudget;
    use num_traits::One;

    fn poly(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.iter().copied())
    }

    #[test]
    fn census_2_3_pinned_counts() {
        let census = enumerate_local_classes(2, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(census.total, 256);
        assert_eq!(census.plain_count, 8);
        assert_eq!(census.shifted_count, 16);
        assert_eq!(census.affine_count, 24);
        assert_eq!(
            census.per_coset_counts[&CosetRep::Shift(BigUint::zero())],
            8
        );
        assert_eq!(census.per_coset_counts[&CosetRep::Shift(BigUint::one())], 8);
        assert_eq!(census.per_coset_counts[&CosetRep::Reciprocal], 8);
    }

    #[test]
    fn census_structural_invariants() {
        for (p, n) in [(2u64, 2usize), (2, 4), (3, 2), (3, 3), (5, 2)] {
            let census = enumerate_local_classes(p, n, DEFAULT_ENUMERATION_CAP).unwrap();
            let shift_sum: u64 = census
                .per_coset_counts
                .iter()
                .filter(|(rep, _)| matches!(rep, CosetRep::Shift(_)))
                .map(|(_, &c)| c)
                .sum();
            assert_eq!(census.shifted_count, shift_sum);
            assert_eq!(
                census.affine_count,
                census.shifted_count + census.per_coset_counts[&CosetRep::Reciprocal]
            );
            assert_eq!(census.shifted_count, p * census.plain_count);
            assert_eq!(census.affine_count, (p + 1) * census.plain_count);
        }
    }

    #[test]
    fn census_ratios_equal_local_measures() {
        for (p, n) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let census = enumerate_local_classes(p, n, DEFAULT_ENUMERATION_CAP).unwrap();
            for kind in Kind::ALL {
                assert_eq!(
                    census.measure(kind),
                    local_measure(kind, p, n).unwrap(),
                    "kind={} p={} n={}",
                    kind,
                    p,
                    n
                );
            }
        }
    }

    #[test]
    fn census_rejects_bad_arguments() {
        assert!(matches!(
            enumerate_local_classes(4, 3, DEFAULT_ENUMERATION_CAP),
            Err(Error::NotPrime(_))
        ));
        // 5^12 ≈ 2.4·10^8 exceeds the default cap
        assert!(matches!(
            enumerate_local_classes(5, 5, DEFAULT_ENUMERATION_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            enumerate_local_classes(2, 1, DEFAULT_ENUMERATION_CAP),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn cosets_are_disjoint_on_small_grid() {
        for (p, n) in [(2u64, 2usize), (2, 3), (3, 3)] {
            assert!(verify_coset_disjointness(p, n, DEFAULT_ENUMERATION_CAP).unwrap());
        }
    }

    #[test]
    fn affine_lemmas_hold_exhaustively_at_two() {
        let report = verify_affine_lemmas(2, 3, None).unwrap();
        assert!(report.passed, "{:?}", report.counterexample);
        // 8 Eisenstein tuples mod 4 × 256 matrices mod 4
        assert_eq!(report.pairs_checked, 8 * 256);
    }

    #[test]
    fn affine_lemmas_hold_sampled_at_three() {
        let report = verify_affine_lemmas(3, 3, Some(2_000)).unwrap();
        assert!(report.passed, "{:?}", report.counterexample);
        assert_eq!(report.pairs_checked, 2_000);
    }

    #[test]
    fn affine_lemma_guards_scale() {
        assert!(verify_affine_lemmas(7, 3, Some(10)).is_err());
        assert!(verify_affine_lemmas(2, 6, Some(10)).is_err());
    }

    #[test]
    fn singular_diagonal_matrix_is_not_a_witness() {
        // A = (1 0; 0 2) at p = 2: singular mod 2, and f*A = x³ + 16 indeed
        // fails (16 ≡ 0 mod 4)
        let f = poly(&[2, 0, 0, 1]);
        let a = Matrix2::new(1, 0, 0, 2);
        let g = f.affine_transform(&a, 3);
        assert_eq!(g, poly(&[16, 0, 0, 1]));
        assert!(!window_eisenstein(&g, 3, 2));
        let (ok, _, member, invertible, _) = lemma_expectation_holds(&f, [1, 0, 0, 2], 3, 2);
        assert!(ok && !member && !invertible);
    }

    #[test]
    fn brute_force_agrees_with_detector_on_examples() {
        let budget = FactorBudget::default();
        for coeffs in [
            vec![2i64, 0, 0, 1],
            vec![-16, 8, 1],
            vec![1, 0, 0, 2],
            vec![1, -2, 1],
            vec![1, 3, -3, 1],
            vec![6, 18, 12, 5],
        ] {
            let f = poly(&coeffs);
            assert_eq!(
                brute_force_classify(&f).unwrap(),
                classify(&f, &budget).unwrap(),
                "coeffs {:?}",
                coeffs
            );
        }
    }

    #[test]
    fn brute_force_refuses_oversized_discriminants() {
        let f = poly(&[1, 1_000_000_000, 1]);
        assert!(matches!(
            brute_force_classify(&f),
            Err(Error::CapExceeded { .. })
        ));
    }
}
