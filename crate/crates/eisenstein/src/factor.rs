//! Prime sieving, primality testing, and budgeted integer factorization.
//!
//! The factorization pipeline is: trial division by sieved primes up to
//! `trial_bound`, then a primality test on the cofactor, then perfect-power
//! detection, then Brent-variant Pollard rho within an iteration budget.
//! It never loops forever: when the budget runs out with a composite
//! remaining, the result says so (`complete = false`) instead of guessing.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Resource limits for [`factorize`].
///
/// `rho_iteration_cap` is the per-attempt limit on rho iterations and
/// `rho_restarts` the number of attempts (with fresh parameters) per
/// remaining composite; either may be zero to disable rho entirely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iteration_cap: u64,
    pub rho_restarts: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iteration_cap: 4_000_000,
            rho_restarts: 6,
        }
    }
}

/// Outcome of a budgeted factorization of `|m|`.
///
/// Invariants: the product of `p^e` over `prime_powers` times `cofactor`
/// equals `|m|`; every key is prime; `complete` iff `cofactor == 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorResult {
    pub prime_powers: BTreeMap<BigUint, u32>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl FactorResult {
    /// Multiplies the factorization back together (equals `|input|`).
    pub fn reassemble(&self) -> BigUint {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.prime_powers {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }
}

/// Calls `visit` with every prime `<= limit` in ascending order, sieving in
/// fixed-size segments so memory stays bounded for limits up to 10^9.
pub fn for_each_prime(limit: u64, mut visit: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    let root = limit.isqrt();
    // plain sieve up to sqrt(limit)
    let mut small = vec![true; (root + 1) as usize];
    let mut base: Vec<u64> = Vec::new();
    for i in 2..=root {
        if small[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
    }
    for &p in &base {
        visit(p);
    }
    const SEGMENT: u64 = 1 << 20;
    let mut lo = root + 1;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let mut seg = vec![true; (hi - lo + 1) as usize];
        for &p in &base {
            let start = lo.div_ceil(p).max(p) * p;
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = false;
                j += p;
            }
        }
        for (off, &is_p) in seg.iter().enumerate() {
            if is_p {
                visit(lo + off as u64);
            }
        }
        lo = hi + 1;
    }
}

/// Exactly the primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime(limit, |p| out.push(p));
    out
}

fn default_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(DEFAULT_TRIAL_BOUND))
}

/// Divisibility data for one odd prime: `x` is divisible by `p` iff
/// `x * inv mod 2^128 <= threshold`, and on a hit that product is exactly
/// `x / p`. This replaces a 128-bit remainder with one wrapping multiply.
#[derive(Clone, Copy)]
struct PrimeDivisor {
    p: u64,
    inv: u128,
    threshold: u128,
}

impl PrimeDivisor {
    fn new(p: u64) -> Self {
        PrimeDivisor {
            p,
            inv: inv_mod_2_128(p as u128),
            threshold: u128::MAX / p as u128,
        }
    }
}

fn default_divisor_table() -> &'static [PrimeDivisor] {
    static TABLE: OnceLock<Vec<PrimeDivisor>> = OnceLock::new();
    TABLE.get_or_init(|| {
        default_primes()
            .iter()
            .skip(1) // 2 is handled by trailing_zeros
            .map(|&p| PrimeDivisor::new(p))
            .collect()
    })
}

/// Inverse of an odd `m` modulo 2^128 by Newton iteration (3 correct bits to
/// start, doubling each step: 6 steps reach 192 >= 128).
fn inv_mod_2_128(m: u128) -> u128 {
    debug_assert!(m & 1 == 1);
    let mut x = m;
    for _ in 0..6 {
        x = x.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(x)));
    }
    debug_assert!(m.wrapping_mul(x) == 1);
    x
}

pub(crate) fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn strong_probable_u64(m: u64, base: u64, d: u64, s: u32) -> bool {
    let b = base % m;
    if b == 0 {
        return true;
    }
    let mut x = powmod_u64(b, d, m);
    if x == 1 || x == m - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, m);
        if x == m - 1 {
            return true;
        }
    }
    false
}

/// Deterministic Miller-Rabin for the full u64 range, using the published
/// minimal witness tiers (Jaeschke; Sinclair for the 12-prime set).
pub(crate) fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if m % p == 0 {
            return m == p;
        }
    }
    if m < 41 * 41 {
        return true;
    }
    let witnesses: &[u64] = if m < 1_373_653 {
        &[2, 3]
    } else if m < 9_080_191 {
        &[31, 73]
    } else if m < 25_326_001 {
        &[2, 3, 5]
    } else if m < 3_215_031_751 {
        &[2, 3, 5, 7]
    } else if m < 4_759_123_141 {
        &[2, 7, 61]
    } else if m < 3_474_749_660_383 {
        &[2, 3, 5, 7, 11, 13]
    } else if m < 341_550_071_728_321 {
        &[2, 3, 5, 7, 11, 13, 17]
    } else {
        &SMALL_PRIMES
    };
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    witnesses.iter().all(|&w| strong_probable_u64(m, w, d, s))
}

fn strong_probable_big(m: &BigUint, base: &BigUint, d: &BigUint, s: u64) -> bool {
    let m_minus_1 = m - 1u32;
    let mut x = base.modpow(d, m);
    if x.is_one() || x == m_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % m;
        if x == m_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test: deterministic below 2^64; above that, a base-2 strong
/// test plus 30 pseudo-random rounds with bases drawn from a stream seeded
/// deterministically from the input (reproducible, error rate < 4^-30).
/// Never reports a true prime as composite.
pub fn is_probable_prime(m: &BigUint) -> bool {
    if let Some(x) = m.to_u64() {
        return is_prime_u64(x);
    }
    for &p in &SMALL_PRIMES {
        if (m % p).is_zero() {
            return false; // m > 2^64, so m != p
        }
    }
    let m_minus_1 = m - 1u32;
    let s = m_minus_1.trailing_zeros().expect("m is odd here");
    let d = &m_minus_1 >> s;
    if !strong_probable_big(m, &BigUint::from(2u32), &d, s) {
        return false;
    }
    let seed = splitmix64(low_u64(m) ^ m.bits());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = m - 3u32; // bases uniform in [2, m-2]
    (0..30).all(|_| {
        let base = rng.gen_biguint_below(&span) + 2u32;
        strong_probable_big(m, &base, &d, s)
    })
}

fn low_u64(m: &BigUint) -> u64 {
    m.iter_u64_digits().next().unwrap_or(0)
}

/// Smallest-prime-power decomposition `x = r^k` with `k` prime, if any.
fn perfect_power(x: &BigUint) -> Option<(BigUint, u32)> {
    let bits = x.bits();
    for k in 2..=bits {
        if !is_prime_u64(k) {
            continue;
        }
        let r = x.nth_root(k as u32);
        if r.is_one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *x {
            return Some((r, k as u32));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Montgomery arithmetic on u128 (modulus odd, < 2^126) for the rho inner loop

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1 << 64) - 1;
    let (a_hi, a_lo) = (a >> 64, a & MASK);
    let (b_hi, b_lo) = (b >> 64, b & MASK);
    let p00 = a_lo * b_lo;
    let p01 = a_lo * b_hi;
    let p10 = a_hi * b_lo;
    let p11 = a_hi * b_hi;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (mid << 64) | (p00 & MASK);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

struct Mont {
    m: u128,
    neg_inv: u128,
    r2: u128,
}

impl Mont {
    fn new(m: u128) -> Self {
        debug_assert!(m & 1 == 1 && m >= 3 && m < 1 << 126);
        let r2 = ((BigUint::one() << 256u32) % m).to_u128().unwrap();
        Mont {
            m,
            neg_inv: inv_mod_2_128(m).wrapping_neg(),
            r2,
        }
    }

    fn redc(&self, t_hi: u128, t_lo: u128) -> u128 {
        let q = t_lo.wrapping_mul(self.neg_inv);
        let (qm_hi, qm_lo) = mul_wide(q, self.m);
        let (_, carry) = t_lo.overflowing_add(qm_lo);
        let mut r = t_hi + qm_hi + carry as u128;
        if r >= self.m {
            r -= self.m;
        }
        r
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.m, self.r2)
    }
}

/// Brent-variant Pollard rho on a u128 modulus; returns a nontrivial factor
/// or `None` when the iteration cap runs out or the cycle degenerates.
fn brent_rho_u128(m: u128, cap: u64, seed: u64) -> Option<u128> {
    const BATCH: u64 = 128;
    let mont = Mont::new(m);
    let s1 = splitmix64(seed);
    let s2 = splitmix64(s1);
    let s3 = splitmix64(s2);
    let s4 = splitmix64(s3);
    let y0 = (((s1 as u128) << 64) | s2 as u128) % m;
    let c = 1 + (((s3 as u128) << 64) | s4 as u128) % (m - 1);
    let c = mont.to_mont(c);
    let step = |y: u128| {
        let t = mont.mul(y, y) + c;
        if t >= m {
            t - m
        } else {
            t
        }
    };
    let mut y = mont.to_mont(y0);
    let mut x = y;
    let mut ys = y;
    let mut q = mont.to_mont(1);
    let mut g: u128 = 1;
    let mut r: u64 = 1;
    let mut iters: u64 = 0;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        iters += r;
        if iters > cap {
            return None;
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                let diff = if x >= y { x - y } else { m - y + x };
                q = mont.mul(q, diff);
            }
            // q carries extra powers of R = 2^128, coprime to the odd m,
            // so the gcd can be taken on Montgomery values directly.
            g = num_integer::gcd(q, m);
            k += lim;
            iters += lim;
            if g == 1 && iters > cap {
                return None;
            }
        }
        r <<= 1;
    }
    if g == m {
        // the batch overshot: replay one step at a time
        loop {
            ys = step(ys);
            let diff = if x >= ys { x - ys } else { m - ys + x };
            g = num_integer::gcd(diff, m);
            if g > 1 {
                break;
            }
            iters += 1;
            if iters > cap {
                return None;
            }
        }
    }
    (g != m).then_some(g)
}

/// Same algorithm on `BigUint` for moduli at or above 2^126 (rarely hit).
fn brent_rho_big(m: &BigUint, cap: u64, seed: u64) -> Option<BigUint> {
    const BATCH: u64 = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y0 = rng.gen_biguint_below(m);
    let c = rng.gen_biguint_below(&(m - 1u32)) + 1u32;
    let step = |y: &BigUint| (y * y + &c) % m;
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { m - b + a };
    let mut y = y0;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let mut iters: u64 = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        iters += r;
        if iters > cap {
            return None;
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(&y);
                q = q * diff(&x, &y) % m;
            }
            g = q.gcd(m);
            k += lim;
            iters += lim;
            if g.is_one() && iters > cap {
                return None;
            }
        }
        r <<= 1;
    }
    if g == *m {
        loop {
            ys = step(&ys);
            g = diff(&x, &ys).gcd(m);
            if !g.is_one() {
                break;
            }
            iters += 1;
            if iters > cap {
                return None;
            }
        }
    }
    (g != *m).then_some(g)
}

fn rho_factor(x: &BigUint, budget: &FactorBudget, seed0: u64) -> Option<BigUint> {
    if x.is_even() {
        return Some(BigUint::from(2u32));
    }
    for attempt in 0..budget.rho_restarts {
        let seed = splitmix64(seed0 ^ (attempt as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
        let found = match x.to_u128() {
            Some(small) if small < 1 << 126 => {
                brent_rho_u128(small, budget.rho_iteration_cap, seed).map(BigUint::from)
            }
            _ => brent_rho_big(x, budget.rho_iteration_cap, seed),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Factors `|m|` within the given budget.
///
/// The sign is discarded: `factorize(-108, ..)` reports `{2: 2, 3: 3}`.
/// Rejects `m = 0` and a zero `trial_bound`.
pub fn factorize(m: &BigInt, budget: &FactorBudget) -> Result<FactorResult> {
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    if budget.trial_bound == 0 {
        return Err(Error::InvalidConfig("trial_bound must be positive".into()));
    }
    let mut prime_powers: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut n = m.magnitude().clone();

    // factor out 2 first so the odd-prime fast path applies
    if budget.trial_bound >= 2 && !n.is_one() {
        let tz = n.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            n >>= tz;
            prime_powers.insert(BigUint::from(2u32), tz as u32);
        }
    }

    let default_table = budget.trial_bound == DEFAULT_TRIAL_BOUND;
    let table: Vec<PrimeDivisor>;
    let divisors: &[PrimeDivisor] = if default_table {
        default_divisor_table()
    } else {
        table = primes_up_to(budget.trial_bound)
            .into_iter()
            .skip(1)
            .map(PrimeDivisor::new)
            .collect();
        &table
    };

    let mut idx = 0;
    // generic path until the value fits in u128
    while n.bits() > 127 && idx < divisors.len() {
        let p = divisors[idx].p;
        let mut e = 0;
        while (&n % p).is_zero() {
            n /= p;
            e += 1;
        }
        if e > 0 {
            prime_powers.insert(BigUint::from(p), e);
        }
        idx += 1;
    }
    // u128 fast path with multiplicative divisibility tests
    if n.bits() <= 127 {
        let mut x = n.to_u128().unwrap();
        for d in &divisors[idx..] {
            if x == 1 {
                break;
            }
            let p = d.p as u128;
            if p * p > x {
                // all primes below x's smallest factor are exhausted
                prime_powers
                    .entry(BigUint::from(x))
                    .and_modify(|e| *e += 1)
                    .or_insert(1);
                x = 1;
                break;
            }
            let mut e = 0;
            loop {
                let q = x.wrapping_mul(d.inv);
                if q <= d.threshold {
                    x = q;
                    e += 1;
                } else {
                    break;
                }
            }
            if e > 0 {
                prime_powers.insert(BigUint::from(d.p), e);
            }
        }
        n = BigUint::from(x);
    }

    // post-trial pipeline: primality, perfect powers, rho
    let seed0 = splitmix64(low_u64(&n) ^ 0xA076_1D64_78BD_642F);
    let mut failed = BigUint::one();
    let mut pending = Vec::new();
    if !n.is_one() {
        pending.push(n);
    }
    while let Some(x) = pending.pop() {
        if x.is_one() {
            continue;
        }
        if is_probable_prime(&x) {
            prime_powers.entry(x).and_modify(|e| *e += 1).or_insert(1);
            continue;
        }
        if let Some((root, k)) = perfect_power(&x) {
            for _ in 0..k {
                pending.push(root.clone());
            }
            continue;
        }
        match rho_factor(&x, budget, seed0) {
            Some(g) => {
                pending.push(&x / &g);
                pending.push(g);
            }
            None => failed *= &x,
        }
    }

    let complete = failed.is_one();
    Ok(FactorResult {
        prime_powers,
        cofactor: failed,
        complete,
    })
}
