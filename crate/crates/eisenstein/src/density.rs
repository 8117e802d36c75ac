//! Natural densities of the three Eisenstein classes as certified interval
//! enclosures.
//!
//! For degree n ≥ 3 the density of each class is 1 − ∏_p (1 − s_p), an Euler
//! product over all primes of the local measures s_p computed by
//! [`local_measure`]. The product is evaluated over primes up to a cutoff P
//! with directed fixed-point rounding (so the partial product is itself
//! enclosed in an exact rational interval), and the discarded tail is bounded
//! analytically:
//!
//! - shifted / affine: s_p < p^(1-n), so Σ_{p>P} s_p < P^(2-n)/(n-2);
//! - plain: s_p < p^(-n), so Σ_{p>P} s_p < P^(1-n)/(n-1).
//!
//! Since ∏_{p>P}(1-s_p) ≥ 1 − Σ_{p>P} s_p, the full product lies in
//! [Π_P·(1−T), Π_P] and the density in [1−Π_P^hi, 1−Π_P^lo·(1−T)]. Every
//! bound here is an exact rational; floats only appear in the outward-rounded
//! convenience views.
//!
//! For n = 2 the shifted and affine products diverge to zero (s_p ~ 1/p) and
//! the densities are exactly 1; [`partial_density`] exposes the divergence
//! numerically.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::factor::{for_each_prime, is_prime_u64};

/// Which of the three polynomial classes a measure or density refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Plain,
    Shifted,
    Affine,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Plain, Kind::Shifted, Kind::Affine];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Plain => "plain",
            Kind::Shifted => "shifted",
            Kind::Affine => "affine",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "plain" => Ok(Kind::Plain),
            "shifted" => Ok(Kind::Shifted),
            "affine" => Ok(Kind::Affine),
            other => Err(Error::InvalidConfig(format!(
                "unknown kind {:?} (expected plain, shifted, or affine)",
                other
            ))),
        }
    }
}

/// An exact rational enclosure [lo, hi] of a density, 0 ≤ lo ≤ hi ≤ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityInterval {
    lo: BigRational,
    hi: BigRational,
}

impl DensityInterval {
    fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(!lo.is_negative() && lo <= hi && hi <= BigRational::one());
        DensityInterval { lo, hi }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.hi + &self.lo) / BigRational::from_integer(2.into())
    }

    /// Lower endpoint rounded toward 0: guaranteed ≤ the exact lo.
    pub fn lo_f64(&self) -> f64 {
        let approx = self.lo.to_f64().unwrap_or(0.0);
        if approx <= 0.0 {
            0.0
        } else {
            approx.next_down()
        }
    }

    /// Upper endpoint rounded toward 1: guaranteed ≥ the exact hi.
    pub fn hi_f64(&self) -> f64 {
        let approx = self.hi.to_f64().unwrap_or(1.0);
        if approx >= 1.0 {
            1.0
        } else {
            approx.next_up()
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::DegreeTooSmall { need: 2 })
    }
}

fn ensure_prime_u64(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// Numerator and denominator of the local measure s_p as exact naturals.
fn measure_parts(kind: Kind, p: u64, n: usize) -> (BigUint, BigUint) {
    let pb = BigUint::from(p);
    let unit = &pb - 1u32;
    let sq = &unit * &unit;
    match kind {
        Kind::Plain => (sq, num_traits::pow(pb, n + 2)),
        Kind::Shifted => (sq, num_traits::pow(pb, n + 1)),
        Kind::Affine => ((&pb + 1u32) * sq, num_traits::pow(pb, n + 2)),
    }
}

/// The probability that a degree-n tuple mod p² lands in the given class:
///
/// - plain: (p−1)²/p^(n+2)
/// - shifted: (p−1)²/p^(n+1)
/// - affine: (p+1)(p−1)²/p^(n+2)
pub fn local_measure(kind: Kind, p: u64, n: usize) -> Result<BigRational> {
    ensure_prime_u64(p)?;
    check_degree(n)?;
    let (num, den) = measure_parts(kind, p, n);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

const SCALE_BITS: usize = 128;

/// Enclosure of Π_{p ≤ limit} (1 − s_p) as scaled integers lo/2^128, hi/2^128.
/// Each factor is applied with floor rounding on lo and ceiling on hi, so the
/// exact partial product always stays inside.
fn product_enclosure(kind: Kind, n: usize, limit: u64) -> (BigUint, BigUint) {
    let mut lo = BigUint::one() << SCALE_BITS;
    let mut hi = lo.clone();
    for_each_prime(limit, |p| {
        let (num, den) = measure_parts(kind, p, n);
        let keep = &den - &num;
        lo = &lo * &keep / &den;
        hi = (&hi * &keep + (&den - 1u32)) / &den;
    });
    (lo, hi)
}

/// Analytic bound on the discarded tail Σ_{p > limit} s_p, as an exact
/// rational. Requires n ≥ 3 for shifted/affine, n ≥ 2 for plain.
fn tail_bound(kind: Kind, n: usize, limit: u64) -> BigRational {
    let p = BigInt::from(limit.max(2));
    let (exp, coef) = match kind {
        Kind::Plain => (n - 1, n - 1),
        Kind::Shifted | Kind::Affine => (n - 2, n - 2),
    };
    BigRational::new(BigInt::one(), BigInt::from(coef) * num_traits::pow(p, exp))
}

fn tail_bound_f64(kind: Kind, n: usize, limit: u64) -> f64 {
    tail_bound(kind, n, limit).to_f64().unwrap_or(0.0)
}

fn ratio_from_scaled(num: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << SCALE_BITS)
}

/// Density enclosure from the Euler product over primes ≤ `limit`, tail
/// bounded analytically. The n = 2 shifted/affine cases return exactly [1, 1]
/// (the product diverges to zero).
pub fn density_with_limit(kind: Kind, n: usize, limit: u64) -> Result<DensityInterval> {
    check_degree(n)?;
    if n == 2 && kind != Kind::Plain {
        let one = BigRational::one();
        return Ok(DensityInterval::new(one.clone(), one));
    }
    let (lo_num, hi_num) = product_enclosure(kind, n, limit);
    let plo = ratio_from_scaled(lo_num);
    let phi = ratio_from_scaled(hi_num);
    let t = tail_bound(kind, n, limit);
    let lo = BigRational::one() - phi;
    let hi = BigRational::one() - plo * (BigRational::one() - t);
    Ok(DensityInterval::new(lo, hi.min(BigRational::one())))
}

/// Enclosure of the truncated quantity 1 − Π_{p ≤ limit} (1 − s_p), with no
/// tail correction. Its lower endpoint is a certified lower bound on the true
/// density for n ≥ 3; for n = 2 shifted/affine it climbs toward 1 as the
/// cutoff grows, exhibiting the divergence of the product.
pub fn partial_density(kind: Kind, n: usize, limit: u64) -> Result<DensityInterval> {
    check_degree(n)?;
    let (lo_num, hi_num) = product_enclosure(kind, n, limit);
    let plo = ratio_from_scaled(lo_num);
    let phi = ratio_from_scaled(hi_num);
    Ok(DensityInterval::new(
        BigRational::one() - phi,
        BigRational::one() - plo,
    ))
}

const LIMIT_SCHEDULE: [u64; 6] = [1_000, 10_000, 100_000, 1_000_000, 10_000_000, 100_000_000];

/// Density enclosure of guaranteed width ≤ `tol`.
///
/// Picks the smallest prime cutoff from a fixed schedule whose analytic tail
/// bound leaves comfortable room for rounding slack, then evaluates once.
/// Unachievable tolerances (beyond the largest cutoff, 10^8) are rejected
/// with the best achievable width.
pub fn density(kind: Kind, n: usize, tol: f64) -> Result<DensityInterval> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    check_degree(n)?;
    if n == 2 && kind != Kind::Plain {
        let one = BigRational::one();
        return Ok(DensityInterval::new(one.clone(), one));
    }
    let limit = LIMIT_SCHEDULE
        .iter()
        .copied()
        .find(|&p| tail_bound_f64(kind, n, p) <= tol * 0.5)
        .ok_or(Error::ToleranceTooTight {
            tol,
            limit: tail_bound_f64(kind, n, LIMIT_SCHEDULE[LIMIT_SCHEDULE.len() - 1]),
        })?;
    let interval = density_with_limit(kind, n, limit)?;
    let tol_exact = BigRational::from_float(tol).expect("tol is finite");
    if interval.width() > tol_exact {
        return Err(Error::ToleranceTooTight {
            tol,
            limit: interval.width().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(interval)
}

fn round_half_up(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// The expected number of hits among `trials` random polynomials, i.e.
/// trials·ρ rounded to the nearest integer, computed so tightly that the
/// rounding is provably unambiguous (enclosure width ≤ 1/(4·trials)). If both
/// endpoints still straddle a half-integer the call refuses rather than
/// guess.
pub fn expected_count(kind: Kind, n: usize, trials: u64) -> Result<u64> {
    if trials == 0 {
        check_degree(n)?;
        return Ok(0);
    }
    let tol = 1.0 / (4.0 * trials as f64);
    let interval = density(kind, n, tol)?;
    let t = BigRational::from_integer(BigInt::from(trials));
    let scaled_lo = interval.lo() * &t;
    let scaled_hi = interval.hi() * &t;
    let rlo = round_half_up(&scaled_lo);
    let rhi = round_half_up(&scaled_hi);
    if rlo != rhi {
        return Err(Error::AmbiguousRounding {
            scaled_lo: format!("{:.6}", scaled_lo.to_f64().unwrap_or(f64::NAN)),
            scaled_hi: format!("{:.6}", scaled_hi.to_f64().unwrap_or(f64::NAN)),
        });
    }
    Ok(rlo.to_u64().expect("count within trials"))
}
