//! Dense exact polynomials over the integers, plus the 2x2 integer matrices
//! that act on them.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` is the coefficient
//! of `x^k`. The canonical form keeps the top coefficient nonzero; the zero
//! polynomial is the empty sequence and reports degree `None`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact integer polynomial in one variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn pow_bi(base: &BigInt, exp: usize) -> BigInt {
    num_traits::pow(base.clone(), exp)
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Convenience constructor from anything convertible to `BigInt`,
    /// e.g. `IntPoly::from_coeffs([-16, 8, 1])` for x^2 + 8x - 16.
    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        IntPoly::new(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Exact evaluation at `t`, in Horner order.
    pub fn evaluate(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Formal derivative; the derivative of a constant is the zero polynomial.
    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| BigInt::from(k) * c)
            .collect();
        IntPoly::new(coeffs)
    }

    /// Taylor shift: returns `g` with `g(x) = f(x + i)`.
    ///
    /// Computed by iterated synthetic division (Ruffini-Horner), O(n^2)
    /// coefficient operations. Degree and leading coefficient are preserved.
    pub fn taylor_shift(&self, i: &BigInt) -> IntPoly {
        let mut a = self.coeffs.clone();
        let n = a.len().saturating_sub(1);
        for j in 0..n {
            for k in (j..n).rev() {
                let t = i * &a[k + 1];
                a[k] += t;
            }
        }
        IntPoly { coeffs: a }
    }

    /// Reciprocal within a degree window: `x^n f(1/x)`, i.e. the coefficient
    /// sequence reversed across positions `0..=n`, then canonicalized.
    ///
    /// The result has degree exactly `n` iff `f(0) != 0`.
    ///
    /// Panics if `n < deg f`.
    pub fn reciprocal(&self, n: usize) -> IntPoly {
        assert!(
            self.degree().map_or(true, |d| d <= n),
            "degree bound {} below deg f = {:?}",
            n,
            self.degree()
        );
        let coeffs = (0..=n).map(|k| self.coeff(n - k)).collect();
        IntPoly::new(coeffs)
    }

    /// The affine transformation `f*A = (cx+d)^n f((ax+b)/(cx+d))`, computed
    /// by direct expansion of `sum_k alpha_k (ax+b)^k (cx+d)^(n-k)`.
    ///
    /// `n` is an explicit degree window with `n >= deg f`; the result depends
    /// on it (a reciprocal within a larger window is not the same polynomial).
    ///
    /// Panics if `n < deg f`.
    pub fn affine_transform(&self, m: &Matrix2, n: usize) -> IntPoly {
        assert!(
            self.degree().map_or(true, |d| d <= n),
            "degree bound {} below deg f = {:?}",
            n,
            self.degree()
        );
        let u = IntPoly::new(vec![m.b.clone(), m.a.clone()]);
        let v = IntPoly::new(vec![m.d.clone(), m.c.clone()]);
        let mut u_pows = Vec::with_capacity(n + 1);
        let mut v_pows = Vec::with_capacity(n + 1);
        u_pows.push(IntPoly::one());
        v_pows.push(IntPoly::one());
        for k in 1..=n {
            u_pows.push(&u_pows[k - 1] * &u);
            v_pows.push(&v_pows[k - 1] * &v);
        }
        let mut out = IntPoly::zero();
        for (k, alpha) in self.coeffs.iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            out = &out + &(&u_pows[k] * &v_pows[n - k]).scale(alpha);
        }
        out
    }

    /// Coefficient of `x^l` in `f*A`, from the closed-form double sum
    ///
    /// ```text
    /// beta_l = sum_{j=0}^{l} sum_{s=l}^{n} C(n+j-s, j) C(s-j, l-j)
    ///          alpha_{s-j} d^(n-s) b^(s-l) a^(l-j) c^j
    /// ```
    ///
    /// Deliberately independent of [`IntPoly::affine_transform`]: the two are
    /// cross-checked against each other in the tests.
    ///
    /// Panics if `l > n` or `n < deg f`.
    pub fn beta_coefficient(&self, m: &Matrix2, n: usize, l: usize) -> BigInt {
        assert!(l <= n, "coefficient index {} above degree bound {}", l, n);
        assert!(
            self.degree().map_or(true, |d| d <= n),
            "degree bound {} below deg f = {:?}",
            n,
            self.degree()
        );
        let mut beta = BigInt::zero();
        for j in 0..=l {
            for s in l..=n {
                if s - j >= self.coeffs.len() {
                    continue;
                }
                let alpha = &self.coeffs[s - j];
                if alpha.is_zero() {
                    continue;
                }
                let term = num_integer::binomial(BigInt::from(n + j - s), BigInt::from(j))
                    * num_integer::binomial(BigInt::from(s - j), BigInt::from(l - j))
                    * alpha
                    * pow_bi(&m.d, n - s)
                    * pow_bi(&m.b, s - l)
                    * pow_bi(&m.a, l - j)
                    * pow_bi(&m.c, j);
                beta += term;
            }
        }
        beta
    }

    /// Coefficient-wise reduction into `{0, ..., m-1}`, canonicalized (the
    /// degree may drop when the leading coefficient reduces to zero).
    ///
    /// Panics if `m < 2`.
    pub fn reduce_mod(&self, m: &BigInt) -> IntPoly {
        assert!(*m >= BigInt::from(2), "modulus must be at least 2");
        IntPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: &BigInt) -> IntPoly {
        if s.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let mut c = self.coeff(k);
                if let Some(r) = rhs.coeffs.get(k) {
                    c += r;
                }
                c
            })
            .collect();
        IntPoly::new(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::new(coeffs)
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if !mag.is_one() || k == 0 {
                write!(f, "{}", mag)?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", k)?,
            }
        }
        Ok(())
    }
}

/// A 2x2 integer matrix `(a b; c d)` acting on polynomials via
/// [`IntPoly::affine_transform`]. Singular matrices are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Matrix2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Matrix2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Matrix2::new(1, 0, 0, 1)
    }

    /// `(1 i; 0 1)`: acting on f gives the Taylor shift f(x+i).
    pub fn shift(i: impl Into<BigInt>) -> Self {
        Matrix2::new(1, i, 0, 1)
    }

    /// `(0 1; 1 0)`: acting on f gives the reciprocal x^n f(1/x).
    pub fn reciprocal() -> Self {
        Matrix2::new(0, 1, 1, 0)
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.iter().copied())
    }

    #[test]
    fn canonical_form_trims_leading_zeros() {
        assert_eq!(p(&[1, 2, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(p(&[]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
        assert_eq!(p(&[-16, 8, 1]).degree(), Some(2));
    }

    #[test]
    fn evaluate_worked_examples() {
        let f = p(&[-16, 8, 1]);
        assert_eq!(f.evaluate(&BigInt::from(1)), BigInt::from(-7));
        assert_eq!(f.evaluate(&BigInt::from(0)), BigInt::from(-16));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[-16, 8, 1]).derivative(), p(&[8, 2]));
        assert_eq!(p(&[5]).derivative(), IntPoly::zero());
        assert_eq!(IntPoly::zero().derivative(), IntPoly::zero());
    }

    #[test]
    fn taylor_shift_examples() {
        let f = p(&[-16, 8, 1]);
        assert_eq!(f.taylor_shift(&BigInt::from(1)), p(&[-7, 10, 1]));
        assert_eq!(f.taylor_shift(&BigInt::zero()), f);
        // (x+1)^3 - 3(x+1)^2 + 3(x+1) + 1 = x^3 + 2
        let g = p(&[1, 3, -3, 1]);
        assert_eq!(g.taylor_shift(&BigInt::from(1)), p(&[2, 0, 0, 1]));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(p(&[-16, 8, 1]).reciprocal(2), p(&[1, 8, -16]));
        assert_eq!(p(&[2, 0, 0, 1]).reciprocal(3), p(&[1, 0, 0, 2]));
        // degree drops when f(0) = 0
        assert_eq!(p(&[0, 1, 1]).reciprocal(2), p(&[1, 1]));
        // window larger than the degree pads with high zeros before reversing
        assert_eq!(p(&[1, 1]).reciprocal(3), p(&[0, 0, 1, 1]));
    }

    #[test]
    #[should_panic(expected = "degree bound")]
    fn reciprocal_rejects_window_below_degree() {
        p(&[1, 0, 0, 1]).reciprocal(2);
    }

    #[test]
    fn affine_transform_special_matrices() {
        let f = p(&[-16, 8, 1]);
        assert_eq!(f.affine_transform(&Matrix2::identity(), 2), f);
        assert_eq!(
            f.affine_transform(&Matrix2::shift(1), 2),
            f.taylor_shift(&BigInt::one())
        );
        assert_eq!(
            f.affine_transform(&Matrix2::reciprocal(), 2),
            f.reciprocal(2)
        );
    }

    #[test]
    fn affine_transform_degenerate_matrix() {
        // (1 0; 0 2) sends f to sum alpha_k x^k 2^(n-k)
        let f = p(&[2, 0, 0, 1]);
        let g = f.affine_transform(&Matrix2::new(1, 0, 0, 2), 3);
        assert_eq!(g, p(&[16, 0, 0, 1]));
        // the all-zero matrix annihilates every positive-degree polynomial
        let z = f.affine_transform(&Matrix2::new(0, 0, 0, 0), 3);
        assert_eq!(z, IntPoly::zero());
    }

    #[test]
    fn beta_coefficient_special_cases() {
        let f = p(&[3, -2, 0, 7]);
        for l in 0..=3 {
            assert_eq!(
                f.beta_coefficient(&Matrix2::identity(), 3, l),
                f.coeff(l),
                "identity must reproduce alpha_{}",
                l
            );
        }
        // diagonal (a 0; 0 d): beta_l = alpha_l a^l d^(n-l)
        let m = Matrix2::new(3, 0, 0, -2);
        for l in 0..=3 {
            let expect = f.coeff(l) * pow_bi(&BigInt::from(3), l) * pow_bi(&BigInt::from(-2), 3 - l);
            assert_eq!(f.beta_coefficient(&m, 3, l), expect);
        }
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(p(&[-16, 8, 1]).reduce_mod(&BigInt::from(2)), p(&[0, 0, 1]));
        assert_eq!(
            p(&[-7, 10, 1]).reduce_mod(&BigInt::from(4)),
            p(&[1, 2, 1])
        );
    }

    #[test]
    fn display_formatting() {
        assert_eq!(p(&[-16, 8, 1]).to_string(), "x^2 + 8x - 16");
        assert_eq!(p(&[2, 0, 0, 1]).to_string(), "x^3 + 2");
        assert_eq!(p(&[1, 0, 0, 2]).to_string(), "2x^3 + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p(&[0, 3, -1, 1]).to_string(), "x^3 - x^2 + 3x");
    }

    #[test]
    fn matrix_basics() {
        let s = Matrix2::shift(5);
        assert_eq!(s.determinant(), BigInt::one());
        assert_eq!(Matrix2::reciprocal().determinant(), BigInt::from(-1));
        assert_eq!(&Matrix2::identity() * &s, s);
        assert_eq!(
            &Matrix2::shift(2) * &Matrix2::shift(3),
            Matrix2::shift(5)
        );
    }

    prop_compose! {
        fn arb_poly()(coeffs in prop::collection::vec(-100i64..=100, 0..=7)) -> IntPoly {
            IntPoly::from_coeffs(coeffs)
        }
    }

    prop_compose! {
        fn arb_matrix()(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9) -> Matrix2 {
            Matrix2::new(a, b, c, d)
        }
    }

    proptest! {
        #[test]
        fn evaluate_matches_term_by_term(f in arb_poly(), t in -50i64..=50) {
            let t = BigInt::from(t);
            let naive: BigInt = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c * pow_bi(&t, k))
                .sum();
            prop_assert_eq!(f.evaluate(&t), naive);
        }

        #[test]
        fn product_rule(f in arb_poly(), g in arb_poly()) {
            let lhs = (&f * &g).derivative();
            let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shift_round_trip_and_binomial_oracle(f in arb_poly(), i in -20i64..=20) {
            let i = BigInt::from(i);
            let shifted = f.taylor_shift(&i);
            prop_assert_eq!(shifted.taylor_shift(&(-&i)), f.clone());
            // independent oracle: f(x+i) = sum alpha_k (x+i)^k
            let xi = IntPoly::new(vec![i.clone(), BigInt::one()]);
            let mut expect = IntPoly::zero();
            let mut xi_pow = IntPoly::one();
            for c in f.coeffs() {
                expect = &expect + &xi_pow.scale(c);
                xi_pow = &xi_pow * &xi;
            }
            prop_assert_eq!(shifted, expect);
        }

        #[test]
        fn shift_preserves_degree_and_lead(f in arb_poly(), i in -20i64..=20) {
            let g = f.taylor_shift(&BigInt::from(i));
            prop_assert_eq!(g.degree(), f.degree());
            prop_assert_eq!(g.leading_coeff(), f.leading_coeff());
        }

        #[test]
        fn reciprocal_involution(f in arb_poly()) {
            prop_assume!(!f.coeff(0).is_zero());
            let n = f.degree().unwrap();
            prop_assert_eq!(f.reciprocal(n).reciprocal(n), f.clone());
        }

        #[test]
        fn affine_matches_shift_matrix(f in arb_poly(), i in -20i64..=20) {
            prop_assume!(!f.is_zero());
            let n = f.degree().unwrap();
            prop_assert_eq!(
                f.affine_transform(&Matrix2::shift(i), n),
                f.taylor_shift(&BigInt::from(i))
            );
        }

        #[test]
        fn group_action_composes(f in arb_poly(), a in arb_matrix(), b in arb_matrix()) {
            prop_assume!(!f.is_zero());
            prop_assume!(!a.determinant().is_zero() && !b.determinant().is_zero());
            let n = f.degree().unwrap();
            let lhs = f.affine_transform(&a, n).affine_transform(&b, n);
            let rhs = f.affine_transform(&(&a * &b), n);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn beta_matches_affine_transform(f in arb_poly(), m in arb_matrix(), extra in 0usize..=2) {
            prop_assume!(!f.is_zero());
            let n = f.degree().unwrap() + extra;
            let g = f.affine_transform(&m, n);
            for l in 0..=n {
                prop_assert_eq!(f.beta_coefficient(&m, n, l), g.coeff(l));
            }
        }

        #[test]
        fn reduction_commutes_with_shift(f in arb_poly(), i in -20i64..=20, m in 2i64..=50) {
            let i = BigInt::from(i);
            let m = BigInt::from(m);
            let lhs = f.taylor_shift(&i).reduce_mod(&m);
            let rhs = f.reduce_mod(&m).taylor_shift(&i).reduce_mod(&m);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
