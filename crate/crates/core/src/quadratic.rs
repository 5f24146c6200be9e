//! Exact arithmetic in a real quadratic field ℚ[√D].
//!
//! A [`QuadraticNumber`] is `x + y·√D` with rational `x`, `y` and a positive,
//! non-square integer radicand `D`. The radicand is carried as given, with no
//! square-free reduction, and arithmetic never mixes two different radicands:
//! an operand with a zero surd part adopts the radicand of the other side,
//! anything else panics. Rendering to decimals is exact (integer square roots
//! only), so values can be shown to any number of digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Errors from constructing or dividing quadratic numbers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadraticError {
    #[error("radicand {0} must be a positive non-square integer")]
    InvalidRadicand(BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicands {0} and {1} belong to different fields")]
    FieldMismatch(BigInt, BigInt),
}

/// `rational + surd·√radicand`.
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    rational: BigRational,
    surd: BigRational,
    radicand: BigInt,
}

impl QuadraticNumber {
    pub fn new(
        rational: BigRational,
        surd: BigRational,
        radicand: impl Into<BigInt>,
    ) -> Result<Self, QuadraticError> {
        let radicand = radicand.into();
        if !radicand.is_positive() || is_perfect_square(&radicand) {
            return Err(QuadraticError::InvalidRadicand(radicand));
        }
        Ok(Self {
            rational,
            surd,
            radicand,
        })
    }

    /// A rational number living in ℚ[√radicand].
    pub fn from_rational(
        value: BigRational,
        radicand: impl Into<BigInt>,
    ) -> Result<Self, QuadraticError> {
        Self::new(value, BigRational::zero(), radicand)
    }

    pub fn from_integer(
        value: impl Into<BigInt>,
        radicand: impl Into<BigInt>,
    ) -> Result<Self, QuadraticError> {
        Self::from_rational(BigRational::from_integer(value.into()), radicand)
    }

    /// `√radicand` itself.
    pub fn sqrt_of(radicand: impl Into<BigInt>) -> Result<Self, QuadraticError> {
        Self::new(BigRational::zero(), BigRational::one(), radicand)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// The integer value, if the number is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.rational.is_integer()).then(|| self.rational.to_integer())
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rational: self.rational.clone(),
            surd: -self.surd.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Field norm `x² − y²·D`; zero only for the zero element.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - &self.surd * &self.surd * BigRational::from_integer(self.radicand.clone())
    }

    /// Exact sign of `x + y√D`.
    pub fn signum(&self) -> Ordering {
        let sx = self.rational.cmp(&BigRational::zero());
        let sy = self.surd.cmp(&BigRational::zero());
        if sy == Ordering::Equal {
            return sx;
        }
        if sx == Ordering::Equal || sx == sy {
            return sy;
        }
        // Opposite signs: the larger square wins. Equality would make D a square.
        let x2 = &self.rational * &self.rational;
        let y2d = &self.surd * &self.surd * BigRational::from_integer(self.radicand.clone());
        if x2 > y2d {
            sx
        } else {
            sy
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, QuadraticError> {
        if self.is_zero() {
            return Err(QuadraticError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self {
            rational: &self.rational / &n,
            surd: -(&self.surd / &n),
            radicand: self.radicand.clone(),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, QuadraticError> {
        check_field(self, rhs)?;
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self {
            rational: BigRational::one(),
            surd: BigRational::zero(),
            radicand: self.radicand.clone(),
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        // (n + m√D) / den with den > 0
        let den = self.rational.denom() * self.surd.denom();
        let n = self.rational.numer() * self.surd.denom();
        let m = self.surd.numer() * self.rational.denom();
        let root = (&m * &m * &self.radicand).sqrt();
        let floor_surd = if m.is_negative() {
            // -ceil(|m|√D); |m|√D is irrational unless m = 0
            -(root + BigInt::one())
        } else {
            root
        };
        (n + floor_surd).div_floor(&den)
    }

    /// Decimal rendering with `digits` places after the point, rounded half to even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self * &BigRational::from_integer(scale);
        let mut fl = scaled.floor();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let frac = &scaled - &BigRational::from_integer(fl.clone());
        match (&frac - &half).signum() {
            Ordering::Greater => fl += 1,
            Ordering::Equal if fl.is_odd() => fl += 1,
            _ => {}
        }
        format_scaled(&fl, digits)
    }

    /// `e` with `10^e ≤ |self| < 10^(e+1)`; `None` for zero.
    pub fn decimal_exponent(&self) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let x = self.abs();
        let ten = BigInt::from(10);
        let power = |e: i32| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(ten.pow(e as u32))
            } else {
                BigRational::new(BigInt::one(), ten.pow((-e) as u32))
            }
        };
        let mut e = 0;
        while x >= power(e + 1) {
            e += 1;
        }
        while x < power(e) {
            e -= 1;
        }
        Some(e)
    }

    pub fn to_f64(&self) -> f64 {
        // 40 significant digits are far beyond f64 resolution for the
        // magnitudes that occur here.
        self.to_decimal(40).parse().unwrap_or(f64::NAN)
    }

    /// Human-readable radical form with the radicand reduced for display,
    /// e.g. `-5/2 + (5/2)√3` for a value stored over √12.
    pub fn radical_form(&self) -> String {
        let (outside, inside) = split_square(&self.radicand);
        let coeff = &self.surd * BigRational::from_integer(outside);
        let mut out = String::new();
        if !self.rational.is_zero() {
            out.push_str(&self.rational.to_string());
        }
        if !coeff.is_zero() {
            let magnitude = coeff.abs();
            let term = if magnitude.is_one() {
                format!("√{inside}")
            } else if magnitude.is_integer() {
                format!("{magnitude}√{inside}")
            } else {
                format!("({magnitude})√{inside}")
            };
            if out.is_empty() {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if coeff.is_negative() { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn unify(&self, rhs: &Self) -> BigInt {
        if self.radicand == rhs.radicand || rhs.surd.is_zero() {
            self.radicand.clone()
        } else if self.surd.is_zero() {
            rhs.radicand.clone()
        } else {
            panic!(
                "{}",
                QuadraticError::FieldMismatch(self.radicand.clone(), rhs.radicand.clone())
            )
        }
    }
}

fn check_field(a: &QuadraticNumber, b: &QuadraticNumber) -> Result<(), QuadraticError> {
    if a.radicand != b.radicand && !a.surd.is_zero() && !b.surd.is_zero() {
        return Err(QuadraticError::FieldMismatch(
            a.radicand.clone(),
            b.radicand.clone(),
        ));
    }
    Ok(())
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// `n = outside² · inside` with `inside` square-free.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut inside = n.clone();
    let mut outside = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= inside {
        let sq = &f * &f;
        while (&inside % &sq).is_zero() {
            inside /= &sq;
            outside *= &f;
        }
        f += 1;
    }
    (outside, inside)
}

fn format_scaled(value: &BigInt, digits: usize) -> String {
    let negative = value.sign() == Sign::Minus;
    let mut s = value.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.radical_form())
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational
            && self.surd == other.surd
            && (self.surd.is_zero() || self.radicand == other.radicand)
    }
}

impl PartialEq<BigRational> for QuadraticNumber {
    fn eq(&self, other: &BigRational) -> bool {
        self.surd.is_zero() && self.rational == *other
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        check_field(self, other).ok()?;
        Some((self - other).signum())
    }
}

impl PartialOrd<BigRational> for QuadraticNumber {
    fn partial_cmp(&self, other: &BigRational) -> Option<Ordering> {
        Some((self - other).signum())
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            rational: -self.rational.clone(),
            surd: -self.surd.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber {
            radicand: self.unify(rhs),
            rational: &self.rational + &rhs.rational,
            surd: &self.surd + &rhs.surd,
        }
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber {
            radicand: self.unify(rhs),
            rational: &self.rational - &rhs.rational,
            surd: &self.surd - &rhs.surd,
        }
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let radicand = self.unify(rhs);
        let d = BigRational::from_integer(radicand.clone());
        QuadraticNumber {
            rational: &self.rational * &rhs.rational + &self.surd * &rhs.surd * d,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
            radicand,
        }
    }
}

impl Div for &QuadraticNumber {
    type Output = QuadraticNumber;
    /// Panics on division by zero; see [`QuadraticNumber::checked_div`].
    fn div(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.checked_div(rhs).expect("quadratic division")
    }
}

impl Add<&BigRational> for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &BigRational) -> QuadraticNumber {
        QuadraticNumber {
            rational: &self.rational + rhs,
            surd: self.surd.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Sub<&BigRational> for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &BigRational) -> QuadraticNumber {
        QuadraticNumber {
            rational: &self.rational - rhs,
            surd: self.surd.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Mul<&BigRational> for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &BigRational) -> QuadraticNumber {
        QuadraticNumber {
            rational: &self.rational * rhs,
            surd: &self.surd * rhs,
            radicand: self.radicand.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$m(&rhs)
            }
        }
        impl $tr<&BigRational> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &BigRational) -> QuadraticNumber {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Div<QuadraticNumber> for QuadraticNumber {
    type Output = QuadraticNumber;
    fn div(self, rhs: QuadraticNumber) -> QuadraticNumber {
        &self / &rhs
    }
}

impl Div<&QuadraticNumber> for QuadraticNumber {
    type Output = QuadraticNumber;
    fn div(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        &self / rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64, y: i64, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
            d,
        )
        .unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_square_and_non_positive_radicands() {
        assert!(QuadraticNumber::sqrt_of(4).is_err());
        assert!(QuadraticNumber::sqrt_of(0).is_err());
        assert!(QuadraticNumber::sqrt_of(-3).is_err());
        assert!(QuadraticNumber::sqrt_of(12).is_ok());
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let zero = q(0, 0, 3);
        assert_eq!(
            q(1, 1, 3).checked_div(&zero),
            Err(QuadraticError::DivisionByZero)
        );
        assert_eq!(zero.recip(), Err(QuadraticError::DivisionByZero));
    }

    #[test]
    fn rational_values_compare_equal_to_their_rational_part() {
        let x = QuadraticNumber::from_rational(ratio(7, 3), 5).unwrap();
        assert_eq!(x, ratio(7, 3));
        assert_eq!(x, QuadraticNumber::from_rational(ratio(7, 3), 11).unwrap());
        assert_ne!(q(1, 1, 5), BigRational::one());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        assert!(q(1, 1, 3).checked_div(&q(1, 1, 5)).is_err());
        assert!(q(1, 1, 3).partial_cmp(&q(1, 1, 5)).is_none());
    }

    #[test]
    fn product_of_conjugates_is_norm() {
        let z = q(2, 1, 3);
        assert_eq!(&z * &z.conjugate(), BigRational::one());
        assert_eq!(z.recip().unwrap(), q(2, -1, 3));
    }

    #[test]
    fn signs_and_floor() {
        // 2 - √3 ≈ 0.268
        let z2 = q(2, -1, 3);
        assert_eq!(z2.signum(), Ordering::Greater);
        assert_eq!(z2.floor(), BigInt::zero());
        // 1 - √3 ≈ -0.732
        assert_eq!(q(1, -1, 3).floor(), BigInt::from(-1));
        assert_eq!(q(0, -1, 3).floor(), BigInt::from(-2));
        assert_eq!(q(0, 1, 12).floor(), BigInt::from(3));
        let neg_half = QuadraticNumber::from_rational(ratio(-1, 2), 3).unwrap();
        assert_eq!(neg_half.floor(), BigInt::from(-1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(2, 1, 3).to_decimal(6), "3.732051");
        assert_eq!(q(0, 1, 2).to_decimal(0), "1");
        assert_eq!(q(1, -1, 3).to_decimal(4), "-0.7321");
        assert_eq!(q(0, 1, 3).to_decimal(20), "1.73205080756887729353");
        // ties go to even
        let half = |n| QuadraticNumber::from_rational(ratio(n, 8), 3).unwrap();
        assert_eq!(half(1).to_decimal(2), "0.12");
        assert_eq!(half(3).to_decimal(2), "0.38");
        assert_eq!(half(-1).to_decimal(2), "-0.12");
    }

    #[test]
    fn decimal_exponents() {
        let r = |n, d| QuadraticNumber::from_rational(ratio(n, d), 3).unwrap();
        assert_eq!(r(4023, 1_000_000).decimal_exponent(), Some(-3));
        assert_eq!(r(1, 1000).decimal_exponent(), Some(-3));
        assert_eq!(r(-250, 1).decimal_exponent(), Some(2));
        assert_eq!(q(2, 1, 3).decimal_exponent(), Some(0));
        assert_eq!(q(0, 0, 3).decimal_exponent(), None);
    }

    #[test]
    fn radical_form_reduces_the_radicand_for_display() {
        // z1 for {4,5}: 2 + √3 stored over √12
        let z1 =
            QuadraticNumber::new(BigRational::from_integer(2.into()), ratio(1, 2), 12).unwrap();
        assert_eq!(z1.radical_form(), "2 + √3");
        let g = QuadraticNumber::new(ratio(-5, 2), ratio(5, 4), 12).unwrap();
        assert_eq!(g.radical_form(), "-5/2 + (5/2)√3");
        assert_eq!(q(3, 1, 32).radical_form(), "3 + 4√2");
        assert_eq!(q(0, -1, 3).radical_form(), "-√3");
        assert_eq!(q(0, 0, 3).radical_form(), "0");
    }

    fn arb(d: i64) -> impl Strategy<Value = QuadraticNumber> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(move |(a, b, c, e)| {
            QuadraticNumber::new(ratio(a, b), ratio(c, e), d).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms_hold(x in arb(12), y in arb(12), z in arb(12)) {
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn exact_sign_agrees_with_floats(x in arb(7)) {
            let approx = x.rational_part().numer().to_string().parse::<f64>().unwrap()
                / x.rational_part().denom().to_string().parse::<f64>().unwrap()
                + x.surd_part().numer().to_string().parse::<f64>().unwrap()
                / x.surd_part().denom().to_string().parse::<f64>().unwrap() * 7f64.sqrt();
            prop_assert!((x.to_f64() - approx).abs() < 1e-9);
            prop_assert_eq!(BigInt::from(approx.floor() as i64), x.floor());
        }
    }
}
