//! Exact quadratic surds `a + b·√c` over the rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A real number `a + b·√c` with rational `a`, `b` and rational `c ≥ 0`.
///
/// Kept normalized: `b = 0` and `c = 0` whenever the radical is rational,
/// so `is_rational` is a structural test. Equality and ordering are numeric.
#[derive(Clone, Debug)]
pub struct SurdValue {
    a: Rational,
    b: Rational,
    c: Rational,
}

fn sign_of(x: &Rational) -> Ordering {
    x.numer().sign().cmp(&num_bigint::Sign::NoSign)
}

/// Cross-multiplied comparison; denominators are positive.
fn cmp_ratio(x: &Rational, y: &Rational) -> Ordering {
    (x.numer() * y.denom()).cmp(&(y.numer() * x.denom()))
}

impl SurdValue {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::Invalid(format!("negative radicand {c}")));
        }
        Ok(Self::normalized(a, b, c))
    }

    fn normalized(a: Rational, b: Rational, c: Rational) -> Self {
        if b.is_zero() || c.is_zero() {
            return Self::from_rational(a);
        }
        match rational::rational_sqrt(&c) {
            Some(root) => Self::from_rational(a + b * root),
            None => Self { a, b, c },
        }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational::int(n))
    }

    /// `√c` for a non-negative rational `c`.
    pub fn sqrt(c: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), c)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn to_f64(&self) -> f64 {
        let a = rational::to_f64(&self.a);
        if self.is_rational() {
            return a;
        }
        a + rational::to_f64(&self.b) * rational::to_f64(&self.c).sqrt()
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        Self {
            a: &self.a + q,
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        Self::normalized(&self.a * q, &self.b * q, self.c.clone())
    }

    fn shares_radicand(&self, other: &Self) -> bool {
        self.is_rational() || other.is_rational() || self.c == other.c
    }

    /// Exact sum when both operands share a radicand (or one is rational).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if !self.shares_radicand(other) {
            return None;
        }
        let c = if self.is_rational() {
            other.c.clone()
        } else {
            self.c.clone()
        };
        Some(Self::normalized(&self.a + &other.a, &self.b + &other.b, c))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.neg())
    }

    /// Sign decided exactly: isolate the radical and compare squares.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2c = &self.b * &self.b * &self.c;
        match cmp_ratio(&a2, &b2c) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Sign of `self + z·√c2`, where the second radical may differ from ours.
    fn signum_plus_radical(&self, z: &Rational, c2: &Rational) -> Ordering {
        let s_self = self.signum();
        let s_rad = sign_of(z);
        if s_rad == Ordering::Equal {
            return s_self;
        }
        if s_self == Ordering::Equal || s_self == s_rad {
            return s_rad;
        }
        // self² = a² + b²c + 2ab·√c, compared against z²·c2.
        let two = rational::int(2);
        let square = Self::normalized(
            &self.a * &self.a + &self.b * &self.b * &self.c - z * z * c2,
            two * &self.a * &self.b,
            self.c.clone(),
        );
        match square.signum() {
            Ordering::Greater => s_self,
            Ordering::Less => s_rad,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact comparison for any two surds, including distinct radicands.
    pub fn exact_cmp(&self, other: &Self) -> Ordering {
        if let Some(diff) = self.checked_sub(other) {
            return diff.signum();
        }
        let lhs = Self {
            a: &self.a - &other.a,
            b: self.b.clone(),
            c: self.c.clone(),
        };
        lhs.signum_plus_radical(&-&other.b, &other.c)
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        self.add_rational(&-q).signum()
    }

    /// Midpoint of two surds; exact when they share a radicand.
    pub fn midpoint(&self, other: &Self) -> Option<Self> {
        self.checked_add(other)
            .map(|s| s.mul_rational(&rational::ratio(1, 2)))
    }

    /// Exact `⌊self⌋` in integer arithmetic.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return rational::floor(&self.a);
        }
        // self = (x ± √y)/den with integers x, y and den > 0; √y is
        // irrational, so (x ± √y) lies strictly between consecutive integers.
        let b2c = &self.b * &self.b * &self.c;
        let (an, ad) = (self.a.numer(), self.a.denom());
        let (n, d) = (b2c.numer(), b2c.denom());
        let den = ad * d;
        let x = an * d;
        let y = ad * ad * n * d;
        let root = y.sqrt();
        let num = if self.b.is_positive() {
            x + root
        } else {
            x - root - BigInt::one()
        };
        num_integer::Integer::div_floor(&num, &den)
    }

    /// Rational `k/10^places` nearest to `self` (ties toward +∞).
    pub fn round_to_places(&self, places: u32) -> Rational {
        let scale = rational::pow10(places);
        let shifted = self
            .mul_rational(&scale)
            .add_rational(&rational::ratio(1, 2));
        Rational::from_integer(shifted.floor()) / scale
    }
}

impl PartialEq for SurdValue {
    fn eq(&self, other: &Self) -> bool {
        self.exact_cmp(other) == Ordering::Equal
    }
}

impl Eq for SurdValue {}

impl PartialOrd for SurdValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exact_cmp(other)
    }
}

impl From<Rational> for SurdValue {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            f.write_str(if self.b.is_negative() { " - " } else { " + " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        let b = self.b.abs();
        if !b.is_one() {
            write!(f, "{b}*")?;
        }
        write!(f, "sqrt({})", self.c)
    }
}
