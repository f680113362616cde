//! Exact arithmetic in the ring Z[tau] and its field of fractions,
//! where tau = (1 + sqrt 5)/2.
//!
//! Elements are stored as `a + b*tau` with arbitrary-precision integer
//! coefficients, so membership tests and comparisons against golden
//! window endpoints are decidable without floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// tau as a float, for rendering and approximate work.
pub const TAU_F64: f64 = 1.618033988749894848;

/// An element a + b*tau of Z[tau].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenInt {
    pub fn new<T: Into<BigInt>, U: Into<BigInt>>(a: T, b: U) -> Self {
        GoldenInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        GoldenInt::new(0, 0)
    }

    pub fn one() -> Self {
        GoldenInt::new(1, 0)
    }

    pub fn tau() -> Self {
        GoldenInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The Galois conjugate: sqrt5 -> -sqrt5, i.e. tau -> 1 - tau.
    /// (a + b*tau)' = (a + b) - b*tau.
    pub fn conjugate(&self) -> Self {
        GoldenInt { a: &self.a + &self.b, b: -self.b.clone() }
    }

    /// Real embedding a + b*(1+sqrt5)/2.
    pub fn value(&self) -> f64 {
        big_to_f64(&self.a) + big_to_f64(&self.b) * TAU_F64
    }

    /// Sign of the real embedding, computed exactly.
    /// 2*(a + b*tau) = (2a + b) + b*sqrt5.
    pub fn sign(&self) -> Ordering {
        let u = 2 * &self.a + &self.b;
        let v = &self.b;
        sign_u_plus_v_sqrt5(&u, v)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }
}

/// Exact sign of u + v*sqrt5.
fn sign_u_plus_v_sqrt5(u: &BigInt, v: &BigInt) -> Ordering {
    match (u.sign(), v.sign()) {
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => Ordering::Equal,
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus)
        | (num_bigint::Sign::Minus, num_bigint::Sign::NoSign)
        | (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => Ordering::Less,
        (num_bigint::Sign::Plus, num_bigint::Sign::Plus)
        | (num_bigint::Sign::Plus, num_bigint::Sign::NoSign)
        | (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => Ordering::Greater,
        (num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
            // u > 0, v < 0: positive iff u^2 > 5 v^2
            (u * u).cmp(&(5 * v * v))
        }
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus) => {
            // u < 0, v > 0: positive iff 5 v^2 > u^2
            (v * v * BigInt::from(5)).cmp(&(u * u))
        }
    }
}

impl PartialOrd for GoldenInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: Self) -> Self {
        GoldenInt { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: Self) -> Self {
        GoldenInt { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> Self {
        GoldenInt { a: -self.a, b: -self.b }
    }
}

impl Mul for GoldenInt {
    type Output = GoldenInt;
    // tau^2 = tau + 1
    fn mul(self, rhs: Self) -> Self {
        let bb = &self.b * &rhs.b;
        GoldenInt {
            a: &self.a * &rhs.a + &bb,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bb,
        }
    }
}

impl<'a> Mul<&'a GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &GoldenInt) -> GoldenInt {
        self.clone() * rhs.clone()
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*tau", self.a, self.b)
    }
}

/// An element of Q(tau): a GoldenInt numerator over a positive integer
/// denominator, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenRational {
    pub num: GoldenInt,
    pub den: BigInt,
}

impl GoldenRational {
    pub fn new(num: GoldenInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = GoldenRational { num, den };
        r.reduce();
        r
    }

    pub fn from_int(x: GoldenInt) -> Self {
        GoldenRational { num: x, den: BigInt::one() }
    }

    pub fn from_integers<T: Into<BigInt>, U: Into<BigInt>>(a: T, b: U) -> Self {
        Self::from_int(GoldenInt::new(a, b))
    }

    pub fn zero() -> Self {
        Self::from_int(GoldenInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num = -self.num.clone();
        }
        let g = self.num.a.gcd(&self.num.b).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num.a = &self.num.a / &g;
            self.num.b = &self.num.b / &g;
            self.den = &self.den / &g;
        }
    }

    pub fn conjugate(&self) -> Self {
        GoldenRational { num: self.num.conjugate(), den: self.den.clone() }
    }

    pub fn value(&self) -> f64 {
        // evaluate as (a + b*tau)/den without overflowing f64 prematurely
        let d = big_to_f64(&self.den);
        self.num.value() / d
    }

    pub fn sign(&self) -> Ordering {
        self.num.sign()
    }

    /// Multiplicative inverse, using the norm N(a+b*tau) = a^2 + ab - b^2.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let a = &self.num.a;
        let b = &self.num.b;
        let norm: BigInt = a * a + a * b - b * b;
        // (a + b*tau)^{-1} = (a + b - b*tau)/norm
        let inv_num = GoldenInt { a: a + b, b: -b.clone() };
        Some(GoldenRational::new(
            GoldenInt {
                a: &inv_num.a * &self.den,
                b: &inv_num.b * &self.den,
            },
            norm,
        ))
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl PartialOrd for GoldenRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Add for GoldenRational {
    type Output = GoldenRational;
    fn add(self, rhs: Self) -> Self {
        GoldenRational::new(
            GoldenInt {
                a: &self.num.a * &rhs.den + &rhs.num.a * &self.den,
                b: &self.num.b * &rhs.den + &rhs.num.b * &self.den,
            },
            self.den * rhs.den,
        )
    }
}

impl Sub for GoldenRational {
    type Output = GoldenRational;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for GoldenRational {
    type Output = GoldenRational;
    fn neg(self) -> Self {
        GoldenRational { num: -self.num, den: self.den }
    }
}

impl Mul for GoldenRational {
    type Output = GoldenRational;
    fn mul(self, rhs: Self) -> Self {
        GoldenRational::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl fmt::Display for GoldenRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parse "a+b*tau" (also accepts "a", "a-b*tau", "b*tau").
pub fn parse_golden(s: &str) -> Option<GoldenInt> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(idx) = s.find("tau") {
        let head = &s[..idx];
        let head = head.strip_suffix('*').unwrap_or(head);
        // split head into "a+b" / "a-b" / "b"
        let mut split = None;
        for (i, c) in head.char_indices().skip(1) {
            if c == '+' || c == '-' {
                split = Some(i);
            }
        }
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let b_str = match b_str {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        let a: BigInt = a_str.parse().ok()?;
        let b: BigInt = b_str.parse().ok()?;
        Some(GoldenInt { a, b })
    } else {
        let a: BigInt = s.parse().ok()?;
        Some(GoldenInt { a, b: BigInt::zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_examples() {
        assert_eq!(GoldenInt::tau().conjugate(), GoldenInt::new(1, -1));
        assert_eq!(GoldenInt::one().conjugate(), GoldenInt::one());
        assert_eq!(GoldenInt::new(2, 3).conjugate(), GoldenInt::new(5, -3));
    }

    #[test]
    fn conjugation_is_involutive() {
        let x = GoldenInt::new(-7, 12);
        assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn exact_ordering() {
        // tau - 1 = 0.618..., 2 - tau = 0.381...
        let x = GoldenInt::new(-1, 1);
        let y = GoldenInt::new(2, -1);
        assert!(x > y);
        assert!(y.is_positive());
        // 987/610 < tau < 1597/987 (consecutive Fibonacci ratios)
        let t = GoldenRational::from_int(GoldenInt::tau());
        let lo = GoldenRational::new(GoldenInt::new(987, 0), 610.into());
        let hi = GoldenRational::new(GoldenInt::new(1597, 0), 987.into());
        assert!(lo < t && t < hi);
    }

    #[test]
    fn inverse_of_tau() {
        let t = GoldenRational::from_int(GoldenInt::tau());
        let inv = t.clone().inverse().unwrap();
        // 1/tau = tau - 1
        assert_eq!(inv, GoldenRational::from_integers(-1, 1));
        assert_eq!(t * inv, GoldenRational::from_integers(1, 0));
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_golden("2+3*tau").unwrap(), GoldenInt::new(2, 3));
        assert_eq!(parse_golden("-1+tau").unwrap(), GoldenInt::new(-1, 1));
        assert_eq!(parse_golden("5").unwrap(), GoldenInt::new(5, 0));
        assert_eq!(parse_golden("-2*tau").unwrap(), GoldenInt::new(0, -2));
        assert_eq!(parse_golden("1-1*tau").unwrap(), GoldenInt::new(1, -1));
    }
}
