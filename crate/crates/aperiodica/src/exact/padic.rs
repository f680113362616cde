//! Truncated p-adic integers and the p-adic valuation/metric on Q.
//!
//! A `PAdicApprox` knows an element of Z_p modulo p^K; all ring
//! operations are exact at that depth. The valuation of a nonzero
//! element is the index of its first nonzero digit.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub const DEFAULT_DEPTH: usize = 32;

/// An element of Z_p known modulo p^depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicApprox {
    p: u64,
    depth: usize,
    /// canonical representative in [0, p^depth)
    value: BigInt,
}

impl PAdicApprox {
    pub fn from_bigint(p: u64, depth: usize, x: &BigInt) -> Result<Self> {
        check_prime(p)?;
        let m = modulus(p, depth);
        let mut value = x % &m;
        if value.is_negative() {
            value += &m;
        }
        Ok(PAdicApprox { p, depth, value })
    }

    pub fn from_int(p: u64, depth: usize, x: i64) -> Result<Self> {
        Self::from_bigint(p, depth, &BigInt::from(x))
    }

    /// A rational a/b with b coprime to p embeds into Z_p.
    pub fn from_rational(p: u64, depth: usize, x: &BigRational) -> Result<Self> {
        check_prime(p)?;
        let m = modulus(p, depth);
        let den = x.denom();
        if (den % BigInt::from(p)).is_zero() {
            return Err(Error::InvalidParameter(format!(
                "{x} has negative {p}-adic valuation; not a {p}-adic integer"
            )));
        }
        let inv = mod_inverse(den, &m).ok_or_else(|| {
            Error::InvalidParameter("denominator not invertible".into())
        })?;
        Self::from_bigint(p, depth, &(x.numer() * inv))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn representative(&self) -> &BigInt {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Base-p digits, length `depth`.
    pub fn digits(&self) -> Vec<u64> {
        let mut digits = Vec::with_capacity(self.depth);
        let p = BigInt::from(self.p);
        let mut v = self.value.clone();
        for _ in 0..self.depth {
            let d = &v % &p;
            digits.push(d.to_u64().unwrap());
            v /= &p;
        }
        digits
    }

    /// Index of the first nonzero digit; `None` means the element is
    /// zero to the known depth (valuation >= depth).
    pub fn valuation(&self) -> Option<usize> {
        if self.value.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut v = self.value.clone();
        let mut k = 0;
        while (&v % &p).is_zero() {
            v /= &p;
            k += 1;
        }
        Some(k)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binop(other, |a, b, m| (a + b) % m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binop(other, |a, b, m| ((a - b) % m + m) % m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binop(other, |a, b, m| (a * b) % m)
    }

    fn binop(&self, other: &Self, f: impl Fn(&BigInt, &BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let depth = self.depth.min(other.depth);
        let m = modulus(self.p, depth);
        PAdicApprox { p: self.p, depth, value: f(&(&self.value % &m), &(&other.value % &m), &m) }
    }

    /// p-adic distance to another approximation: p^{-v} where v is the
    /// valuation of the difference (0 if equal to the known depth).
    pub fn distance(&self, other: &Self) -> f64 {
        match self.sub(other).valuation() {
            None => 0.0,
            Some(v) => (self.p as f64).powi(-(v as i32)),
        }
    }

    /// Does this element lie in the coset rep + p^k Z_p?
    pub fn in_coset(&self, rep: &BigInt, k: usize) -> bool {
        assert!(k <= self.depth, "coset finer than known depth");
        let m = modulus(self.p, k);
        ((&self.value - rep) % &m).is_zero()
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // digits least-significant first, e.g. "1011... (2-adic)"
        let ds: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
        write!(f, "{}...({}-adic)", ds.join(""), self.p)
    }
}

pub fn modulus(p: u64, depth: usize) -> BigInt {
    BigInt::from(p).pow(depth as u32)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    // extended Euclid
    let (mut old_r, mut r) = (a.clone() % m, m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, tmp);
    }
    if old_r.is_one() {
        Some(((old_s % m) + m) % m)
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// nu_p of a nonzero integer.
fn int_valuation(x: &BigInt, p: u64) -> i64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.clone();
    loop {
        let (q, r) = (&x / &p, &x % &p);
        if r.is_zero() {
            v += 1;
            x = q;
        } else {
            return v;
        }
    }
}

/// nu_p(a/b) = nu_p(a) - nu_p(b); `None` encodes nu_p(0) = infinity.
pub fn padic_valuation(x: &BigRational, p: u64) -> Result<Option<i64>> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(None);
    }
    Ok(Some(int_valuation(x.numer(), p) - int_valuation(x.denom(), p)))
}

/// d(x, y) = p^{-nu_p(y - x)}, with d(x, x) = 0.
pub fn padic_distance(x: &BigRational, y: &BigRational, p: u64) -> Result<f64> {
    let diff = y - x;
    Ok(match padic_valuation(&diff, p)? {
        None => 0.0,
        Some(v) => (p as f64).powi(-(v as i32)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(12, 1), 2).unwrap(), Some(2));
        assert_eq!(padic_valuation(&rat(0, 1), 7).unwrap(), None);
        assert_eq!(padic_valuation(&rat(5, 9), 3).unwrap(), Some(-2));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(padic_valuation(&rat(1, 1), 6).is_err());
        assert!(padic_valuation(&rat(1, 1), 1).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(padic_distance(&rat(0, 1), &rat(8, 1), 2).unwrap(), 0.125);
        assert_eq!(padic_distance(&rat(3, 7), &rat(3, 7), 5).unwrap(), 0.0);
        // difference 1 has valuation 0; difference 1/3 has valuation -1
        assert_eq!(padic_distance(&rat(1, 3), &rat(4, 3), 3).unwrap(), 1.0);
        assert_eq!(padic_distance(&rat(1, 3), &rat(2, 3), 3).unwrap(), 3.0);
    }

    #[test]
    fn approx_arithmetic_matches_integers() {
        let p = 3;
        let depth = 6;
        let m = 3i64.pow(6);
        for (x, y) in [(14i64, 200i64), (-7, 45), (728, 1), (81, -81)] {
            let a = PAdicApprox::from_int(p, depth, x).unwrap();
            let b = PAdicApprox::from_int(p, depth, y).unwrap();
            let want = |v: i64| ((v % m) + m) % m;
            assert_eq!(a.add(&b).representative(), &BigInt::from(want(x + y)));
            assert_eq!(a.sub(&b).representative(), &BigInt::from(want(x - y)));
            assert_eq!(a.mul(&b).representative(), &BigInt::from(want(x * y)));
        }
    }

    #[test]
    fn approx_valuation_is_first_nonzero_digit() {
        let a = PAdicApprox::from_int(2, 10, 24).unwrap(); // 24 = 2^3 * 3
        assert_eq!(a.valuation(), Some(3));
        assert_eq!(a.digits()[..5], [0, 0, 0, 1, 1]);
        let z = PAdicApprox::from_int(2, 10, 0).unwrap();
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn rational_embedding() {
        // 1/3 in Z_2: 3 * x = 1 mod 2^8
        let x = PAdicApprox::from_rational(2, 8, &rat(1, 3)).unwrap();
        let three = PAdicApprox::from_int(2, 8, 3).unwrap();
        let one = PAdicApprox::from_int(2, 8, 1).unwrap();
        assert_eq!(x.mul(&three), one);
        assert!(PAdicApprox::from_rational(2, 8, &rat(1, 2)).is_err());
    }
}
