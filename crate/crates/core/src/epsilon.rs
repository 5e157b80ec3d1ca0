//! Error probabilities as exact rationals, and the integer logarithms used
//! to turn them into repetition counts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EpsilonError {
    #[error("error probability must lie strictly between 0 and 1, got {0}")]
    OutOfRange(String),
    #[error("cannot parse error probability {0:?}")]
    Parse(String),
}

/// An error probability `num / den` with `0 < num < den`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Epsilon, EpsilonError> {
        Epsilon::from_u128(num as u128, den as u128)
    }

    fn from_u128(num: u128, den: u128) -> Result<Epsilon, EpsilonError> {
        if num == 0 || num >= den {
            return Err(EpsilonError::OutOfRange(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if den > u64::MAX as u128 {
            return Err(EpsilonError::OutOfRange(format!("{num}/{den}")));
        }
        Ok(Epsilon { num: num as u64, den: den as u64 })
    }

    /// `2^-bits`.
    pub fn pow2(bits: u32) -> Epsilon {
        Epsilon::new(1, 1u64 << bits).expect("valid power of two")
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `eps / d`.
    pub fn split(&self, d: u64) -> Epsilon {
        Epsilon::from_u128(self.num as u128, self.den as u128 * d as u128).expect("dividing keeps the value in range")
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = EpsilonError;

    /// Accepts `num/den` or a decimal such as `0.01`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EpsilonError::Parse(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u128 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u128.pow(frac.len() as u32);
        let fr: u128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Epsilon::from_u128(int * den + fr, den)
    }
}

/// Smallest `t >= 0` with `base^t >= x`, for rational `base > 1`.
pub fn ceil_log(base: &BigRational, x: &BigRational) -> u32 {
    assert!(base > &BigRational::one(), "logarithm base must exceed 1");
    let mut t = 0;
    let mut pw = BigRational::one();
    while &pw < x {
        pw *= base;
        t += 1;
    }
    t
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `1 / eps` as a rational.
pub fn inverse(eps: &Epsilon) -> BigRational {
    BigRational::new(BigInt::from(eps.den), BigInt::from(eps.num))
}

/// Number of independent repetitions of a test with one-sided error at
/// most `1/q` needed to reach error `eps`: `ceil(log_q(1/eps))`, at least 1.
pub fn freivalds_reps(q: u64, eps: &Epsilon) -> u32 {
    ceil_log(&int(q), &inverse(eps)).max(1)
}

/// Converts a rational to `f64` for display.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("1/1024".parse::<Epsilon>().unwrap(), Epsilon::pow2(10));
        assert_eq!("0.01".parse::<Epsilon>().unwrap(), Epsilon::new(1, 100).unwrap());
        assert_eq!("2/4".parse::<Epsilon>().unwrap(), Epsilon::new(1, 2).unwrap());
        assert!("1".parse::<Epsilon>().is_err());
        assert!("0".parse::<Epsilon>().is_err());
        assert!("x".parse::<Epsilon>().is_err());
    }

    #[test]
    fn exact_logs_at_powers() {
        // log_2(1024) is exactly 10, log_5(100) rounds up to 3.
        assert_eq!(freivalds_reps(2, &Epsilon::pow2(10)), 10);
        assert_eq!(freivalds_reps(5, &Epsilon::new(1, 100).unwrap()), 3);
        assert_eq!(freivalds_reps(101, &Epsilon::new(1, 2).unwrap()), 1);
        assert_eq!(ceil_log(&rat(4, 3), &int(1)), 0);
    }

    #[test]
    fn split_reduces() {
        let e = Epsilon::new(1, 4).unwrap();
        assert_eq!(e.split(2), Epsilon::new(1, 8).unwrap());
    }
}
