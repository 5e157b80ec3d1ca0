//! Probability bounds and the repetition counts derived from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::CertifyError;
use crate::epsilon::{ceil_log, freivalds_reps, int, inverse, rat, Epsilon};
use crate::field::prime_power;

fn big(q: u64) -> BigRational {
    int(q)
}

fn qpow(q: u64, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(e))
}

/// Lower bound on the probability that `z^2` does not divide the minimal
/// polynomial of `A + VU` when `A` has at most `k` nontrivial nilpotent blocks.
pub fn rho1(q: u64) -> BigRational {
    let q = big(q);
    let one = BigRational::one();
    let two = int(2);
    let num = (&q * &q - &two) * (&q * &q - &q - &one) * (&q - &one);
    let den = &q * &q * &q * &q * (&q + &one);
    num / den
}

/// Lower bound on the probability that an irreducible `f != z` of degree
/// `d` does not divide the minimal polynomial of `A + VU` when `A` has at
/// most `k` nontrivial invariant factors.
pub fn rho2(q: u64, d: u32) -> BigRational {
    let x = qpow(q, d);
    let one = BigRational::one();
    let two = int(2);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let num = (&x2 * &x2 - &two) * (&x2 - &x - &one);
    let den = &x3 * (&x3 + &x2 + &x + &one);
    num / den
}

/// Bound on the probability that the gcd of `c` random minimal polynomials
/// keeps an irreducible factor other than `z` that `phi_{k+1}` lacks.
pub fn big_f(q: u64, c: u32) -> BigRational {
    let one = BigRational::one();
    let g1 = big(q - 1) * (&one - rho2(q, 1)).pow(c as i32);
    let g2 = qpow(q, 2) / int(2) * (&one - rho2(q, 2)).pow(c as i32);
    let g3 = qpow(q, 3) / int(3) * (&one - rho2(q, 3)).pow(c as i32);
    // 2^(c-2) q^(3(1-c)) / (q^(c-1) - 1)
    let g4 = qpow(2, c) / int(4) / qpow(q, 3 * (c - 1)) / (qpow(q, c - 1) - &one);
    g1 + g2 + g3 + g4
}

/// Candidate pairs per nilpotent detection block of trials.
pub fn sigma1(q: u64) -> u32 {
    match q {
        2 => 17,
        3 => 3,
        4 | 5 => 2,
        7 => 1,
        _ => 2,
    }
}

/// Number of additional pairs whose minimal polynomials enter the gcd.
pub fn gcd_width(q: u64) -> u32 {
    match q {
        2 | 3 => 4,
        4..=7 => 3,
        _ => 2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    Nilpotent,
    Invariant,
}

/// Every repetition count used by detection and by the protocols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolParams {
    pub q: u64,
    pub k: usize,
    pub eps: Epsilon,
    pub sigma1: u32,
    /// Candidate pairs for nilpotent detection and challenges.
    pub tau: u32,
    /// Krylov sequences per candidate pair.
    pub lambda: u32,
    /// Challenge vectors for few nilpotent blocks.
    pub gamma: u32,
    pub c: u32,
    pub sigma2: u32,
    /// `tau_2(2, d)` and `lambda_2(2, d)` for `d = 1, 2`.
    pub tau2: [u32; 2],
    pub lambda2: [u32; 2],
    pub tau_deg3: u32,
    /// Trials of `c` pairs each when `q >= 3`.
    pub gcd_trials: u32,
    pub tau3: u32,
    pub tau_tilde: u32,
    pub freivalds_reps: u32,
}

/// Least `t >= 1` with `(q^2 / (2q - 1))^t >= 2 (c + 1) t / eps`.
pub fn tau3(q: u64, c: u32, eps: &Epsilon) -> u32 {
    let base = qpow(q, 2) / (int(2 * q) - BigRational::one());
    let scale = int(2 * (c as u64 + 1)) * inverse(eps);
    let mut t = 1u32;
    let mut pw = base.clone();
    while pw < &scale * int(t as u64) {
        t += 1;
        pw *= &base;
    }
    t
}

pub fn schedule_params(q: u64, k: usize, eps: &Epsilon, kind: ProtocolKind) -> Result<ProtocolParams, CertifyError> {
    if prime_power(q).is_none() {
        return Err(CertifyError::InvalidParameters(format!("{q} is not a prime power")));
    }
    if k == 0 {
        return Err(CertifyError::InvalidParameters("k must be at least 1".into()));
    }
    let inv = inverse(eps);
    let nil_inv = match kind {
        ProtocolKind::Nilpotent => inv.clone(),
        ProtocolKind::Invariant => &inv * int(2),
    };
    let s1 = sigma1(q);
    let two = int(2);
    let tau = if q <= 7 { ceil_log(&two, &(&two * &nil_inv)) } else { ceil_log(&big(q), &(&two * &nil_inv)) } * s1;
    let tau = tau.max(1);
    let lambda_base = if q == 2 { rat(4, 3) } else { big(q) / int(2) };
    let lambda = ceil_log(&lambda_base, &(&two * int(tau as u64) * &nil_inv)).max(1);
    let gamma = freivalds_reps(q, eps);
    let c = gcd_width(q);
    let sigma2 = 6;
    let twelve = int(12) * &inv;
    let t21 = ceil_log(&two, &twelve).max(1) * sigma2;
    let t22 = ceil_log(&two, &twelve).max(1);
    let l21 = ceil_log(&rat(4, 3), &(&twelve * int(t21 as u64))).max(1);
    let l22 = ceil_log(&rat(16, 7), &(&twelve * int(t22 as u64))).max(1);
    let tau_deg3 = 2 * ceil_log(&int(4), &twelve).max(1);
    let gcd_trials = ceil_log(&two, &(int(4) * &inv)).max(1);
    let tau_tilde = ceil_log(&(BigRational::one() / (BigRational::one() - rho2(q, 1))), &(&two * &inv)).max(1);
    Ok(ProtocolParams {
        q,
        k,
        eps: *eps,
        sigma1: s1,
        tau,
        lambda,
        gamma,
        c,
        sigma2,
        tau2: [t21, t22],
        lambda2: [l21, l22],
        tau_deg3,
        gcd_trials,
        tau3: tau3(q, c, eps),
        tau_tilde,
        freivalds_reps: freivalds_reps(q, eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho1(2), rat(1, 24));
        assert_eq!(rho2(2, 1), rat(7, 60));
        let one = BigRational::one();
        assert!((&one - rho2(2, 1)).pow(6) < rat(1, 2));
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            assert!(rho1(q) >= &one - rat(3, q as i64));
            for d in 1..=4 {
                assert!(rho2(q, d) >= &one - int(2) / qpow(q, d));
            }
        }
    }

    #[test]
    fn sigma1_schedule() {
        let one = BigRational::one();
        for q in [2u64, 3, 4, 5, 7] {
            assert!((&one - rho1(q)).pow(sigma1(q) as i32) <= rat(1, 2), "q = {q}");
        }
        for q in [8u64, 9, 11, 13] {
            assert!((&one - rho1(q)).pow(sigma1(q) as i32) <= rat(1, q as i64), "q = {q}");
        }
    }

    #[test]
    fn big_f_thresholds() {
        let half = rat(1, 2);
        assert!(big_f(3, 4) < half && half < big_f(3, 3));
        for q in [4, 5, 7] {
            assert!(big_f(q, 3) < half && half < big_f(q, 2), "q = {q}");
        }
        for q in [8, 9, 11] {
            assert!(big_f(q, 2) < half, "q = {q}");
        }
    }

    #[test]
    fn schedule_examples() {
        let p = schedule_params(2, 1, &Epsilon::new(1, 2).unwrap(), ProtocolKind::Nilpotent).unwrap();
        assert_eq!(p.tau, 34);
        let p = schedule_params(5, 1, &Epsilon::new(1, 100).unwrap(), ProtocolKind::Nilpotent).unwrap();
        assert_eq!(p.gamma, 3);
        assert_eq!(p.c, 3);
        assert!(schedule_params(6, 1, &Epsilon::pow2(2), ProtocolKind::Nilpotent).is_err());
    }

    #[test]
    fn tau3_is_least_fixpoint() {
        for (q, eps) in [(2u64, Epsilon::pow2(2)), (3, Epsilon::pow2(10)), (101, Epsilon::new(1, 3).unwrap())] {
            let c = gcd_width(q);
            let t = tau3(q, c, &eps);
            let base = qpow(q, 2) / (int(2 * q) - BigRational::one());
            let holds = |t: u32| base.clone().pow(t as i32) >= int(2 * (c as u64 + 1)) * int(t as u64) * inverse(&eps);
            assert!(holds(t));
            assert!(t == 1 || !holds(t - 1));
        }
    }
}
