//! Finite fields GF(p) and GF(p^e) with an optional operation counter.
//!
//! Elements are plain `u64` values. For a prime field the value is the
//! residue in `[0, p)`. For an extension field the value packs the
//! coefficient vector `(c_0, ..., c_{e-1})` of the reduced representative
//! polynomial in base `p`, so `c_0` is the least significant digit and the
//! prime subfield consists of the values below `p`.

mod extension;
mod poly;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

pub use extension::{build_extension, is_irreducible, FieldEmbedding};
pub use poly::{poly_gcd, poly_lcm, poly_xgcd_list, squarefree_part, Poly};

/// A field element in the packed representation described above.
pub type Scalar = u64;

const MAX_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field characteristic {0} is too large (must be below 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("field order {p}^{e} does not fit in 64 bits")]
    OrderTooLarge { p: u64, e: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(u32),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("gcd of an all-zero list")]
    AllZero,
    #[error("{value} is not an element of a field of order {q}")]
    NotAnElement { value: u64, q: u64 },
}

/// Shared counter of arithmetic operations.
#[derive(Debug, Clone, Default)]
pub struct OpCounter(Arc<AtomicU64>);

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }

    fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus over GF(p), lowest degree first; empty for prime fields.
    modulus: Vec<u64>,
}

/// Handle to a finite field. Cloning is cheap; clones compare equal when
/// they describe the same field, whether or not they carry a counter.
#[derive(Clone)]
pub struct Field {
    spec: Arc<FieldSpec>,
    counter: Option<OpCounter>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.e == 1 {
            write!(f, "GF({})", self.spec.p)
        } else {
            write!(f, "GF({}^{}; {:?})", self.spec.p, self.spec.e, self.spec.modulus)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrimePower(p));
        }
        if p >= 1 << 32 {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        Ok(Field::from_spec(FieldSpec { p, e: 1, q: p, modulus: Vec::new() }))
    }

    /// GF(q) for a prime power `q`, using [`build_extension`] when `q` is not prime.
    pub fn new(q: u64) -> Result<Field, FieldError> {
        match prime_power(q) {
            Some((p, 1)) => Field::prime(p),
            Some((p, e)) => build_extension(p, e),
            None => Err(FieldError::NotPrimePower(q)),
        }
    }

    /// GF(p^e) defined by an explicit monic modulus of degree `e` over GF(p),
    /// given lowest degree first.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field, FieldError> {
        let base = Field::prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(modulus.len().saturating_sub(1) as u32));
        }
        let e = (modulus.len() - 1) as u32;
        if e == 1 {
            return Ok(base);
        }
        if e as usize > MAX_DEGREE {
            return Err(FieldError::OrderTooLarge { p, e });
        }
        let q = p.checked_pow(e).filter(|&q| q < 1 << 63).ok_or(FieldError::OrderTooLarge { p, e })?;
        if !is_irreducible(&base, &Poly::from_coeffs(modulus.to_vec())) {
            return Err(FieldError::BadModulus(e));
        }
        Ok(Field::from_spec(FieldSpec { p, e, q, modulus: modulus.to_vec() }))
    }

    fn from_spec(spec: FieldSpec) -> Field {
        Field { spec: Arc::new(spec), counter: None }
    }

    /// A handle to the same field whose arithmetic is tallied on `counter`.
    pub fn metered(&self, counter: &OpCounter) -> Field {
        Field { spec: self.spec.clone(), counter: Some(counter.clone()) }
    }

    /// A handle to the same field without a counter.
    pub fn unmetered(&self) -> Field {
        Field { spec: self.spec.clone(), counter: None }
    }

    pub fn counter(&self) -> Option<&OpCounter> {
        self.counter.as_ref()
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.e
    }

    /// Field order `q = p^e`.
    pub fn order(&self) -> u64 {
        self.spec.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.spec.e == 1
    }

    /// The defining modulus (lowest degree first); `[0, 1]` for prime fields.
    pub fn modulus(&self) -> Vec<u64> {
        if self.spec.e == 1 {
            vec![0, 1]
        } else {
            self.spec.modulus.clone()
        }
    }

    pub fn zero(&self) -> Scalar {
        0
    }

    pub fn one(&self) -> Scalar {
        1
    }

    pub fn contains(&self, a: Scalar) -> bool {
        a < self.spec.q
    }

    pub fn check(&self, a: Scalar) -> Result<Scalar, FieldError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::NotAnElement { value: a, q: self.spec.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, x: i64) -> Scalar {
        x.rem_euclid(self.spec.p as i64) as u64
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        rng.gen_range(0..self.spec.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        rng.gen_range(1..self.spec.q)
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Scalar> {
        (0..n).map(|_| self.random(rng)).collect()
    }

    /// All field elements in increasing packed order.
    pub fn elements(&self) -> std::ops::Range<Scalar> {
        0..self.spec.q
    }

    #[inline]
    fn tick(&self) {
        if let Some(c) = &self.counter {
            c.bump();
        }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        self.tick();
        self.add_raw(a, b)
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.tick();
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        self.tick();
        self.neg_raw(a)
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        self.tick();
        self.mul_raw(a, b)
    }

    /// `a + b * c`, counted as two operations.
    #[inline]
    pub fn mul_add(&self, a: Scalar, b: Scalar, c: Scalar) -> Scalar {
        self.tick();
        self.tick();
        self.add_raw(a, self.mul_raw(b, c))
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        self.tick();
        Ok(if self.spec.e == 1 {
            inv_mod(a, self.spec.p)
        } else {
            self.pow_raw(a, self.spec.q - 2)
        })
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar, FieldError> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Scalar, exp: u64) -> Scalar {
        self.tick();
        self.pow_raw(a, exp)
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: Scalar) -> Scalar {
        if self.spec.e == 1 {
            return a;
        }
        self.tick();
        self.pow_raw(a, self.spec.q / self.spec.p)
    }

    /// Inner product of two vectors, counted as `2 len - 1` operations.
    pub fn dot(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut acc = 0;
        for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
            if i == 0 {
                acc = self.mul(x, y);
            } else {
                acc = self.mul_add(acc, x, y);
            }
        }
        acc
    }

    pub fn add_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }

    pub fn scale_vec(&self, c: Scalar, a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// `a += c * b` in place.
    pub fn axpy(&self, a: &mut [Scalar], c: Scalar, b: &[Scalar]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.mul_add(*x, c, y);
        }
    }

    pub(crate) fn add_raw(&self, a: Scalar, b: Scalar) -> Scalar {
        let p = self.spec.p;
        if self.spec.e == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: Scalar) -> Scalar {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        if self.spec.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.e {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub(crate) fn mul_raw(&self, a: Scalar, b: Scalar) -> Scalar {
        let p = self.spec.p;
        let e = self.spec.e as usize;
        if e == 1 {
            return a * b % p;
        }
        if p == 2 {
            return self.mul_binary(a, b);
        }
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        unpack(a, p, &mut x[..e]);
        unpack(b, p, &mut y[..e]);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let m = &self.spec.modulus;
        for d in (e..2 * e - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            let c = p - c;
            for i in 0..e {
                prod[d - e + i] = (prod[d - e + i] + c * m[i]) % p;
            }
        }
        pack(&prod[..e], p)
    }

    fn mul_binary(&self, a: Scalar, b: Scalar) -> Scalar {
        let e = self.spec.e;
        let mut prod: u128 = 0;
        let mut b = b as u128;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= (a as u128) << shift;
            }
            b >>= 1;
            shift += 1;
        }
        let m: u128 = self.spec.modulus.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c as u128) << i));
        for d in (e..2 * e).rev() {
            if prod >> d & 1 == 1 {
                prod ^= m << (d - e);
            }
        }
        prod as u64
    }

    pub(crate) fn pow_raw(&self, a: Scalar, mut exp: u64) -> Scalar {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Base-`p` digits of `a` (length `e`).
    pub fn digits(&self, a: Scalar) -> Vec<u64> {
        let mut out = vec![0; self.spec.e as usize];
        unpack(a, self.spec.p, &mut out);
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> Scalar {
        pack(digits, self.spec.p)
    }
}

fn unpack(mut a: u64, p: u64, out: &mut [u64]) {
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
}

fn pack(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}
