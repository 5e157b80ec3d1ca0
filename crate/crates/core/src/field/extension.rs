//! Construction of extension fields and embeddings between them.

use std::collections::HashMap;

use super::{Field, FieldError, FieldSpec, Poly, Scalar, MAX_DEGREE};

/// `base^exp mod m` for polynomials over `f`.
fn pow_mod(f: &Field, base: &Poly, mut exp: u64, m: &Poly) -> Poly {
    let mut acc = Poly::one();
    let mut b = base.rem(f, m).expect("nonzero modulus");
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.mul(f, &b).rem(f, m).expect("nonzero modulus");
        }
        b = b.mul(f, &b).rem(f, m).expect("nonzero modulus");
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test over the field `f`.
pub fn is_irreducible(f: &Field, m: &Poly) -> bool {
    let d = match m.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let m = m.monic(f);
    let mut h = Poly::z();
    for _ in 1..=d / 2 {
        h = pow_mod(f, &h, f.order(), &m);
        let g = super::poly::gcd(f, &h.sub(f, &Poly::z()), &m);
        if !g.is_one() {
            return false;
        }
    }
    true
}

/// GF(p^e) defined by the monic irreducible modulus of degree `e` whose
/// lower coefficients `(c_0, ..., c_{e-1})`, read as base-`p` digits with
/// `c_0` least significant, form the smallest integer.
pub fn build_extension(p: u64, e: u32) -> Result<Field, FieldError> {
    let base = Field::prime(p)?;
    if e == 1 {
        return Ok(base);
    }
    if e == 0 || e as usize > MAX_DEGREE {
        return Err(FieldError::OrderTooLarge { p, e });
    }
    let q = p.checked_pow(e).filter(|&q| q < 1 << 63).ok_or(FieldError::OrderTooLarge { p, e })?;
    for low in 0..q {
        let mut coeffs = base.digits_base(low, e as usize);
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        let m = Poly::from_coeffs(coeffs.clone());
        if is_irreducible(&base, &m) {
            return Ok(Field::from_spec(FieldSpec { p, e, q, modulus: coeffs }));
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn digits_base(&self, mut a: u64, len: usize) -> Vec<u64> {
        let p = self.characteristic();
        (0..len)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }
}

/// Field embedding `small -> big` for fields of the same characteristic
/// with `deg(small) | deg(big)`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    small: Field,
    big: Field,
    /// Powers of the image of the generator of `small`.
    basis: Vec<Scalar>,
    preimage: HashMap<Scalar, Scalar>,
}

impl FieldEmbedding {
    /// Finds an embedding by locating a root of `small`'s modulus in `big`.
    /// Returns `None` when no embedding exists.
    pub fn new(small: &Field, big: &Field) -> Option<FieldEmbedding> {
        if small.characteristic() != big.characteristic() || big.degree() % small.degree() != 0 {
            return None;
        }
        let big_u = big.unmetered();
        let e = small.degree() as usize;
        let theta = if e == 1 {
            0
        } else {
            let m = small.modulus();
            big_u.elements().find(|&x| {
                // Modulus coefficients lie in the prime subfield of `big`.
                Poly::from_coeffs(m.clone()).eval(&big_u, x) == 0
            })?
        };
        let mut basis = Vec::with_capacity(e);
        let mut pw = 1;
        for _ in 0..e {
            basis.push(pw);
            pw = big_u.mul(pw, theta);
        }
        let mut emb = FieldEmbedding { small: small.unmetered(), big: big_u, basis, preimage: HashMap::new() };
        if small.order() <= 1 << 20 {
            for a in small.elements() {
                let b = emb.embed(a);
                emb.preimage.insert(b, a);
            }
        }
        Some(emb)
    }

    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn embed(&self, a: Scalar) -> Scalar {
        if self.small.is_prime_field() {
            return a;
        }
        let digits = self.small.digits(a);
        digits.iter().zip(&self.basis).fold(0, |acc, (&d, &b)| self.big.add(acc, self.big.mul(d, b)))
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn project(&self, b: Scalar) -> Option<Scalar> {
        if self.small.is_prime_field() {
            return (b < self.small.order()).then_some(b);
        }
        self.preimage.get(&b).copied()
    }

    pub fn embed_poly(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(a.coeffs().iter().map(|&c| self.embed(c)).collect())
    }

    pub fn project_poly(&self, a: &Poly) -> Option<Poly> {
        a.coeffs().iter().map(|&c| self.project(c)).collect::<Option<Vec<_>>>().map(Poly::from_coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_irreducible(f: &Field, m: &Poly) -> bool {
        let d = m.deg();
        let q = f.order();
        for deg in 1..=d / 2 {
            for low in 0..q.pow(deg as u32) {
                let mut c = f.digits_base(low, deg);
                c.push(1);
                if Poly::from_coeffs(c).divides(f, m) {
                    return false;
                }
            }
        }
        d >= 1
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for p in [2u64, 3, 5] {
            let f = Field::prime(p).unwrap();
            for d in 1..=4u32 {
                for low in 0..p.pow(d) {
                    let mut c = f.digits_base(low, d as usize);
                    c.push(1);
                    let m = Poly::from_coeffs(c);
                    assert_eq!(is_irreducible(&f, &m), trial_division_irreducible(&f, &m), "{m:?}");
                }
            }
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(build_extension(2, 2).unwrap().modulus(), vec![1, 1, 1]);
        assert_eq!(build_extension(3, 2).unwrap().modulus(), vec![1, 0, 1]);
        assert_eq!(build_extension(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = Field::new(4).unwrap();
        let big = Field::new(64).unwrap();
        let emb = FieldEmbedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.embed(small.mul(a, b)), big.mul(emb.embed(a), emb.embed(b)));
                assert_eq!(emb.embed(small.add(a, b)), big.add(emb.embed(a), emb.embed(b)));
            }
            assert_eq!(emb.project(emb.embed(a)), Some(a));
        }
        assert!(FieldEmbedding::new(&small, &Field::new(8).unwrap()).is_none());
    }
}
