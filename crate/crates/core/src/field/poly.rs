//! Dense univariate polynomials over a [`Field`].

use super::{Field, FieldError, Scalar};

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
///
/// A `Poly` does not remember its field; every operation takes the field
/// explicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    /// The indeterminate `z`.
    pub fn z() -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    /// `c z^d`.
    pub fn monomial(c: Scalar, d: usize) -> Poly {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly::from_coeffs(coeffs)
    }

    /// Builds a polynomial from coefficients (lowest degree first), trimming zeros.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `z - a`.
    pub fn linear(f: &Field, a: Scalar) -> Poly {
        Poly::from_coeffs(vec![f.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Multiplicity of `z` as a factor (0 for the zero polynomial).
    pub fn z_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count().min(self.coeffs.len())
    }

    /// `self / z^v` with `v` the z-valuation.
    pub fn strip_z(&self) -> Poly {
        Poly { coeffs: self.coeffs[self.z_valuation()..].to_vec() }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn eval(&self, f: &Field, x: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &Field, c: Scalar) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, f: &Field, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(f, self))
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self, f: &Field) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(f, f.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Quotient and remainder of division by `d`.
    pub fn div_rem(&self, f: &Field, d: &Poly) -> Result<(Poly, Poly), FieldError> {
        let dd = d.degree().ok_or(FieldError::ZeroInverse)?;
        let lc_inv = f.inv(d.leading())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = if lc_inv == 1 { c } else { f.mul(c, lc_inv) };
            q[i - dd] = t;
            let nt = f.neg(t);
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.mul_add(r[i - dd + j], nt, dc);
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Result<Poly, FieldError> {
        Ok(self.div_rem(f, d)?.1)
    }

    /// Exact quotient; panics if `d` is zero.
    pub fn div_exact(&self, f: &Field, d: &Poly) -> Poly {
        self.div_rem(f, d).expect("division by zero polynomial").0
    }

    /// Whether `self` divides `other`. Zero divides only zero.
    pub fn divides(&self, f: &Field, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(f, self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_i64((i as u64 % f.characteristic()) as i64)))
                .collect(),
        )
    }

    /// For `self = g(z^p)` returns `h` with `h^p = self`. Coefficients at
    /// positions not divisible by `p` are ignored.
    pub fn pth_root(&self, f: &Field) -> Poly {
        let p = f.characteristic() as usize;
        Poly::from_coeffs(self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect())
    }
}

/// Monic gcd of two polynomials; `gcd(0, 0) = 0`.
pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(f, &b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.monic(f)
}

/// Extended Euclid: `(d, s, t)` with `s a + t b = d = gcd(a, b)` monic.
fn xgcd(f: &Field, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(f, &r1).expect("nonzero divisor");
        let s = s0.sub(f, &q.mul(f, &s1));
        let t = t0.sub(f, &q.mul(f, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let lc = f.inv(r0.leading()).expect("nonzero");
    (r0.scale(f, lc), s0.scale(f, lc), t0.scale(f, lc))
}

/// Monic gcd of a list of polynomials, ignoring zero entries.
pub fn poly_gcd(f: &Field, polys: &[Poly]) -> Result<Poly, FieldError> {
    let mut acc = Poly::zero();
    for p in polys {
        acc = gcd(f, &acc, p);
    }
    if acc.is_zero() {
        Err(FieldError::AllZero)
    } else {
        Ok(acc)
    }
}

/// Monic gcd `d` of the list with cofactors `g` such that `sum g_i f_i = d`.
pub fn poly_xgcd_list(f: &Field, polys: &[Poly]) -> Result<(Poly, Vec<Poly>), FieldError> {
    let mut d = Poly::zero();
    let mut g: Vec<Poly> = Vec::with_capacity(polys.len());
    for p in polys {
        if p.is_zero() {
            g.push(Poly::zero());
            continue;
        }
        if d.is_zero() {
            let lc = f.inv(p.leading())?;
            d = p.scale(f, lc);
            g.push(Poly::from_coeffs(vec![lc]));
            continue;
        }
        let (nd, s, t) = xgcd(f, &d, p);
        for gi in g.iter_mut() {
            *gi = gi.mul(f, &s);
        }
        g.push(t);
        d = nd;
    }
    if d.is_zero() {
        return Err(FieldError::AllZero);
    }
    Ok((d, g))
}

/// Monic least common multiple; zero if either argument is zero.
pub fn poly_lcm(f: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(f, a, b);
    a.div_exact(f, &g).mul(f, b).monic(f)
}

/// Product of the distinct monic irreducible factors of `a` (its radical).
pub fn squarefree_part(f: &Field, a: &Poly) -> Poly {
    let a = a.monic(f);
    if a.deg() == 0 {
        return Poly::one();
    }
    let d = a.derivative(f);
    if d.is_zero() {
        return squarefree_part(f, &a.pth_root(f));
    }
    let g = gcd(f, &a, &d);
    let w = a.div_exact(f, &g);
    let mut h = g;
    loop {
        let t = gcd(f, &h, &w);
        if t.deg() == 0 {
            break;
        }
        h = h.div_exact(f, &t);
    }
    w.mul(f, &squarefree_part(f, &h)).monic(f)
}
