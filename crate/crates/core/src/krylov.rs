//! Krylov-sequence methods: Berlekamp-Massey, Wiedemann minimal
//! polynomials, polynomial evaluation at a black box and consistent
//! linear solving.

use rand::Rng;
use thiserror::Error;

use crate::blackbox::{BlackBox, BlackBoxError};
use crate::epsilon::{ceil_log, freivalds_reps, int, inverse, Epsilon};
use crate::field::{build_extension, poly_lcm, Field, FieldEmbedding, Poly, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KrylovError {
    #[error(transparent)]
    BlackBox(#[from] BlackBoxError),
    #[error("the system has no solution")]
    Inconsistent,
}

/// Minimal monic generator of a linearly recurrent sequence: the monic `g`
/// of least degree with `sum_j g_j s_{i+j} = 0` for every window inside the
/// sequence. The all-zero sequence gives `1`.
pub fn berlekamp_massey(f: &Field, seq: &[Scalar]) -> Poly {
    let mut c = vec![1];
    let mut b = vec![1];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd: Scalar = 1;
    for n in 0..seq.len() {
        let mut d = seq[n];
        for i in 1..=l.min(c.len() - 1) {
            d = f.mul_add(d, c[i], seq[n - i]);
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = f.neg(f.div(d, bd).expect("nonzero discrepancy base"));
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] = f.mul_add(c[i + m], coef, bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, 0);
    Poly::from_coeffs(c.into_iter().rev().collect())
}

/// The scalar sequence `u^T B^i v`, `i = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrylovSequence {
    pub terms: Vec<Scalar>,
}

impl KrylovSequence {
    pub fn compute(bb: &BlackBox<'_>, u: &[Scalar], v: &[Scalar], len: usize) -> Result<KrylovSequence, BlackBoxError> {
        check_vec(bb, u)?;
        check_vec(bb, v)?;
        let f = bb.field();
        let terms = krylov_vectors(bb, v, len).iter().map(|w| f.dot(u, w)).collect();
        Ok(KrylovSequence { terms })
    }

    /// Whether `g` annihilates every window of the stored terms.
    pub fn annihilated_by(&self, f: &Field, g: &Poly) -> bool {
        let d = g.deg();
        if g.is_zero() {
            return false;
        }
        (0..self.terms.len().saturating_sub(d)).all(|i| {
            let s: Scalar = g.coeffs().iter().enumerate().fold(0, |acc, (j, &c)| f.mul_add(acc, c, self.terms[i + j]));
            s == 0
        })
    }
}

fn check_vec(bb: &BlackBox<'_>, v: &[Scalar]) -> Result<(), BlackBoxError> {
    if v.len() != bb.dim() {
        return Err(BlackBoxError::DimensionMismatch { expected: bb.dim(), got: v.len() });
    }
    if v.iter().any(|&x| !bb.field().contains(x)) {
        return Err(BlackBoxError::FieldMismatch);
    }
    Ok(())
}

/// Krylov vectors `v, Bv, ..., B^{len-1} v`.
fn krylov_vectors(bb: &BlackBox<'_>, v: &[Scalar], len: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::with_capacity(len);
    let mut w = v.to_vec();
    for i in 0..len {
        if i + 1 < len {
            let next = bb.apply_unchecked(&w);
            out.push(std::mem::replace(&mut w, next));
        } else {
            out.push(std::mem::take(&mut w));
        }
    }
    out
}

/// Minimal generator of `u^T B^i v` from its first `2 * bound` terms. It
/// divides the minimal polynomial of `B` and equals the generator of the
/// whole sequence whenever that has degree at most `bound`.
pub fn minpoly_sequence(bb: &BlackBox<'_>, u: &[Scalar], v: &[Scalar], bound: usize) -> Result<Poly, BlackBoxError> {
    check_vec(bb, u)?;
    check_vec(bb, v)?;
    let f = bb.field();
    let terms: Vec<Scalar> = krylov_vectors(bb, v, 2 * bound).iter().map(|w| f.dot(u, w)).collect();
    Ok(berlekamp_massey(f, &terms))
}

/// Lower bound for the minimal polynomial of `v` with respect to `B`: the
/// lcm of sequence generators for `trials` random projections `u`. The
/// Krylov vectors of `v` are computed once (`2n - 1` applications).
pub fn minpoly_matrix_vector<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    v: &[Scalar],
    trials: u32,
    rng: &mut R,
) -> Result<Poly, BlackBoxError> {
    check_vec(bb, v)?;
    let f = bb.field();
    let n = bb.dim();
    if v.iter().all(|&x| x == 0) {
        return Ok(Poly::one());
    }
    let kv = krylov_vectors(bb, v, 2 * n);
    let mut acc = Poly::one();
    for _ in 0..trials.max(1) {
        let u = f.random_vec(n, rng);
        let terms: Vec<Scalar> = kv.iter().map(|w| f.dot(&u, w)).collect();
        acc = poly_lcm(f, &acc, &berlekamp_massey(f, &terms));
    }
    Ok(acc)
}

/// Minimal polynomial of `B` grown from a known divisor `start`.
///
/// While `g(B) w != 0` for one of `reps = ceil(log_q(n/eps))` random `w`,
/// `g` is replaced by its lcm with a generator of the minimal polynomial
/// of such a `w`. The result always divides the minimal polynomial and is
/// a proper divisor with probability at most `eps`, since `g` takes at
/// most `n` distinct values.
pub fn minpoly_with_check<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    start: &Poly,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<Poly, BlackBoxError> {
    let f = bb.field();
    let n = bb.dim();
    let reps = freivalds_reps(f.order(), &eps.split(n.max(1) as u64));
    let mut g = start.monic(f);
    let mut clean = 0;
    while clean < reps {
        let w = f.random_vec(n, rng);
        if apply_poly(bb, &g, &w)?.iter().all(|&x| x == 0) {
            clean += 1;
            continue;
        }
        clean = 0;
        g = poly_lcm(f, &g, &minpoly_matrix_vector(bb, &w, 2, rng)?);
    }
    Ok(g)
}

/// Applies `B` to a vector over an extension field `E` of `B`'s field by
/// splitting it into its base-`p` digit planes: one base application per
/// nonzero plane.
fn apply_lifted(bb: &BlackBox<'_>, emb: &FieldEmbedding, big: &Field, w: &[Scalar]) -> Vec<Scalar> {
    let digits = big.degree() as usize;
    let p = big.characteristic();
    let mut out = vec![0; w.len()];
    let mut place = 1u64;
    let mut rest: Vec<Scalar> = w.to_vec();
    for _ in 0..digits {
        let plane: Vec<Scalar> = rest.iter().map(|&x| x % p).collect();
        for x in rest.iter_mut() {
            *x /= p;
        }
        if plane.iter().any(|&x| x != 0) {
            let y = bb.apply_unchecked(&plane);
            for (o, &yi) in out.iter_mut().zip(&y) {
                if yi != 0 {
                    *o = big.mul_add(*o, emb.embed(yi), place);
                }
            }
        }
        place = place.wrapping_mul(p);
    }
    out
}

/// Per-trial failure bound `1 - (1 - n/Q)^2` for one random projection
/// pair over a field of order `Q`, as the base `1/delta` of the
/// repetition logarithm. `None` when `Q <= n`.
fn trial_base(order: u64, n: usize) -> Option<num_rational::BigRational> {
    let (qq, nn) = (order as i128, n as i128);
    if qq <= nn {
        return None;
    }
    let num = qq * qq;
    let den = 2 * qq * nn - nn * nn;
    if den <= 0 {
        return None;
    }
    Some(num_rational::BigRational::new(num.into(), den.into()))
}

/// Number of projection pairs used by [`minpoly_matrix`] for a field of
/// order `order` and dimension `n`.
pub fn minpoly_trials(order: u64, n: usize, eps: &Epsilon) -> u32 {
    match trial_base(order, n) {
        Some(base) if n > 0 => ceil_log(&base, &inverse(eps)).max(1),
        _ => {
            // No usable bound for tiny fields without lifting; fall back to
            // a generous count growing with log_q n.
            let bits = ceil_log(&int(2), &inverse(eps)).max(1);
            let logq = ceil_log(&int(order.max(2)), &int(n.max(2) as u64)).max(1);
            bits * (2 + 2 * logq)
        }
    }
}

/// Extension degree `m` with `q^m >= 2n` used when lifting projections.
pub fn lift_degree(q: u64, n: usize) -> u32 {
    let target = 2 * n.max(1) as u128;
    let mut m = 1;
    let mut pw = q as u128;
    while pw < target {
        pw *= q as u128;
        m += 1;
    }
    m
}

/// Minimal polynomial of `B` with failure probability at most `eps`, as
/// the lcm of sequence generators over random projection pairs. With
/// `use_extension` and `q < 2n` the projection vectors are drawn over
/// GF(q^m), `q^m >= 2n`, while `B` stays over GF(q); one lifted
/// application costs up to `deg(GF(q^m))` base applications.
pub fn minpoly_matrix<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    eps: &Epsilon,
    rng: &mut R,
    use_extension: bool,
) -> Result<Poly, BlackBoxError> {
    let f = bb.field();
    let n = bb.dim();
    if n == 0 {
        return Ok(Poly::one());
    }
    let q = f.order();
    if !(use_extension && (q as u128) < 2 * n as u128) {
        let trials = minpoly_trials(q, n, eps);
        let mut acc = Poly::one();
        for _ in 0..trials {
            let u = f.random_vec(n, rng);
            let v = f.random_vec(n, rng);
            acc = poly_lcm(f, &acc, &minpoly_sequence(bb, &u, &v, n)?);
        }
        return Ok(acc);
    }
    let m = lift_degree(q, n);
    let big = build_extension(f.characteristic(), f.degree() * m).expect("extension of a valid field");
    let big = match f.counter() {
        Some(c) => big.metered(c),
        None => big,
    };
    let emb = FieldEmbedding::new(f, &big).expect("subfield embeds");
    let trials = minpoly_trials(big.order(), n, eps);
    let mut acc = Poly::one();
    for _ in 0..trials {
        let u = big.random_vec(n, rng);
        let mut w = big.random_vec(n, rng);
        let mut terms = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            terms.push(big.dot(&u, &w));
            if i + 1 < 2 * n {
                w = apply_lifted(bb, &emb, &big, &w);
            }
        }
        acc = poly_lcm(&big, &acc, &berlekamp_massey(&big, &terms));
    }
    // The true minimal polynomial has coefficients in the base field; an
    // lcm that does not is a proper divisor and is topped up below.
    match emb.project_poly(&acc) {
        Some(p) => Ok(p),
        None => {
            let fallback = minpoly_matrix(bb, eps, rng, false)?;
            Ok(poly_lcm(f, &fallback, &project_rational_part(&emb, &acc, f)))
        }
    }
}

/// Largest factor of `p` (over the big field) defined over the small field,
/// found by intersecting with its Frobenius conjugates.
fn project_rational_part(emb: &FieldEmbedding, p: &Poly, small: &Field) -> Poly {
    let big = emb.big();
    let q = small.order();
    let mut g = p.clone();
    let conj = |x: &Poly| Poly::from_coeffs(x.coeffs().iter().map(|&c| big.pow(c, q)).collect());
    let mut c = conj(p);
    for _ in 0..big.degree() {
        g = crate::field::poly_gcd(big, &[g, c.clone()]).expect("nonzero");
        c = conj(&c);
    }
    emb.project_poly(&g).unwrap_or_else(Poly::one)
}

/// `p(B) v` by Horner's rule, using `deg p` applications.
pub fn apply_poly(bb: &BlackBox<'_>, p: &Poly, v: &[Scalar]) -> Result<Vec<Scalar>, BlackBoxError> {
    check_vec(bb, v)?;
    let f = bb.field();
    let Some(d) = p.degree() else {
        return Ok(vec![0; v.len()]);
    };
    let mut acc = f.scale_vec(p.coeff(d), v);
    for i in (0..d).rev() {
        acc = bb.apply_unchecked(&acc);
        let c = p.coeff(i);
        if c != 0 {
            f.axpy(&mut acc, c, v);
        }
    }
    Ok(acc)
}

/// Some `x` with `B x = b`.
///
/// Tries the Wiedemann route first: with `g` the minimal polynomial of `b`
/// and `g(0) != 0`, `x = -g(0)^-1 ((g - g(0)) / z)(B) b`, which lies in the
/// Krylov space of `b`. Falls back to dense elimination on the
/// materialized matrix. The returned vector always satisfies `B x = b`.
pub fn solve_consistent<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    b: &[Scalar],
    eps: &Epsilon,
    rng: &mut R,
) -> Result<Vec<Scalar>, KrylovError> {
    check_vec(bb, b)?;
    let f = bb.field();
    let n = bb.dim();
    if b.iter().all(|&x| x == 0) {
        return Ok(vec![0; n]);
    }
    let base_trials = freivalds_reps(f.order(), eps) + 1;
    for attempt in 0..3 {
        let g = minpoly_matrix_vector(bb, b, base_trials * (attempt + 1), rng)?;
        let g0 = g.coeff(0);
        if g0 == 0 {
            continue;
        }
        let h = Poly::from_coeffs(g.coeffs()[1..].to_vec());
        let scale = f.neg(f.inv(g0).expect("nonzero"));
        let x = f.scale_vec(scale, &apply_poly(bb, &h, b)?);
        if bb.apply_unchecked(&x) == b {
            return Ok(x);
        }
    }
    let m = bb.to_dense();
    let x = m.solve(f, b).ok_or(KrylovError::Inconsistent)?;
    if bb.apply_unchecked(&x) != b {
        return Err(KrylovError::Inconsistent);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::DenseMatrix;
    use crate::gen;
    use crate::matrix::Matrix;
    use crate::oracle::{dense_minpoly, dense_minpoly_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: &[u64]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    fn dense(f: &Field, m: Matrix) -> BlackBox<'static> {
        BlackBox::new(DenseMatrix::new(f, m).unwrap())
    }

    #[test]
    fn bm_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(berlekamp_massey(&f7, &[1; 6]), p(&[6, 1]));
        assert_eq!(berlekamp_massey(&f7, &[0; 6]), Poly::one());
        assert_eq!(berlekamp_massey(&f7, &[0, 1, 1, 2, 3, 5, 1, 6]), p(&[6, 6, 1]));
        // z^2: the sequence 1, 0, 0, 0.
        assert_eq!(berlekamp_massey(&f7, &[1, 0, 0, 0]), p(&[0, 1]));
        assert_eq!(berlekamp_massey(&f7, &[0, 1, 0, 0]), p(&[0, 0, 1]));
    }

    #[test]
    fn minpoly_with_lifting() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let target = p(&[1, 1, 0, 0, 1]);
        let a = dense(&f, gen::companion(&f, &target));
        assert_eq!(minpoly_matrix(&a, &Epsilon::pow2(10), &mut rng, true).unwrap(), target);
        let j = gen::jordan_block(&f, 0, 2);
        let b = dense(&f, gen::block_diag(&[j.clone(), j]));
        assert_eq!(minpoly_matrix(&b, &Epsilon::pow2(10), &mut rng, true).unwrap(), p(&[0, 0, 1]));
    }

    #[test]
    fn minpoly_over_nonprime_field_with_lifting() {
        let f = Field::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let m = Matrix::random(&f, 6, 6, &mut rng);
            let a = dense(&f, m.clone());
            assert_eq!(minpoly_matrix(&a, &Epsilon::pow2(10), &mut rng, true).unwrap(), dense_minpoly(&f, &m));
        }
    }

    #[test]
    fn minpoly_vector_matches_oracle() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let m = Matrix::random(&f, 5, 5, &mut rng);
            let v = f.random_vec(5, &mut rng);
            let a = dense(&f, m.clone());
            let g = minpoly_matrix_vector(&a, &v, 20, &mut rng).unwrap();
            assert_eq!(g, dense_minpoly_vector(&f, &m, &v));
        }
    }

    #[test]
    fn horner_uses_degree_applications() {
        let f = Field::prime(5).unwrap();
        let a = dense(&f, Matrix::from_rows(&[vec![1, 1], vec![0, 1]]));
        let v = apply_poly(&a, &p(&[1, 0, 1]), &[0, 1]).unwrap();
        // (I + A^2) e2 = e2 + (2, 1)
        assert_eq!(v, vec![2, 2]);
        assert_eq!(a.applications(), 2);
    }

    #[test]
    fn solve_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f5 = Field::prime(5).unwrap();
        let a = dense(&f5, Matrix::identity(2).scale(&f5, 2));
        assert_eq!(solve_consistent(&a, &[1, 1], &Epsilon::pow2(10), &mut rng).unwrap(), vec![3, 3]);
        let f7 = Field::prime(7).unwrap();
        let b = dense(&f7, Matrix::from_rows(&[vec![0, 1], vec![1, 1]]));
        assert_eq!(solve_consistent(&b, &[1, 0], &Epsilon::pow2(10), &mut rng).unwrap(), vec![6, 1]);
        let s = dense(&f7, Matrix::from_rows(&[vec![1, 0], vec![0, 0]]));
        assert_eq!(solve_consistent(&s, &[0, 1], &Epsilon::pow2(10), &mut rng), Err(KrylovError::Inconsistent));
        assert_eq!(solve_consistent(&s, &[3, 0], &Epsilon::pow2(10), &mut rng).unwrap(), vec![3, 0]);
    }

    #[test]
    fn lift_degrees() {
        assert_eq!(lift_degree(2, 16), 5);
        assert_eq!(lift_degree(3, 16), 4);
        assert_eq!(lift_degree(5, 2), 1);
    }

    #[test]
    fn checked_minpoly_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [2, 3, 4] {
            let f = Field::new(q).unwrap();
            for _ in 0..10 {
                let m = gen::block_diag(&[gen::jordan_block(&f, 0, 3), gen::jordan_block(&f, 1, 2), Matrix::random(&f, 3, 3, &mut rng)]);
                let a = dense(&f, m.clone());
                let g = minpoly_with_check(&a, &Poly::one(), &Epsilon::pow2(30), &mut rng).unwrap();
                assert_eq!(g, dense_minpoly(&f, &m));
            }
        }
    }
}
