//! Exact dense reference computations: rank, minimal and characteristic
//! polynomials, invariant factors, band width and displacement rank.
//!
//! These are used to cross-check the black-box algorithms and stay
//! independent of them: nothing here goes through a [`BlackBox`](crate::blackbox::BlackBox).

use thiserror::Error;

use crate::blackbox::DisplacementKind;
use crate::field::{poly_lcm, Field, Poly, Scalar};
use crate::matrix::Matrix;

/// Default cap on the size accepted by [`invariant_report`].
pub const DEFAULT_SIZE_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("matrix of size {n} exceeds the oracle limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Invariant factors of `zI - M` and quantities derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    /// Nonconstant invariant factors, largest first: `factors[0]` is the
    /// minimal polynomial and `factors[i+1]` divides `factors[i]`.
    pub factors: Vec<Poly>,
    /// Factors of positive degree other than `z`.
    pub nontrivial_count: usize,
    /// Factors divisible by `z^2`.
    pub nilpotent_block_count: usize,
    pub rank: usize,
    pub minpoly: Poly,
    pub charpoly: Poly,
}

impl InvariantReport {
    /// The `i`-th invariant factor (1-based), padded with ones.
    pub fn factor(&self, i: usize) -> Poly {
        assert!(i >= 1, "invariant factors are numbered from 1");
        self.factors.get(i - 1).cloned().unwrap_or_else(Poly::one)
    }
}

pub fn dense_rank(f: &Field, m: &Matrix) -> usize {
    m.rank(f)
}

/// Minimal polynomial of `v` with respect to `m`, by Krylov elimination.
pub fn dense_minpoly_vector(f: &Field, m: &Matrix, v: &[Scalar]) -> Poly {
    // Each basis entry: reduced vector, its pivot, and the polynomial t with r = t(M) v.
    let mut basis: Vec<(Vec<Scalar>, usize, Poly)> = Vec::new();
    let mut w = v.to_vec();
    let mut d = 0;
    loop {
        let mut r = w.clone();
        let mut comb = Poly::monomial(1, d);
        for (b, p, t) in &basis {
            let c = r[*p];
            if c != 0 {
                let s = f.neg(f.div(c, b[*p]).expect("nonzero pivot"));
                f.axpy(&mut r, s, b);
                comb = comb.add(f, &t.scale(f, s));
            }
        }
        match r.iter().position(|&x| x != 0) {
            None => return comb.monic(f),
            Some(p) => basis.push((r, p, comb)),
        }
        w = m.mul_vec(f, &w);
        d += 1;
    }
}

/// Minimal polynomial of `m` as the lcm of the minimal polynomials of the unit vectors.
pub fn dense_minpoly(f: &Field, m: &Matrix) -> Poly {
    let n = m.rows();
    let mut acc = Poly::one();
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        acc = poly_lcm(f, &acc, &dense_minpoly_vector(f, m, &e));
    }
    acc
}

/// Characteristic polynomial `det(zI - m)` via reduction to Hessenberg form.
pub fn dense_charpoly(f: &Field, m: &Matrix) -> Poly {
    let n = m.rows();
    let mut h = m.clone();
    for c in 1..n.saturating_sub(1) {
        let Some(i) = (c..n).find(|&i| h.get(i, c - 1) != 0) else {
            continue;
        };
        if i != c {
            h.swap_rows(i, c);
            for r in 0..n {
                let (a, b) = (h.get(r, i), h.get(r, c));
                h.set(r, i, b);
                h.set(r, c, a);
            }
        }
        let t = h.get(c, c - 1);
        for i in c + 1..n {
            let u = f.div(h.get(i, c - 1), t).expect("nonzero pivot");
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let x = f.sub(h.get(i, j), f.mul(u, h.get(c, j)));
                h.set(i, j, x);
            }
            for r in 0..n {
                let x = f.add(h.get(r, c), f.mul(u, h.get(r, i)));
                h.set(r, c, x);
            }
        }
    }
    // p_m = (z - h_mm) p_{m-1} - sum_i h_{m-i,m} (prod_{j=m-i+1}^{m} h_{j,j-1}) p_{m-i-1}, 1-based.
    let at = |i: usize, j: usize| h.get(i - 1, j - 1);
    let mut p = vec![Poly::one()];
    for mm in 1..=n {
        let mut next = Poly::linear(f, at(mm, mm)).mul(f, &p[mm - 1]);
        let mut prod = 1;
        for i in 1..mm {
            prod = f.mul(prod, at(mm - i + 1, mm - i));
            let c = f.mul(at(mm - i, mm), prod);
            if c != 0 {
                next = next.sub(f, &p[mm - i - 1].scale(f, c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Diagonal of the Smith form of a square polynomial matrix, each entry
/// monic, in divisibility order.
fn smith_diagonal(f: &Field, mut a: Vec<Vec<Poly>>) -> Vec<Poly> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if let Some(d) = x.degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                diag.extend((t..n).map(|_| Poly::zero()));
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let piv = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(f, &piv).expect("nonzero pivot");
                for j in t..n {
                    let sub = q.mul(f, &a[t][j]);
                    a[i][j] = a[i][j].sub(f, &sub);
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(f, &piv).expect("nonzero pivot");
                for row in a.iter_mut().skip(t) {
                    let sub = q.mul(f, &row[t]);
                    row[j] = row[j].sub(f, &sub);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !piv.divides(f, &a[i][j])));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = a[i][j].clone();
                        a[t][j] = a[t][j].add(f, &x);
                    }
                }
                None => {
                    diag.push(piv.monic(f));
                    break;
                }
            }
        }
    }
    diag
}

/// Invariant factors of `m` via the Smith form of `zI - m`, for matrices up
/// to `limit` rows.
pub fn invariant_report_with_limit(f: &Field, m: &Matrix, limit: usize) -> Result<InvariantReport, OracleError> {
    let n = m.rows();
    if m.cols() != n {
        return Err(OracleError::NotSquare { rows: n, cols: m.cols() });
    }
    if n > limit {
        return Err(OracleError::SizeLimit { n, limit });
    }
    let a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(m.get(i, j));
                    if i == j {
                        Poly::from_coeffs(vec![c, 1])
                    } else {
                        Poly::from_coeffs(vec![c])
                    }
                })
                .collect()
        })
        .collect();
    let diag = smith_diagonal(f, a);
    let factors: Vec<Poly> = diag.into_iter().rev().filter(|p| p.deg() >= 1).collect();
    let z = Poly::z();
    let z2 = Poly::monomial(1, 2);
    let nontrivial_count = factors.iter().filter(|p| **p != z).count();
    let nilpotent_block_count = factors.iter().filter(|p| z2.divides(f, p)).count();
    let kernel_dim = factors.iter().filter(|p| p.coeff(0) == 0).count();
    let minpoly = factors.first().cloned().unwrap_or_else(Poly::one);
    let charpoly = factors.iter().fold(Poly::one(), |acc, p| acc.mul(f, p));
    Ok(InvariantReport {
        factors,
        nontrivial_count,
        nilpotent_block_count,
        rank: n - kernel_dim,
        minpoly,
        charpoly,
    })
}

pub fn invariant_report(f: &Field, m: &Matrix) -> Result<InvariantReport, OracleError> {
    invariant_report_with_limit(f, m, DEFAULT_SIZE_LIMIT)
}

/// Smallest `k` with `m[i][j] = 0` whenever `|i - j| > k`.
pub fn dense_band_width(m: &Matrix) -> usize {
    let mut k = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j) != 0 {
                k = k.max(i.abs_diff(j));
            }
        }
    }
    k
}

/// `Z_alpha` as a dense matrix.
pub fn shift_matrix(n: usize, alpha: Scalar) -> Matrix {
    let mut z = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        z.set(i + 1, i, 1);
    }
    if n > 0 {
        z.set(0, n - 1, alpha);
    }
    z
}

/// The displacement `phi(m)` computed with dense products.
pub fn dense_displacement(f: &Field, m: &Matrix, kind: DisplacementKind) -> Matrix {
    let n = m.rows();
    let z0 = shift_matrix(n, 0);
    let z1 = shift_matrix(n, 1);
    match kind {
        DisplacementKind::Toeplitz => z1.mul(f, m).sub(f, &m.mul(f, &z0)),
        DisplacementKind::Hankel => z1.mul(f, m).sub(f, &m.mul(f, &z0.transpose())),
        DisplacementKind::ToeplitzPlusHankel => {
            let s = z0.add(f, &z0.transpose());
            s.mul(f, m).sub(f, &m.mul(f, &s))
        }
    }
}

pub fn dense_displacement_rank(f: &Field, m: &Matrix, kind: DisplacementKind) -> usize {
    dense_displacement(f, m, kind).rank(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: &[u64]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    #[test]
    fn jordan_blocks_report() {
        let f = Field::prime(5).unwrap();
        let j = gen::jordan_block(&f, 0, 2);
        let m = gen::block_diag(&[j.clone(), j]);
        let r = invariant_report(&f, &m).unwrap();
        assert_eq!(r.factors, vec![p(&[0, 0, 1]), p(&[0, 0, 1])]);
        assert_eq!(r.nilpotent_block_count, 2);
        assert_eq!(r.nontrivial_count, 2);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn identity_and_zero() {
        let f = Field::prime(2).unwrap();
        let r = invariant_report(&f, &Matrix::identity(3)).unwrap();
        assert_eq!(r.factors, vec![p(&[1, 1]); 3]);
        assert_eq!(r.nontrivial_count, 3);
        let r0 = invariant_report(&f, &Matrix::zeros(4, 4)).unwrap();
        assert_eq!(r0.nontrivial_count, 0);
        assert_eq!(r0.factors.len(), 4);
        assert_eq!(r0.factor(5), Poly::one());
    }

    #[test]
    fn companion_has_one_factor() {
        let f = Field::prime(2).unwrap();
        let c = gen::companion(&f, &p(&[1, 1, 0, 0, 1]));
        let r = invariant_report(&f, &c).unwrap();
        assert_eq!(r.factors, vec![p(&[1, 1, 0, 0, 1])]);
        assert_eq!(dense_minpoly(&f, &c), p(&[1, 1, 0, 0, 1]));
    }

    #[test]
    fn size_limit() {
        let f = Field::prime(2).unwrap();
        assert_eq!(
            invariant_report_with_limit(&f, &Matrix::zeros(5, 5), 4),
            Err(OracleError::SizeLimit { n: 5, limit: 4 })
        );
    }

    #[test]
    fn routes_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u64, 3, 4, 7] {
            let f = Field::new(q).unwrap();
            for n in 1..=7 {
                let m = Matrix::random(&f, n, n, &mut rng);
                let r = invariant_report(&f, &m).unwrap();
                assert_eq!(r.minpoly, dense_minpoly(&f, &m));
                assert_eq!(r.charpoly, dense_charpoly(&f, &m));
                assert_eq!(r.rank, dense_rank(&f, &m));
                for w in r.factors.windows(2) {
                    assert!(w[1].divides(&f, &w[0]));
                }
            }
        }
    }

    #[test]
    fn band_width_and_displacement() {
        let f = Field::prime(7).unwrap();
        let mut m = Matrix::identity(4);
        assert_eq!(dense_band_width(&m), 0);
        m.set(0, 3, 2);
        assert_eq!(dense_band_width(&m), 3);
        let i = Matrix::identity(4);
        assert_eq!(dense_displacement_rank(&f, &i, DisplacementKind::Toeplitz), 1);
        assert_eq!(dense_displacement_rank(&f, &i, DisplacementKind::ToeplitzPlusHankel), 0);
    }
}
