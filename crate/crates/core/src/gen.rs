//! Seeded generators for structured test matrices.

use rand::Rng;

use crate::field::{Field, Poly, Scalar};
use crate::matrix::Matrix;

/// Jordan block of the given size with eigenvalue `lambda` (ones on the subdiagonal).
pub fn jordan_block(_f: &Field, lambda: Scalar, size: usize) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        m.set(i, i, lambda);
        if i + 1 < size {
            m.set(i + 1, i, 1);
        }
    }
    m
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and
/// `-c_0, ..., -c_{d-1}` in the last column. Its minimal polynomial is `p`.
pub fn companion(f: &Field, p: &Poly) -> Matrix {
    assert!(p.is_monic(), "companion matrix needs a monic polynomial");
    let d = p.deg();
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            m.set(i + 1, i, 1);
        }
        m.set(i, d - 1, f.neg(p.coeff(i)));
    }
    m
}

pub fn block_diag(blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(Matrix::rows).sum();
    let mut m = Matrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.rows();
    }
    m
}

/// Random matrix with band width at most `k`.
pub fn random_band<R: Rng + ?Sized>(f: &Field, n: usize, k: usize, rng: &mut R) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i.saturating_sub(k)..(i + k + 1).min(n) {
            m.set(i, j, f.random(rng));
        }
    }
    m
}

/// Random product of an `n x r` and an `r x n` matrix (rank at most `r`).
pub fn random_low_rank<R: Rng + ?Sized>(f: &Field, n: usize, r: usize, rng: &mut R) -> Matrix {
    let a = Matrix::random(f, n, r, rng);
    let b = Matrix::random(f, r, n, rng);
    a.mul(f, &b)
}

/// Random matrix of rank exactly `r`.
pub fn random_rank<R: Rng + ?Sized>(f: &Field, n: usize, r: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_low_rank(f, n, r, rng);
        if m.rank(f) == r {
            return m;
        }
    }
}

pub fn random_nonsingular<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::random(f, n, n, rng);
        if m.rank(f) == n {
            return m;
        }
    }
}

/// `S m S^-1` for a random nonsingular `S`.
pub fn random_similar<R: Rng + ?Sized>(f: &Field, m: &Matrix, rng: &mut R) -> Matrix {
    let s = random_nonsingular(f, m.rows(), rng);
    let si = s.inverse(f).expect("nonsingular");
    s.mul(f, m).mul(f, &si)
}

/// Random Toeplitz matrix, `a[i][j] = t[i - j]`.
pub fn random_toeplitz<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> Matrix {
    let t = f.random_vec(2 * n, rng);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, t[i + n - j]);
        }
    }
    m
}

/// Random Hankel matrix, `a[i][j] = h[i + j]`.
pub fn random_hankel<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> Matrix {
    let h = f.random_vec(2 * n, rng);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, h[i + j]);
        }
    }
    m
}
