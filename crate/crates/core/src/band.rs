//! Detection and verification of band structure.
//!
//! With `K = 2k + 1` probe vectors `alpha_i` (entry `j` is one iff
//! `j = i mod K`), the products `A alpha_i` hold the columns `j = i mod K`
//! of a band matrix in disjoint row ranges, so `K` applications recover a
//! candidate band matrix. Anything nonzero outside those ranges proves the
//! matrix is not band; a Freivalds comparison catches the rest.

use rand::Rng;
use thiserror::Error;

use crate::blackbox::{freivalds_check, BandStorage, BlackBox, BlackBoxError};
use crate::epsilon::{freivalds_reps, Epsilon};
use crate::field::Scalar;
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BandError {
    #[error("band width {k} is invalid for size {n} (need k < n)")]
    InvalidK { k: usize, n: usize },
    #[error("malformed band certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    BlackBox(#[from] BlackBoxError),
}

/// A claimed band matrix: row `i` of `rows` holds `a[i][i-k..=i+k]`, with
/// zeros at positions outside the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandCertificate {
    pub n: usize,
    pub k: usize,
    pub rows: Matrix,
}

impl BandCertificate {
    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for d in 0..self.rows.cols() {
                let j = i as isize + d as isize - self.k as isize;
                if j >= 0 && (j as usize) < self.n {
                    m.set(i, j as usize, self.rows.get(i, d));
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BandDecision {
    Band(BandCertificate),
    NotBand,
}

/// Probe vectors `alpha_{K,1}, ..., alpha_{K,K}` for `K = 2k + 1 <= n`.
pub fn probe_vectors(n: usize, k: usize) -> Vec<Vec<Scalar>> {
    let w = 2 * k + 1;
    (0..w).map(|i| (0..n).map(|j| Scalar::from(j % w == i)).collect()).collect()
}

/// Decides whether `A` has band width at most `k`.
///
/// Uses exactly `2k + 1 + reps` applications, `reps = ceil(log_q(1/eps))`.
/// A band matrix is always accepted with a correct certificate; a non-band
/// matrix is accepted with probability at most `eps`. When `2k + 1 > n`
/// the `n` columns are read directly and the decision is exact.
pub fn detect_band<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<BandDecision, BandError> {
    let n = bb.dim();
    if k >= n {
        return Err(BandError::InvalidK { k, n });
    }
    let f = bb.field();
    let w = 2 * k + 1;
    let mut rows = Matrix::zeros(n, w);
    if w > n {
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let col = bb.apply_unchecked(&e);
            for (i, &x) in col.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if i.abs_diff(j) > k {
                    return Ok(BandDecision::NotBand);
                }
                rows.set(i, j + k - i, x);
            }
        }
        return Ok(BandDecision::Band(BandCertificate { n, k, rows }));
    }
    let mut not_band = false;
    for (c, probe) in probe_vectors(n, k).iter().enumerate() {
        let y = bb.apply_unchecked(probe);
        let mut covered = vec![false; n];
        for j in (c..n).step_by(w) {
            for i in j.saturating_sub(k)..(j + k + 1).min(n) {
                covered[i] = true;
                rows.set(i, j + k - i, y[i]);
            }
        }
        if y.iter().zip(&covered).any(|(&x, &cov)| x != 0 && !cov) {
            not_band = true;
        }
    }
    if not_band {
        return Ok(BandDecision::NotBand);
    }
    let cert = BandCertificate { n, k, rows };
    let candidate = BlackBox::new(BandStorage::new(f, n, k, cert.rows.clone())?);
    let reps = freivalds_reps(f.order(), eps);
    if freivalds_check(bb, &candidate, reps, rng)? {
        Ok(BandDecision::Band(cert))
    } else {
        Ok(BandDecision::NotBand)
    }
}

/// Checks a band certificate against `A` with a Freivalds test; a false
/// certificate passes with probability at most `eps`. Work: `reps`
/// applications of `A` and `O(nk)` operations per repetition.
pub fn verify_band<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    cert: &BandCertificate,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<bool, BandError> {
    let n = bb.dim();
    if cert.n != n || cert.rows.rows() != n || cert.rows.cols() != 2 * cert.k + 1 {
        return Err(BandError::MalformedCertificate(format!(
            "expected {n} rows of {} entries, got {}x{}",
            2 * cert.k + 1,
            cert.rows.rows(),
            cert.rows.cols()
        )));
    }
    let f = bb.field();
    let candidate = BandStorage::new(f, n, cert.k, cert.rows.clone())
        .map_err(|_| BandError::MalformedCertificate("entries outside the field".into()))?;
    let candidate = BlackBox::new(candidate);
    let reps = freivalds_reps(f.order(), eps);
    Ok(freivalds_check(bb, &candidate, reps, rng)?)
}
