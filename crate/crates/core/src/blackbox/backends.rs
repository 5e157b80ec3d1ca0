//! Storage backends: dense, sparse triples, band storage and shifted circulants.

use super::{BlackBoxError, LinearMap};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

fn check_entries(field: &Field, entries: &[Scalar]) -> Result<(), BlackBoxError> {
    if entries.iter().all(|&x| field.contains(x)) {
        Ok(())
    } else {
        Err(BlackBoxError::FieldMismatch)
    }
}

/// Dense `n x n` matrix.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    field: Field,
    m: Matrix,
}

impl DenseMatrix {
    pub fn new(field: &Field, m: Matrix) -> Result<DenseMatrix, BlackBoxError> {
        if m.rows() != m.cols() {
            return Err(BlackBoxError::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        check_entries(field, m.data())?;
        Ok(DenseMatrix { field: field.clone(), m })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }
}

impl LinearMap for DenseMatrix {
    fn dim(&self) -> usize {
        self.m.rows()
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.m.mul_vec(&self.field, v)
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.m.tr_mul_vec(&self.field, v)
    }

    fn cost(&self) -> u64 {
        let n = self.dim() as u64;
        n * (2 * n).saturating_sub(1)
    }
}

/// Sparse matrix as `(row, col, value)` triples, 0-based. Repeated
/// positions are summed.
#[derive(Clone, Debug)]
pub struct SparseTriples {
    field: Field,
    n: usize,
    triples: Vec<(usize, usize, Scalar)>,
}

impl SparseTriples {
    pub fn new(field: &Field, n: usize, triples: Vec<(usize, usize, Scalar)>) -> Result<SparseTriples, BlackBoxError> {
        for &(row, col, x) in &triples {
            if row >= n || col >= n {
                return Err(BlackBoxError::InvalidIndex { row, col, n });
            }
            if !field.contains(x) {
                return Err(BlackBoxError::FieldMismatch);
            }
        }
        Ok(SparseTriples { field: field.clone(), n, triples })
    }

    pub fn triples(&self) -> &[(usize, usize, Scalar)] {
        &self.triples
    }
}

impl LinearMap for SparseTriples {
    fn dim(&self) -> usize {
        self.n
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![0; self.n];
        for &(i, j, x) in &self.triples {
            out[i] = self.field.mul_add(out[i], x, v[j]);
        }
        out
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![0; self.n];
        for &(i, j, x) in &self.triples {
            out[j] = self.field.mul_add(out[j], x, v[i]);
        }
        out
    }

    fn cost(&self) -> u64 {
        2 * self.triples.len() as u64
    }
}

/// Band matrix of width `k` stored as an `n x (2k+1)` array whose row `i`
/// holds `a[i][i-k..=i+k]`; positions outside the matrix are zero.
///
/// Products run over the whole padded array, so every application costs
/// exactly `n (4k + 1)` field operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandStorage {
    field: Field,
    n: usize,
    k: usize,
    rows: Matrix,
}

impl BandStorage {
    pub fn new(field: &Field, n: usize, k: usize, rows: Matrix) -> Result<BandStorage, BlackBoxError> {
        if rows.rows() != n || rows.cols() != 2 * k + 1 {
            return Err(BlackBoxError::DimensionMismatch { expected: n, got: rows.rows() });
        }
        check_entries(field, rows.data())?;
        let mut rows = rows;
        // Normalize padding outside the matrix to zero.
        for i in 0..n {
            for d in 0..=2 * k {
                let j = i as isize + d as isize - k as isize;
                if j < 0 || j >= n as isize {
                    rows.set(i, d, 0);
                }
            }
        }
        Ok(BandStorage { field: field.clone(), n, k, rows })
    }

    /// Extracts the band of width `k` from a dense matrix, dropping anything outside it.
    pub fn from_dense(field: &Field, m: &Matrix, k: usize) -> Result<BandStorage, BlackBoxError> {
        let n = m.rows();
        let mut rows = Matrix::zeros(n, 2 * k + 1);
        for i in 0..n {
            for d in 0..=2 * k {
                let j = i as isize + d as isize - k as isize;
                if j >= 0 && (j as usize) < n {
                    rows.set(i, d, m.get(i, j as usize));
                }
            }
        }
        BandStorage::new(field, n, k, rows)
    }

    pub fn bandwidth(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Entry `a[i][j]` (0-based).
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        let d = j as isize - i as isize + self.k as isize;
        if d < 0 || d > 2 * self.k as isize {
            0
        } else {
            self.rows.get(i, d as usize)
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.k)..(i + self.k + 1).min(self.n) {
                m.set(i, j, self.entry(i, j));
            }
        }
        m
    }
}

impl LinearMap for BandStorage {
    fn dim(&self) -> usize {
        self.n
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let w = 2 * self.k + 1;
        let mut padded = vec![0; self.n + 2 * self.k];
        padded[self.k..self.k + self.n].copy_from_slice(v);
        (0..self.n).map(|i| self.field.dot(self.rows.row(i), &padded[i..i + w])).collect()
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut padded = vec![0; self.n + 2 * self.k];
        for (i, &vi) in v.iter().enumerate() {
            self.field.axpy(&mut padded[i..i + 2 * self.k + 1], vi, self.rows.row(i));
        }
        padded[self.k..self.k + self.n].to_vec()
    }

    fn cost(&self) -> u64 {
        (self.n * (4 * self.k + 1)) as u64
    }
}

/// The shifted circulant `Z_alpha`: ones on the subdiagonal and `alpha` in
/// the top-right corner.
#[derive(Clone, Debug)]
pub struct ShiftedCirculant {
    field: Field,
    n: usize,
    alpha: Scalar,
}

impl ShiftedCirculant {
    pub fn new(field: &Field, n: usize, alpha: Scalar) -> ShiftedCirculant {
        ShiftedCirculant { field: field.clone(), n, alpha }
    }

    /// `Z_alpha v` computed with the given field handle.
    pub(crate) fn shift(field: &Field, alpha: Scalar, v: &[Scalar]) -> Vec<Scalar> {
        let n = v.len();
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(n);
        out.push(if alpha == 0 { 0 } else { field.mul(alpha, v[n - 1]) });
        out.extend_from_slice(&v[..n - 1]);
        out
    }

    /// `Z_alpha^T v` computed with the given field handle.
    pub(crate) fn shift_transpose(field: &Field, alpha: Scalar, v: &[Scalar]) -> Vec<Scalar> {
        let n = v.len();
        if n == 0 {
            return Vec::new();
        }
        let mut out = v[1..].to_vec();
        out.push(if alpha == 0 { 0 } else { field.mul(alpha, v[0]) });
        out
    }
}

impl LinearMap for ShiftedCirculant {
    fn dim(&self) -> usize {
        self.n
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        ShiftedCirculant::shift(&self.field, self.alpha, v)
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        ShiftedCirculant::shift_transpose(&self.field, self.alpha, v)
    }

    fn cost(&self) -> u64 {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn band_matches_dense() {
        let f = Field::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, k) in [(1, 0), (5, 1), (6, 2), (4, 3), (3, 5)] {
            let rows = Matrix::random(&f, n, 2 * k + 1, &mut rng);
            let band = BandStorage::new(&f, n, k, rows).unwrap();
            let dense = band.to_dense();
            let v = f.random_vec(n, &mut rng);
            assert_eq!(band.apply(&v), dense.mul_vec(&f, &v));
            assert_eq!(band.apply_transpose(&v), dense.tr_mul_vec(&f, &v));
            assert_eq!(BandStorage::from_dense(&f, &dense, k).unwrap(), band);
        }
    }

    #[test]
    fn sparse_matches_dense_and_rejects_bad_index() {
        let f = Field::prime(5).unwrap();
        let s = SparseTriples::new(&f, 3, vec![(0, 2, 4), (2, 0, 1), (1, 1, 3), (1, 1, 3)]).unwrap();
        let d = Matrix::from_rows(&[vec![0, 0, 4], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(s.apply(&[1, 2, 3]), d.mul_vec(&f, &[1, 2, 3]));
        assert_eq!(s.apply_transpose(&[1, 2, 3]), d.tr_mul_vec(&f, &[1, 2, 3]));
        assert_eq!(
            SparseTriples::new(&f, 3, vec![(3, 0, 1)]).unwrap_err(),
            BlackBoxError::InvalidIndex { row: 3, col: 0, n: 3 }
        );
    }
}
