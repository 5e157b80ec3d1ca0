//! Black-box matrices: square linear maps accessed only through
//! matrix-vector products, with per-instance application counters.

mod backends;
mod wrappers;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, OpCounter, Scalar};

pub use backends::{BandStorage, DenseMatrix, ShiftedCirculant, SparseTriples};
pub use wrappers::{add_low_rank, operator_matrix, DisplacementKind, OperatorMatrix, PlusLowRank};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlackBoxError {
    #[error("vector of length {got} applied to a black box of size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live over different fields or hold foreign scalars")]
    FieldMismatch,
    #[error("index ({row}, {col}) out of range for size {n}")]
    InvalidIndex { row: usize, col: usize, n: usize },
    #[error("low-rank factors have shapes {v_rows}x{v_cols} and {u_rows}x{u_cols}, expected n x k and k x n")]
    FactorShape { v_rows: usize, v_cols: usize, u_rows: usize, u_cols: usize },
}

/// A concrete square linear map. Implementations do no validation; the
/// [`BlackBox`] wrapper checks inputs and counts calls.
pub trait LinearMap: Send + Sync {
    fn dim(&self) -> usize;
    fn field(&self) -> &Field;
    fn apply(&self, v: &[Scalar]) -> Vec<Scalar>;
    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar>;
    /// Field operations per application (the cost `mu`).
    fn cost(&self) -> u64;
}

/// Counting handle around a [`LinearMap`].
///
/// Several handles may share one map (see [`BlackBox::handle`]); each keeps
/// its own counters. Arithmetic done by algorithms on behalf of a handle
/// uses [`BlackBox::field`], which may be metered.
pub struct BlackBox<'a> {
    op: Arc<dyn LinearMap + 'a>,
    field: Field,
    applies: AtomicU64,
    transposes: AtomicU64,
}

impl fmt::Debug for BlackBox<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBox")
            .field("n", &self.dim())
            .field("field", &self.field)
            .field("applies", &self.applications())
            .field("transposes", &self.transpose_applications())
            .finish()
    }
}

impl<'a> BlackBox<'a> {
    pub fn new<M: LinearMap + 'a>(op: M) -> BlackBox<'a> {
        let field = op.field().clone();
        BlackBox { op: Arc::new(op), field, applies: AtomicU64::new(0), transposes: AtomicU64::new(0) }
    }

    /// A new handle on the same map with fresh counters.
    pub fn handle(&self) -> BlackBox<'a> {
        BlackBox {
            op: self.op.clone(),
            field: self.field.clone(),
            applies: AtomicU64::new(0),
            transposes: AtomicU64::new(0),
        }
    }

    /// A new handle whose field tallies operations on `counter`.
    pub fn metered(&self, counter: &OpCounter) -> BlackBox<'a> {
        let mut h = self.handle();
        h.field = self.field.metered(counter);
        h
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Field operations per application.
    pub fn mu(&self) -> u64 {
        self.op.cost()
    }

    pub fn applications(&self) -> u64 {
        self.applies.load(Ordering::Relaxed)
    }

    pub fn transpose_applications(&self) -> u64 {
        self.transposes.load(Ordering::Relaxed)
    }

    pub fn total_applications(&self) -> u64 {
        self.applications() + self.transpose_applications()
    }

    pub fn reset_counters(&self) {
        self.applies.store(0, Ordering::Relaxed);
        self.transposes.store(0, Ordering::Relaxed);
    }

    fn validate(&self, v: &[Scalar]) -> Result<(), BlackBoxError> {
        if v.len() != self.dim() {
            return Err(BlackBoxError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        if v.iter().any(|&x| !self.field.contains(x)) {
            return Err(BlackBoxError::FieldMismatch);
        }
        Ok(())
    }

    /// `A v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, BlackBoxError> {
        self.validate(v)?;
        Ok(self.apply_unchecked(v))
    }

    /// `A^T v`.
    pub fn apply_transpose(&self, v: &[Scalar]) -> Result<Vec<Scalar>, BlackBoxError> {
        self.validate(v)?;
        Ok(self.apply_transpose_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.applies.fetch_add(1, Ordering::Relaxed);
        self.op.apply(v)
    }

    pub(crate) fn apply_transpose_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.transposes.fetch_add(1, Ordering::Relaxed);
        self.op.apply_transpose(v)
    }

    /// Materializes the matrix with `n` applications to unit vectors.
    pub fn to_dense(&self) -> crate::matrix::Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.apply_unchecked(&e)
            })
            .collect();
        crate::matrix::Matrix::from_cols(&cols, n)
    }
}

/// Randomized equality test of two black boxes over the same field: `reps`
/// products with uniformly random vectors over the whole field. Equal
/// matrices always pass; unequal ones pass with probability at most
/// `q^-reps`.
pub fn freivalds_check<R: Rng + ?Sized>(
    a: &BlackBox<'_>,
    b: &BlackBox<'_>,
    reps: u32,
    rng: &mut R,
) -> Result<bool, BlackBoxError> {
    if a.field() != b.field() {
        return Err(BlackBoxError::FieldMismatch);
    }
    if a.dim() != b.dim() {
        return Err(BlackBoxError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    for _ in 0..reps {
        let x = a.field().random_vec(a.dim(), rng);
        if a.apply_unchecked(&x) != b.apply_unchecked(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}
