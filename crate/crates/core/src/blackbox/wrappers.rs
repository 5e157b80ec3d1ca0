//! Black boxes built on top of another black box: low-rank updates and
//! displacement operators.

use std::fmt;
use std::str::FromStr;

use super::backends::ShiftedCirculant;
use super::{BlackBox, BlackBoxError, LinearMap};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// `A + V U` with `V` of shape `n x k` and `U` of shape `k x n`.
///
/// Each application applies the base once; the update costs `O(nk)`
/// operations in the field of the base handle.
pub struct PlusLowRank<'a> {
    base: Base<'a>,
    field: Field,
    v: Matrix,
    u: Matrix,
}

enum Base<'a> {
    Borrowed(&'a BlackBox<'a>),
    Owned(BlackBox<'a>),
}

impl<'a> std::ops::Deref for Base<'a> {
    type Target = BlackBox<'a>;

    fn deref(&self) -> &BlackBox<'a> {
        match self {
            Base::Borrowed(b) => b,
            Base::Owned(b) => b,
        }
    }
}

impl<'a> PlusLowRank<'a> {
    pub fn new(base: &'a BlackBox<'a>, v: Matrix, u: Matrix) -> Result<PlusLowRank<'a>, BlackBoxError> {
        PlusLowRank::build(Base::Borrowed(base), v, u)
    }

    /// As [`PlusLowRank::new`], taking ownership of the base.
    pub fn owned(base: BlackBox<'a>, v: Matrix, u: Matrix) -> Result<PlusLowRank<'a>, BlackBoxError> {
        PlusLowRank::build(Base::Owned(base), v, u)
    }

    fn build(base: Base<'a>, v: Matrix, u: Matrix) -> Result<PlusLowRank<'a>, BlackBoxError> {
        let n = base.dim();
        if v.rows() != n || u.cols() != n || v.cols() != u.rows() {
            return Err(BlackBoxError::FactorShape {
                v_rows: v.rows(),
                v_cols: v.cols(),
                u_rows: u.rows(),
                u_cols: u.cols(),
            });
        }
        let field = base.field().clone();
        if !v.data().iter().chain(u.data()).all(|&x| field.contains(x)) {
            return Err(BlackBoxError::FieldMismatch);
        }
        Ok(PlusLowRank { base, field, v, u })
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn base(&self) -> &BlackBox<'a> {
        &self.base
    }
}

impl LinearMap for PlusLowRank<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let ax = self.base.apply_unchecked(x);
        if self.u.rows() == 0 {
            return ax;
        }
        let ux = self.u.mul_vec(&self.field, x);
        let vux = self.v.mul_vec(&self.field, &ux);
        self.field.add_vec(&ax, &vux)
    }

    fn apply_transpose(&self, x: &[Scalar]) -> Vec<Scalar> {
        let ax = self.base.apply_transpose_unchecked(x);
        if self.u.rows() == 0 {
            return ax;
        }
        let vx = self.v.tr_mul_vec(&self.field, x);
        let uvx = self.u.tr_mul_vec(&self.field, &vx);
        self.field.add_vec(&ax, &uvx)
    }

    fn cost(&self) -> u64 {
        let (n, k) = (self.dim() as u64, self.u.rows() as u64);
        self.base.mu() + 4 * n * k
    }
}

/// `A + V U` as a black box whose applications also count against `bb`.
pub fn add_low_rank<'a>(bb: &'a BlackBox<'_>, v: &Matrix, u: &Matrix) -> Result<BlackBox<'a>, BlackBoxError> {
    Ok(BlackBox::new(PlusLowRank::new(bb, v.clone(), u.clone())?))
}

/// The displacement operators for Toeplitz-like, Hankel-like and
/// Toeplitz+Hankel-like structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DisplacementKind {
    /// `Z_1 A - A Z_0`.
    Toeplitz,
    /// `Z_1 A - A Z_0^T`.
    Hankel,
    /// `(Z_0 + Z_0^T) A - A (Z_0 + Z_0^T)`.
    ToeplitzPlusHankel,
}

impl fmt::Display for DisplacementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisplacementKind::Toeplitz => "T",
            DisplacementKind::Hankel => "H",
            DisplacementKind::ToeplitzPlusHankel => "TH",
        })
    }
}

impl FromStr for DisplacementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" | "toeplitz" => Ok(DisplacementKind::Toeplitz),
            "H" | "hankel" => Ok(DisplacementKind::Hankel),
            "TH" | "toeplitz-hankel" => Ok(DisplacementKind::ToeplitzPlusHankel),
            _ => Err(format!("unknown displacement kind {s:?} (expected T, H or TH)")),
        }
    }
}

/// Black box for the displacement `phi(A)`; every application applies the
/// base exactly twice.
pub struct OperatorMatrix<'a> {
    base: &'a BlackBox<'a>,
    field: Field,
    kind: DisplacementKind,
}

impl OperatorMatrix<'_> {
    pub fn kind(&self) -> DisplacementKind {
        self.kind
    }

    fn sym_shift(&self, v: &[Scalar]) -> Vec<Scalar> {
        let a = ShiftedCirculant::shift(&self.field, 0, v);
        let b = ShiftedCirculant::shift_transpose(&self.field, 0, v);
        self.field.add_vec(&a, &b)
    }
}

impl LinearMap for OperatorMatrix<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        match self.kind {
            DisplacementKind::Toeplitz => {
                let left = ShiftedCirculant::shift(f, 1, &self.base.apply_unchecked(v));
                let right = self.base.apply_unchecked(&ShiftedCirculant::shift(f, 0, v));
                f.sub_vec(&left, &right)
            }
            DisplacementKind::Hankel => {
                let left = ShiftedCirculant::shift(f, 1, &self.base.apply_unchecked(v));
                let right = self.base.apply_unchecked(&ShiftedCirculant::shift_transpose(f, 0, v));
                f.sub_vec(&left, &right)
            }
            DisplacementKind::ToeplitzPlusHankel => {
                let left = self.sym_shift(&self.base.apply_unchecked(v));
                let right = self.base.apply_unchecked(&self.sym_shift(v));
                f.sub_vec(&left, &right)
            }
        }
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        match self.kind {
            // (Z1 A - A Z0)^T = A^T Z1^T - Z0^T A^T
            DisplacementKind::Toeplitz => {
                let left = self.base.apply_transpose_unchecked(&ShiftedCirculant::shift_transpose(f, 1, v));
                let right = ShiftedCirculant::shift_transpose(f, 0, &self.base.apply_transpose_unchecked(v));
                f.sub_vec(&left, &right)
            }
            // (Z1 A - A Z0^T)^T = A^T Z1^T - Z0 A^T
            DisplacementKind::Hankel => {
                let left = self.base.apply_transpose_unchecked(&ShiftedCirculant::shift_transpose(f, 1, v));
                let right = ShiftedCirculant::shift(f, 0, &self.base.apply_transpose_unchecked(v));
                f.sub_vec(&left, &right)
            }
            DisplacementKind::ToeplitzPlusHankel => {
                let left = self.base.apply_transpose_unchecked(&self.sym_shift(v));
                let right = self.sym_shift(&self.base.apply_transpose_unchecked(v));
                f.sub_vec(&left, &right)
            }
        }
    }

    fn cost(&self) -> u64 {
        2 * self.base.mu() + 3 * self.dim() as u64
    }
}

/// The displacement `phi(A)` of the given kind as a black box.
pub fn operator_matrix<'a>(bb: &'a BlackBox<'_>, kind: DisplacementKind) -> BlackBox<'a> {
    BlackBox::new(OperatorMatrix { base: bb, field: bb.field().clone(), kind })
}
