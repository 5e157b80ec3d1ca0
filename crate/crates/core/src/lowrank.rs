//! Rank detection through a growing nonsingular submatrix, the resulting
//! decomposition `A = P [I; L] C [I R] Q`, and its verification.

use rand::Rng;
use thiserror::Error;

use crate::blackbox::{freivalds_check, BlackBox, BlackBoxError, LinearMap};
use crate::epsilon::{ceil_log, freivalds_reps, int, inverse, Epsilon};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LowRankError {
    #[error("extension is singular (beta = 0)")]
    SingularExtension,
    #[error("malformed rank certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    BlackBox(#[from] BlackBoxError),
}

/// Decomposition `A = P [I_r; L] C [I_r R] Q` of a matrix of rank `r`.
///
/// Permutations are stored as index vectors: entry `i` is the column of the
/// nonzero entry in row `i`, so `(Q v)[i] = v[q[i]]`. The first `r` entries
/// of `q` are `col_idx`, and `p[row_idx[h]] = h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub n: usize,
    pub rank: usize,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub c: Matrix,
    pub cinv: Matrix,
    pub l: Matrix,
    pub r: Matrix,
    pub row_idx: Vec<usize>,
    pub col_idx: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankDecision {
    Rank(RankCertificate),
    ExceedsK,
}

/// Rows `row_idx` and columns `col_idx` of a nonsingular `l x l` submatrix,
/// its inverse, and the columns `col_idx` of `A`.
#[derive(Clone, Debug)]
pub struct BasisState {
    pub row_idx: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub cinv: Matrix,
    pub columns: Vec<Vec<Scalar>>,
}

impl BasisState {
    pub fn empty() -> BasisState {
        BasisState { row_idx: Vec::new(), col_idx: Vec::new(), cinv: Matrix::zeros(0, 0), columns: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.col_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.col_idx.is_empty()
    }

    /// `v - A w`, where `A w` is the combination of the basis columns that
    /// agrees with `v` on the basis rows. Zero iff `v` lies in their span.
    fn residual(&self, f: &Field, v: &[Scalar]) -> Vec<Scalar> {
        let y: Vec<Scalar> = self.row_idx.iter().map(|&i| v[i]).collect();
        let z = self.cinv.mul_vec(f, &y);
        let mut u = v.to_vec();
        for (col, &zh) in self.columns.iter().zip(&z) {
            if zh != 0 {
                f.axpy(&mut u, f.neg(zh), col);
            }
        }
        u
    }
}

/// A column outside the span of the current basis columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentColumn {
    pub index: usize,
    pub column: Vec<Scalar>,
    pub residual: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Located {
    Column(IndependentColumn),
    InSpan,
}

/// One random probe: picks `x`, and if `A x` leaves the span of the basis
/// columns, halves the support of `x` until a single column remains.
pub fn locate_independent_column<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    state: &BasisState,
    rng: &mut R,
) -> Result<Located, LowRankError> {
    let n = bb.dim();
    let f = bb.field();
    let mut x = f.random_vec(n, rng);
    let mut v = bb.apply_unchecked(&x);
    let mut u = state.residual(f, &v);
    if u.iter().all(|&e| e == 0) {
        return Ok(Located::InSpan);
    }
    let mut support: Vec<usize> = (0..n).filter(|&j| x[j] != 0).collect();
    while support.len() > 1 {
        let (lower, upper) = support.split_at(support.len().div_ceil(2));
        let mut x1 = vec![0; n];
        for &j in lower {
            x1[j] = x[j];
        }
        let v1 = bb.apply_unchecked(&x1);
        let u1 = state.residual(f, &v1);
        if u1.iter().any(|&e| e != 0) {
            x = x1;
            v = v1;
            u = u1;
            support = lower.to_vec();
        } else {
            for &j in lower {
                x[j] = 0;
            }
            v = f.sub_vec(&v, &v1);
            support = upper.to_vec();
        }
    }
    let j = support[0];
    let column = f.scale_vec(f.inv(x[j]).expect("support entry is nonzero"), &v);
    let residual = f.scale_vec(f.inv(x[j]).expect("support entry is nonzero"), &u);
    Ok(Located::Column(IndependentColumn { index: j, column, residual }))
}

/// Inverse of `[[C, s], [t, alpha]]` from `C^-1` in `O(l^2)` operations.
pub fn extend_inverse(
    f: &Field,
    cinv: &Matrix,
    s: &[Scalar],
    t: &[Scalar],
    alpha: Scalar,
) -> Result<Matrix, LowRankError> {
    let l = cinv.rows();
    let cs = cinv.mul_vec(f, s);
    let tc = cinv.tr_mul_vec(f, t);
    let beta = f.sub(alpha, f.dot(t, &cs));
    let binv = f.inv(beta).map_err(|_| LowRankError::SingularExtension)?;
    let g = f.scale_vec(binv, &tc);
    let mut out = Matrix::zeros(l + 1, l + 1);
    for i in 0..l {
        for j in 0..l {
            out.set(i, j, f.mul_add(cinv.get(i, j), cs[i], g[j]));
        }
        out.set(i, l, f.neg(f.mul(cs[i], binv)));
        out.set(l, i, f.neg(g[i]));
    }
    out.set(l, l, binv);
    Ok(out)
}

/// Index vector of a permutation whose first entries are `lead`, together
/// with the index vector of its transpose.
fn permutation_with_prefix(n: usize, lead: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut arr: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    for (h, &j) in lead.iter().enumerate() {
        let at = pos[j];
        let displaced = arr[h];
        arr.swap(h, at);
        pos[j] = h;
        pos[displaced] = at;
    }
    (arr, pos)
}

/// Number of probes that must all land in the span before the current
/// basis is accepted as complete.
pub fn in_span_reps(q: u64, k: usize, eps: &Epsilon) -> u32 {
    ceil_log(&int(q), &(int(k as u64 + 1) * inverse(eps))).max(1)
}

/// Decides whether `rank(A) <= k`, returning the decomposition if so.
///
/// The reported rank is never larger than the true rank; it is too small
/// with probability at most `eps`.
pub fn detect_low_rank<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<RankDecision, LowRankError> {
    let f = bb.field();
    let n = bb.dim();
    let reps = in_span_reps(f.order(), k, eps);
    let mut state = BasisState::empty();
    'grow: loop {
        for _ in 0..reps {
            let found = match locate_independent_column(bb, &state, rng)? {
                Located::InSpan => continue,
                Located::Column(c) => c,
            };
            if state.len() == k {
                return Ok(RankDecision::ExceedsK);
            }
            let i = found.residual.iter().position(|&e| e != 0).expect("residual is nonzero");
            let s: Vec<Scalar> = state.row_idx.iter().map(|&r| found.column[r]).collect();
            let t: Vec<Scalar> = state.columns.iter().map(|c| c[i]).collect();
            state.cinv = extend_inverse(f, &state.cinv, &s, &t, found.column[i])?;
            state.row_idx.push(i);
            state.col_idx.push(found.index);
            state.columns.push(found.column);
            continue 'grow;
        }
        break;
    }
    let r = state.len();
    let (q, _) = permutation_with_prefix(n, &state.col_idx);
    let (pt, p) = permutation_with_prefix(n, &state.row_idx);
    let mut c = Matrix::zeros(r, r);
    for (h, col) in state.columns.iter().enumerate() {
        for (g, &i) in state.row_idx.iter().enumerate() {
            c.set(g, h, col[i]);
        }
    }
    // Rows i_1..i_r of A, by transpose applications.
    let rows: Vec<Vec<Scalar>> = state
        .row_idx
        .iter()
        .map(|&i| {
            let mut e = vec![0; n];
            e[i] = 1;
            bb.apply_transpose_unchecked(&e)
        })
        .collect();
    // [I; L] = P^T A_L C^-1: row h >= r is row pt[h] of A_L times C^-1.
    let mut l = Matrix::zeros(n - r, r);
    for h in r..n {
        let a_row: Vec<Scalar> = state.columns.iter().map(|col| col[pt[h]]).collect();
        let out = state.cinv.tr_mul_vec(f, &a_row);
        for (g, &x) in out.iter().enumerate() {
            l.set(h - r, g, x);
        }
    }
    // [I R] = C^-1 A_R Q^T: column h >= r is C^-1 times column q[h] of A_R.
    let mut rm = Matrix::zeros(r, n - r);
    for h in r..n {
        let a_col: Vec<Scalar> = rows.iter().map(|row| row[q[h]]).collect();
        let out = state.cinv.mul_vec(f, &a_col);
        for (g, &x) in out.iter().enumerate() {
            rm.set(g, h - r, x);
        }
    }
    Ok(RankDecision::Rank(RankCertificate {
        n,
        rank: r,
        p,
        q,
        c,
        cinv: state.cinv,
        l,
        r: rm,
        row_idx: state.row_idx,
        col_idx: state.col_idx,
    }))
}

fn is_permutation(v: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    v.len() == n && v.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

impl RankCertificate {
    /// Structural checks: shapes, permutations, index consistency and
    /// `C C^-1 = I`. Costs `O(r^3)` field operations.
    pub fn check(&self, f: &Field) -> Result<(), LowRankError> {
        let (n, r) = (self.n, self.rank);
        let bad = |m: &str| Err(LowRankError::MalformedCertificate(m.to_string()));
        if r > n {
            return bad("rank exceeds size");
        }
        if !is_permutation(&self.p, n) || !is_permutation(&self.q, n) {
            return bad("invalid permutation");
        }
        let shapes = [(&self.c, r, r), (&self.cinv, r, r), (&self.l, n - r, r), (&self.r, r, n - r)];
        if shapes.iter().any(|(m, a, b)| m.rows() != *a || m.cols() != *b) {
            return bad("factor shape");
        }
        if self.row_idx.len() != r || self.col_idx.len() != r {
            return bad("index vectors");
        }
        if (0..r).any(|h| self.q[h] != self.col_idx[h] || self.row_idx[h] >= n || self.p[self.row_idx[h]] != h) {
            return bad("indices disagree with permutations");
        }
        let all = [&self.c, &self.cinv, &self.l, &self.r];
        if all.iter().any(|m| m.data().iter().any(|&x| !f.contains(x))) {
            return bad("entries outside the field");
        }
        if self.c.mul(f, &self.cinv) != Matrix::identity(r) {
            return bad("C times Cinv is not the identity");
        }
        Ok(())
    }

    /// Dense `P [I; L] C [I R] Q`.
    pub fn to_dense(&self, f: &Field) -> Matrix {
        let rec = Recomposition { field: f.unmetered(), cert: self.clone() };
        let cols: Vec<Vec<Scalar>> = (0..self.n)
            .map(|j| {
                let mut e = vec![0; self.n];
                e[j] = 1;
                rec.apply(&e)
            })
            .collect();
        Matrix::from_cols(&cols, self.n)
    }
}

/// Black box for the recomposed product, `O(n r)` operations per application.
pub struct Recomposition {
    field: Field,
    cert: RankCertificate,
}

impl Recomposition {
    pub fn new(field: &Field, cert: RankCertificate) -> Result<Recomposition, LowRankError> {
        cert.check(field)?;
        Ok(Recomposition { field: field.clone(), cert })
    }
}

impl LinearMap for Recomposition {
    fn dim(&self) -> usize {
        self.cert.n
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let (f, c) = (&self.field, &self.cert);
        let r = c.rank;
        let w: Vec<Scalar> = c.q.iter().map(|&j| v[j]).collect();
        let y = f.add_vec(&w[..r], &c.r.mul_vec(f, &w[r..]));
        let y = c.c.mul_vec(f, &y);
        let mut z = y.clone();
        z.extend(c.l.mul_vec(f, &y));
        c.p.iter().map(|&i| z[i]).collect()
    }

    fn apply_transpose(&self, v: &[Scalar]) -> Vec<Scalar> {
        let (f, c) = (&self.field, &self.cert);
        let r = c.rank;
        let mut w = vec![0; c.n];
        for (i, &pi) in c.p.iter().enumerate() {
            w[pi] = v[i];
        }
        let y = f.add_vec(&w[..r], &c.l.tr_mul_vec(f, &w[r..]));
        let y = c.c.tr_mul_vec(f, &y);
        let mut z = y.clone();
        z.extend(c.r.tr_mul_vec(f, &y));
        let mut out = vec![0; c.n];
        for (i, &qi) in c.q.iter().enumerate() {
            out[qi] = z[i];
        }
        out
    }

    fn cost(&self) -> u64 {
        let (n, r) = (self.cert.n as u64, self.cert.rank as u64);
        2 * (n * r + r * r)
    }
}

/// Checks the certificate structurally, then compares `A` with the
/// recomposition by a Freivalds test. A correct certificate is always
/// accepted; a false one with probability at most `eps`.
pub fn verify_low_rank<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    cert: &RankCertificate,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<bool, LowRankError> {
    if cert.n != bb.dim() {
        return Err(LowRankError::MalformedCertificate(format!("size {} for a {}x{} matrix", cert.n, bb.dim(), bb.dim())));
    }
    let f = bb.field();
    let rec = BlackBox::new(Recomposition::new(f, cert.clone())?);
    let reps = freivalds_reps(f.order(), eps);
    Ok(freivalds_check(bb, &rec, reps, rng)?)
}
