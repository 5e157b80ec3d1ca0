//! Toeplitz-like, Hankel-like and Toeplitz+Hankel-like structure, detected
//! and verified as low rank of the displacement `phi(A)`.

use rand::Rng;

use crate::blackbox::{operator_matrix, BlackBox, DisplacementKind};
use crate::epsilon::Epsilon;
use crate::lowrank::{detect_low_rank, verify_low_rank, LowRankError, RankCertificate, RankDecision};

/// Rank decomposition of `phi_kind(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementCertificate {
    pub kind: DisplacementKind,
    pub inner: RankCertificate,
}

impl DisplacementCertificate {
    pub fn displacement_rank(&self) -> usize {
        self.inner.rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisplacementDecision {
    Structured(DisplacementCertificate),
    NotStructured,
}

/// Decides whether `phi_kind(A)` has rank at most `k`. Each probe of the
/// operator costs two applications of `A`.
pub fn detect_displacement<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    kind: DisplacementKind,
    k: usize,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<DisplacementDecision, LowRankError> {
    let op = operator_matrix(bb, kind);
    Ok(match detect_low_rank(&op, k, eps, rng)? {
        RankDecision::Rank(inner) => DisplacementDecision::Structured(DisplacementCertificate { kind, inner }),
        RankDecision::ExceedsK => DisplacementDecision::NotStructured,
    })
}

pub fn verify_displacement<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    cert: &DisplacementCertificate,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<bool, LowRankError> {
    let op = operator_matrix(bb, cert.kind);
    verify_low_rank(&op, &cert.inner, eps, rng)
}
