//! Interactive certification of the number of nontrivial nilpotent blocks
//! and nontrivial invariant factors of a black-box matrix.

pub mod cheaters;
pub mod detect;
pub mod params;
pub mod protocols;
pub mod transcript;

use thiserror::Error;

use crate::blackbox::BlackBoxError;
use crate::krylov::KrylovError;

pub use detect::{
    detect_invariant, detect_nilpotent, InvariantDecision, InvariantWitness, NilpotentDecision, NilpotentWitness,
    Preconditioner,
};
pub use params::{schedule_params, ProtocolKind, ProtocolParams};
pub use protocols::{
    certify_sequence_minpoly, run_few_invariant, run_few_nilpotent, run_many_invariant, run_many_nilpotent, run_protocol,
    run_with, verifier_for, Protocol, Prover, Verifier,
};
pub use transcript::{role_rng, CostMeters, Item, Message, MsgKind, Role, Transcript};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("protocol aborted: {0}")]
    ProtocolAbort(String),
    #[error("prover cannot continue: {0}")]
    ProverStuck(String),
    #[error(transparent)]
    BlackBox(#[from] BlackBoxError),
    #[error(transparent)]
    Krylov(#[from] KrylovError),
}
