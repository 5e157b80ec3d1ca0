//! Messages, transcripts, cost meters and per-role randomness.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CertifyError;
use crate::epsilon::Epsilon;
use crate::field::{Field, Poly, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Prover,
    Verifier,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Prover => 1,
            Role::Verifier => 2,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Prover => "prover",
            Role::Verifier => "verifier",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MsgKind {
    Commit,
    Challenge,
    Response,
    Verdict,
}

impl fmt::Display for MsgKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MsgKind::Commit => "commit",
            MsgKind::Challenge => "challenge",
            MsgKind::Response => "response",
            MsgKind::Verdict => "verdict",
        })
    }
}

/// One typed payload entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Word(String),
    Int(u64),
    Vector(Vec<Scalar>),
    Matrix(Matrix),
    Poly(Poly),
}

impl Item {
    /// Field elements carried by this item.
    pub fn field_elements(&self) -> u64 {
        match self {
            Item::Word(_) | Item::Int(_) => 0,
            Item::Vector(v) => v.len() as u64,
            Item::Matrix(m) => (m.rows() * m.cols()) as u64,
            Item::Poly(p) => p.coeffs().len() as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub round: u32,
    pub role: Role,
    pub kind: MsgKind,
    pub items: Vec<Item>,
}

impl Message {
    pub fn new(round: u32, role: Role, kind: MsgKind, items: Vec<Item>) -> Message {
        Message { round, role, kind, items }
    }

    pub fn field_elements(&self) -> u64 {
        self.items.iter().map(Item::field_elements).sum()
    }

    pub fn reader<'m>(&'m self, field: &'m Field, n: usize) -> Reader<'m> {
        Reader { items: &self.items, pos: 0, field, n }
    }
}

/// Typed, validating access to a message payload. Any mismatch is a
/// protocol abort.
pub struct Reader<'m> {
    items: &'m [Item],
    pos: usize,
    field: &'m Field,
    n: usize,
}

fn abort(what: impl Into<String>) -> CertifyError {
    CertifyError::ProtocolAbort(what.into())
}

impl Reader<'_> {
    fn next(&mut self, what: &str) -> Result<&Item, CertifyError> {
        let item = self.items.get(self.pos).ok_or_else(|| abort(format!("missing {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    pub fn word(&mut self) -> Result<&str, CertifyError> {
        match self.next("word")? {
            Item::Word(w) => Ok(w),
            other => Err(abort(format!("expected word, got {other:?}"))),
        }
    }

    pub fn int(&mut self) -> Result<u64, CertifyError> {
        match self.next("integer")? {
            Item::Int(x) => Ok(*x),
            other => Err(abort(format!("expected integer, got {other:?}"))),
        }
    }

    /// A vector of length `n` over the field.
    pub fn vector(&mut self) -> Result<Vec<Scalar>, CertifyError> {
        let (n, field) = (self.n, self.field);
        match self.next("vector")? {
            Item::Vector(v) if v.len() == n && v.iter().all(|&x| field.contains(x)) => Ok(v.clone()),
            other => Err(abort(format!("expected vector of length {n}, got {other:?}"))),
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Result<Matrix, CertifyError> {
        let field = self.field;
        match self.next("matrix")? {
            Item::Matrix(m) if m.rows() == rows && m.cols() == cols && m.data().iter().all(|&x| field.contains(x)) => {
                Ok(m.clone())
            }
            other => Err(abort(format!("expected {rows}x{cols} matrix, got {other:?}"))),
        }
    }

    pub fn poly(&mut self) -> Result<Poly, CertifyError> {
        let field = self.field;
        match self.next("polynomial")? {
            Item::Poly(p) if p.coeffs().iter().all(|&x| field.contains(x)) => Ok(p.clone()),
            other => Err(abort(format!("expected polynomial, got {other:?}"))),
        }
    }

    pub fn remaining(&self) -> usize {
        self.items.len() - self.pos
    }

    pub fn finish(&self) -> Result<(), CertifyError> {
        if self.remaining() == 0 {
            Ok(())
        } else {
            Err(abort(format!("{} unexpected trailing items", self.remaining())))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostMeters {
    pub prover_field_ops: u64,
    pub verifier_field_ops: u64,
    pub prover_apps: u64,
    pub verifier_apps: u64,
    pub comm_elems: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub seed: u64,
    pub eps: Epsilon,
    pub messages: Vec<Message>,
    pub costs: CostMeters,
    pub accepted: bool,
}

/// Generator for one role in one round, derived from the master seed.
pub fn role_rng(seed: u64, role: Role, round: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((role.tag() << 32) | round as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = role_rng(7, Role::Prover, 0).gen();
        let b: u64 = role_rng(7, Role::Verifier, 0).gen();
        let c: u64 = role_rng(7, Role::Prover, 2).gen();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, role_rng(7, Role::Prover, 0).gen::<u64>());
    }

    #[test]
    fn reader_validates() {
        let f = Field::prime(3).unwrap();
        let m = Message::new(0, Role::Prover, MsgKind::Commit, vec![Item::Vector(vec![1, 2]), Item::Word("x".into())]);
        assert_eq!(m.field_elements(), 2);
        let mut r = m.reader(&f, 2);
        assert_eq!(r.vector().unwrap(), vec![1, 2]);
        assert!(r.int().is_err());
        let mut r = m.reader(&f, 3);
        assert!(matches!(r.vector(), Err(CertifyError::ProtocolAbort(_))));
    }
}
