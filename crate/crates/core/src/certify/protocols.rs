//! The four interactive protocols. Every run has the same shape: the prover
//! commits, the verifier challenges, the prover responds and the verifier
//! announces its verdict. The parties share nothing but the messages.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::detect::{witness_eps, InvariantWitness, NilpotentWitness, Preconditioner};
use super::params::{schedule_params, ProtocolKind, ProtocolParams};
use super::transcript::{role_rng, CostMeters, Item, Message, MsgKind, Reader, Role, Transcript};
use super::CertifyError;
use crate::blackbox::BlackBox;
use crate::epsilon::Epsilon;
use crate::field::{Field, OpCounter, Poly, Scalar};
use crate::krylov::{apply_poly, berlekamp_massey, minpoly_matrix_vector, minpoly_sequence, minpoly_with_check, solve_consistent, KrylovSequence};

/// Attempts an honest prover makes before reporting that it is stuck.
const PROVER_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    FewNilpotent,
    ManyNilpotent,
    FewInvariant,
    ManyInvariant,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::FewNilpotent => "nilpotent-few",
            Protocol::ManyNilpotent => "nilpotent-many",
            Protocol::FewInvariant => "invariant-few",
            Protocol::ManyInvariant => "invariant-many",
        })
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nilpotent-few" => Ok(Protocol::FewNilpotent),
            "nilpotent-many" => Ok(Protocol::ManyNilpotent),
            "invariant-few" => Ok(Protocol::FewInvariant),
            "invariant-many" => Ok(Protocol::ManyInvariant),
            _ => Err(format!("unknown protocol {s:?}")),
        }
    }
}

/// The prover side. `bb` is the prover's own handle on `A`; its field is
/// metered on the prover's counter.
pub trait Prover {
    fn commit(&mut self, bb: &BlackBox<'_>, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError>;
    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError>;
}

/// The verifier side, holding only public data and what it has received.
pub trait Verifier {
    fn challenge(&mut self, bb: &BlackBox<'_>, commit: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError>;
    fn decide(&mut self, bb: &BlackBox<'_>, response: &Message, rng: &mut ChaCha8Rng) -> Result<bool, CertifyError>;
}

/// Runs a protocol between two parties with separate handles and meters.
pub fn run_protocol(
    bb: &BlackBox<'_>,
    prover: &mut dyn Prover,
    verifier: &mut dyn Verifier,
    eps: &Epsilon,
    seed: u64,
) -> Result<Transcript, CertifyError> {
    let (pops, vops) = (OpCounter::new(), OpCounter::new());
    let pb = bb.metered(&pops);
    let vb = bb.metered(&vops);
    let commit = Message::new(0, Role::Prover, MsgKind::Commit, prover.commit(&pb, &mut role_rng(seed, Role::Prover, 0))?);
    let challenge = Message::new(
        1,
        Role::Verifier,
        MsgKind::Challenge,
        verifier.challenge(&vb, &commit, &mut role_rng(seed, Role::Verifier, 1))?,
    );
    let response = Message::new(
        2,
        Role::Prover,
        MsgKind::Response,
        prover.respond(&pb, &challenge, &mut role_rng(seed, Role::Prover, 2))?,
    );
    let accepted = verifier.decide(&vb, &response, &mut role_rng(seed, Role::Verifier, 3))?;
    let word = if accepted { "accept" } else { "reject" };
    let verdict = Message::new(3, Role::Verifier, MsgKind::Verdict, vec![Item::Word(word.into())]);
    let messages = vec![commit, challenge, response, verdict];
    let costs = CostMeters {
        prover_field_ops: pops.get(),
        verifier_field_ops: vops.get(),
        prover_apps: pb.total_applications(),
        verifier_apps: vb.total_applications(),
        comm_elems: messages.iter().map(Message::field_elements).sum(),
    };
    Ok(Transcript { seed, eps: *eps, messages, costs, accepted })
}

/// Builds the verifier for a protocol from public data.
pub fn verifier_for(protocol: Protocol, field: &Field, n: usize, k: usize, eps: &Epsilon) -> Result<Box<dyn Verifier>, CertifyError> {
    let nil = schedule_params(field.order(), k, eps, ProtocolKind::Nilpotent)?;
    let inv = schedule_params(field.order(), k, eps, ProtocolKind::Invariant)?;
    let common = Public { field: field.unmetered(), n, k, nil, inv, eps: *eps };
    Ok(match protocol {
        Protocol::FewNilpotent => Box::new(FewNilpotentVerifier { p: common, pre: None, b: Vec::new() }),
        Protocol::ManyNilpotent => Box::new(ManyNilpotentVerifier { p: common, pres: Vec::new() }),
        Protocol::FewInvariant => Box::new(FewInvariantVerifier { p: common, commit: None, pairs: Vec::new() }),
        Protocol::ManyInvariant => Box::new(ManyInvariantVerifier { p: common, chi: None, pres: Vec::new() }),
    })
}

struct Public {
    field: Field,
    n: usize,
    k: usize,
    nil: ProtocolParams,
    inv: ProtocolParams,
    eps: Epsilon,
}

impl Public {
    fn reader<'m>(&'m self, m: &'m Message) -> Reader<'m> {
        m.reader(&self.field, self.n)
    }

    fn preconditioner(&self, r: &mut Reader<'_>) -> Result<Preconditioner, CertifyError> {
        let u = r.matrix(self.k, self.n)?;
        let v = r.matrix(self.n, self.k)?;
        Ok(Preconditioner { u, v })
    }

    /// A count that must equal `expected`.
    fn count(&self, r: &mut Reader<'_>, expected: usize) -> Result<usize, CertifyError> {
        let c = r.int()? as usize;
        if c != expected {
            return Err(CertifyError::ProtocolAbort(format!("expected {expected} entries, got {c}")));
        }
        Ok(c)
    }
}

fn pre_items(pre: &Preconditioner) -> [Item; 2] {
    [Item::Matrix(pre.u.clone()), Item::Matrix(pre.v.clone())]
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Checks that `claimed` is the minimal generator of `u^T B^i v`.
///
/// The verifier computes the first `n + deg(claimed)` terms itself (up to
/// rounding to an even count), checks that `claimed` annihilates them and
/// that Berlekamp-Massey on them returns exactly `claimed`. The true
/// generator has degree at most `n`, so two generators of that prefix agree
/// on the whole sequence: the check is exact and never accepts a wrong
/// claim. `eps` and `rng` are unused.
pub fn certify_sequence_minpoly<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    u: &[Scalar],
    v: &[Scalar],
    claimed: &Poly,
    _eps: &Epsilon,
    _rng: &mut R,
) -> Result<bool, CertifyError> {
    let n = bb.dim();
    if !claimed.is_monic() || claimed.deg() > n {
        return Ok(false);
    }
    let d = claimed.deg();
    let slack = (n - d).div_ceil(2);
    let len = 2 * d + 2 * slack;
    let seq = KrylovSequence::compute(bb, u, v, len)?;
    let f = bb.field();
    Ok(seq.annihilated_by(f, claimed) && berlekamp_massey(f, &seq.terms) == *claimed)
}

// ---- few nilpotent blocks ----

pub struct HonestFewNilpotent {
    pub witness: NilpotentWitness,
}

impl Prover for HonestFewNilpotent {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        Ok(pre_items(&self.witness.pre).to_vec())
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let b = self.witness.pre.apply_to(bb)?;
        let mut r = challenge.reader(bb.field(), bb.dim());
        let count = r.int()? as usize;
        let mut out = vec![Item::Int(count as u64)];
        for _ in 0..count {
            let target = r.vector()?;
            let x = solve_twice(&b, &target, rng).map_err(|e| CertifyError::ProverStuck(format!("B^2 x = b: {e}")))?;
            out.push(Item::Vector(x));
        }
        r.finish()?;
        Ok(out)
    }
}

/// Some `x` with `B^2 x = b`, by two consistent solves.
pub(crate) fn solve_twice<R: Rng + ?Sized>(b: &BlackBox<'_>, target: &[Scalar], rng: &mut R) -> Result<Vec<Scalar>, CertifyError> {
    let eps = witness_eps();
    let y = solve_consistent(b, target, &eps, rng)?;
    Ok(solve_consistent(b, &y, &eps, rng)?)
}

struct FewNilpotentVerifier {
    p: Public,
    pre: Option<Preconditioner>,
    b: Vec<Vec<Scalar>>,
}

impl Verifier for FewNilpotentVerifier {
    fn challenge(&mut self, bb: &BlackBox<'_>, commit: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let mut r = self.p.reader(commit);
        let pre = self.p.preconditioner(&mut r)?;
        r.finish()?;
        let b = pre.apply_to(bb)?;
        let gamma = self.p.nil.gamma as usize;
        let mut out = vec![Item::Int(gamma as u64)];
        for _ in 0..gamma {
            let c = bb.field().random_vec(self.p.n, rng);
            let bc = b.apply(&c)?;
            out.push(Item::Vector(bc.clone()));
            self.b.push(bc);
        }
        self.pre = Some(pre);
        Ok(out)
    }

    fn decide(&mut self, bb: &BlackBox<'_>, response: &Message, _rng: &mut ChaCha8Rng) -> Result<bool, CertifyError> {
        let pre = self.pre.as_ref().ok_or_else(|| CertifyError::ProtocolAbort("no commitment".into()))?;
        let b = pre.apply_to(bb)?;
        let mut r = self.p.reader(response);
        self.p.count(&mut r, self.b.len())?;
        let mut ok = true;
        for target in &self.b {
            let x = r.vector()?;
            if ok {
                let bx = b.apply(&x)?;
                ok = b.apply(&bx)? == *target;
            }
        }
        r.finish()?;
        Ok(ok)
    }
}

// ---- many nilpotent blocks ----

pub struct HonestManyNilpotent;

/// Some `x` with `B x != 0 = B^2 x`, from a vector whose minimal
/// polynomial `z^j h`, `j >= 2`, gives `x = z^{j-2} h(B) v`.
pub(crate) fn nilpotent_witness<R: Rng + ?Sized>(b: &BlackBox<'_>, rng: &mut R) -> Result<Option<Vec<Scalar>>, CertifyError> {
    let f = b.field();
    let n = b.dim();
    for _ in 0..PROVER_ATTEMPTS {
        let v = f.random_vec(n, rng);
        let g = minpoly_matrix_vector(b, &v, 2, rng)?;
        if g.z_valuation() < 2 {
            continue;
        }
        let x = apply_poly(b, &Poly::from_coeffs(g.coeffs()[2..].to_vec()), &v)?;
        let bx = b.apply(&x)?;
        if !is_zero(&bx) && is_zero(&b.apply(&bx)?) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Reads `count` preconditioners from a message without knowing `k` in
/// advance; the shapes are checked against the black box.
pub(crate) fn read_prover_pairs(bb: &BlackBox<'_>, challenge: &Message) -> Result<Vec<Preconditioner>, CertifyError> {
    let mut out = Vec::new();
    let items = &challenge.items;
    let Some(Item::Int(count)) = items.first() else {
        return Err(CertifyError::ProtocolAbort("missing pair count".into()));
    };
    let mut it = items[1..].iter();
    for _ in 0..*count {
        match (it.next(), it.next()) {
            (Some(Item::Matrix(u)), Some(Item::Matrix(v))) if u.cols() == bb.dim() && v.rows() == bb.dim() && u.rows() == v.cols() => {
                out.push(Preconditioner { u: u.clone(), v: v.clone() })
            }
            _ => return Err(CertifyError::ProtocolAbort("malformed preconditioner pair".into())),
        }
    }
    Ok(out)
}

fn many_nilpotent_respond(bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
    let pres = read_prover_pairs(bb, challenge)?;
    let mut out = vec![Item::Int(pres.len() as u64)];
    for (i, pre) in pres.iter().enumerate() {
        let b = pre.apply_to(bb)?;
        let x = nilpotent_witness(&b, rng)?
            .ok_or_else(|| CertifyError::ProverStuck(format!("no vector with B x != 0 = B^2 x for challenge {i}")))?;
        out.push(Item::Vector(x));
    }
    Ok(out)
}

impl Prover for HonestManyNilpotent {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        Ok(vec![Item::Word("more".into())])
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        many_nilpotent_respond(bb, challenge, rng)
    }
}

fn nilpotent_challenge(p: &Public, bb: &BlackBox<'_>, rng: &mut ChaCha8Rng) -> (Vec<Preconditioner>, Vec<Item>) {
    let tau = p.nil.tau as usize;
    let pres: Vec<Preconditioner> = (0..tau).map(|_| Preconditioner::random(bb.field(), p.n, p.k, rng)).collect();
    let mut out = vec![Item::Int(tau as u64)];
    for pre in &pres {
        out.extend(pre_items(pre));
    }
    (pres, out)
}

fn nilpotent_decide(p: &Public, bb: &BlackBox<'_>, pres: &[Preconditioner], response: &Message) -> Result<bool, CertifyError> {
    let mut r = p.reader(response);
    p.count(&mut r, pres.len())?;
    let mut ok = true;
    for pre in pres {
        let x = r.vector()?;
        if ok {
            let b = pre.apply_to(bb)?;
            let bx = b.apply(&x)?;
            ok = !is_zero(&bx) && is_zero(&b.apply(&bx)?);
        }
    }
    r.finish()?;
    Ok(ok)
}

struct ManyNilpotentVerifier {
    p: Public,
    pres: Vec<Preconditioner>,
}

impl Verifier for ManyNilpotentVerifier {
    fn challenge(&mut self, bb: &BlackBox<'_>, commit: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let mut r = self.p.reader(commit);
        if r.word()? != "more" {
            return Err(CertifyError::ProtocolAbort("expected the claim \"more\"".into()));
        }
        r.finish()?;
        let (pres, items) = nilpotent_challenge(&self.p, bb, rng);
        self.pres = pres;
        Ok(items)
    }

    fn decide(&mut self, bb: &BlackBox<'_>, response: &Message, _rng: &mut ChaCha8Rng) -> Result<bool, CertifyError> {
        nilpotent_decide(&self.p, bb, &self.pres, response)
    }
}

// ---- few invariant factors ----

pub struct HonestFewInvariant {
    pub witness: InvariantWitness,
}

pub(crate) fn invariant_commit_items(pres: &[Preconditioner], minpolys: &[Poly], cofactors: &[Poly]) -> Vec<Item> {
    let mut out = vec![Item::Int(pres.len() as u64)];
    for ((pre, f), g) in pres.iter().zip(minpolys).zip(cofactors) {
        out.extend(pre_items(pre));
        out.push(Item::Poly(f.clone()));
        out.push(Item::Poly(g.clone()));
    }
    out
}

/// Sequence generators `s_ij` of `(A + V_j U_j, u_i, v_i)`, `i`-major.
pub(crate) fn sequence_responses(bb: &BlackBox<'_>, pres: &[Preconditioner], challenge: &Message) -> Result<Vec<Item>, CertifyError> {
    let mut r = challenge.reader(bb.field(), bb.dim());
    let count = r.int()? as usize;
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        pairs.push((r.vector()?, r.vector()?));
    }
    r.finish()?;
    let boxes = pres.iter().map(|p| p.apply_to(bb)).collect::<Result<Vec<_>, _>>()?;
    let mut out = vec![Item::Int((count * pres.len()) as u64)];
    for (u, v) in &pairs {
        for b in &boxes {
            out.push(Item::Poly(minpoly_sequence(b, u, v, bb.dim())?));
        }
    }
    Ok(out)
}

impl Prover for HonestFewInvariant {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let w = &self.witness;
        Ok(invariant_commit_items(&w.pres, &w.minpolys, &w.cofactors))
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        sequence_responses(bb, &self.witness.pres, challenge)
    }
}

struct FewInvariantCommit {
    pres: Vec<Preconditioner>,
    minpolys: Vec<Poly>,
    cofactors: Vec<Poly>,
}

struct FewInvariantVerifier {
    p: Public,
    commit: Option<FewInvariantCommit>,
    pairs: Vec<(Vec<Scalar>, Vec<Scalar>)>,
}

impl Verifier for FewInvariantVerifier {
    fn challenge(&mut self, bb: &BlackBox<'_>, commit: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let mut r = self.p.reader(commit);
        let m = r.int()? as usize;
        if m == 0 || m > 64 * self.p.n {
            return Err(CertifyError::ProtocolAbort(format!("{m} committed pairs")));
        }
        let mut c = FewInvariantCommit { pres: Vec::new(), minpolys: Vec::new(), cofactors: Vec::new() };
        for _ in 0..m {
            c.pres.push(self.p.preconditioner(&mut r)?);
            c.minpolys.push(r.poly()?);
            c.cofactors.push(r.poly()?);
        }
        r.finish()?;
        self.commit = Some(c);
        let t = self.p.inv.tau3 as usize;
        let mut out = vec![Item::Int(t as u64)];
        for _ in 0..t {
            let u = bb.field().random_vec(self.p.n, rng);
            let v = bb.field().random_vec(self.p.n, rng);
            out.push(Item::Vector(u.clone()));
            out.push(Item::Vector(v.clone()));
            self.pairs.push((u, v));
        }
        Ok(out)
    }

    fn decide(&mut self, bb: &BlackBox<'_>, response: &Message, rng: &mut ChaCha8Rng) -> Result<bool, CertifyError> {
        let c = self.commit.as_ref().ok_or_else(|| CertifyError::ProtocolAbort("no commitment".into()))?;
        let f = bb.field();
        let mut r = self.p.reader(response);
        self.p.count(&mut r, self.pairs.len() * c.pres.len())?;
        let mut claims = Vec::with_capacity(self.pairs.len() * c.pres.len());
        for _ in 0..self.pairs.len() * c.pres.len() {
            claims.push(r.poly()?);
        }
        r.finish()?;
        if c.minpolys.iter().any(|g| !g.is_monic() || g.deg() > self.p.n) {
            return Ok(false);
        }
        let sum = c.cofactors.iter().zip(&c.minpolys).fold(Poly::zero(), |acc, (g, m)| acc.add(f, &g.mul(f, m)));
        if !(sum.is_one() || sum == Poly::z()) {
            return Ok(false);
        }
        let per_item = self.p.eps.split(2 * (c.pres.len() * self.pairs.len()) as u64);
        let boxes = c.pres.iter().map(|p| p.apply_to(bb)).collect::<Result<Vec<_>, _>>()?;
        // Cheap divisibility checks first, then certification of each claim.
        for (idx, s) in claims.iter().enumerate() {
            if !s.divides(f, &c.minpolys[idx % c.pres.len()]) {
                return Ok(false);
            }
        }
        for (idx, s) in claims.iter().enumerate() {
            let (u, v) = &self.pairs[idx / c.pres.len()];
            if !certify_sequence_minpoly(&boxes[idx % c.pres.len()], u, v, s, &per_item, rng)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ---- many invariant factors ----

pub struct HonestManyInvariant {
    pub chi: Poly,
}

/// Vectors `(u, w)` whose sequence generator under `B` is exactly `chi`:
/// `w = (f / chi)(B) v` for the minimal polynomial `f` of `B`, then a
/// projection `u` that keeps all of `chi`.
pub(crate) fn chi_witness<R: Rng + ?Sized>(
    b: &BlackBox<'_>,
    chi: &Poly,
    rng: &mut R,
) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>, CertifyError> {
    let f = b.field();
    let n = b.dim();
    let g = minpoly_with_check(b, &Poly::one(), &witness_eps(), rng)?;
    if chi.is_zero() || !chi.divides(f, &g) {
        return Ok(None);
    }
    let h = g.div_exact(f, chi);
    for _ in 0..PROVER_ATTEMPTS {
        let w = apply_poly(b, &h, &f.random_vec(n, rng))?;
        let u = f.random_vec(n, rng);
        if minpoly_sequence(b, &u, &w, n)? == *chi {
            return Ok(Some((u, w)));
        }
    }
    Ok(None)
}

impl Prover for HonestManyInvariant {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        Ok(vec![Item::Poly(self.chi.clone())])
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        if self.chi.z_valuation() >= 2 {
            return many_nilpotent_respond(bb, challenge, rng);
        }
        let pres = read_prover_pairs(bb, challenge)?;
        let mut out = vec![Item::Int(pres.len() as u64)];
        for (i, pre) in pres.iter().enumerate() {
            let b = pre.apply_to(bb)?;
            let (u, v) = chi_witness(&b, &self.chi, rng)?
                .ok_or_else(|| CertifyError::ProverStuck(format!("no sequence with generator chi for challenge {i}")))?;
            out.push(Item::Vector(u));
            out.push(Item::Vector(v));
        }
        Ok(out)
    }
}

struct ManyInvariantVerifier {
    p: Public,
    chi: Option<Poly>,
    pres: Vec<Preconditioner>,
}

impl Verifier for ManyInvariantVerifier {
    fn challenge(&mut self, bb: &BlackBox<'_>, commit: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let mut r = self.p.reader(commit);
        let chi = r.poly()?;
        r.finish()?;
        let valid = chi.is_monic() && chi.deg() >= 1 && chi != Poly::z() && chi.deg() <= self.p.n;
        if !valid {
            self.chi = None;
            return Ok(vec![Item::Int(0)]);
        }
        let (pres, items) = if chi.z_valuation() >= 2 {
            nilpotent_challenge(&self.p, bb, rng)
        } else {
            let t = self.p.inv.tau_tilde as usize;
            let pres: Vec<Preconditioner> = (0..t).map(|_| Preconditioner::random(bb.field(), self.p.n, self.p.k, rng)).collect();
            let mut items = vec![Item::Int(t as u64)];
            for pre in &pres {
                items.extend(pre_items(pre));
            }
            (pres, items)
        };
        self.chi = Some(chi);
        self.pres = pres;
        Ok(items)
    }

    fn decide(&mut self, bb: &BlackBox<'_>, response: &Message, rng: &mut ChaCha8Rng) -> Result<bool, CertifyError> {
        let Some(chi) = self.chi.clone() else {
            return Ok(false);
        };
        if chi.z_valuation() >= 2 {
            return nilpotent_decide(&self.p, bb, &self.pres, response);
        }
        let mut r = self.p.reader(response);
        self.p.count(&mut r, self.pres.len())?;
        let mut vecs = Vec::with_capacity(self.pres.len());
        for _ in 0..self.pres.len() {
            vecs.push((r.vector()?, r.vector()?));
        }
        r.finish()?;
        let per_item = self.p.eps.split(2 * self.pres.len() as u64);
        for (pre, (u, v)) in self.pres.iter().zip(&vecs) {
            let b = pre.apply_to(bb)?;
            if !certify_sequence_minpoly(&b, u, v, &chi, &per_item, rng)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ---- drivers ----

pub fn run_few_nilpotent(bb: &BlackBox<'_>, k: usize, witness: &NilpotentWitness, eps: &Epsilon, seed: u64) -> Result<Transcript, CertifyError> {
    let mut prover = HonestFewNilpotent { witness: witness.clone() };
    run_with(bb, k, Protocol::FewNilpotent, &mut prover, eps, seed)
}

pub fn run_many_nilpotent(bb: &BlackBox<'_>, k: usize, eps: &Epsilon, seed: u64) -> Result<Transcript, CertifyError> {
    run_with(bb, k, Protocol::ManyNilpotent, &mut HonestManyNilpotent, eps, seed)
}

pub fn run_few_invariant(bb: &BlackBox<'_>, k: usize, witness: &InvariantWitness, eps: &Epsilon, seed: u64) -> Result<Transcript, CertifyError> {
    let mut prover = HonestFewInvariant { witness: witness.clone() };
    run_with(bb, k, Protocol::FewInvariant, &mut prover, eps, seed)
}

pub fn run_many_invariant(bb: &BlackBox<'_>, k: usize, chi: &Poly, eps: &Epsilon, seed: u64) -> Result<Transcript, CertifyError> {
    let mut prover = HonestManyInvariant { chi: chi.clone() };
    run_with(bb, k, Protocol::ManyInvariant, &mut prover, eps, seed)
}

/// Runs `protocol` with an arbitrary prover against the standard verifier.
pub fn run_with(
    bb: &BlackBox<'_>,
    k: usize,
    protocol: Protocol,
    prover: &mut dyn Prover,
    eps: &Epsilon,
    seed: u64,
) -> Result<Transcript, CertifyError> {
    if k == 0 || k >= bb.dim() {
        return Err(CertifyError::InvalidParameters(format!("need 1 <= k < n, got k = {k}, n = {}", bb.dim())));
    }
    let mut verifier = verifier_for(protocol, bb.field(), bb.dim(), k, eps)?;
    run_protocol(bb, prover, verifier.as_mut(), eps, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::DenseMatrix;
    use crate::certify::detect::{detect_invariant, detect_nilpotent, InvariantDecision, NilpotentDecision};
    use crate::gen::{block_diag, companion, jordan_block};
    use crate::matrix::Matrix;
    use rand::SeedableRng;

    fn dense<'a>(f: &Field, m: Matrix) -> BlackBox<'a> {
        BlackBox::new(DenseMatrix::new(f, m).unwrap())
    }

    #[test]
    fn sequence_certification_examples() {
        let f = Field::prime(5).unwrap();
        let a = dense(&f, Matrix::identity(3));
        let e1 = vec![1, 0, 0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let eps = Epsilon::pow2(10);
        let z1 = Poly::from_coeffs(vec![4, 1]);
        assert!(certify_sequence_minpoly(&a, &e1, &e1, &z1, &eps, &mut rng).unwrap());
        let sq = z1.mul(&f, &z1);
        assert!(!certify_sequence_minpoly(&a, &e1, &e1, &sq, &eps, &mut rng).unwrap());
        let z2 = Poly::from_coeffs(vec![3, 1]);
        assert!(!certify_sequence_minpoly(&a, &e1, &e1, &z2, &eps, &mut rng).unwrap());
    }

    #[test]
    fn few_nilpotent_honest_accepts() {
        let f = Field::prime(5).unwrap();
        let m = block_diag(&[jordan_block(&f, 0, 2), Matrix::identity(2)]);
        let a = dense(&f, m);
        let eps = Epsilon::new(1, 4).unwrap();
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let NilpotentDecision::AtMostK(w) = detect_nilpotent(&a, 1, &Epsilon::pow2(20), &mut rng).unwrap() else {
                panic!("one block reported as many");
            };
            let t = run_few_nilpotent(&a, 1, &w, &eps, seed).unwrap();
            assert!(t.accepted);
            assert_eq!(t.messages.len(), 4);
            assert!(t.costs.comm_elems > 0 && t.costs.verifier_apps > 0);
        }
    }

    #[test]
    fn many_nilpotent_honest_and_stuck() {
        let f = Field::prime(2).unwrap();
        let j2 = jordan_block(&f, 0, 2);
        let a = dense(&f, block_diag(&[j2.clone(), j2.clone(), j2]));
        let eps = Epsilon::new(1, 4).unwrap();
        assert!(run_many_nilpotent(&a, 1, &eps, 3).unwrap().accepted);
        let f5 = Field::prime(5).unwrap();
        let id = dense(&f5, Matrix::identity(4));
        assert!(matches!(run_many_nilpotent(&id, 1, &eps, 3), Err(CertifyError::ProverStuck(_))));
    }

    #[test]
    fn few_invariant_honest_accepts() {
        let f = Field::prime(2).unwrap();
        let cubic = Poly::from_coeffs(vec![1, 1, 0, 1]);
        let a = dense(&f, block_diag(&[companion(&f, &cubic), Matrix::zeros(2, 2)]));
        let eps = Epsilon::new(1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let InvariantDecision::AtMostK(w) = detect_invariant(&a, 1, &Epsilon::pow2(20), &mut rng).unwrap() else {
            panic!("one invariant factor reported as many");
        };
        for seed in 0..3 {
            assert!(run_few_invariant(&a, 1, &w, &eps, seed).unwrap().accepted);
        }
    }

    #[test]
    fn many_invariant_honest_accepts() {
        let f = Field::prime(2).unwrap();
        let a = dense(&f, Matrix::identity(3));
        let eps = Epsilon::new(1, 4).unwrap();
        let chi = Poly::from_coeffs(vec![1, 1]);
        for seed in 0..3 {
            assert!(run_many_invariant(&a, 2, &chi, &eps, seed).unwrap().accepted);
        }
        let invalid = run_many_invariant(&a, 2, &Poly::z(), &eps, 0).unwrap();
        assert!(!invalid.accepted);
    }

    #[test]
    fn bezout_alone() {
        let f = Field::prime(5).unwrap();
        let fs = [Poly::from_coeffs(vec![4, 1]), Poly::from_coeffs(vec![3, 1])];
        let gs = [Poly::one(), Poly::from_coeffs(vec![4])];
        let sum = gs.iter().zip(&fs).fold(Poly::zero(), |acc, (g, m)| acc.add(&f, &g.mul(&f, m)));
        assert!(sum.is_one());
    }

    #[test]
    fn transcripts_are_reproducible() {
        let f = Field::prime(3).unwrap();
        let j2 = jordan_block(&f, 0, 2);
        let a = dense(&f, block_diag(&[j2.clone(), j2]));
        let eps = Epsilon::new(1, 4).unwrap();
        let t1 = run_many_nilpotent(&a, 1, &eps, 11).unwrap();
        let t2 = run_many_nilpotent(&a, 1, &eps, 11).unwrap();
        assert_eq!(t1, t2);
    }
}
