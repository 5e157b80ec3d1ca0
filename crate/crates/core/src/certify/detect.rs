//! Monte Carlo detection of few or many nontrivial nilpotent blocks and
//! nontrivial invariant factors.

use rand::Rng;

use super::params::{schedule_params, ProtocolKind, ProtocolParams};
use super::CertifyError;
use crate::blackbox::{add_low_rank, BlackBox};
use crate::epsilon::Epsilon;
use crate::field::{poly_gcd, poly_lcm, poly_xgcd_list, squarefree_part, Field, Poly};
use crate::krylov::{minpoly_sequence, minpoly_with_check};
use crate::matrix::Matrix;

/// Failure bound used when a prover computes the exact minimal polynomial
/// of a preconditioned matrix it is about to commit to.
pub(crate) fn witness_eps() -> Epsilon {
    Epsilon::pow2(40)
}

/// A random rank-at-most-`k` update `V U`, `U: k x n`, `V: n x k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preconditioner {
    pub u: Matrix,
    pub v: Matrix,
}

impl Preconditioner {
    pub fn random<R: Rng + ?Sized>(f: &Field, n: usize, k: usize, rng: &mut R) -> Preconditioner {
        let u = Matrix::random(f, k, n, rng);
        let v = Matrix::random(f, n, k, rng);
        Preconditioner { u, v }
    }

    pub fn zero(n: usize, k: usize) -> Preconditioner {
        Preconditioner { u: Matrix::zeros(k, n), v: Matrix::zeros(n, k) }
    }

    /// Black box for `A + V U`, sharing `A`'s counters and field handle.
    pub fn apply_to<'a>(&self, bb: &'a BlackBox<'_>) -> Result<BlackBox<'a>, CertifyError> {
        Ok(add_low_rank(bb, &self.v, &self.u)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentWitness {
    pub pre: Preconditioner,
    /// Minimal polynomial of `A + V U`, not divisible by `z^2`.
    pub minpoly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotentDecision {
    AtMostK(NilpotentWitness),
    MoreThanK,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantWitness {
    pub pres: Vec<Preconditioner>,
    pub minpolys: Vec<Poly>,
    /// Cofactors with `sum g_i f_i = phi`.
    pub cofactors: Vec<Poly>,
    /// `phi_{k+1}`, either `1` or `z`.
    pub phi: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantDecision {
    AtMostK(InvariantWitness),
    /// `chi` divides `phi_{k+1}` and is neither `1` nor `z`.
    MoreThanK { chi: Poly },
}

fn check_k(bb: &BlackBox<'_>, k: usize) -> Result<(), CertifyError> {
    if k == 0 || k >= bb.dim() {
        return Err(CertifyError::InvalidParameters(format!("need 1 <= k < n, got k = {k}, n = {}", bb.dim())));
    }
    Ok(())
}

/// Whether one of `lambda` random Krylov sequences of `b` has a generator
/// divisible by `d`. Every generator is folded into `acc`.
fn exhibits<R: Rng + ?Sized>(
    b: &BlackBox<'_>,
    d: &Poly,
    lambda: u32,
    acc: &mut Poly,
    rng: &mut R,
) -> Result<bool, CertifyError> {
    let f = b.field();
    let n = b.dim();
    for _ in 0..lambda {
        let u = f.random_vec(n, rng);
        let v = f.random_vec(n, rng);
        let s = minpoly_sequence(b, &u, &v, n)?;
        *acc = poly_lcm(f, acc, &s);
        if d.divides(f, &s) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Draws up to `tau` preconditioners and returns the first whose minimal
/// polynomial is shown not to be divisible by `d`, with that polynomial.
fn search_avoiding<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    d: &Poly,
    tau: u32,
    lambda: u32,
    rng: &mut R,
) -> Result<Option<(Preconditioner, Poly)>, CertifyError> {
    let f = bb.field();
    for _ in 0..tau {
        let pre = Preconditioner::random(f, bb.dim(), k, rng);
        let b = pre.apply_to(bb)?;
        let mut acc = Poly::one();
        if exhibits(&b, d, lambda, &mut acc, rng)? {
            continue;
        }
        let g = minpoly_with_check(&b, &acc, &witness_eps(), rng)?;
        if !d.divides(f, &g) {
            return Ok(Some((pre, g)));
        }
    }
    Ok(None)
}

fn random_with_minpoly<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    rng: &mut R,
) -> Result<(Preconditioner, Poly), CertifyError> {
    let pre = Preconditioner::random(bb.field(), bb.dim(), k, rng);
    let b = pre.apply_to(bb)?;
    let g = minpoly_with_check(&b, &Poly::one(), &witness_eps(), rng)?;
    Ok((pre, g))
}

fn nilpotent_stage<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    params: &ProtocolParams,
    rng: &mut R,
) -> Result<NilpotentDecision, CertifyError> {
    let z2 = Poly::monomial(1, 2);
    Ok(match search_avoiding(bb, k, &z2, params.tau, params.lambda, rng)? {
        Some((pre, minpoly)) => NilpotentDecision::AtMostK(NilpotentWitness { pre, minpoly }),
        None => NilpotentDecision::MoreThanK,
    })
}

/// Decides whether `A` has at most `k` nontrivial nilpotent blocks; the
/// wrong answer is returned with probability at most `eps`.
pub fn detect_nilpotent<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<NilpotentDecision, CertifyError> {
    check_k(bb, k)?;
    let params = schedule_params(bb.field().order(), k, eps, ProtocolKind::Nilpotent)?;
    nilpotent_stage(bb, k, &params, rng)
}

fn z_free_radical(f: &Field, g: &Poly) -> Poly {
    squarefree_part(f, &g.strip_z())
}

fn certificate(f: &Field, pres: Vec<Preconditioner>, minpolys: Vec<Poly>) -> InvariantDecision {
    let (phi, cofactors) = poly_xgcd_list(f, &minpolys).expect("minimal polynomials are nonzero");
    InvariantDecision::AtMostK(InvariantWitness { pres, minpolys, cofactors, phi })
}

/// Decides whether `A` has at most `k` nontrivial invariant factors (those
/// different from `z`); the wrong answer is returned with probability at
/// most `eps`.
pub fn detect_invariant<R: Rng + ?Sized>(
    bb: &BlackBox<'_>,
    k: usize,
    eps: &Epsilon,
    rng: &mut R,
) -> Result<InvariantDecision, CertifyError> {
    check_k(bb, k)?;
    let f = bb.field();
    let q = f.order();
    let params = schedule_params(q, k, eps, ProtocolKind::Invariant)?;
    let (pre0, f0) = match nilpotent_stage(bb, k, &params, rng)? {
        NilpotentDecision::MoreThanK => return Ok(InvariantDecision::MoreThanK { chi: Poly::monomial(1, 2) }),
        NilpotentDecision::AtMostK(w) => (w.pre, w.minpoly),
    };
    let mut pres = vec![pre0];
    let mut fs = vec![f0];
    if q == 2 {
        let targets = [Poly::from_coeffs(vec![1, 1]), Poly::from_coeffs(vec![1, 1, 1])];
        for (i, d) in targets.iter().enumerate() {
            match search_avoiding(bb, k, d, params.tau2[i], params.lambda2[i], rng)? {
                Some((pre, g)) => {
                    pres.push(pre);
                    fs.push(g);
                }
                None => return Ok(InvariantDecision::MoreThanK { chi: d.clone() }),
            }
        }
        let mut extra = Vec::new();
        for _ in 0..params.tau_deg3 {
            extra.push(random_with_minpoly(bb, k, rng)?);
        }
        let all: Vec<Poly> = fs.iter().cloned().chain(extra.iter().map(|(_, g)| g.clone())).collect();
        let chi = z_free_radical(f, &poly_gcd(f, &all).expect("nonzero"));
        if !chi.is_constant() {
            return Ok(InvariantDecision::MoreThanK { chi });
        }
        for i in 0..extra.len() {
            for j in i + 1..extra.len() {
                let mut sel = fs.clone();
                sel.push(extra[i].1.clone());
                sel.push(extra[j].1.clone());
                if poly_gcd(f, &sel).expect("nonzero").strip_z().is_constant() {
                    pres.push(extra[i].0.clone());
                    pres.push(extra[j].0.clone());
                    return Ok(certificate(f, pres, sel));
                }
            }
        }
        for (pre, g) in extra {
            pres.push(pre);
            fs.push(g);
        }
        return Ok(certificate(f, pres, fs));
    }
    for _ in 0..params.gcd_trials {
        let mut trial = Vec::new();
        for _ in 0..params.c {
            trial.push(random_with_minpoly(bb, k, rng)?);
        }
        let mut sel = vec![fs[0].clone()];
        sel.extend(trial.iter().map(|(_, g)| g.clone()));
        if poly_gcd(f, &sel).expect("nonzero").strip_z().is_constant() {
            let mut chosen = vec![pres[0].clone()];
            chosen.extend(trial.into_iter().map(|(p, _)| p));
            return Ok(certificate(f, chosen, sel));
        }
        for (pre, g) in trial {
            pres.push(pre);
            fs.push(g);
        }
    }
    let chi = z_free_radical(f, &poly_gcd(f, &fs).expect("nonzero"));
    if chi.is_constant() {
        Ok(certificate(f, pres, fs))
    } else {
        Ok(InvariantDecision::MoreThanK { chi })
    }
}
