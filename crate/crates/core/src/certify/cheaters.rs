//! Dishonest provers used to measure soundness. Each one defends a false
//! claim as well as it can and falls back to random data when stuck.

use rand_chacha::ChaCha8Rng;

use super::detect::{witness_eps, Preconditioner};
use super::protocols::{chi_witness, invariant_commit_items, nilpotent_witness, read_prover_pairs, sequence_responses, solve_twice, Prover};
use super::transcript::{Item, Message};
use super::CertifyError;
use crate::blackbox::BlackBox;
use crate::field::{poly_gcd, poly_xgcd_list, squarefree_part, Poly, Scalar};
use crate::krylov::minpoly_with_check;

fn random_vector(bb: &BlackBox<'_>, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    bb.field().random_vec(bb.dim(), rng)
}

/// Claims few nilpotent blocks with `U = V = 0`. With `solve` set it
/// answers each challenge with a true preimage under `A^2` when one exists;
/// otherwise, or when solving fails, it sends a random vector.
pub struct FalseFewNilpotent {
    pub k: usize,
    pub solve: bool,
}

impl Prover for FalseFewNilpotent {
    fn commit(&mut self, bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let pre = Preconditioner::zero(bb.dim(), self.k);
        Ok(vec![Item::Matrix(pre.u), Item::Matrix(pre.v)])
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let mut r = challenge.reader(bb.field(), bb.dim());
        let count = r.int()? as usize;
        let mut out = vec![Item::Int(count as u64)];
        for _ in 0..count {
            let target = r.vector()?;
            let x = if self.solve {
                solve_twice(bb, &target, rng).unwrap_or_else(|_| random_vector(bb, rng))
            } else {
                random_vector(bb, rng)
            };
            out.push(Item::Vector(x));
        }
        Ok(out)
    }
}

/// Claims many nilpotent blocks. With `best_effort` set it searches for a
/// valid vector for every challenge before falling back to a random one.
pub struct FalseManyNilpotent {
    pub best_effort: bool,
}

impl Prover for FalseManyNilpotent {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        Ok(vec![Item::Word("more".into())])
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let pres = read_prover_pairs(bb, challenge)?;
        let mut out = vec![Item::Int(pres.len() as u64)];
        for pre in &pres {
            let found = if self.best_effort { nilpotent_witness(&pre.apply_to(bb)?, rng)? } else { None };
            out.push(Item::Vector(found.unwrap_or_else(|| random_vector(bb, rng))));
        }
        Ok(out)
    }
}

/// Claims few invariant factors for a matrix with more. It draws `pairs`
/// preconditioners, removes from the first minimal polynomial every factor
/// the polynomials share (other than one power of `z`), so that a Bezout
/// identity exists, and then answers the sequence challenges honestly.
pub struct FalseFewInvariant {
    pub k: usize,
    pub pairs: usize,
    pres: Vec<Preconditioner>,
}

impl FalseFewInvariant {
    pub fn new(k: usize, pairs: usize) -> FalseFewInvariant {
        FalseFewInvariant { k, pairs: pairs.max(1), pres: Vec::new() }
    }
}

impl Prover for FalseFewInvariant {
    fn commit(&mut self, bb: &BlackBox<'_>, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let f = bb.field();
        let mut minpolys = Vec::with_capacity(self.pairs);
        self.pres.clear();
        for _ in 0..self.pairs {
            let pre = Preconditioner::random(f, bb.dim(), self.k, rng);
            let g = minpoly_with_check(&pre.apply_to(bb)?, &Poly::one(), &witness_eps(), rng)?;
            self.pres.push(pre);
            minpolys.push(g);
        }
        let common = poly_gcd(f, &minpolys).expect("minimal polynomials are nonzero");
        let radical = squarefree_part(f, &common.strip_z());
        let mut f0 = minpolys[0].clone();
        loop {
            let g = poly_gcd(f, &[f0.clone(), radical.clone()]).expect("nonzero");
            if g.is_one() {
                break;
            }
            f0 = f0.div_exact(f, &g);
        }
        if common.z_valuation() >= 2 && f0.z_valuation() >= 2 {
            f0 = f0.strip_z().mul(f, &Poly::z());
        }
        minpolys[0] = f0;
        let (_, cofactors) = poly_xgcd_list(f, &minpolys).expect("nonzero");
        Ok(invariant_commit_items(&self.pres, &minpolys, &cofactors))
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        sequence_responses(bb, &self.pres, challenge)
    }
}

/// Claims many invariant factors with a shared factor `chi` that the matrix
/// does not have. For each challenge it tries to find a sequence with
/// generator `chi` and sends random vectors when it cannot.
pub struct FalseManyInvariant {
    pub chi: Poly,
}

impl Prover for FalseManyInvariant {
    fn commit(&mut self, _bb: &BlackBox<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        Ok(vec![Item::Poly(self.chi.clone())])
    }

    fn respond(&mut self, bb: &BlackBox<'_>, challenge: &Message, rng: &mut ChaCha8Rng) -> Result<Vec<Item>, CertifyError> {
        let pres = read_prover_pairs(bb, challenge)?;
        let mut out = vec![Item::Int(pres.len() as u64)];
        let nilpotent = self.chi.z_valuation() >= 2;
        for pre in &pres {
            let b = pre.apply_to(bb)?;
            if nilpotent {
                let x = nilpotent_witness(&b, rng)?.unwrap_or_else(|| random_vector(bb, rng));
                out.push(Item::Vector(x));
            } else {
                let (u, v) = chi_witness(&b, &self.chi, rng)?.unwrap_or_else(|| (random_vector(bb, rng), random_vector(bb, rng)));
                out.push(Item::Vector(u));
                out.push(Item::Vector(v));
            }
        }
        Ok(out)
    }
}
