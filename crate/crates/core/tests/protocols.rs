//! Monte Carlo checks of verification and the interactive protocols on
//! small fixed instances.

mod common;

use bbcert::band::{detect_band, verify_band, BandDecision};
use bbcert::blackbox::{BlackBox, DisplacementKind};
use bbcert::certify::cheaters::{FalseFewInvariant, FalseFewNilpotent, FalseManyInvariant, FalseManyNilpotent};
use bbcert::certify::{
    detect_invariant, detect_nilpotent, role_rng, run_few_invariant, run_few_nilpotent, run_many_invariant,
    run_many_nilpotent, run_with, schedule_params, CertifyError, InvariantDecision, NilpotentDecision,
    NilpotentWitness, Preconditioner, Protocol, ProtocolKind, Prover, Role, Transcript,
};
use bbcert::displacement::{detect_displacement, verify_displacement, DisplacementDecision};
use bbcert::epsilon::Epsilon;
use bbcert::field::{Field, Poly};
use bbcert::gen::{block_diag, companion, jordan_block, random_rank, random_toeplitz};
use bbcert::lowrank::{detect_low_rank, verify_low_rank, RankCertificate, RankDecision};
use bbcert::matrix::Matrix;
use bbcert::oracle::dense_minpoly;
use common::dense;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eps(num: u64, den: u64) -> Epsilon {
    Epsilon::new(num, den).unwrap()
}

fn accepted(r: Result<Transcript, CertifyError>) -> bool {
    matches!(r, Ok(t) if t.accepted)
}

fn count_accepted(a: &BlackBox<'_>, k: usize, protocol: Protocol, e: &Epsilon, seeds: u64, mut prover: impl FnMut() -> Box<dyn Prover>) -> u64 {
    (0..seeds).filter(|&s| accepted(run_with(a, k, protocol, prover().as_mut(), e, s))).count() as u64
}

fn rank_certificate(bb: &BlackBox<'_>, k: usize, seed: u64) -> RankCertificate {
    match detect_low_rank(bb, k, &Epsilon::pow2(30), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap() {
        RankDecision::Rank(c) => c,
        RankDecision::ExceedsK => panic!("rank above {k}"),
    }
}

// ---- band, rank and displacement verification ----

#[test]
fn band_certificate_with_one_changed_entry_is_rejected() {
    let f = Field::prime(2).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let m = bbcert::gen::random_band(&f, 12, 1, &mut r);
    let bb = dense(&f, &m);
    let BandDecision::Band(mut cert) = detect_band(&bb, 1, &Epsilon::pow2(10), &mut r).unwrap() else {
        panic!("band matrix rejected");
    };
    cert.rows.set(5, 1, 1 - cert.rows.get(5, 1));
    let e = eps(1, 16);
    let passed = (0..400).filter(|_| verify_band(&bb, &cert, &e, &mut r).unwrap()).count();
    assert!(passed as f64 / 400.0 <= e.to_f64(), "{passed}/400 false certificates accepted");
}

#[test]
fn tampered_rank_certificate_is_rejected() {
    let f = Field::prime(3).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let a = random_rank(&f, 8, 3, &mut r);
    let bb = dense(&f, &a);
    let mut cert = rank_certificate(&bb, 3, 0);
    assert!(verify_low_rank(&bb, &cert, &Epsilon::pow2(20), &mut r).unwrap());
    cert.l.set(0, 0, f.add(cert.l.get(0, 0), 1));
    let e = eps(1, 8);
    let passed = (0..400).filter(|_| verify_low_rank(&bb, &cert, &e, &mut r).unwrap()).count();
    assert!(passed as f64 / 400.0 <= e.to_f64(), "{passed}/400 tampered certificates accepted");
}

#[test]
fn rank_zero_certificate_for_nonzero_matrix_is_rejected() {
    let f = Field::prime(2).unwrap();
    let mut a = Matrix::zeros(5, 5);
    a.set(3, 1, 1);
    let bb = dense(&f, &a);
    let zero = rank_certificate(&dense(&f, &Matrix::zeros(5, 5)), 2, 0);
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        assert!(!verify_low_rank(&bb, &zero, &Epsilon::pow2(20), &mut r).unwrap());
    }
}

#[test]
fn rank_underestimation_rate_at_quarter() {
    let f = Field::prime(2).unwrap();
    let e = eps(1, 4);
    let mut low = 0;
    for seed in 0..400u64 {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rank(&f, 6, 2, &mut r);
        match detect_low_rank(&dense(&f, &a), 2, &e, &mut r).unwrap() {
            RankDecision::Rank(c) => low += usize::from(c.rank < 2),
            RankDecision::ExceedsK => panic!("rank-2 matrix reported above 2"),
        }
    }
    assert!(low as f64 / 400.0 <= 0.25, "{low}/400 underestimates");
}

#[test]
fn dense_random_matrix_is_not_toeplitz_like() {
    let f = Field::prime(101).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let a = dense(&f, &Matrix::random(&f, 8, 8, &mut r));
    let d = detect_displacement(&a, DisplacementKind::Toeplitz, 2, &Epsilon::pow2(10), &mut r).unwrap();
    assert_eq!(d, DisplacementDecision::NotStructured);
}

#[test]
fn tampered_displacement_generator_is_rejected() {
    let f = Field::prime(7).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let t = dense(&f, &random_toeplitz(&f, 9, &mut r));
    let DisplacementDecision::Structured(mut cert) =
        detect_displacement(&t, DisplacementKind::Toeplitz, 2, &Epsilon::pow2(20), &mut r).unwrap()
    else {
        panic!("Toeplitz matrix rejected");
    };
    assert!(verify_displacement(&t, &cert, &Epsilon::pow2(20), &mut r).unwrap());
    let c = cert.inner.c.get(0, 0);
    cert.inner.c.set(0, 0, f.add(c, 1));
    cert.inner.cinv = cert.inner.c.inverse(&f).unwrap_or(cert.inner.cinv.clone());
    let e = eps(1, 8);
    let passed = (0..400)
        .filter(|_| verify_displacement(&t, &cert, &e, &mut r).unwrap_or(false))
        .count();
    assert!(passed as f64 / 400.0 <= e.to_f64(), "{passed}/400 tampered generators accepted");
}

// ---- few nilpotent blocks ----

fn nilpotent_witness(bb: &BlackBox<'_>, k: usize, seed: u64) -> NilpotentWitness {
    match detect_nilpotent(bb, k, &Epsilon::pow2(20), &mut role_rng(seed, Role::Prover, u32::MAX)).unwrap() {
        NilpotentDecision::AtMostK(w) => w,
        NilpotentDecision::MoreThanK => panic!("detection failed for seed {seed}"),
    }
}

#[test]
fn few_nilpotent_honest_runs_accept() {
    let f = Field::prime(5).unwrap();
    let a = dense(&f, &block_diag(&[jordan_block(&f, 0, 2), Matrix::identity(2)]));
    for seed in 0..50 {
        let w = nilpotent_witness(&a, 1, seed);
        assert!(accepted(run_few_nilpotent(&a, 1, &w, &Epsilon::pow2(10), seed)), "seed {seed}");
    }
}

#[test]
fn zero_matrix_accepts_any_squarefree_preconditioner() {
    let f = Field::prime(3).unwrap();
    let a = dense(&f, &Matrix::zeros(4, 4));
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut runs = 0;
    while runs < 20 {
        let pre = Preconditioner::random(&f, 4, 1, &mut r);
        let updated = pre.v.mul(&f, &pre.u);
        let minpoly = dense_minpoly(&f, &updated);
        if minpoly.z_valuation() >= 2 {
            continue;
        }
        let w = NilpotentWitness { pre, minpoly };
        assert!(accepted(run_few_nilpotent(&a, 1, &w, &Epsilon::pow2(10), runs)));
        runs += 1;
    }
}

#[test]
fn zero_preconditioner_cheater_on_two_blocks() {
    let f = Field::prime(5).unwrap();
    let j2 = jordan_block(&f, 0, 2);
    let a = dense(&f, &block_diag(&[j2.clone(), j2]));
    let e = eps(1, 125);
    assert_eq!(schedule_params(5, 1, &e, ProtocolKind::Nilpotent).unwrap().gamma, 3);
    let hits = count_accepted(&a, 1, Protocol::FewNilpotent, &e, 1000, || Box::new(FalseFewNilpotent { k: 1, solve: true }));
    assert!(hits as f64 / 1000.0 <= 1.0 / 125.0, "{hits}/1000 accepted");
}

// ---- many nilpotent blocks ----

#[test]
fn many_nilpotent_honest_runs_accept() {
    let f = Field::prime(2).unwrap();
    let j2 = jordan_block(&f, 0, 2);
    let a = dense(&f, &block_diag(&[j2.clone(), j2.clone(), j2]));
    for seed in 0..50 {
        assert!(accepted(run_many_nilpotent(&a, 1, &Epsilon::pow2(10), seed)), "seed {seed}");
    }
}

#[test]
fn many_nilpotent_false_claims() {
    let f = Field::prime(5).unwrap();
    let id = dense(&f, &Matrix::identity(4));
    let e = eps(1, 4);
    for seed in 0..20 {
        assert!(matches!(run_many_nilpotent(&id, 1, &e, seed), Err(CertifyError::ProverStuck(_))));
    }
    let hits = count_accepted(&id, 1, Protocol::ManyNilpotent, &e, 1000, || Box::new(FalseManyNilpotent { best_effort: false }));
    assert!(hits as f64 / 1000.0 <= e.to_f64(), "{hits}/1000 random answers accepted");

    let f2 = Field::prime(2).unwrap();
    let one_block = dense(&f2, &block_diag(&[jordan_block(&f2, 0, 2), Matrix::zeros(2, 2)]));
    let hits = count_accepted(&one_block, 1, Protocol::ManyNilpotent, &e, 400, || Box::new(FalseManyNilpotent { best_effort: true }));
    assert!(hits as f64 / 400.0 <= e.to_f64(), "{hits}/400 best-effort runs accepted");
}

// ---- few invariant factors ----

#[test]
fn few_invariant_honest_runs_accept() {
    let f = Field::prime(2).unwrap();
    let c = companion(&f, &Poly::from_coeffs(vec![1, 1, 0, 1]));
    let a = dense(&f, &block_diag(&[c, Matrix::zeros(2, 2)]));
    for seed in 0..20 {
        let w = match detect_invariant(&a, 1, &Epsilon::pow2(20), &mut role_rng(seed, Role::Prover, u32::MAX)).unwrap() {
            InvariantDecision::AtMostK(w) => w,
            InvariantDecision::MoreThanK { chi } => panic!("seed {seed}: detection reported {chi:?}"),
        };
        assert!(accepted(run_few_invariant(&a, 1, &w, &Epsilon::pow2(10), seed)), "seed {seed}");
    }
}

#[test]
fn proper_divisor_cheater_is_rejected() {
    let f = Field::prime(5).unwrap();
    let zm1 = Poly::from_coeffs(vec![4, 1]);
    let a = dense(&f, &block_diag(&[companion(&f, &zm1.pow(&f, 2)), companion(&f, &zm1)]));
    let e = eps(1, 8);
    let hits = count_accepted(&a, 1, Protocol::FewInvariant, &e, 400, || Box::new(FalseFewInvariant::new(1, 4)));
    assert!(hits as f64 / 400.0 <= e.to_f64(), "{hits}/400 accepted");
}

// ---- many invariant factors ----

#[test]
fn many_invariant_honest_runs_accept() {
    let f = Field::prime(2).unwrap();
    let a = dense(&f, &Matrix::identity(3));
    let chi = Poly::from_coeffs(vec![1, 1]);
    for seed in 0..50 {
        assert!(accepted(run_many_invariant(&a, 2, &chi, &Epsilon::pow2(10), seed)), "seed {seed}");
    }
}

#[test]
fn wrong_chi_on_identity() {
    let f = Field::prime(5).unwrap();
    let a = dense(&f, &Matrix::identity(4));
    let e = eps(1, 4);
    let chi = Poly::from_coeffs(vec![3, 1]);
    let hits = count_accepted(&a, 1, Protocol::ManyInvariant, &e, 500, || Box::new(FalseManyInvariant { chi: chi.clone() }));
    assert!(hits as f64 / 500.0 <= e.to_f64(), "{hits}/500 accepted");
}

#[test]
fn chi_z_squared_follows_the_nilpotent_protocol() {
    let f = Field::prime(3).unwrap();
    let j2 = jordan_block(&f, 0, 2);
    let a = dense(&f, &block_diag(&[j2.clone(), j2]));
    let e = Epsilon::pow2(10);
    let via_chi = run_many_invariant(&a, 1, &Poly::monomial(1, 2), &e, 7).unwrap();
    let direct = run_many_nilpotent(&a, 1, &e, 7).unwrap();
    assert!(via_chi.accepted && direct.accepted);
    let shape = |t: &Transcript| t.messages.iter().map(|m| (m.round, m.role, m.kind)).collect::<Vec<_>>();
    assert_eq!(shape(&via_chi), shape(&direct));
}

#[test]
fn transcripts_depend_only_on_the_seed() {
    let f = Field::prime(7).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let a = dense(&f, &bbcert::gen::random_similar(&f, &block_diag(&[jordan_block(&f, 0, 3), Matrix::identity(3)]), &mut r));
    let w = nilpotent_witness(&a, 1, 9);
    let seed = r.gen();
    let one = run_few_nilpotent(&a, 1, &w, &Epsilon::pow2(10), seed).unwrap();
    let two = run_few_nilpotent(&a, 1, &w, &Epsilon::pow2(10), seed).unwrap();
    assert_eq!(one, two);
}
