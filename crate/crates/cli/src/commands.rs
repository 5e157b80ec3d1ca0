//! Subcommand definitions and their implementations.

use std::fs;
use std::io::{self, Read as _, Write as _};
use std::path::{Path, PathBuf};

use bbcert::band::{detect_band, verify_band, BandDecision};
use bbcert::blackbox::{BlackBox, DisplacementKind};
use bbcert::certify::cheaters::{FalseFewInvariant, FalseFewNilpotent, FalseManyInvariant, FalseManyNilpotent};
use bbcert::certify::protocols::{HonestFewInvariant, HonestFewNilpotent, HonestManyInvariant, HonestManyNilpotent};
use bbcert::certify::{
    detect_invariant, detect_nilpotent, role_rng, run_with, CertifyError, InvariantDecision, NilpotentDecision, Protocol,
    Prover, Role, Transcript,
};
use bbcert::displacement::{detect_displacement, verify_displacement, DisplacementDecision};
use bbcert::epsilon::Epsilon;
use bbcert::field::{Field, OpCounter, Poly};
use bbcert::gen::{block_diag, companion, jordan_block, random_band, random_hankel, random_rank, random_similar, random_toeplitz};
use bbcert::lowrank::{detect_low_rank, verify_low_rank, RankDecision};
use bbcert::matrix::Matrix;
use bbcert::oracle::{dense_band_width, dense_displacement_rank, dense_minpoly, dense_rank, invariant_report, dense_charpoly};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cert_file::{Certificate, CertificateFile};
use crate::matrix_file::{MatrixBody, MatrixFile};
use crate::text::poly_text;
use crate::transcript_file::transcript_text;
use crate::CliError;

/// Round used for a prover's private detection stream, outside the protocol rounds.
const DETECTION_ROUND: u32 = u32::MAX;

#[derive(Debug, Parser)]
#[command(name = "bbcert", version, about = "Detect and certify structure of black-box matrices over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded test matrix.
    Gen(GenArgs),
    /// Run a detector and report the decision.
    Detect(DetectArgs),
    /// Run a detector and emit the certificate.
    Certify(DetectArgs),
    /// Check a certificate against a matrix.
    Verify(VerifyArgs),
    /// Run a prover and verifier in-process and write the transcript.
    Protocol(ProtocolArgs),
    /// Exact dense computations.
    Oracle(OracleArgs),
    /// Print a table of measured costs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Band,
    Lowrank,
    Toeplitz,
    Hankel,
    Jordan,
    Companion,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Auto,
    Dense,
    Sparse,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: Family,
    /// Field order (a prime power).
    #[arg(long, default_value_t = 5)]
    pub field: u64,
    #[arg(short, long, default_value_t = 8)]
    pub n: usize,
    /// Band width for `band`, rank for `lowrank`.
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    /// Jordan block sizes, e.g. `2,2,1`.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub eigenvalue: u64,
    /// Monic polynomial coefficients, lowest degree first, e.g. `1,1,0,1`.
    #[arg(long, value_delimiter = ',')]
    pub poly: Vec<u64>,
    /// Replace the matrix by a random similar one.
    #[arg(long)]
    pub conjugate: bool,
    #[arg(long, value_enum, default_value_t = Layout::Auto)]
    pub layout: Layout,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Band,
    Rank,
    Toeplitz,
    Hankel,
    Th,
    Nilpotent,
    Invariant,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Matrix file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub property: Property,
    #[arg(short)]
    pub k: usize,
    #[arg(long, default_value = "1/1024")]
    pub eps: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Certificate output path.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    pub cert: PathBuf,
    #[arg(long, default_value = "1/1024")]
    pub eps: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the transcript of interactive checks.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolProperty {
    Nilpotent,
    Invariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Few,
    Many,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub property: ProtocolProperty,
    #[arg(long, value_enum)]
    pub claim: Claim,
    #[arg(short)]
    pub k: usize,
    #[arg(long, default_value = "1/4")]
    pub eps: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use the scripted dishonest prover for the claim.
    #[arg(long)]
    pub cheat: bool,
    /// Shared factor claimed by a dishonest many-invariant prover, e.g. `4,1`.
    #[arg(long, value_delimiter = ',')]
    pub chi: Vec<u64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleQuery {
    Rank,
    Minpoly,
    Charpoly,
    Invariants,
    Bandwidth,
    Displacement,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub what: OracleQuery,
    /// Displacement operator: T, H or TH.
    #[arg(long, default_value = "T")]
    pub kind: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    pub field: u64,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(short, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value = "1/1024")]
    pub eps: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Exit status: 0 accept or detected, 1 reject or not detected.
pub type Outcome = i32;

pub fn execute(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Detect(a) => detect(a, false),
        Command::Certify(a) => detect(a, true),
        Command::Verify(a) => verify(a),
        Command::Protocol(a) => protocol(a),
        Command::Oracle(a) => oracle(a),
        Command::Bench(a) => bench(a),
    }
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed {s}");
        s
    })
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn parse_eps(s: &str) -> Result<Epsilon, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("--eps: {e}")))
}

fn load_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    Ok(MatrixFile::parse(&read_input(path)?)?)
}

fn gen(a: GenArgs) -> Result<Outcome, CliError> {
    let f = Field::new(a.field)?;
    let seed = seed_or_fresh(a.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.n;
    if n == 0 {
        return Err(CliError::Usage("-n must be positive".into()));
    }
    let mut file = match a.family {
        Family::Band => {
            if a.k >= n {
                return Err(CliError::Usage(format!("band width {} must be below {n}", a.k)));
            }
            let m = random_band(&f, n, a.k, &mut rng);
            let rows = bbcert::blackbox::BandStorage::from_dense(&f, &m, a.k)?.rows().clone();
            MatrixFile { field: f.clone(), n, body: MatrixBody::Band { k: a.k, rows } }
        }
        Family::Lowrank => {
            let u = Matrix::random(&f, a.k, n, &mut rng);
            let v = Matrix::random(&f, n, a.k, &mut rng);
            MatrixFile { field: f.clone(), n, body: MatrixBody::PlusLowRank { u, v, base: Box::new(MatrixBody::Sparse(Vec::new())) } }
        }
        Family::Toeplitz => MatrixFile::dense(&f, random_toeplitz(&f, n, &mut rng)),
        Family::Hankel => MatrixFile::dense(&f, random_hankel(&f, n, &mut rng)),
        Family::Jordan => {
            let lambda = f.check(a.eigenvalue)?;
            let sizes = if a.blocks.is_empty() { vec![n] } else { a.blocks.clone() };
            let blocks: Vec<Matrix> = sizes.iter().map(|&s| jordan_block(&f, lambda, s)).collect();
            MatrixFile::dense(&f, block_diag(&blocks))
        }
        Family::Companion => {
            let p = if a.poly.is_empty() {
                let mut c = f.random_vec(n, &mut rng);
                c.push(1);
                Poly::from_coeffs(c)
            } else {
                for &c in &a.poly {
                    f.check(c)?;
                }
                Poly::from_coeffs(a.poly.clone())
            };
            if !p.is_monic() || p.deg() == 0 {
                return Err(CliError::Usage("--poly must be monic of positive degree".into()));
            }
            MatrixFile::dense(&f, companion(&f, &p))
        }
        Family::Random => MatrixFile::dense(&f, Matrix::random(&f, n, n, &mut rng)),
    };
    file.n = match &file.body {
        MatrixBody::Dense(m) => m.rows(),
        _ => file.n,
    };
    if a.conjugate {
        let m = file.to_dense()?;
        file = MatrixFile::dense(&f, random_similar(&f, &m, &mut rng));
    }
    match a.layout {
        Layout::Auto => {}
        Layout::Dense => file = MatrixFile::dense(&f, file.to_dense()?),
        Layout::Sparse => {
            let m = file.to_dense()?;
            let mut t = Vec::new();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if m.get(i, j) != 0 {
                        t.push((i, j, m.get(i, j)));
                    }
                }
            }
            file = MatrixFile { field: f.clone(), n: m.rows(), body: MatrixBody::Sparse(t) };
        }
    }
    write_output(a.out.as_deref(), &file.to_text())?;
    Ok(0)
}

fn displacement_kind(p: Property) -> Option<DisplacementKind> {
    match p {
        Property::Toeplitz => Some(DisplacementKind::Toeplitz),
        Property::Hankel => Some(DisplacementKind::Hankel),
        Property::Th => Some(DisplacementKind::ToeplitzPlusHankel),
        _ => None,
    }
}

/// Runs a detector. Returns the summary line, the certificate (if any) and
/// whether the property holds.
fn run_detector(
    bb: &BlackBox<'_>,
    property: Property,
    k: usize,
    eps: &Epsilon,
    rng: &mut ChaCha8Rng,
) -> Result<(String, Option<Certificate>, bool), CliError> {
    Ok(match property {
        Property::Band => match detect_band(bb, k, eps, rng)? {
            BandDecision::Band(c) => (format!("band width at most {k}"), Some(Certificate::Band(c)), true),
            BandDecision::NotBand => (format!("band width exceeds {k}"), None, false),
        },
        Property::Rank => match detect_low_rank(bb, k, eps, rng)? {
            RankDecision::Rank(c) => (format!("rank {}", c.rank), Some(Certificate::Rank(c)), true),
            RankDecision::ExceedsK => (format!("rank exceeds {k}"), None, false),
        },
        Property::Toeplitz | Property::Hankel | Property::Th => {
            let kind = displacement_kind(property).expect("displacement property");
            match detect_displacement(bb, kind, k, eps, rng)? {
                DisplacementDecision::Structured(c) => {
                    (format!("displacement rank ({kind}) {}", c.displacement_rank()), Some(Certificate::Displacement(c)), true)
                }
                DisplacementDecision::NotStructured => (format!("displacement rank ({kind}) exceeds {k}"), None, false),
            }
        }
        Property::Nilpotent => match detect_nilpotent(bb, k, eps, rng)? {
            NilpotentDecision::AtMostK(w) => {
                (format!("at most {k} nontrivial nilpotent blocks"), Some(Certificate::NilpotentFew { k, witness: w }), true)
            }
            NilpotentDecision::MoreThanK => {
                (format!("more than {k} nontrivial nilpotent blocks"), Some(Certificate::NilpotentMany { k }), false)
            }
        },
        Property::Invariant => match detect_invariant(bb, k, eps, rng)? {
            InvariantDecision::AtMostK(w) => {
                (format!("at most {k} nontrivial invariant factors"), Some(Certificate::InvariantFew { k, witness: w }), true)
            }
            InvariantDecision::MoreThanK { chi } => (
                format!("more than {k} nontrivial invariant factors, shared factor {}", poly_text(&chi)),
                Some(Certificate::InvariantMany { k, chi }),
                false,
            ),
        },
    })
}

fn detect(a: DetectArgs, emit: bool) -> Result<Outcome, CliError> {
    let m = load_matrix(&a.input)?;
    let eps = parse_eps(&a.eps)?;
    let seed = seed_or_fresh(a.seed);
    let bb = m.black_box()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (summary, cert, holds) = run_detector(&bb, a.property, a.k, &eps, &mut rng)?;
    let text = cert.map(|cert| CertificateFile { field: m.field.clone(), n: m.n, cert }.to_text());
    if emit {
        if let Some(t) = &text {
            write_output(a.out.as_deref(), t)?;
        }
        eprintln!("{summary}");
    } else {
        println!("{summary}");
        if let (Some(t), Some(p)) = (&text, a.out.as_deref()) {
            write_output(Some(p), t)?;
        }
    }
    Ok(if holds { 0 } else { 1 })
}

fn verdict(accepted: bool) -> Outcome {
    println!("{}", if accepted { "accept" } else { "reject" });
    if accepted {
        0
    } else {
        1
    }
}

/// Transcript of a run, or `None` when the prover could not continue.
fn protocol_run(
    bb: &BlackBox<'_>,
    k: usize,
    protocol: Protocol,
    prover: &mut dyn Prover,
    eps: &Epsilon,
    seed: u64,
) -> Result<Option<Transcript>, CliError> {
    match run_with(bb, k, protocol, prover, eps, seed) {
        Ok(t) => Ok(Some(t)),
        Err(CertifyError::ProverStuck(msg)) => {
            eprintln!("prover stuck: {msg}");
            Ok(None)
        }
        Err(CertifyError::ProtocolAbort(msg)) => {
            eprintln!("protocol aborted: {msg}");
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(a: VerifyArgs) -> Result<Outcome, CliError> {
    let m = load_matrix(&a.input)?;
    let c = CertificateFile::parse(&read_input(&a.cert)?)?;
    let eps = parse_eps(&a.eps)?;
    let seed = seed_or_fresh(a.seed);
    if c.field != m.field || c.n != m.n {
        eprintln!("certificate is for a different field or size");
        return Ok(verdict(false));
    }
    let bb = m.black_box()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interactive = |protocol, prover: &mut dyn Prover, k| -> Result<Outcome, CliError> {
        let t = protocol_run(&bb, k, protocol, prover, &eps, seed)?;
        if let (Some(t), Some(p)) = (&t, a.transcript.as_deref()) {
            write_output(Some(p), &transcript_text(t))?;
        }
        Ok(verdict(t.is_some_and(|t| t.accepted)))
    };
    match c.cert {
        Certificate::Band(cert) => Ok(verdict(verify_band(&bb, &cert, &eps, &mut rng)?)),
        Certificate::Rank(cert) => Ok(verdict(verify_low_rank(&bb, &cert, &eps, &mut rng)?)),
        Certificate::Displacement(cert) => Ok(verdict(verify_displacement(&bb, &cert, &eps, &mut rng)?)),
        Certificate::NilpotentFew { k, witness } => interactive(Protocol::FewNilpotent, &mut HonestFewNilpotent { witness }, k),
        Certificate::NilpotentMany { k } => interactive(Protocol::ManyNilpotent, &mut HonestManyNilpotent, k),
        Certificate::InvariantFew { k, witness } => interactive(Protocol::FewInvariant, &mut HonestFewInvariant { witness }, k),
        Certificate::InvariantMany { k, chi } => interactive(Protocol::ManyInvariant, &mut HonestManyInvariant { chi }, k),
    }
}

/// Detection failure bound used by honest provers building their witness.
fn prover_detection_eps() -> Epsilon {
    Epsilon::pow2(20)
}

fn protocol(a: ProtocolArgs) -> Result<Outcome, CliError> {
    let m = load_matrix(&a.input)?;
    let eps = parse_eps(&a.eps)?;
    let seed = seed_or_fresh(a.seed);
    let bb = m.black_box()?;
    let k = a.k;
    let mut det_rng = role_rng(seed, Role::Prover, DETECTION_ROUND);
    let det_eps = prover_detection_eps();
    let (proto, mut prover): (Protocol, Box<dyn Prover>) = match (a.property, a.claim, a.cheat) {
        (ProtocolProperty::Nilpotent, Claim::Few, false) => match detect_nilpotent(&bb, k, &det_eps, &mut det_rng)? {
            NilpotentDecision::AtMostK(witness) => (Protocol::FewNilpotent, Box::new(HonestFewNilpotent { witness })),
            NilpotentDecision::MoreThanK => {
                eprintln!("prover stuck: no preconditioner avoids z^2 in the minimal polynomial");
                return Ok(verdict(false));
            }
        },
        (ProtocolProperty::Nilpotent, Claim::Few, true) => (Protocol::FewNilpotent, Box::new(FalseFewNilpotent { k, solve: true })),
        (ProtocolProperty::Nilpotent, Claim::Many, false) => (Protocol::ManyNilpotent, Box::new(HonestManyNilpotent)),
        (ProtocolProperty::Nilpotent, Claim::Many, true) => {
            (Protocol::ManyNilpotent, Box::new(FalseManyNilpotent { best_effort: true }))
        }
        (ProtocolProperty::Invariant, Claim::Few, false) => match detect_invariant(&bb, k, &det_eps, &mut det_rng)? {
            InvariantDecision::AtMostK(witness) => (Protocol::FewInvariant, Box::new(HonestFewInvariant { witness })),
            InvariantDecision::MoreThanK { chi } => {
                eprintln!("prover stuck: factor {} is shared by every preconditioned minimal polynomial", poly_text(&chi));
                return Ok(verdict(false));
            }
        },
        (ProtocolProperty::Invariant, Claim::Few, true) => {
            let pairs = bbcert::certify::params::gcd_width(m.field.order()) as usize + 1;
            (Protocol::FewInvariant, Box::new(FalseFewInvariant::new(k, pairs)))
        }
        (ProtocolProperty::Invariant, Claim::Many, false) => match detect_invariant(&bb, k, &det_eps, &mut det_rng)? {
            InvariantDecision::MoreThanK { chi } => (Protocol::ManyInvariant, Box::new(HonestManyInvariant { chi })),
            InvariantDecision::AtMostK(_) => {
                eprintln!("prover stuck: no shared factor other than z found");
                return Ok(verdict(false));
            }
        },
        (ProtocolProperty::Invariant, Claim::Many, true) => {
            if a.chi.is_empty() {
                return Err(CliError::Usage("--cheat with --claim many needs --chi".into()));
            }
            for &c in &a.chi {
                m.field.check(c)?;
            }
            (Protocol::ManyInvariant, Box::new(FalseManyInvariant { chi: Poly::from_coeffs(a.chi.clone()) }))
        }
    };
    match protocol_run(&bb, k, proto, prover.as_mut(), &eps, seed)? {
        Some(t) => {
            write_output(a.out.as_deref(), &transcript_text(&t))?;
            Ok(if t.accepted { 0 } else { 1 })
        }
        None => Ok(verdict(false)),
    }
}

fn oracle(a: OracleArgs) -> Result<Outcome, CliError> {
    let m = load_matrix(&a.input)?;
    let f = &m.field;
    let d = m.to_dense()?;
    match a.what {
        OracleQuery::Rank => println!("{}", dense_rank(f, &d)),
        OracleQuery::Minpoly => println!("{}", poly_text(&dense_minpoly(f, &d))),
        OracleQuery::Charpoly => println!("{}", poly_text(&dense_charpoly(f, &d))),
        OracleQuery::Invariants => {
            let r = invariant_report(f, &d)?;
            for p in &r.factors {
                println!("factor {}", poly_text(p));
            }
            println!("nontrivial {}", r.nontrivial_count);
            println!("nilpotent-blocks {}", r.nilpotent_block_count);
        }
        OracleQuery::Bandwidth => println!("{}", dense_band_width(&d)),
        OracleQuery::Displacement => {
            let kind: DisplacementKind = a.kind.parse().map_err(CliError::Usage)?;
            println!("{}", dense_displacement_rank(f, &d, kind));
        }
    }
    Ok(0)
}

/// Field operations and applications of one metered verification.
fn metered<T>(bb: &BlackBox<'_>, run: impl FnOnce(&BlackBox<'_>) -> T) -> (T, u64, u64) {
    let ops = OpCounter::new();
    let h = bb.metered(&ops);
    let out = run(&h);
    (out, h.total_applications(), ops.get())
}

fn bench(a: BenchArgs) -> Result<Outcome, CliError> {
    let f = Field::new(a.field)?;
    let eps = parse_eps(&a.eps)?;
    let seed = seed_or_fresh(a.seed);
    let k = a.k;
    println!("{:<14} {:>5} {:>3} {:>11} {:>11} {:>15} {:>15} {:>10}", "property", "n", "k", "detect-apps", "verify-apps", "verify-fieldops", "prover-fieldops", "comm-elems");
    let row = |name: &str, n: usize, d: String, va: String, vo: String, po: String, comm: String| {
        println!("{name:<14} {n:>5} {k:>3} {d:>11} {va:>11} {vo:>15} {po:>15} {comm:>10}");
    };
    let dash = || "-".to_string();
    for &n in &a.sizes {
        if k >= n {
            return Err(CliError::Usage(format!("-k {k} must be below every size")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let band = BlackBox::new(bbcert::blackbox::BandStorage::from_dense(&f, &random_band(&f, n, k, &mut rng), k)?);
        if let BandDecision::Band(c) = detect_band(&band, k, &eps, &mut rng)? {
            let d = band.total_applications();
            let (ok, va, vo) = metered(&band, |h| verify_band(h, &c, &eps, &mut rng));
            ok?;
            row("band", n, d.to_string(), va.to_string(), vo.to_string(), dash(), dash());
        }
        let dense = BlackBox::new(bbcert::blackbox::DenseMatrix::new(&f, random_rank(&f, n, k, &mut rng))?);
        if let RankDecision::Rank(c) = detect_low_rank(&dense, k, &eps, &mut rng)? {
            let d = dense.total_applications();
            let (ok, va, vo) = metered(&dense, |h| verify_low_rank(h, &c, &eps, &mut rng));
            ok?;
            row("rank", n, d.to_string(), va.to_string(), vo.to_string(), dash(), dash());
        }
        let nil = BlackBox::new(bbcert::blackbox::DenseMatrix::new(
            &f,
            block_diag(&[jordan_block(&f, 0, 2), Matrix::identity(n - 2)]),
        )?);
        if let NilpotentDecision::AtMostK(w) = detect_nilpotent(&nil, k, &prover_detection_eps(), &mut rng)? {
            let d = nil.total_applications();
            let t = run_with(&nil, k, Protocol::FewNilpotent, &mut HonestFewNilpotent { witness: w }, &eps, seed)?;
            let c = t.costs;
            row("nilpotent-few", n, d.to_string(), c.verifier_apps.to_string(), c.verifier_field_ops.to_string(), c.prover_field_ops.to_string(), c.comm_elems.to_string());
        }
        let mut coeffs = f.random_vec(n, &mut rng);
        coeffs.push(1);
        let inv = BlackBox::new(bbcert::blackbox::DenseMatrix::new(&f, companion(&f, &Poly::from_coeffs(coeffs)))?);
        if let InvariantDecision::AtMostK(w) = detect_invariant(&inv, k, &prover_detection_eps(), &mut rng)? {
            let d = inv.total_applications();
            let t = run_with(&inv, k, Protocol::FewInvariant, &mut HonestFewInvariant { witness: w }, &eps, seed)?;
            let c = t.costs;
            row("invariant-few", n, d.to_string(), c.verifier_apps.to_string(), c.verifier_field_ops.to_string(), c.prover_field_ops.to_string(), c.comm_elems.to_string());
        }
    }
    Ok(0)
}
