use bbcert::band::{detect_band, BandDecision};
use bbcert::blackbox::{BandStorage, BlackBox, DenseMatrix, DisplacementKind};
use bbcert::certify::{detect_invariant, detect_nilpotent, run_few_invariant, run_many_nilpotent, InvariantDecision, NilpotentDecision};
use bbcert::displacement::{detect_displacement, DisplacementDecision};
use bbcert::epsilon::Epsilon;
use bbcert::field::{Field, Poly};
use bbcert::gen::{block_diag, companion, jordan_block, random_band, random_rank, random_toeplitz};
use bbcert::lowrank::{detect_low_rank, RankDecision};
use bbcert::matrix::Matrix;
use bbcert_cli::{parse_transcript, transcript_text, Certificate, CertificateFile, FormatError, MatrixBody, MatrixFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn round_trip_matrix(m: &MatrixFile) {
    let text = m.to_text();
    let back = MatrixFile::parse(&text).unwrap();
    assert_eq!(&back, m);
    assert_eq!(back.to_text(), text);
}

fn round_trip_cert(c: &CertificateFile) {
    let text = c.to_text();
    let back = CertificateFile::parse(&text).unwrap();
    assert_eq!(&back, c);
    assert_eq!(back.to_text(), text);
}

#[test]
fn matrix_kinds_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for q in [2u64, 5, 9, 101] {
        let f = Field::new(q).unwrap();
        let n = 6;
        round_trip_matrix(&MatrixFile::dense(&f, Matrix::random(&f, n, n, &mut rng)));
        let band = BandStorage::from_dense(&f, &random_band(&f, n, 2, &mut rng), 2).unwrap();
        round_trip_matrix(&MatrixFile { field: f.clone(), n, body: MatrixBody::Band { k: 2, rows: band.rows().clone() } });
        let sparse = MatrixBody::Sparse(vec![(0, 1, 1), (5, 5, f.random_nonzero(&mut rng)), (2, 0, 1)]);
        round_trip_matrix(&MatrixFile { field: f.clone(), n, body: sparse.clone() });
        let u = Matrix::random(&f, 2, n, &mut rng);
        let v = Matrix::random(&f, n, 2, &mut rng);
        round_trip_matrix(&MatrixFile { field: f.clone(), n, body: MatrixBody::PlusLowRank { u, v, base: Box::new(sparse) } });
    }
}

#[test]
fn plus_lowrank_matches_dense_recomposition() {
    let f = Field::prime(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 5;
    let triples = vec![(0, 0, 3), (1, 4, 6), (4, 2, 1)];
    let u = Matrix::random(&f, 2, n, &mut rng);
    let v = Matrix::random(&f, n, 2, &mut rng);
    let file = MatrixFile {
        field: f.clone(),
        n,
        body: MatrixBody::PlusLowRank { u: u.clone(), v: v.clone(), base: Box::new(MatrixBody::Sparse(triples.clone())) },
    };
    let mut base = Matrix::zeros(n, n);
    for (i, j, x) in triples {
        base.set(i, j, x);
    }
    let expected = base.add(&f, &v.mul(&f, &u));
    assert_eq!(file.to_dense().unwrap(), expected);
}

#[test]
fn extension_field_header() {
    let text = "%%bbm v1\nfield ext 2 2 1 1 1\nsize 2\nkind dense\n2 3\n1 0\n";
    let m = MatrixFile::parse(text).unwrap();
    assert_eq!(m.field.order(), 4);
    assert_eq!(m.to_text(), text);
}

#[test]
fn parse_errors_name_the_line() {
    let cases = [
        ("%%bbm v2\n", 1),
        ("%%bbm v1\nfield 5\nsize 2\nkind dense\n1 2\n3\n", 6),
        ("%%bbm v1\nfield 5\nsize 2\nkind sparse\nnnz 1\n3 1 1\n", 6),
        ("%%bbm v1\nfield 5\nsize 3\nkind band\nbandwidth 1\n1 1 1\n0 1 0\n0 1 0\n", 6),
        ("%%bbm v1\nfield 5\nsize 2\nkind dense\n1 2\n3 4\nextra\n", 7),
    ];
    for (text, line) in cases {
        match MatrixFile::parse(text) {
            Err(FormatError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn certificates_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let eps = Epsilon::pow2(10);
    let f = Field::prime(5).unwrap();
    let n = 6;
    let wrap = |cert| CertificateFile { field: f.clone(), n, cert };

    let band = BlackBox::new(DenseMatrix::new(&f, random_band(&f, n, 1, &mut rng)).unwrap());
    let BandDecision::Band(c) = detect_band(&band, 1, &eps, &mut rng).unwrap() else { panic!() };
    round_trip_cert(&wrap(Certificate::Band(c)));

    let rank = BlackBox::new(DenseMatrix::new(&f, random_rank(&f, n, 2, &mut rng)).unwrap());
    let RankDecision::Rank(c) = detect_low_rank(&rank, 3, &eps, &mut rng).unwrap() else { panic!() };
    round_trip_cert(&wrap(Certificate::Rank(c)));
    let zero = BlackBox::new(DenseMatrix::new(&f, Matrix::zeros(n, n)).unwrap());
    let RankDecision::Rank(c) = detect_low_rank(&zero, 1, &eps, &mut rng).unwrap() else { panic!() };
    round_trip_cert(&wrap(Certificate::Rank(c)));

    let t = BlackBox::new(DenseMatrix::new(&f, random_toeplitz(&f, n, &mut rng)).unwrap());
    let DisplacementDecision::Structured(c) = detect_displacement(&t, DisplacementKind::Toeplitz, 2, &eps, &mut rng).unwrap() else {
        panic!()
    };
    round_trip_cert(&wrap(Certificate::Displacement(c)));

    let a = BlackBox::new(DenseMatrix::new(&f, block_diag(&[jordan_block(&f, 0, 2), Matrix::identity(n - 2)])).unwrap());
    let NilpotentDecision::AtMostK(w) = detect_nilpotent(&a, 1, &eps, &mut rng).unwrap() else { panic!() };
    round_trip_cert(&wrap(Certificate::NilpotentFew { k: 1, witness: w }));
    round_trip_cert(&wrap(Certificate::NilpotentMany { k: 2 }));

    let c = BlackBox::new(DenseMatrix::new(&f, companion(&f, &Poly::from_coeffs(vec![1, 2, 0, 3, 0, 0, 1]))).unwrap());
    let InvariantDecision::AtMostK(w) = detect_invariant(&c, 1, &eps, &mut rng).unwrap() else { panic!() };
    round_trip_cert(&wrap(Certificate::InvariantFew { k: 1, witness: w }));
    round_trip_cert(&wrap(Certificate::InvariantMany { k: 1, chi: Poly::from_coeffs(vec![4, 1]) }));
}

#[test]
fn transcripts_round_trip() {
    let f = Field::prime(2).unwrap();
    let j2 = jordan_block(&f, 0, 2);
    let a = BlackBox::new(DenseMatrix::new(&f, block_diag(&[j2.clone(), j2])).unwrap());
    let eps = Epsilon::new(1, 4).unwrap();
    let t = run_many_nilpotent(&a, 1, &eps, 9).unwrap();
    let text = transcript_text(&t);
    assert!(text.starts_with("%%bbt v1\nseed 9\nepsilon 1/4\nmsg 0 prover commit word more\n"));
    assert!(text.ends_with("verdict accept\n"));
    assert_eq!(parse_transcript(&text).unwrap(), t);

    let cubic = Poly::from_coeffs(vec![1, 1, 0, 1]);
    let b = BlackBox::new(DenseMatrix::new(&f, block_diag(&[companion(&f, &cubic), Matrix::zeros(2, 2)])).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let InvariantDecision::AtMostK(w) = detect_invariant(&b, 1, &Epsilon::pow2(20), &mut rng).unwrap() else { panic!() };
    let t = run_few_invariant(&b, 1, &w, &eps, 2).unwrap();
    let text = transcript_text(&t);
    assert_eq!(parse_transcript(&text).unwrap(), t);
    assert_eq!(transcript_text(&parse_transcript(&text).unwrap()), text);
}
