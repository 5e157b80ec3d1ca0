//! The `%%bbc v1` certificate format.

use std::fmt::Write as _;

use bbcert::band::BandCertificate;
use bbcert::blackbox::DisplacementKind;
use bbcert::certify::{InvariantWitness, NilpotentWitness, Preconditioner};
use bbcert::displacement::DisplacementCertificate;
use bbcert::field::{Field, Poly};
use bbcert::lowrank::RankCertificate;

use crate::text::{join, poly_text, write_field, write_matrix, write_rows, FormatError, Lines};

pub const CERT_HEADER: &str = "%%bbc v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Band(BandCertificate),
    Rank(RankCertificate),
    Displacement(DisplacementCertificate),
    NilpotentFew { k: usize, witness: NilpotentWitness },
    NilpotentMany { k: usize },
    InvariantFew { k: usize, witness: InvariantWitness },
    InvariantMany { k: usize, chi: Poly },
}

impl Certificate {
    pub fn type_name(&self) -> &'static str {
        match self {
            Certificate::Band(_) => "band",
            Certificate::Rank(_) => "rank",
            Certificate::Displacement(_) => "displacement",
            Certificate::NilpotentFew { .. } => "nilpotent-few",
            Certificate::NilpotentMany { .. } => "nilpotent-many",
            Certificate::InvariantFew { .. } => "invariant-few",
            Certificate::InvariantMany { .. } => "invariant-many",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub field: Field,
    pub n: usize,
    pub cert: Certificate,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<CertificateFile, FormatError> {
        let mut lines = Lines::new(text);
        if lines.next()?.join(" ") != CERT_HEADER {
            return Err(lines.err(format!("expected header `{CERT_HEADER}`")));
        }
        let ty = lines.expect("type")?;
        let ty = ty.first().copied().ok_or_else(|| lines.err("missing certificate type"))?;
        let field = lines.field()?;
        let n: usize = lines.value("size")?;
        let f = &field;
        let cert = match ty {
            "band" => {
                let k: usize = lines.value("bandwidth")?;
                let rows = lines.matrix_rows(f, n, 2 * k + 1)?;
                Certificate::Band(BandCertificate { n, k, rows })
            }
            "rank" => Certificate::Rank(parse_rank(&mut lines, f, n)?),
            "displacement" => {
                let op = lines.expect("operator")?;
                let kind: DisplacementKind = match op.as_slice() {
                    [k] => k.parse().map_err(|e: String| lines.err(e))?,
                    _ => return Err(lines.err("`operator` takes one of T, H, TH")),
                };
                Certificate::Displacement(DisplacementCertificate { kind, inner: parse_rank(&mut lines, f, n)? })
            }
            "nilpotent-few" => {
                let k: usize = lines.value("k")?;
                let pre = parse_pre(&mut lines, f)?;
                let minpoly = lines.labelled_poly(f, "minpoly")?;
                Certificate::NilpotentFew { k, witness: NilpotentWitness { pre, minpoly } }
            }
            "nilpotent-many" => Certificate::NilpotentMany { k: lines.value("k")? },
            "invariant-few" => {
                let k: usize = lines.value("k")?;
                let m: usize = lines.value("pairs")?;
                let mut w = InvariantWitness { pres: Vec::new(), minpolys: Vec::new(), cofactors: Vec::new(), phi: Poly::one() };
                for _ in 0..m {
                    w.pres.push(parse_pre(&mut lines, f)?);
                    w.minpolys.push(lines.labelled_poly(f, "minpoly")?);
                    w.cofactors.push(lines.labelled_poly(f, "cofactor")?);
                }
                w.phi = lines.labelled_poly(f, "phi")?;
                Certificate::InvariantFew { k, witness: w }
            }
            "invariant-many" => {
                let k: usize = lines.value("k")?;
                Certificate::InvariantMany { k, chi: lines.labelled_poly(f, "chi")? }
            }
            other => return Err(lines.err(format!("unknown certificate type `{other}`"))),
        };
        lines.finish()?;
        Ok(CertificateFile { field, n, cert })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{CERT_HEADER}\ntype {}", self.cert.type_name()).unwrap();
        write_field(&mut out, &self.field);
        writeln!(out, "size {}", self.n).unwrap();
        match &self.cert {
            Certificate::Band(c) => {
                writeln!(out, "bandwidth {}", c.k).unwrap();
                write_rows(&mut out, &c.rows);
            }
            Certificate::Rank(c) => write_rank(&mut out, c),
            Certificate::Displacement(c) => {
                writeln!(out, "operator {}", c.kind).unwrap();
                write_rank(&mut out, &c.inner);
            }
            Certificate::NilpotentFew { k, witness } => {
                writeln!(out, "k {k}").unwrap();
                write_pre(&mut out, &witness.pre);
                writeln!(out, "minpoly {}", poly_text(&witness.minpoly)).unwrap();
            }
            Certificate::NilpotentMany { k } => writeln!(out, "k {k}").unwrap(),
            Certificate::InvariantFew { k, witness } => {
                writeln!(out, "k {k}\npairs {}", witness.pres.len()).unwrap();
                for ((pre, f), g) in witness.pres.iter().zip(&witness.minpolys).zip(&witness.cofactors) {
                    write_pre(&mut out, pre);
                    writeln!(out, "minpoly {}\ncofactor {}", poly_text(f), poly_text(g)).unwrap();
                }
                writeln!(out, "phi {}", poly_text(&witness.phi)).unwrap();
            }
            Certificate::InvariantMany { k, chi } => writeln!(out, "k {k}\nchi {}", poly_text(chi)).unwrap(),
        }
        out
    }
}

fn parse_pre(lines: &mut Lines<'_>, f: &Field) -> Result<Preconditioner, FormatError> {
    let u = lines.matrix(f, "u")?;
    let v = lines.matrix(f, "v")?;
    Ok(Preconditioner { u, v })
}

fn write_pre(out: &mut String, pre: &Preconditioner) {
    write_matrix(out, "u", &pre.u);
    write_matrix(out, "v", &pre.v);
}

/// One-based index list of length `len`, each entry at most `n`.
fn indices(lines: &mut Lines<'_>, key: &str, len: usize, n: usize) -> Result<Vec<usize>, FormatError> {
    let rest = lines.expect(key)?;
    let xs: Vec<usize> = lines.nums(&rest)?;
    if xs.len() != len || xs.iter().any(|&x| x == 0 || x > n) {
        return Err(lines.err(format!("`{key}` needs {len} indices in 1..={n}")));
    }
    Ok(xs.into_iter().map(|x| x - 1).collect())
}

fn parse_rank(lines: &mut Lines<'_>, f: &Field, n: usize) -> Result<RankCertificate, FormatError> {
    let rank: usize = lines.value("rank")?;
    if rank > n {
        return Err(lines.err(format!("rank {rank} exceeds the size {n}")));
    }
    let p = indices(lines, "p", n, n)?;
    let q = indices(lines, "q", n, n)?;
    let row_idx = indices(lines, "row-idx", rank, n)?;
    let col_idx = indices(lines, "col-idx", rank, n)?;
    let c = lines.matrix(f, "c")?;
    let cinv = lines.matrix(f, "cinv")?;
    let l = lines.matrix(f, "l")?;
    let r = lines.matrix(f, "r")?;
    Ok(RankCertificate { n, rank, p, q, c, cinv, l, r, row_idx, col_idx })
}

fn write_rank(out: &mut String, c: &RankCertificate) {
    let one_based = |xs: &[usize]| join(&xs.iter().map(|x| x + 1).collect::<Vec<_>>());
    writeln!(out, "rank {}", c.rank).unwrap();
    writeln!(out, "p {}", one_based(&c.p)).unwrap();
    writeln!(out, "q {}", one_based(&c.q)).unwrap();
    writeln!(out, "row-idx {}", one_based(&c.row_idx)).unwrap();
    writeln!(out, "col-idx {}", one_based(&c.col_idx)).unwrap();
    write_matrix(out, "c", &c.c);
    write_matrix(out, "cinv", &c.cinv);
    write_matrix(out, "l", &c.l);
    write_matrix(out, "r", &c.r);
}
