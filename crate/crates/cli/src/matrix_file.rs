//! The `%%bbm v1` matrix format.

use std::fmt::Write as _;

use bbcert::blackbox::{BandStorage, BlackBox, BlackBoxError, DenseMatrix, PlusLowRank, SparseTriples};
use bbcert::field::{Field, Scalar};
use bbcert::matrix::Matrix;

use crate::text::{write_field, write_rows, FormatError, Lines};

pub const MATRIX_HEADER: &str = "%%bbm v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixBody {
    Dense(Matrix),
    /// Zero-based `(row, column, value)` triples in file order.
    Sparse(Vec<(usize, usize, Scalar)>),
    /// Row `i` holds `a[i][i-k..=i+k]`.
    Band { k: usize, rows: Matrix },
    /// `base + V U` with `U: k x n` and `V: n x k`.
    PlusLowRank { u: Matrix, v: Matrix, base: Box<MatrixBody> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub field: Field,
    pub n: usize,
    pub body: MatrixBody,
}

impl MatrixFile {
    pub fn dense(field: &Field, m: Matrix) -> MatrixFile {
        MatrixFile { field: field.clone(), n: m.rows(), body: MatrixBody::Dense(m) }
    }

    pub fn parse(text: &str) -> Result<MatrixFile, FormatError> {
        let mut lines = Lines::new(text);
        let header = lines.next()?;
        if header.join(" ") != MATRIX_HEADER {
            return Err(lines.err(format!("expected header `{MATRIX_HEADER}`")));
        }
        let field = lines.field()?;
        let n: usize = lines.value("size")?;
        if n == 0 {
            return Err(lines.err("size must be positive"));
        }
        let body = parse_body(&mut lines, &field, n)?;
        lines.finish()?;
        Ok(MatrixFile { field, n, body })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MATRIX_HEADER}").unwrap();
        write_field(&mut out, &self.field);
        writeln!(out, "size {}", self.n).unwrap();
        write_body(&mut out, &self.body);
        out
    }

    pub fn black_box(&self) -> Result<BlackBox<'static>, BlackBoxError> {
        build(&self.field, self.n, &self.body)
    }

    pub fn to_dense(&self) -> Result<Matrix, BlackBoxError> {
        Ok(self.black_box()?.to_dense())
    }
}

fn parse_body(lines: &mut Lines<'_>, field: &Field, n: usize) -> Result<MatrixBody, FormatError> {
    let kind = lines.expect("kind")?;
    let kind = match kind.as_slice() {
        [k] => *k,
        _ => return Err(lines.err("`kind` takes one value")),
    };
    match kind {
        "dense" => Ok(MatrixBody::Dense(lines.matrix_rows(field, n, n)?)),
        "sparse" => {
            let m: usize = lines.value("nnz")?;
            let mut triples = Vec::with_capacity(m);
            for _ in 0..m {
                let toks = lines.next()?;
                if toks.len() != 3 {
                    return Err(lines.err("expected `<i> <j> <value>`"));
                }
                let (i, j): (usize, usize) = (lines.num(toks[0])?, lines.num(toks[1])?);
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(lines.err(format!("index ({i}, {j}) outside 1..={n}")));
                }
                let x = lines.scalars(field, &toks[2..])?[0];
                triples.push((i - 1, j - 1, x));
            }
            Ok(MatrixBody::Sparse(triples))
        }
        "band" => {
            let k: usize = lines.value("bandwidth")?;
            if k >= n {
                return Err(lines.err(format!("bandwidth {k} must be below the size {n}")));
            }
            let w = 2 * k + 1;
            let mut data = Vec::with_capacity(n * w);
            for i in 0..n {
                let row = lines.matrix_rows(field, 1, w)?;
                for d in 0..w {
                    let j = i as isize + d as isize - k as isize;
                    if (j < 0 || j >= n as isize) && row.get(0, d) != 0 {
                        return Err(lines.err(format!("row {} has a nonzero entry outside the matrix", i + 1)));
                    }
                }
                data.extend_from_slice(row.data());
            }
            let rows = Matrix::from_vec(n, w, data);
            Ok(MatrixBody::Band { k, rows })
        }
        "plus-lowrank" => {
            let k: usize = lines.value("rankwidth")?;
            let u = lines.matrix_rows(field, k, n)?;
            let v = lines.matrix_rows(field, n, k)?;
            let base = parse_body(lines, field, n)?;
            Ok(MatrixBody::PlusLowRank { u, v, base: Box::new(base) })
        }
        other => Err(lines.err(format!("unknown kind `{other}`"))),
    }
}

fn write_body(out: &mut String, body: &MatrixBody) {
    match body {
        MatrixBody::Dense(m) => {
            writeln!(out, "kind dense").unwrap();
            write_rows(out, m);
        }
        MatrixBody::Sparse(t) => {
            writeln!(out, "kind sparse\nnnz {}", t.len()).unwrap();
            for (i, j, x) in t {
                writeln!(out, "{} {} {x}", i + 1, j + 1).unwrap();
            }
        }
        MatrixBody::Band { k, rows } => {
            writeln!(out, "kind band\nbandwidth {k}").unwrap();
            write_rows(out, rows);
        }
        MatrixBody::PlusLowRank { u, v, base } => {
            writeln!(out, "kind plus-lowrank\nrankwidth {}", u.rows()).unwrap();
            write_rows(out, u);
            write_rows(out, v);
            write_body(out, base);
        }
    }
}

fn build(field: &Field, n: usize, body: &MatrixBody) -> Result<BlackBox<'static>, BlackBoxError> {
    Ok(match body {
        MatrixBody::Dense(m) => BlackBox::new(DenseMatrix::new(field, m.clone())?),
        MatrixBody::Sparse(t) => BlackBox::new(SparseTriples::new(field, n, t.clone())?),
        MatrixBody::Band { k, rows } => BlackBox::new(BandStorage::new(field, n, *k, rows.clone())?),
        MatrixBody::PlusLowRank { u, v, base } => {
            BlackBox::new(PlusLowRank::owned(build(field, n, base)?, v.clone(), u.clone())?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_example() {
        let m = MatrixFile::parse("%%bbm v1\nfield 5\nsize 2\nkind dense\n1 2\n3 4\n").unwrap();
        assert_eq!(m.black_box().unwrap().apply(&[1, 0]).unwrap(), vec![1, 3]);
    }

    #[test]
    fn sparse_example() {
        let m = MatrixFile::parse("%%bbm v1\nfield 7\nsize 3\nkind sparse\nnnz 1\n1 2 3\n").unwrap();
        assert_eq!(m.to_dense().unwrap().get(0, 1), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = MatrixFile::parse("%%bbm v1\nfield 5\nsize 2\nkind dense\n1 2\n3 9\n").unwrap_err();
        assert_eq!(e, FormatError::Parse { line: 6, msg: "9 is not an element of GF(5)".into() });
        assert!(matches!(MatrixFile::parse("%%bbm v1\nfield 6\nsize 1\nkind dense\n0\n"), Err(FormatError::Field(_))));
    }
}
