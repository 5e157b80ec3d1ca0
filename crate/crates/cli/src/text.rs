//! Line-oriented tokenizing shared by the file formats.

use std::fmt::Write as _;
use std::str::FromStr;

use bbcert::field::{Field, FieldError, Poly, Scalar};
use bbcert::matrix::Matrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Cursor over the non-blank lines of a text, split on whitespace.
pub struct Lines<'t> {
    lines: Vec<(usize, Vec<&'t str>)>,
    pos: usize,
}

impl<'t> Lines<'t> {
    pub fn new(text: &'t str) -> Lines<'t> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    /// Line number of the most recent line, or of the end of input.
    pub fn line(&self) -> usize {
        match self.pos.checked_sub(1).and_then(|i| self.lines.get(i)) {
            Some((n, _)) => *n,
            None => self.lines.last().map_or(1, |(n, _)| *n),
        }
    }

    pub fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Parse { line: self.line(), msg: msg.into() }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.lines.len()
    }

    pub fn peek_key(&self) -> Option<&'t str> {
        self.lines.get(self.pos).map(|(_, t)| t[0])
    }

    pub fn next(&mut self) -> Result<Vec<&'t str>, FormatError> {
        let (_, toks) = self.lines.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(toks)
    }

    /// The next line, which must start with `key`; returns the other tokens.
    pub fn expect(&mut self, key: &str) -> Result<Vec<&'t str>, FormatError> {
        let toks = self.next()?;
        if toks[0] != key {
            return Err(self.err(format!("expected `{key}`, found `{}`", toks[0])));
        }
        Ok(toks[1..].to_vec())
    }

    /// A line `key <value>`.
    pub fn value<T: FromStr>(&mut self, key: &str) -> Result<T, FormatError> {
        let rest = self.expect(key)?;
        if rest.len() != 1 {
            return Err(self.err(format!("`{key}` takes one value")));
        }
        self.num(rest[0])
    }

    pub fn num<T: FromStr>(&self, tok: &str) -> Result<T, FormatError> {
        tok.parse().map_err(|_| self.err(format!("bad number `{tok}`")))
    }

    pub fn nums<T: FromStr>(&self, toks: &[&str]) -> Result<Vec<T>, FormatError> {
        toks.iter().map(|t| self.num(t)).collect()
    }

    /// Field elements, checked against `field`.
    pub fn scalars(&self, field: &Field, toks: &[&str]) -> Result<Vec<Scalar>, FormatError> {
        let xs: Vec<Scalar> = self.nums(toks)?;
        if let Some(x) = xs.iter().find(|&&x| !field.contains(x)) {
            return Err(self.err(format!("{x} is not an element of GF({})", field.order())));
        }
        Ok(xs)
    }

    /// `rows` lines of `cols` field elements each.
    pub fn matrix_rows(&mut self, field: &Field, rows: usize, cols: usize) -> Result<Matrix, FormatError> {
        let mut data = Vec::with_capacity(rows * cols);
        if cols == 0 {
            return Ok(Matrix::zeros(rows, 0));
        }
        for _ in 0..rows {
            let toks = self.next()?;
            if toks.len() != cols {
                return Err(self.err(format!("expected {cols} entries, found {}", toks.len())));
            }
            data.extend(self.scalars(field, &toks)?);
        }
        Ok(Matrix::from_vec(rows, cols, data))
    }

    /// A section `key <rows> <cols>` followed by its rows.
    pub fn matrix(&mut self, field: &Field, key: &str) -> Result<Matrix, FormatError> {
        let rest = self.expect(key)?;
        if rest.len() != 2 {
            return Err(self.err(format!("`{key}` takes a row and a column count")));
        }
        let (rows, cols) = (self.num(rest[0])?, self.num(rest[1])?);
        self.matrix_rows(field, rows, cols)
    }

    /// `poly <deg> <c0> ... <cd>` starting at `toks[0]`; degree `-1` is zero.
    pub fn poly(&self, field: &Field, toks: &[&str]) -> Result<Poly, FormatError> {
        if toks.len() < 2 || toks[0] != "poly" {
            return Err(self.err("expected `poly <deg> <coefficients>`"));
        }
        let deg: i64 = self.num(toks[1])?;
        let coeffs = self.scalars(field, &toks[2..])?;
        if deg < -1 || coeffs.len() as i64 != deg + 1 {
            return Err(self.err(format!("polynomial of degree {deg} needs {} coefficients", deg + 1)));
        }
        if deg >= 0 && coeffs[deg as usize] == 0 {
            return Err(self.err("leading coefficient is zero"));
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// A line `key poly <deg> <coefficients>`.
    pub fn labelled_poly(&mut self, field: &Field, key: &str) -> Result<Poly, FormatError> {
        let rest = self.expect(key)?;
        self.poly(field, &rest)
    }

    pub fn field(&mut self) -> Result<Field, FormatError> {
        let rest = self.expect("field")?;
        match rest.as_slice() {
            [q] => Ok(Field::new(self.num(q)?)?),
            ["ext", p, e, coeffs @ ..] => {
                let p: u64 = self.num(p)?;
                let e: usize = self.num(e)?;
                if coeffs.len() != e + 1 {
                    return Err(self.err(format!("extension of degree {e} needs {} modulus coefficients", e + 1)));
                }
                let m: Vec<u64> = self.nums(coeffs)?;
                Ok(Field::with_modulus(p, &m)?)
            }
            _ => Err(self.err("expected `field <q>` or `field ext <p> <e> <c0> ... <ce>`")),
        }
    }

    pub fn finish(&self) -> Result<(), FormatError> {
        if self.at_end() {
            Ok(())
        } else {
            let (line, toks) = &self.lines[self.pos];
            Err(FormatError::Parse { line: *line, msg: format!("unexpected `{}`", toks[0]) })
        }
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_field(out: &mut String, f: &Field) {
    if f.is_prime_field() {
        writeln!(out, "field {}", f.order()).unwrap();
    } else {
        writeln!(out, "field ext {} {} {}", f.characteristic(), f.degree(), join(&f.modulus())).unwrap();
    }
}

pub fn write_rows(out: &mut String, m: &Matrix) {
    if m.cols() == 0 {
        return;
    }
    for i in 0..m.rows() {
        writeln!(out, "{}", join(m.row(i))).unwrap();
    }
}

pub fn write_matrix(out: &mut String, key: &str, m: &Matrix) {
    writeln!(out, "{key} {} {}", m.rows(), m.cols()).unwrap();
    write_rows(out, m);
}

pub fn poly_text(p: &Poly) -> String {
    let c = p.coeffs();
    if c.is_empty() {
        "poly -1".to_string()
    } else {
        format!("poly {} {}", c.len() - 1, join(c))
    }
}
