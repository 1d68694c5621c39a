//! Text formats: Matrix Market (array and coordinate) for float matrices and
//! a plain exact format for rationals.
//!
//! The exact format is a header line `m n` followed by m lines of n entries,
//! each an integer or `p/q`. Blank lines and lines starting with `#` are
//! ignored. Floats are written in shortest round-trip form, so both formats
//! reproduce their input bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{FloatMatrix, RatMatrix};
use crate::scalar::Rational;

const MM_BANNER: &str = "%%MatrixMarket";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing value"))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad value {tok:?}")))
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

pub fn parse_matrix_market(text: &str) -> Result<FloatMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5 || fields[0] != MM_BANNER.to_lowercase() || fields[1] != "matrix" {
        return Err(parse_err(1, "expected %%MatrixMarket matrix <format> <field> <symmetry>"));
    }
    let coordinate = match fields[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(1, format!("unsupported format {other}"))),
    };
    match fields[3].as_str() {
        "real" | "double" | "integer" => {}
        other => return Err(parse_err(1, format!("unsupported field {other}"))),
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry {other}"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let mut toks = size.split_whitespace();
    let m = parse_usize(toks.next(), size_line, "row count")?;
    let n = parse_usize(toks.next(), size_line, "column count")?;
    let mut a = FloatMatrix::zeros(m, n);

    if coordinate {
        let nnz = parse_usize(toks.next(), size_line, "entry count")?;
        let mut seen = 0;
        for (ln, l) in body {
            let mut t = l.split_whitespace();
            let i = parse_usize(t.next(), ln, "row index")?;
            let j = parse_usize(t.next(), ln, "column index")?;
            let v = parse_f64(t.next(), ln)?;
            if i == 0 || j == 0 || i > m || j > n {
                return Err(parse_err(ln, format!("index ({i}, {j}) outside {m}x{n}")));
            }
            a[(i - 1, j - 1)] = v;
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric if i != j => a[(j - 1, i - 1)] = v,
                Symmetry::SkewSymmetric if i != j => a[(j - 1, i - 1)] = -v,
                _ => {}
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
        }
    } else {
        // column-major; symmetric variants store the lower triangle only
        let mut positions = Vec::with_capacity(m * n);
        for j in 0..n {
            for i in 0..m {
                let keep = match symmetry {
                    Symmetry::General => true,
                    Symmetry::Symmetric => i >= j,
                    Symmetry::SkewSymmetric => i > j,
                };
                if keep {
                    positions.push((i, j));
                }
            }
        }
        let mut values = body.flat_map(|(ln, l)| l.split_whitespace().map(move |t| (ln, t)));
        for &(i, j) in &positions {
            let (ln, tok) = values
                .next()
                .ok_or_else(|| parse_err(size_line, "too few array entries"))?;
            let v = parse_f64(Some(tok), ln)?;
            a[(i, j)] = v;
            match symmetry {
                Symmetry::Symmetric if i != j => a[(j, i)] = v,
                Symmetry::SkewSymmetric => a[(j, i)] = -v,
                _ => {}
            }
        }
        if let Some((ln, _)) = values.next() {
            return Err(parse_err(ln, "too many array entries"));
        }
    }
    Ok(a)
}

/// Dense `array real general`, column-major.
pub fn write_matrix_market_array(a: &FloatMatrix) -> String {
    let mut out = format!("{MM_BANNER} matrix array real general\n{} {}\n", a.rows(), a.cols());
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let _ = writeln!(out, "{:e}", a[(i, j)]);
        }
    }
    out
}

/// `coordinate real general` with the nonzero entries in column-major order.
pub fn write_matrix_market_coordinate(a: &FloatMatrix) -> String {
    let mut entries = String::new();
    let mut nnz = 0;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let v = a[(i, j)];
            // -0.0 is kept so the round trip is bit-exact
            if v != 0.0 || v.is_sign_negative() {
                let _ = writeln!(entries, "{} {} {:e}", i + 1, j + 1, v);
                nnz += 1;
            }
        }
    }
    format!(
        "{MM_BANNER} matrix coordinate real general\n{} {} {nnz}\n{entries}",
        a.rows(),
        a.cols()
    )
}

fn exact_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

pub fn parse_rational_text(text: &str) -> Result<RatMatrix> {
    let mut lines = exact_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    let m = parse_usize(toks.next(), hl, "row count")?;
    let n = parse_usize(toks.next(), hl, "column count")?;
    if toks.next().is_some() {
        return Err(parse_err(hl, "header must be `m n`"));
    }
    let mut data = Vec::with_capacity(m * n);
    if n > 0 {
        for row in 0..m {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("expected {m} rows, found {row}")))?;
            let before = data.len();
            for tok in l.split_whitespace() {
                let v: Rational = tok
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad rational {tok:?}")))?;
                data.push(v);
            }
            if data.len() - before != n {
                return Err(parse_err(ln, format!("expected {n} entries, found {}", data.len() - before)));
            }
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after matrix"));
    }
    RatMatrix::new(m, n, data)
}

pub fn write_rational_text(a: &RatMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    if a.cols() > 0 {
        out.push_str(&a.to_string());
    }
    out
}

pub fn is_matrix_market(text: &str) -> bool {
    text.trim_start().starts_with(MM_BANNER)
}

/// Float matrix from either Matrix Market or the exact text format.
pub fn parse_float_any(text: &str) -> Result<FloatMatrix> {
    if is_matrix_market(text) {
        parse_matrix_market(text)
    } else {
        Ok(parse_rational_text(text)?.to_f64())
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_rational(path: &Path) -> Result<RatMatrix> {
    parse_rational_text(&read_text(path)?)
}

pub fn read_float(path: &Path) -> Result<FloatMatrix> {
    parse_float_any(&read_text(path)?)
}
