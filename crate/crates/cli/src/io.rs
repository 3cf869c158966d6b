//! Dense matrix input and output: Matrix Market "array" files and CSV.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use pseudoeig::{ComplexMatrix, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Dimension(String),
}

impl ReadError {
    pub fn kind(&self) -> &'static str {
        match self {
            ReadError::Io { .. } => "io",
            ReadError::Parse { .. } => "parse",
            ReadError::Dimension(_) => "dimension",
        }
    }

    fn parse(line: usize, message: impl Into<String>) -> Self {
        ReadError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    MatrixMarket,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mm" | "mtx" | "matrix-market" => Ok(Format::MatrixMarket),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown matrix format '{other}' (expected mm or csv)")),
        }
    }
}

impl Format {
    /// Guesses from the file extension; Matrix Market unless it ends in `.csv`.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::MatrixMarket,
        }
    }
}

pub fn read_matrix(path: &Path, format: Format) -> Result<ComplexMatrix, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text, format)
}

pub fn parse_matrix(text: &str, format: Format) -> Result<ComplexMatrix, ReadError> {
    match format {
        Format::MatrixMarket => parse_matrix_market(text),
        Format::Csv => parse_csv(text),
    }
}

fn number(token: &str, line: usize) -> Result<f64, ReadError> {
    let v: f64 = token
        .parse()
        .map_err(|_| ReadError::parse(line, format!("'{token}' is not a number")))?;
    if !v.is_finite() {
        return Err(ReadError::parse(line, format!("'{token}' is not finite")));
    }
    Ok(v)
}

/// Parses `%%MatrixMarket matrix array real|complex general`. Entries are
/// listed column by column, one per line (`re` or `re im`).
pub fn parse_matrix_market(text: &str) -> Result<ComplexMatrix, ReadError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| ReadError::parse(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(ReadError::parse(1, "missing %%MatrixMarket header"));
    }
    if words.len() != 5 || words[1] != "matrix" {
        return Err(ReadError::parse(1, format!("malformed header '{header}'")));
    }
    if words[2] != "array" {
        return Err(ReadError::parse(1, format!("only the array format is supported, got '{}'", words[2])));
    }
    let complex = match words[3].as_str() {
        "real" => false,
        "complex" => true,
        f => return Err(ReadError::parse(1, format!("unsupported field '{f}'"))),
    };
    if words[4] != "general" {
        return Err(ReadError::parse(1, format!("unsupported symmetry '{}'", words[4])));
    }

    let mut content = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = content.next().ok_or_else(|| ReadError::parse(2, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(ReadError::parse(size_line, "size line must be 'rows cols'"));
    }
    let parse_dim = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| ReadError::parse(size_line, format!("'{t}' is not a dimension")))
    };
    let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);

    let expected = rows * cols;
    let mut entries = Vec::with_capacity(expected);
    let mut last_line = size_line;
    for (line, l) in content {
        last_line = line;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let want = if complex { 2 } else { 1 };
        if tokens.len() != want {
            return Err(ReadError::parse(line, format!("expected {want} value(s), found {}", tokens.len())));
        }
        if entries.len() == expected {
            return Err(ReadError::Dimension(format!(
                "header declares {rows}x{cols} = {expected} entries but line {line} holds another"
            )));
        }
        let re = number(tokens[0], line)?;
        let im = if complex { number(tokens[1], line)? } else { 0.0 };
        entries.push(C64::new(re, im));
    }
    if entries.len() != expected {
        return Err(ReadError::Dimension(format!(
            "header declares {rows}x{cols} = {expected} entries, found {} (through line {last_line})",
            entries.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| entries[j * rows + i]))
}

/// Parses one CSV field: `a`, `a+bi`, `a-bi`, `bi` or `i`.
pub fn parse_complex(field: &str, line: usize) -> Result<C64, ReadError> {
    let t = field.trim();
    if t.is_empty() {
        return Err(ReadError::parse(line, "empty field"));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(number(t, line)?, 0.0));
    };
    // Split at the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64, ReadError> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            s => number(s, line),
        }
    };
    match split {
        Some(p) => Ok(C64::new(number(&body[..p], line)?, imag(&body[p..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

pub fn parse_csv(text: &str) -> Result<ComplexMatrix, ReadError> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        if l.trim().is_empty() {
            continue;
        }
        let row = l
            .split(',')
            .map(|f| parse_complex(f, line))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ReadError::Dimension(format!(
                    "line {line} has {} entries, earlier rows have {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ReadError::parse(1, "no rows"));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| ReadError::Dimension(e.to_string()))
}

/// Writes the array format; `real` when every imaginary part is zero.
/// Values use the shortest representation that parses back to the same bits.
pub fn write_matrix_market(m: &ComplexMatrix) -> String {
    let complex = m.as_slice().iter().any(|z| z.im != 0.0);
    let field = if complex { "complex" } else { "real" };
    let mut out = format!("%%MatrixMarket matrix array {field} general\n{} {}\n", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m[(i, j)];
            if complex {
                let _ = writeln!(out, "{:?} {:?}", z.re, z.im);
            } else {
                let _ = writeln!(out, "{:?}", z.re);
            }
        }
    }
    out
}

pub fn write_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                if z.im == 0.0 {
                    format!("{:?}", z.re)
                } else if z.im.is_sign_negative() {
                    format!("{:?}-{:?}i", z.re, -z.im)
                } else {
                    format!("{:?}+{:?}i", z.re, z.im)
                }
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
