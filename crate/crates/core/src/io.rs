//! Matrix files: JSON `{"rows", "cols", "data": [[re, im], …]}` written with
//! 17 significant digits, plus a CSV fallback of `re+imj` tokens.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matkit::{Matrix, C64};
use crate::numrange::SupportProfile;

fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical JSON text for `m`; parsing it back is bit-exact.
pub fn matrix_to_json(m: &Matrix) -> String {
    let mut out = format!("{{\"rows\": {}, \"cols\": {}, \"data\": [", m.rows(), m.cols());
    for (i, z) in m.data().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "[{}, {}]", float17(z.re), float17(z.im));
    }
    out.push_str("]}\n");
    out
}

/// Reads either the JSON format or CSV rows of complex tokens.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()));
    }
    parse_csv(text)
}

fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| parse_complex(tok).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "line {}: {} entries, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    let data = rows.iter().flatten().copied().collect();
    Matrix::new(rows.len(), cols, data)
}

/// Parses `1.5`, `-2j`, `0.3+0.4j`, `1e-3-2.5E-2i` and similar tokens.
pub fn parse_complex(token: &str) -> std::result::Result<C64, String> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty entry".into());
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("invalid number `{s}` in `{token}`"));
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(s),
    };
    match split {
        Some(i) => Ok(C64::new(num(&body[..i])?, imag(&body[i..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(m)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EigEntry {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EigFile {
    List(Vec<EigEntry>),
    Wrapped { eigenvalues: Vec<EigEntry> },
}

/// Eigenvalue lists: a JSON array (or `{"eigenvalues": [...]}`) whose
/// entries are numbers, `[re, im]` pairs or complex strings.
pub fn parse_eigenvalues(text: &str) -> Result<Vec<C64>> {
    let file: EigFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let entries = match file {
        EigFile::List(v) | EigFile::Wrapped { eigenvalues: v } => v,
    };
    entries
        .into_iter()
        .map(|e| match e {
            EigEntry::Real(x) => Ok(C64::new(x, 0.0)),
            EigEntry::Pair([re, im]) => Ok(C64::new(re, im)),
            EigEntry::Text(s) => parse_complex(&s).map_err(Error::Parse),
        })
        .collect()
}

/// `theta,r,re_z,im_z` rows with 17 significant digits.
pub fn profile_to_csv(profile: &SupportProfile) -> String {
    let mut out = String::from("theta,r,re_z,im_z\n");
    for s in &profile.samples {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            float17(s.theta),
            float17(s.r),
            float17(s.boundary_point.re),
            float17(s.boundary_point.im)
        );
    }
    out
}
