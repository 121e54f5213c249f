//! Lossless text form of matrices and vectors.
//!
//! An entry is `c0|c1`, each half a comma-joined list of coefficients of
//! `1, x, …, x^{d−1}`. A missing `|c1` means `c₁ = 0` and short lists are
//! zero-padded. Entries in a row are separated by whitespace, rows by `;`.
//! Example over `F₃[t]/(t²)`: `0|0 1|0; 2|0 0|1`.

use super::{LinalgError, Matrix, Vector};
use crate::galois::{Coeffs, ZERO_COEFFS};
use crate::ring::{Element, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("cannot parse entry `{entry}`: {reason}")]
    Entry { entry: String, reason: String },
    #[error(transparent)]
    Shape(#[from] LinalgError),
}

fn entry_err(entry: &str, reason: impl Into<String>) -> TextError {
    TextError::Entry {
        entry: entry.to_string(),
        reason: reason.into(),
    }
}

fn parse_half(ring: &Ring, entry: &str, half: &str) -> Result<Coeffs, TextError> {
    let d = ring.degree();
    let mut out = ZERO_COEFFS;
    let parts: Vec<&str> = half.split(',').map(str::trim).collect();
    if parts.len() > d {
        return Err(entry_err(entry, format!("more than {d} coefficients")));
    }
    for (i, part) in parts.iter().enumerate() {
        let v: i64 = part
            .parse()
            .map_err(|_| entry_err(entry, format!("`{part}` is not an integer")))?;
        let m = ring.base().modulus() as i64;
        out[i] = v.rem_euclid(m) as u32;
    }
    Ok(out)
}

pub fn parse_element(ring: &Ring, entry: &str) -> Result<Element, TextError> {
    let (c0, c1) = match entry.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (entry, None),
    };
    let c0 = parse_half(ring, entry, c0)?;
    let c1 = match c1 {
        Some(b) => parse_half(ring, entry, b)?,
        None => ZERO_COEFFS,
    };
    if ring.t_precision() == 0 && c1 != ZERO_COEFFS {
        return Err(entry_err(entry, "this ring has no t, so c1 must be 0"));
    }
    Ok(ring.canonical(&c0, &c1))
}

pub fn format_element(ring: &Ring, a: &Element) -> String {
    let d = ring.degree();
    let join = |c: &Coeffs| c[..d].iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    format!("{}|{}", join(a.c0()), join(a.c1()))
}

/// Rows separated by `;` or newlines, entries by other whitespace.
pub fn parse_matrix(ring: &Ring, text: &str) -> Result<Matrix, TextError> {
    let rows = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| row.split_whitespace().map(|e| parse_element(ring, e)).collect())
        .collect::<Result<Vec<Vec<Element>>, TextError>>()?;
    Ok(Matrix::from_rows(ring, rows)?)
}

pub fn format_matrix(m: &Matrix) -> String {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| format_element(m.ring(), m.get(i, j)))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Coordinates separated by whitespace or `;`.
pub fn parse_vector(ring: &Ring, text: &str) -> Result<Vector, TextError> {
    let coords = text
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|e| !e.is_empty())
        .map(|e| parse_element(ring, e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(ring, coords)?)
}

pub fn format_vector(v: &Vector) -> String {
    v.coords()
        .iter()
        .map(|a| format_element(v.ring(), a))
        .collect::<Vec<_>>()
        .join(" ")
}
