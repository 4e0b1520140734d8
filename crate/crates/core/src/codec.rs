//! Compact coefficient strings: one character per coefficient, ascending
//! powers of x from left to right. "0" is the zero polynomial.

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};

pub fn parse_coeffs(text: &str, field: Field) -> Result<Poly> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::parse(0, "empty coefficient string"));
    }
    let mut coeffs = Vec::with_capacity(text.len());
    for (i, c) in text.chars().enumerate() {
        let x = field
            .parse_char(c)
            .ok_or_else(|| Error::parse(i, format!("{c:?} is not an element of GF({})", field.q())))?;
        coeffs.push(x);
    }
    Ok(Poly::new(field, coeffs))
}

pub fn render_coeffs(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field();
    p.coeffs().iter().map(|&c| field.name(c)).collect()
}

/// Comma-separated list of coefficient strings.
pub fn parse_list(text: &str, field: Field) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_coeffs(part, field).map_err(|e| match e {
            Error::ParseError { position, message } => Error::ParseError {
                position: offset + position + (part.len() - part.trim_start().len()),
                message,
            },
            other => other,
        })?);
        offset += part.len() + 1;
    }
    Ok(out)
}

pub fn render_list(polys: &[Poly]) -> String {
    polys.iter().map(render_coeffs).collect::<Vec<_>>().join(",")
}
