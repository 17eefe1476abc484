//! Stabilizer file format.
//!
//! ```text
//! # comment
//! D=4 n=2
//! w^2 X1^3 Z2^2
//! X2^2
//! ```
//!
//! The header gives the qudit dimension and count; every further nonempty,
//! non-`#` line is one generator in the Pauli text grammar.

use crate::checkmatrix::StabilizerPresentation;
use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::pauli::PauliProduct;

fn parse_header(line: &str, offset: usize) -> Result<(Modulus, usize)> {
    let mut d = None;
    let mut n = None;
    for field in line.split_whitespace() {
        let field_offset = offset + (field.as_ptr() as usize - line.as_ptr() as usize);
        let bad = |message: &str| Error::Syntax {
            position: field_offset,
            message: message.to_string(),
        };
        let (key, value) = field.split_once('=').ok_or_else(|| bad("expected key=value in header"))?;
        let value: u64 = value.trim().parse().map_err(|_| bad("header value is not an integer"))?;
        match key.trim() {
            "D" => d = Some(value),
            "n" => n = Some(value),
            _ => return Err(bad("unknown header key (expected D and n)")),
        }
    }
    let missing = |what: &str| Error::Syntax {
        position: offset,
        message: format!("header is missing {what}"),
    };
    let d = Modulus::new(d.ok_or_else(|| missing("D"))?)?;
    let n = n.ok_or_else(|| missing("n"))?;
    if n == 0 {
        return Err(Error::Syntax {
            position: offset,
            message: "n must be at least 1".into(),
        });
    }
    Ok((d, n as usize))
}

/// Splits text into `(byte offset, trimmed line)` for content lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').scan(0usize, |offset, raw| {
        let start = *offset;
        *offset += raw.len() + 1;
        Some((start, raw))
    })
    .filter_map(|(start, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            let lead = raw.len() - raw.trim_start().len();
            Some((start + lead, trimmed))
        }
    })
}

pub fn parse_stabilizer_file(text: &str) -> Result<StabilizerPresentation> {
    let mut lines = content_lines(text);
    let (offset, header) = lines.next().ok_or(Error::Syntax {
        position: 0,
        message: "missing 'D=<int> n=<int>' header".into(),
    })?;
    let (modulus, n) = parse_header(header, offset)?;
    let gens = lines
        .map(|(offset, line)| {
            PauliProduct::parse(line, modulus, n).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: offset + position,
                    message,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    StabilizerPresentation::from_generators(&gens)
}

pub fn format_stabilizer_file(s: &StabilizerPresentation) -> String {
    let mut out = format!("D={} n={}\n", s.modulus(), s.num_qudits());
    for g in s.to_generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// 1-based line and column of a byte offset, for error messages.
pub fn line_col(text: &str, position: usize) -> (usize, usize) {
    let before = &text[..position.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}
