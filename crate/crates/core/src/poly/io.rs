//! Plain-text polynomial format: one term per line, `coeff ex ey ez`.

use super::{Poly, TriPoly};
use crate::num::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyParseError {
    #[error("line {line}: expected `coeff ex ey ez`")]
    Shape { line: usize },
    #[error("line {line}: bad coefficient `{text}`")]
    Coefficient { line: usize, text: String },
    #[error("line {line}: bad exponent `{text}`")]
    Exponent { line: usize, text: String },
    #[error("polynomial is identically zero")]
    Zero,
}

/// Parses the term list; blank lines and `#` comments are skipped.
pub fn parse_poly(text: &str) -> Result<TriPoly, PolyParseError> {
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(PolyParseError::Shape { line: i + 1 });
        }
        let c = parse_rational(parts[0])
            .ok_or_else(|| PolyParseError::Coefficient { line: i + 1, text: parts[0].into() })?;
        let mut e = Vec::with_capacity(3);
        for p in &parts[1..] {
            e.push(
                p.parse::<u32>()
                    .map_err(|_| PolyParseError::Exponent { line: i + 1, text: (*p).into() })?,
            );
        }
        terms.push((e, c));
    }
    TriPoly::new(Poly::from_terms(3, terms)).map_err(|_| PolyParseError::Zero)
}

pub fn write_poly(f: &TriPoly) -> String {
    let mut s = String::new();
    for (e, c) in f.poly().terms() {
        s.push_str(&format!("{} {} {} {}\n", format_rational(c), e[0], e[1], e[2]));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = parse_poly("# torus-ish\n1 0 0 2\n-1/2 1 0 0\n3 0 1 1\n").unwrap();
        assert_eq!(parse_poly(&write_poly(&f)).unwrap(), f);
        assert_eq!(f.degree(), 2);
        assert!(matches!(parse_poly("1 0 0"), Err(PolyParseError::Shape { line: 1 })));
        assert!(matches!(parse_poly("1 0 0 1\n-1 0 0 1"), Err(PolyParseError::Zero)));
    }
}
