//! Text format for coset families.
//!
//! One coset per line; `#` starts a comment. A line is an optional offset
//! followed by a lattice:
//!
//! ```text
//! (0,1,0) + 2Z x 2Z x Z
//! (0,0,0) + lattice[(2,0,0); (0,2,0); (1,1,1)]
//! 1 + 4Z
//! 3Z x Z
//! ```
//!
//! The offset is a parenthesized vector, or a bare integer in dimension 1,
//! and defaults to the origin. Cartesian factors are `aZ` (or `Z` for
//! `a = 1`) joined by `x`, `X` or `×`. General lattices list generator rows.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use sublattice_tiling::{make_coset, CartesianLattice, Coset, Lattice, TilingInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {reason}")]
    Syntax {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("line {line}, column {column}: modulus must be positive")]
    ZeroModulus { line: usize, column: usize },

    #[error("line {line}: dimension {found} does not match dimension {expected} of earlier lines")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: lattice rows are linearly dependent")]
    SingularLattice { line: usize },

    #[error("no cosets found")]
    Empty,
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax { line, .. }
            | FormatError::ZeroModulus { line, .. }
            | FormatError::DimensionMismatch { line, .. }
            | FormatError::SingularLattice { line } => Some(*line),
            FormatError::Empty => None,
        }
    }
}

/// A parsed file: its dimension and cosets in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingDocument {
    pub dim: usize,
    pub entries: Vec<Coset>,
}

impl TilingDocument {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut dim = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let coset = parse_line(body, line)?;
            match dim {
                None => dim = Some(coset.dim()),
                Some(expected) if expected != coset.dim() => {
                    return Err(FormatError::DimensionMismatch {
                        line,
                        expected,
                        found: coset.dim(),
                    })
                }
                Some(_) => {}
            }
            entries.push(coset);
        }
        let dim = dim.ok_or(FormatError::Empty)?;
        Ok(Self { dim, entries })
    }

    pub fn from_instance(t: &TilingInstance) -> Self {
        Self {
            dim: t.dim(),
            entries: t.tiles().to_vec(),
        }
    }

    pub fn to_instance(&self) -> TilingInstance {
        TilingInstance::new(self.entries.clone()).expect("non-empty, one dimension")
    }
}

impl fmt::Display for TilingDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# dimension {}, {} cosets", self.dim, self.entries.len())?;
        for c in &self.entries {
            writeln!(f, "{}", coset_text(c))?;
        }
        Ok(())
    }
}

pub fn parse_tiling(text: &str) -> Result<TilingInstance, FormatError> {
    TilingDocument::parse(text).map(|d| d.to_instance())
}

pub fn render_text(t: &TilingInstance) -> String {
    TilingDocument::from_instance(t).to_string()
}

fn vector_text(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn lattice_text(l: &Lattice) -> String {
    match l.as_cartesian() {
        Some(c) => {
            let parts: Vec<String> = c
                .moduli()
                .iter()
                .map(|a| {
                    if a.is_one() {
                        "Z".into()
                    } else {
                        format!("{a}Z")
                    }
                })
                .collect();
            parts.join(" x ")
        }
        None => {
            let rows: Vec<String> = l
                .basis()
                .row_vecs()
                .iter()
                .map(|r| vector_text(r))
                .collect();
            format!("lattice[{}]", rows.join("; "))
        }
    }
}

pub fn coset_text(c: &Coset) -> String {
    format!("{} + {}", vector_text(c.rep()), lattice_text(c.lattice()))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Plus,
    Times,
    Z,
    Lattice,
    Int(BigInt),
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Int(n)) => format!("'{n}'"),
        Some(Tok::Lattice) => "'lattice'".into(),
        Some(t) => {
            let s = match t {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Comma => ",",
                Tok::Semi => ";",
                Tok::Plus => "+",
                Tok::Times => "x",
                _ => "Z",
            };
            format!("'{s}'")
        }
    }
}

fn lex(body: &str, line: usize) -> Result<Vec<(Tok, usize)>, FormatError> {
    let chars: Vec<char> = body.chars().collect();
    let err = |column: usize, reason: String| FormatError::Syntax {
        line,
        column,
        reason,
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '+' => Some(Tok::Plus),
            '×' => Some(Tok::Times),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n: BigInt = s.parse().expect("digits with optional sign");
            out.push((Tok::Int(n), col));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() && chars[i] != '×' {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word == "lattice" {
                out.push((Tok::Lattice, col));
                continue;
            }
            // runs such as "Zx" are read letter by letter
            for (k, ch) in word.chars().enumerate() {
                let tok = match ch {
                    'Z' => Tok::Z,
                    'x' | 'X' => Tok::Times,
                    _ => return Err(err(start + k + 1, format!("unexpected '{ch}'"))),
                };
                out.push((tok, start + k + 1));
            }
        } else {
            return Err(err(col, format!("unexpected '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, FormatError> {
        Err(FormatError::Syntax {
            line: self.line,
            column: self.column(),
            reason: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FormatError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn int(&mut self) -> Result<BigInt, FormatError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("an integer"),
        }
    }

    fn vector(&mut self) -> Result<Vec<BigInt>, FormatError> {
        self.expect(Tok::LParen, "'('")?;
        let mut v = vec![self.int()?];
        while self.eat(&Tok::Comma) {
            v.push(self.int()?);
        }
        self.expect(Tok::RParen, "',' or ')'")?;
        Ok(v)
    }

    fn lattice(&mut self) -> Result<Lattice, FormatError> {
        if self.eat(&Tok::Lattice) {
            self.expect(Tok::LBracket, "'['")?;
            let start = self.column();
            let mut rows = vec![self.vector()?];
            while self.eat(&Tok::Semi) {
                rows.push(self.vector()?);
            }
            self.expect(Tok::RBracket, "';' or ']'")?;
            let d = rows.len();
            if let Some(bad) = rows.iter().position(|r| r.len() != d) {
                return Err(FormatError::Syntax {
                    line: self.line,
                    column: start,
                    reason: format!(
                        "row {} has {} entries; a lattice with {d} rows needs {d}",
                        bad + 1,
                        rows[bad].len()
                    ),
                });
            }
            return Lattice::from_generators(rows, d)
                .map_err(|_| FormatError::SingularLattice { line: self.line });
        }
        let mut moduli = vec![self.factor()?];
        while self.eat(&Tok::Times) {
            moduli.push(self.factor()?);
        }
        Ok(CartesianLattice::new(moduli)
            .expect("moduli checked positive")
            .to_lattice())
    }

    fn factor(&mut self) -> Result<BigInt, FormatError> {
        let col = self.column();
        let a = match self.peek() {
            Some(Tok::Int(_)) => self.int()?,
            Some(Tok::Z) => BigInt::one(),
            _ => return self.fail("a factor such as '2Z' or 'Z'"),
        };
        self.expect(Tok::Z, "'Z'")?;
        if !a.is_positive() {
            return Err(FormatError::ZeroModulus {
                line: self.line,
                column: col,
            });
        }
        Ok(a)
    }
}

fn parse_line(body: &str, line: usize) -> Result<Coset, FormatError> {
    let toks = lex(body, line)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col: body.chars().count() + 1,
    };
    let offset_col = p.column();
    let offset = match (p.peek(), p.toks.get(1).map(|t| &t.0)) {
        (Some(Tok::LParen), _) => {
            let v = p.vector()?;
            p.expect(Tok::Plus, "'+'")?;
            Some(v)
        }
        (Some(Tok::Int(_)), Some(Tok::Plus)) => {
            let v = vec![p.int()?];
            p.pos += 1;
            Some(v)
        }
        _ => None,
    };
    let lat = p.lattice()?;
    if p.peek().is_some() {
        return p.fail("end of line");
    }
    let v = offset.unwrap_or_else(|| vec![BigInt::from(0); lat.dim()]);
    if v.len() != lat.dim() {
        return Err(FormatError::Syntax {
            line,
            column: offset_col,
            reason: format!(
                "offset has {} components but the lattice has dimension {}",
                v.len(),
                lat.dim()
            ),
        });
    }
    Ok(make_coset(&lat, &v).expect("dimensions checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn cartesian_line() {
        let d = TilingDocument::parse("(0,1,0) + 2Z x 2Z x Z").unwrap();
        assert_eq!(d.dim, 3);
        let c = &d.entries[0];
        assert_eq!(c.rep(), big(&[0, 1, 0]).as_slice());
        assert_eq!(
            c.lattice().as_cartesian().unwrap().moduli(),
            big(&[2, 2, 1]).as_slice()
        );
    }

    #[test]
    fn separators_and_shorthands() {
        let a = TilingDocument::parse("(1,0) + 2Z × 3Z").unwrap();
        let b = TilingDocument::parse("(1,0)+2ZX3Z").unwrap();
        let c = TilingDocument::parse("(1, 0) + 2Z x 3Z   # trailing comment").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let bare = TilingDocument::parse("5 + 4Z\nZ").unwrap();
        assert_eq!(bare.entries[0].rep(), big(&[1]).as_slice());
        assert_eq!(bare.entries[1].index(), &BigInt::one());
    }

    #[test]
    fn general_lattice_line() {
        let d = TilingDocument::parse("(0,0,0) + lattice[(2,0,0); (0,2,0); (1,1,1)]").unwrap();
        let c = &d.entries[0];
        assert_eq!(c.index(), &BigInt::from(4));
        assert!(!c.is_cartesian());
        assert!(c.contains(&big(&[1, 1, 1])));
        assert!(!c.contains(&big(&[1, 0, 0])));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            TilingDocument::parse("(0) + 0Z"),
            Err(FormatError::ZeroModulus { line: 1, column: 7 })
        );
        assert!(matches!(
            TilingDocument::parse("(0) + -3Z"),
            Err(FormatError::ZeroModulus { .. })
        ));
        let e = TilingDocument::parse("# header\n(0,1 + 2Z x Z").unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::Syntax {
                    line: 2,
                    column: 6,
                    ..
                }
            ),
            "{e}"
        );
        let e = TilingDocument::parse("(0) + 2Z\n(0,0) + Z x Z").unwrap_err();
        assert_eq!(
            e,
            FormatError::DimensionMismatch {
                line: 2,
                expected: 1,
                found: 2
            }
        );
        let e = TilingDocument::parse("(0,0) + 2Z").unwrap_err();
        assert!(matches!(
            e,
            FormatError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        assert!(matches!(
            TilingDocument::parse("lattice[(1,2); (2,4)]"),
            Err(FormatError::SingularLattice { line: 1 })
        ));
        assert!(matches!(
            TilingDocument::parse("2Z q"),
            Err(FormatError::Syntax { column: 4, .. })
        ));
        assert_eq!(
            TilingDocument::parse("# nothing\n\n"),
            Err(FormatError::Empty)
        );
    }

    #[test]
    fn render_then_parse() {
        let text = "(3) + 4Z\n(1,1) + lattice[(2,0); (1,1)]\n";
        let e = TilingDocument::parse(text).unwrap_err();
        assert!(matches!(e, FormatError::DimensionMismatch { .. }));
        let d = TilingDocument::parse("(1,1) + lattice[(2,0); (1,1)]\n(0,1) + Z x 2Z").unwrap();
        let again = TilingDocument::parse(&d.to_string()).unwrap();
        assert_eq!(d, again);
        assert_eq!(
            d.to_string(),
            "# dimension 2, 2 cosets\n(0,0) + lattice[(1,1); (0,2)]\n(0,1) + Z x 2Z\n"
        );
    }
}
