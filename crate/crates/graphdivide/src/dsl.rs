//! Text form of tangle products.
//!
//! Grammar:
//!   product := column ('|' column)*
//!   column  := tangle+
//!   tangle  := '<+' | '<-' | '>+' | '>-' | '(' | ')' | 'B+'INT | 'B-'INT | 'X' | '-'
//!
//! Tokens are whitespace separated, newlines count as whitespace, and `#`
//! starts a comment running to the end of the line. Tangles within a
//! column are listed top to bottom.

use crate::tangle::{validate_product, Sign, TangleKind, TangleProduct, Validated, ValidateError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DslError {
    #[error("{pos}: unrecognized token `{token}`")]
    Lex { pos: Pos, token: String },
    #[error("{pos}: {expected}")]
    Parse { pos: Pos, expected: String },
    #[error("{pos}: {source}")]
    Validate {
        pos: Pos,
        #[source]
        source: ValidateError,
    },
}

#[derive(Debug, Clone)]
enum Token {
    Tangle(TangleKind),
    Bar,
}

fn lex(src: &str) -> Result<Vec<(Token, Pos)>, DslError> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut ci = 0usize;
        for word in line.split_whitespace() {
            // Column of the word start (1-based, bytes; input is ASCII).
            let col = line[ci..].find(word).map(|o| ci + o).unwrap_or(ci) + 1;
            ci = col - 1 + word.len();
            let pos = Pos { line: li + 1, col };
            let tok = match word {
                "|" => Token::Bar,
                "<+" => Token::Tangle(TangleKind::LeftEndpoint(Sign::Plus)),
                "<-" => Token::Tangle(TangleKind::LeftEndpoint(Sign::Minus)),
                ">+" => Token::Tangle(TangleKind::RightEndpoint(Sign::Plus)),
                ">-" => Token::Tangle(TangleKind::RightEndpoint(Sign::Minus)),
                "(" => Token::Tangle(TangleKind::LeftFold),
                ")" => Token::Tangle(TangleKind::RightFold),
                "X" => Token::Tangle(TangleKind::DoublePoint),
                "-" => Token::Tangle(TangleKind::IdentityStrand),
                w if w.starts_with("B+") || w.starts_with("B-") => {
                    let n: u32 = w[2..].parse().map_err(|_| DslError::Lex {
                        pos,
                        token: w.to_string(),
                    })?;
                    if w.as_bytes()[1] == b'+' {
                        Token::Tangle(TangleKind::BranchPlus(n))
                    } else {
                        Token::Tangle(TangleKind::BranchMinus(n))
                    }
                }
                w => {
                    return Err(DslError::Lex {
                        pos,
                        token: w.to_string(),
                    })
                }
            };
            out.push((tok, pos));
        }
    }
    Ok(out)
}

/// Parse and validate. The returned value carries the strand routing.
pub fn parse(src: &str) -> Result<Validated, DslError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(DslError::Parse {
            pos: Pos { line: 1, col: 1 },
            expected: "expected at least one tangle".into(),
        });
    }
    let mut columns: Vec<Vec<TangleKind>> = vec![Vec::new()];
    // Track a representative source position per column for diagnostics.
    let mut col_pos: Vec<Pos> = vec![toks[0].1];
    for (tok, pos) in &toks {
        match tok {
            Token::Bar => {
                if columns.last().unwrap().is_empty() {
                    return Err(DslError::Parse {
                        pos: *pos,
                        expected: "expected a tangle before `|`".into(),
                    });
                }
                columns.push(Vec::new());
                col_pos.push(*pos);
            }
            Token::Tangle(t) => {
                let last = columns.len() - 1;
                if columns[last].is_empty() {
                    col_pos[last] = *pos;
                }
                columns[last].push(*t);
            }
        }
    }
    if columns.last().unwrap().is_empty() {
        let pos = toks.last().unwrap().1;
        return Err(DslError::Parse {
            pos,
            expected: "expected a tangle after trailing `|`".into(),
        });
    }
    let product = TangleProduct { columns };
    validate_product(&product).map_err(|e| {
        let pos = match &e {
            ValidateError::ArityMismatch { column, .. }
            | ValidateError::BadValence { column, .. } => {
                col_pos.get(*column).copied().unwrap_or(toks[0].1)
            }
            ValidateError::OpenBoundary { side, .. } => {
                if *side == "first" {
                    col_pos[0]
                } else {
                    *col_pos.last().unwrap()
                }
            }
            ValidateError::EmptyProduct => toks[0].1,
        };
        DslError::Validate { pos, source: e }
    })
}

/// Canonical single-line form: tokens separated by single spaces,
/// columns separated by ` | `.
pub fn emit(p: &TangleProduct) -> String {
    let tok = |t: &TangleKind| -> String {
        match t {
            TangleKind::LeftEndpoint(Sign::Plus) => "<+".into(),
            TangleKind::LeftEndpoint(Sign::Minus) => "<-".into(),
            TangleKind::RightEndpoint(Sign::Plus) => ">+".into(),
            TangleKind::RightEndpoint(Sign::Minus) => ">-".into(),
            TangleKind::LeftFold => "(".into(),
            TangleKind::RightFold => ")".into(),
            TangleKind::BranchPlus(b) => format!("B+{b}"),
            TangleKind::BranchMinus(b) => format!("B-{b}"),
            TangleKind::DoublePoint => "X".into(),
            TangleKind::IdentityStrand => "-".into(),
        }
    };
    p.columns
        .iter()
        .map(|col| col.iter().map(tok).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_interval() {
        let v = parse("<+ | >+").unwrap();
        assert_eq!(v.product.columns.len(), 2);
        assert_eq!(emit(&v.product), "<+ | >+");
    }

    #[test]
    fn parse_one_x_interval() {
        let v = parse("( | X | >+ >+").unwrap();
        assert_eq!(v.product.columns[2].len(), 2);
        assert_eq!(emit(&v.product), "( | X | >+ >+");
    }

    #[test]
    fn bad_valence_has_position() {
        let err = parse("( | B-2 | >+").unwrap_err();
        match err {
            DslError::Validate { pos, source } => {
                assert_eq!(pos, Pos { line: 1, col: 5 });
                assert!(matches!(source, ValidateError::BadValence { valence: 2, .. }));
            }
            other => panic!("expected validate error, got {other:?}"),
        }
    }

    #[test]
    fn lex_error_has_position() {
        let err = parse("<+ | Q").unwrap_err();
        match err {
            DslError::Lex { pos, token } => {
                assert_eq!(token, "Q");
                assert_eq!(pos, Pos { line: 1, col: 6 });
            }
            other => panic!("expected lex error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_newlines_are_whitespace() {
        let v = parse("( # a fold\n | X\n | >+ >+ # done").unwrap();
        assert_eq!(emit(&v.product), "( | X | >+ >+");
    }

    #[test]
    fn emit_then_parse_roundtrips() {
        for s in ["<+ | >+", "( | X | >+ >+", "( | B-3 | >+", "<+ | B+4 | - X | >- >+ >+"] {
            let v = parse(s).unwrap();
            let v2 = parse(&emit(&v.product)).unwrap();
            assert_eq!(v.product, v2.product);
        }
    }
}
