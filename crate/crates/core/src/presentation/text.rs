//! Text grammar for words and presentations.
//!
//! ```text
//! presentation := '<' gens '|' relators '>'
//! gens         := ident (',' ident)*
//! relators     := ( relation (',' relation)* )?
//! relation     := word ( '=' word )?
//! word         := '1' | factor+
//! factor       := ident ( '^' int )?
//! ```
//!
//! Whitespace between tokens is ignored. A relation `L = R` is stored as the
//! relator `L R^-1`.

use crate::error::ParseError;
use crate::word::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Caret,
    Lt,
    Gt,
    Pipe,
    Comma,
    Eq,
    Colon,
    LBracket,
    RBracket,
}

pub(crate) struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&mut self) -> Result<Option<Tok>, ParseError> {
        let save = self.pos;
        let t = self.next_tok();
        self.pos = save;
        t
    }

    pub(crate) fn next_tok(&mut self) -> Result<Option<Tok>, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let start = self.pos;
        let single = match c {
            '^' => Some(Tok::Caret),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '|' => Some(Tok::Pipe),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok(Some(t));
        }
        if c == '-' || c.is_ascii_digit() {
            let mut end = start + 1;
            let bytes = self.src.as_bytes();
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let text = &self.src[start..end];
            let value = text.parse::<i64>().map_err(|_| ParseError {
                pos: start,
                message: format!("bad integer `{text}`"),
            })?;
            self.pos = end;
            return Ok(Some(Tok::Int(value)));
        }
        if c.is_alphabetic() || c == '_' {
            let mut end = start;
            for ch in rest.chars() {
                if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
                    end += ch.len_utf8();
                } else {
                    break;
                }
            }
            self.pos = end;
            return Ok(Some(Tok::Ident(self.src[start..end].to_string())));
        }
        Err(ParseError {
            pos: start,
            message: format!("unexpected character `{c}`"),
        })
    }

    pub(crate) fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next_tok()? {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(ParseError {
                pos,
                message: format!("expected {what}, found {t:?}"),
            }),
            None => Err(ParseError {
                pos,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }
}

/// Parses `raw (symbol, exponent)` factors up to a token that cannot start a
/// factor. Symbols are returned unresolved.
pub(crate) fn parse_factors(lx: &mut Lexer<'_>) -> Result<Vec<(String, i64, usize)>, ParseError> {
    let mut out = Vec::new();
    loop {
        let pos = lx.pos();
        match lx.peek()? {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = lx.next_tok()? else { unreachable!() };
                let mut exp = 1;
                if lx.peek()? == Some(Tok::Caret) {
                    lx.next_tok()?;
                    let epos = lx.pos();
                    match lx.next_tok()? {
                        Some(Tok::Int(e)) => exp = e,
                        _ => {
                            return Err(ParseError {
                                pos: epos,
                                message: "expected integer exponent after `^`".into(),
                            })
                        }
                    }
                }
                out.push((name, exp, pos));
            }
            Some(Tok::Int(1)) if out.is_empty() => {
                lx.next_tok()?;
                return Ok(out);
            }
            _ => return Ok(out),
        }
    }
}

pub(crate) fn resolve(alphabet: &Alphabet, factors: &[(String, i64, usize)]) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    for (name, exp, pos) in factors {
        let g = alphabet.index_of(name).ok_or_else(|| ParseError {
            pos: *pos,
            message: format!("unknown generator `{name}`"),
        })?;
        let l = Letter::new(g, *exp < 0);
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(Word::from_letters(letters))
}

/// Parses a single word over `alphabet`. `1` (or empty input) is the identity.
pub fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, ParseError> {
    let mut lx = Lexer::new(text);
    let factors = parse_factors(&mut lx)?;
    if !lx.at_end() {
        let pos = lx.pos();
        return Err(ParseError {
            pos,
            message: "trailing input after word".into(),
        });
    }
    resolve(alphabet, &factors)
}

/// Parsed but unvalidated presentation: generator names and relators.
pub(crate) fn parse_presentation_raw(text: &str) -> Result<(Vec<(String, usize)>, Vec<(Word, usize)>, Alphabet), ParseError> {
    let mut lx = Lexer::new(text);
    lx.expect(Tok::Lt, "`<`")?;
    let mut gens = Vec::new();
    loop {
        let pos = lx.pos();
        match lx.next_tok()? {
            Some(Tok::Ident(n)) => gens.push((n, pos)),
            Some(Tok::Pipe) if gens.is_empty() => break,
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("expected generator name, found {}", describe(other)),
                })
            }
        }
        let pos = lx.pos();
        match lx.next_tok()? {
            Some(Tok::Comma) => continue,
            Some(Tok::Pipe) => break,
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("expected `,` or `|`, found {}", describe(other)),
                })
            }
        }
    }
    // Duplicates are reported by the caller with positions; build a lenient alphabet here.
    let mut alphabet = Alphabet::new::<&str>(&[]).expect("empty alphabet");
    for (n, _) in &gens {
        let _ = alphabet.push(n);
    }
    let mut relators = Vec::new();
    if lx.peek()? == Some(Tok::Gt) {
        lx.next_tok()?;
    } else {
        loop {
            let pos = lx.pos();
            let lhs = parse_factors(&mut lx)?;
            let mut w = resolve(&alphabet, &lhs)?;
            if lx.peek()? == Some(Tok::Eq) {
                lx.next_tok()?;
                let rhs = parse_factors(&mut lx)?;
                w = w.concat(&resolve(&alphabet, &rhs)?.inverse());
            }
            relators.push((w, pos));
            let pos = lx.pos();
            match lx.next_tok()? {
                Some(Tok::Comma) => continue,
                Some(Tok::Gt) => break,
                other => {
                    return Err(ParseError {
                        pos,
                        message: format!("expected `,` or `>`, found {}", describe(other)),
                    })
                }
            }
        }
    }
    if !lx.at_end() {
        let pos = lx.pos();
        return Err(ParseError {
            pos,
            message: "trailing input after `>`".into(),
        });
    }
    Ok((gens, relators, alphabet))
}

fn describe(t: Option<Tok>) -> String {
    match t {
        Some(t) => format!("{t:?}"),
        None => "end of input (unterminated presentation)".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_with_exponents() {
        let al = Alphabet::of(&["a", "b"]);
        let w = parse_word(&al, "a b^-1 a").unwrap();
        assert_eq!(al.format(&w), "a b^-1 a");
        let w = parse_word(&al, "a^3 a^-1").unwrap();
        assert_eq!(al.format_compact(&w), "a^2");
        assert!(parse_word(&al, "1").unwrap().is_identity());
        assert!(parse_word(&al, "  ").unwrap().is_identity());
        let err = parse_word(&al, "a c").unwrap_err();
        assert_eq!(err.pos, 2);
        assert!(parse_word(&al, "a^").is_err());
    }
}
