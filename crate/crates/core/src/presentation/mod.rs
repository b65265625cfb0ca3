//! Finite presentations, their text format, and quotient-based
//! non-conjugacy certificates.

mod quotient;
pub mod text;

use std::fmt;

use crate::error::{PresentationError, WordError};
use crate::word::{Alphabet, Word};

pub use quotient::{
    conjugacy_obstruction, CertificateRecord, NonConjugacyCertificate, Obstruction, Quotient,
    QuotientSpec, TargetElement,
};
pub use text::parse_word;

/// Generators and freely reduced, nonidentity relators.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (index, r) in relators.iter().enumerate() {
            if r.is_identity() {
                return Err(PresentationError::IdentityRelator { index, pos: 0 });
            }
            if !alphabet.contains_word(r) {
                return Err(WordError::UnknownGenerator(format!("in relator {index}")).into());
            }
        }
        Ok(FinitePresentation { alphabet, relators })
    }

    pub fn free(names: &[&str]) -> Self {
        FinitePresentation {
            alphabet: Alphabet::of(names),
            relators: Vec::new(),
        }
    }

    /// `< a, t | t a t^-1 a >`.
    pub fn klein_bottle() -> Self {
        parse_presentation("< a , t | t a t^-1 a >").expect("fixture")
    }

    /// `< a, t | t a t^-1 a^-2 >`.
    pub fn bs12() -> Self {
        parse_presentation("< a , t | t a t^-1 a^-2 >").expect("fixture")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn word(&self, text: &str) -> Result<Word, crate::error::ParseError> {
        parse_word(&self.alphabet, text)
    }

    /// Sum of the signs of occurrences of generator `g` in `w`.
    pub fn exponent_sum(&self, w: &Word, g: &str) -> Result<i64, WordError> {
        Ok(w.exponent_sum(self.alphabet.generator(g)?))
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.alphabet.names().join(" , ");
        let rels: Vec<String> = self.relators.iter().map(|r| self.alphabet.format(r)).collect();
        if rels.is_empty() {
            write!(f, "< {gens} | >")
        } else {
            write!(f, "< {gens} | {} >", rels.join(" , "))
        }
    }
}

impl fmt::Debug for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `< gen , ... | word , ... >`.
pub fn parse_presentation(input: &str) -> Result<FinitePresentation, PresentationError> {
    let (gens, relators, alphabet) = text::parse_presentation_raw(input)?;
    let mut seen = std::collections::HashSet::new();
    for (name, pos) in &gens {
        if !seen.insert(name.as_str()) {
            return Err(PresentationError::DuplicateGenerator {
                name: name.clone(),
                pos: *pos,
            });
        }
    }
    for (index, (r, pos)) in relators.iter().enumerate() {
        if r.is_identity() {
            return Err(PresentationError::IdentityRelator { index, pos: *pos });
        }
    }
    Ok(FinitePresentation {
        alphabet,
        relators: relators.into_iter().map(|(r, _)| r).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_bottle_parses() {
        let p = parse_presentation("< a , t | t a t^-1 a >").unwrap();
        assert_eq!(p.alphabet().names(), &["a", "t"]);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.to_string(), "< a , t | t a t^-1 a >");
    }

    #[test]
    fn relations_become_relators() {
        let p = parse_presentation("<a,t | t a t^-1 = a^-1>").unwrap();
        assert_eq!(p, FinitePresentation::klein_bottle());
    }

    #[test]
    fn free_group_has_no_relators() {
        let p = parse_presentation("< a , b | >").unwrap();
        assert!(p.is_free());
        assert_eq!(p.alphabet().len(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_presentation("< a | a a").unwrap_err();
        match err {
            PresentationError::Syntax(e) => {
                assert_eq!(e.pos, 9);
                assert!(e.message.contains("unterminated"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_presentation("< a , a | >"),
            Err(PresentationError::DuplicateGenerator { pos: 6, .. })
        ));
        assert!(matches!(
            parse_presentation("< a | a a^-1 >"),
            Err(PresentationError::IdentityRelator { index: 0, .. })
        ));
        assert!(parse_presentation("< a | b >").is_err());
    }

    #[test]
    fn exponent_sums() {
        let p = FinitePresentation::klein_bottle();
        let r = &p.relators()[0];
        assert_eq!(p.exponent_sum(r, "a").unwrap(), 2);
        assert_eq!(p.exponent_sum(&p.word("t").unwrap(), "t").unwrap(), 1);
        let f = FinitePresentation::free(&["a", "b"]);
        let comm = f.word("a b a^-1 b^-1").unwrap();
        assert_eq!(f.exponent_sum(&comm, "a").unwrap(), 0);
        assert!(f.exponent_sum(&comm, "c").is_err());
    }
}
