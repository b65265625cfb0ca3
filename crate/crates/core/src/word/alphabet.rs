use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Letter, Word};
use crate::error::WordError;

/// Ordered list of distinct generator names.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, WordError> {
        let mut index = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if n.is_empty() {
                return Err(WordError::EmptyGeneratorName);
            }
            if index.insert(n.to_string(), i).is_some() {
                return Err(WordError::DuplicateGenerator(n.to_string()));
            }
            owned.push(n.to_string());
        }
        Ok(Alphabet { names: owned, index })
    }

    /// Convenience for tests and fixtures: panics on invalid names.
    pub fn of(names: &[&str]) -> Alphabet {
        Alphabet::new(names).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn generator(&self, name: &str) -> Result<usize, WordError> {
        self.index_of(name)
            .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))
    }

    /// Appends a generator, returning its index.
    pub fn push(&mut self, name: &str) -> Result<usize, WordError> {
        if name.is_empty() {
            return Err(WordError::EmptyGeneratorName);
        }
        if self.index.contains_key(name) {
            return Err(WordError::DuplicateGenerator(name.to_string()));
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    /// Reduces a raw sequence of `(symbol, sign)` pairs.
    pub fn reduce<S: AsRef<str>>(&self, raw: &[(S, i8)]) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(raw.len());
        for (name, sign) in raw {
            let g = self.generator(name.as_ref())?;
            match sign {
                1 => letters.push(Letter::pos(g)),
                -1 => letters.push(Letter::neg(g)),
                _ => return Err(WordError::BadSign(*sign)),
            }
        }
        Ok(Word::from_letters(letters))
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| l.generator() < self.len())
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.names[l.generator()])
        } else {
            self.names[l.generator()].clone()
        }
    }

    /// Space-separated letters with `^-1` for inverses; `1` for the identity.
    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = w.letters().iter().map(|&l| self.letter_name(l)).collect();
        parts.join(" ")
    }

    /// Like [`Alphabet::format`] but collapses runs into `g^n`.
    pub fn format_compact(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let ls = w.letters();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let name = &self.names[ls[i].generator()];
            let e = run * ls[i].sign();
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
            i = j;
        }
        parts.join(" ")
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = WordError;

    fn try_from(names: Vec<String>) -> Result<Self, Self::Error> {
        Alphabet::new(&names)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty_names() {
        assert!(matches!(
            Alphabet::new(&["a", "a"]),
            Err(WordError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Alphabet::new(&["a", ""]),
            Err(WordError::EmptyGeneratorName)
        ));
    }

    #[test]
    fn reduce_raw_sequences() {
        let al = Alphabet::of(&["a", "b"]);
        let w = al.reduce(&[("a", 1), ("a", -1), ("b", 1)]).unwrap();
        assert_eq!(al.format(&w), "b");
        let w = al.reduce(&[("a", 1), ("b", 1), ("b", -1), ("a", 1)]).unwrap();
        assert_eq!(al.format(&w), "a a");
        assert_eq!(al.format_compact(&w), "a^2");
        assert!(al.reduce::<&str>(&[]).unwrap().is_identity());
        assert!(matches!(
            al.reduce(&[("c", 1)]),
            Err(WordError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn serde_round_trip_rebuilds_index() {
        let al = Alphabet::of(&["x1", "x2"]);
        let s = serde_json::to_string(&al).unwrap();
        let back: Alphabet = serde_json::from_str(&s).unwrap();
        assert_eq!(back.index_of("x2"), Some(1));
    }
}
