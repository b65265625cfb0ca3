use std::fmt;

use crate::error::RelPathError;
use crate::hnn::HnnTower;
use crate::presentation::{parse_word, FinitePresentation};
use crate::word::{Alphabet, Word};

/// A peripheral factor with a decidable word problem.
#[derive(Clone, Debug)]
pub enum Factor {
    Free(Alphabet),
    Cyclic(u64),
    FreeAbelian(usize),
    /// A one-relator group handled by the HNN engine.
    Presented(Box<HnnTower>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FactorElem {
    Word(Word),
    Residue(u64),
    Vector(Vec<i64>),
}

impl Factor {
    /// `< a, t | t a t^-1 a >`, torsion-free with `t a t^-1 = a^-1`.
    pub fn klein_bottle() -> Factor {
        let tower = HnnTower::from_presentation(&FinitePresentation::klein_bottle()).expect("fixture");
        Factor::Presented(Box::new(tower))
    }

    pub fn identity(&self) -> FactorElem {
        match self {
            Factor::Free(_) | Factor::Presented(_) => FactorElem::Word(Word::identity()),
            Factor::Cyclic(_) => FactorElem::Residue(0),
            Factor::FreeAbelian(r) => FactorElem::Vector(vec![0; *r]),
        }
    }

    pub fn mul(&self, a: &FactorElem, b: &FactorElem) -> FactorElem {
        match (self, a, b) {
            (Factor::Cyclic(m), FactorElem::Residue(x), FactorElem::Residue(y)) => FactorElem::Residue((x + y) % m),
            (Factor::FreeAbelian(_), FactorElem::Vector(x), FactorElem::Vector(y)) => {
                FactorElem::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (_, FactorElem::Word(x), FactorElem::Word(y)) => FactorElem::Word(x.concat(y)),
            _ => panic!("element does not belong to this factor"),
        }
    }

    pub fn inverse(&self, a: &FactorElem) -> FactorElem {
        match (self, a) {
            (Factor::Cyclic(m), FactorElem::Residue(x)) => FactorElem::Residue((m - x % m) % m),
            (_, FactorElem::Vector(x)) => FactorElem::Vector(x.iter().map(|v| -v).collect()),
            (_, FactorElem::Word(w)) => FactorElem::Word(w.inverse()),
            _ => panic!("element does not belong to this factor"),
        }
    }

    pub fn pow(&self, a: &FactorElem, k: i64) -> FactorElem {
        let base = if k < 0 { self.inverse(a) } else { a.clone() };
        match (self, &base) {
            (Factor::Cyclic(m), FactorElem::Residue(x)) => FactorElem::Residue((x * (k.unsigned_abs() % m)) % m),
            (_, FactorElem::Vector(x)) => FactorElem::Vector(x.iter().map(|v| v * k.abs()).collect()),
            (_, FactorElem::Word(w)) => FactorElem::Word(w.pow(k.abs())),
            _ => unreachable!(),
        }
    }

    pub fn is_identity(&self, a: &FactorElem) -> Result<bool, RelPathError> {
        Ok(match (self, a) {
            (Factor::Presented(t), FactorElem::Word(w)) => {
                let v = t.is_trivial(w).map_err(|_| RelPathError::Undecided)?;
                if !(v.is_yes() || v.is_no()) {
                    return Err(RelPathError::Undecided);
                }
                v.is_yes()
            }
            (_, FactorElem::Word(w)) => w.is_identity(),
            (_, FactorElem::Residue(x)) => *x == 0,
            (_, FactorElem::Vector(x)) => x.iter().all(|&v| v == 0),
        })
    }

    pub fn equal(&self, a: &FactorElem, b: &FactorElem) -> Result<bool, RelPathError> {
        if a == b {
            return Ok(true);
        }
        self.is_identity(&self.mul(a, &self.inverse(b)))
    }

    /// Every factor here is torsion-free except the finite cyclic ones.
    pub fn has_infinite_order(&self, a: &FactorElem) -> Result<bool, RelPathError> {
        Ok(!matches!(self, Factor::Cyclic(_)) && !self.is_identity(a)?)
    }

    pub fn contains(&self, a: &FactorElem) -> bool {
        match (self, a) {
            (Factor::Free(al), FactorElem::Word(w)) => al.contains_word(w),
            (Factor::Presented(t), FactorElem::Word(w)) => t.contains(w),
            (Factor::Cyclic(m), FactorElem::Residue(x)) => x < m,
            (Factor::FreeAbelian(r), FactorElem::Vector(x)) => x.len() == *r,
            _ => false,
        }
    }

    /// Words use the factor's generator names; residues are integers;
    /// vectors are space-separated integers.
    pub fn parse(&self, text: &str) -> Result<FactorElem, RelPathError> {
        let bad = |message: String| RelPathError::BadElement {
            text: text.to_string(),
            message,
        };
        match self {
            Factor::Free(al) => parse_word(al, text).map(FactorElem::Word).map_err(|e| bad(e.to_string())),
            Factor::Presented(t) => t.word(text).map(FactorElem::Word).map_err(|e| bad(e.to_string())),
            Factor::Cyclic(m) => {
                let v: i64 = text.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                Ok(FactorElem::Residue(v.rem_euclid(*m as i64) as u64))
            }
            Factor::FreeAbelian(r) => {
                let v: Vec<i64> = text
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                if v.len() != *r {
                    return Err(bad(format!("expected {r} coordinates")));
                }
                Ok(FactorElem::Vector(v))
            }
        }
    }

    pub fn format(&self, a: &FactorElem) -> String {
        match (self, a) {
            (Factor::Free(al), FactorElem::Word(w)) => al.format(w),
            (Factor::Presented(t), FactorElem::Word(w)) => t.format(w),
            (_, e) => e.to_string(),
        }
    }
}

impl fmt::Display for FactorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorElem::Word(w) => write!(f, "{w:?}"),
            FactorElem::Residue(x) => write!(f, "{x}"),
            FactorElem::Vector(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}
