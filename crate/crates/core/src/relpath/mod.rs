//! Paths in the Cayley graph of a free product `G = H_1 * ... * H_k * F(X)`
//! with respect to `X ∪ H`, where every nonidentity factor element is a letter.
//!
//! Group elements are kept in free-product normal form: free letters one at a
//! time, factor syllables nonidentity, and no two adjacent syllables from the
//! same factor.

mod audit;
mod factor;
mod path;
mod probe;

use crate::error::RelPathError;
use crate::word::{Alphabet, Letter};

pub use audit::{
    isolation_audit, random_regularity_audit, random_trivial_path, random_w_path, regularity_audit, IsolationAudit,
    RegularityAudit, RegularityReport,
};
pub use factor::{Factor, FactorElem};
pub use path::{check_w_membership, parse_path, Component, ConnectivityReport, CosetClass, SyllablePath};
pub use probe::{
    commensurable_bounded, commensuration_probe, conjugate_cyclic, cyclic_reduce, hyperbolicity, is_hyperbolic,
    Commensuration, Hyperbolicity, ProbeReport, ProbeRow, Twist,
};

/// A letter of `X ∪ H`: a free letter, or a nonidentity element of factor `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    Free(Letter),
    Factor(usize, FactorElem),
}

impl Syllable {
    pub fn factor(&self) -> Option<usize> {
        match self {
            Syllable::Factor(l, _) => Some(*l),
            Syllable::Free(_) => None,
        }
    }
}

/// An element of the free product in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element(Vec<Syllable>);

impl Element {
    pub fn identity() -> Element {
        Element(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct FreeProductCtx {
    labels: Vec<String>,
    factors: Vec<Factor>,
    free: Alphabet,
}

impl FreeProductCtx {
    pub fn new(factors: Vec<(&str, Factor)>, free: Alphabet) -> Result<FreeProductCtx, RelPathError> {
        let mut labels: Vec<String> = Vec::new();
        for (l, _) in &factors {
            if labels.iter().any(|x| x == l) || free.index_of(l).is_some() {
                return Err(RelPathError::Precondition(format!("duplicate label `{l}`")));
            }
            labels.push(l.to_string());
        }
        Ok(FreeProductCtx {
            labels,
            factors: factors.into_iter().map(|(_, f)| f).collect(),
            free,
        })
    }

    /// `⟨a⟩ * F(x1, x2)`: one infinite cyclic peripheral factor `H` generated by `a`.
    pub fn cyclic_model() -> FreeProductCtx {
        FreeProductCtx::new(vec![("H", Factor::Free(Alphabet::of(&["a"])))], Alphabet::of(&["x1", "x2"])).expect("fixture")
    }

    pub fn factor(&self, l: usize) -> &Factor {
        &self.factors[l]
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn label(&self, l: usize) -> &str {
        &self.labels[l]
    }

    pub fn factor_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == label)
    }

    pub fn free(&self) -> &Alphabet {
        &self.free
    }

    /// A syllable as a one-letter element; identity factor elements vanish.
    pub fn letter(&self, s: &Syllable) -> Result<Element, RelPathError> {
        let mut e = Element::identity();
        self.push(&mut e, s.clone())?;
        Ok(e)
    }

    pub fn factor_element(&self, l: usize, h: FactorElem) -> Result<Element, RelPathError> {
        self.letter(&Syllable::Factor(l, h))
    }

    pub fn free_letter(&self, name: &str) -> Result<Element, RelPathError> {
        let g = self.free.index_of(name).ok_or_else(|| RelPathError::UnknownFactor(name.to_string()))?;
        Ok(Element(vec![Syllable::Free(Letter::pos(g))]))
    }

    /// Multiplies a syllable onto the right of a normal form.
    pub fn push(&self, e: &mut Element, s: Syllable) -> Result<(), RelPathError> {
        match s {
            Syllable::Free(l) => {
                if let Some(Syllable::Free(top)) = e.0.last() {
                    if top.cancels(l) {
                        e.0.pop();
                        return Ok(());
                    }
                }
                e.0.push(Syllable::Free(l));
            }
            Syllable::Factor(lam, h) => {
                let f = &self.factors[lam];
                if let Some(Syllable::Factor(top, g)) = e.0.last() {
                    if *top == lam {
                        let merged = f.mul(g, &h);
                        e.0.pop();
                        if !f.is_identity(&merged)? {
                            e.0.push(Syllable::Factor(lam, merged));
                        }
                        return Ok(());
                    }
                }
                if !f.is_identity(&h)? {
                    e.0.push(Syllable::Factor(lam, h));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, RelPathError> {
        let mut out = a.clone();
        for s in &b.0 {
            self.push(&mut out, s.clone())?;
        }
        Ok(out)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Element>>(&self, items: I) -> Result<Element, RelPathError> {
        let mut out = Element::identity();
        for e in items {
            out = self.mul(&out, e)?;
        }
        Ok(out)
    }

    pub fn inverse_syllable(&self, s: &Syllable) -> Syllable {
        match s {
            Syllable::Free(l) => Syllable::Free(l.inverse()),
            Syllable::Factor(lam, h) => Syllable::Factor(*lam, self.factors[*lam].inverse(h)),
        }
    }

    pub fn inverse(&self, a: &Element) -> Element {
        Element(a.0.iter().rev().map(|s| self.inverse_syllable(s)).collect())
    }

    pub fn pow(&self, a: &Element, k: i64) -> Result<Element, RelPathError> {
        let base = if k < 0 { self.inverse(a) } else { a.clone() };
        let mut out = Element::identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }

    pub fn conjugate(&self, g: &Element, by: &Element) -> Result<Element, RelPathError> {
        self.product([by, g, &self.inverse(by)])
    }

    pub fn syllable_equal(&self, a: &Syllable, b: &Syllable) -> Result<bool, RelPathError> {
        match (a, b) {
            (Syllable::Free(x), Syllable::Free(y)) => Ok(x == y),
            (Syllable::Factor(l, g), Syllable::Factor(m, h)) if l == m => self.factors[*l].equal(g, h),
            _ => Ok(false),
        }
    }

    pub fn equal(&self, a: &Element, b: &Element) -> Result<bool, RelPathError> {
        if a.len() != b.len() {
            return Ok(false);
        }
        for (x, y) in a.0.iter().zip(&b.0) {
            if !self.syllable_equal(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The factor element `h` with `e = h`, if `e` lies in `H_λ`.
    pub fn in_factor(&self, e: &Element, lam: usize) -> Option<FactorElem> {
        match e.0.as_slice() {
            [] => Some(self.factors[lam].identity()),
            [Syllable::Factor(l, h)] if *l == lam => Some(h.clone()),
            _ => None,
        }
    }

    pub fn format_syllable(&self, s: &Syllable) -> String {
        match s {
            Syllable::Free(l) => self.free.letter_name(*l),
            Syllable::Factor(lam, h) => format!("[{}: {}]", self.labels[*lam], self.factors[*lam].format(h)),
        }
    }

    pub fn format(&self, e: &Element) -> String {
        if e.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = e.0.iter().map(|s| self.format_syllable(s)).collect();
        parts.join(" ")
    }

    /// Parses `x1 [H: a^2] x2^-1 ...` into a list of letters, unreduced.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Syllable>, RelPathError> {
        let mut out = Vec::new();
        let mut rest = text.trim_start();
        let mut pos = text.len() - rest.len();
        while !rest.is_empty() {
            if let Some(body) = rest.strip_prefix('[') {
                let close = body.find(']').ok_or(RelPathError::Parse {
                    pos,
                    message: "unclosed `[`".into(),
                })?;
                let (label, elem) = body[..close].split_once(':').ok_or(RelPathError::Parse {
                    pos,
                    message: "expected `[label: element]`".into(),
                })?;
                let lam = self
                    .factor_index(label.trim())
                    .ok_or_else(|| RelPathError::UnknownFactor(label.trim().to_string()))?;
                out.push(Syllable::Factor(lam, self.factors[lam].parse(elem.trim())?));
                rest = &body[close + 1..];
            } else {
                let end = rest.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(rest.len());
                let token = &rest[..end];
                let (name, inv) = match token.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (token, false),
                };
                let g = self.free.index_of(name).ok_or(RelPathError::Parse {
                    pos,
                    message: format!("unknown letter `{token}`"),
                })?;
                out.push(Syllable::Free(Letter::new(g, inv)));
                rest = &rest[end..];
            }
            rest = rest.trim_start();
            pos = text.len() - rest.len();
        }
        Ok(out)
    }

    pub fn element(&self, text: &str) -> Result<Element, RelPathError> {
        let mut e = Element::identity();
        for s in self.parse_letters(text)? {
            self.push(&mut e, s)?;
        }
        Ok(e)
    }
}
