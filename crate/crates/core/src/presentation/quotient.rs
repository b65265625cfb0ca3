use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FinitePresentation;
use crate::error::QuotientError;
use crate::presentation::text::parse_word;
use crate::word::{is_conjugate, Alphabet, Word};

/// A homomorphism onto a free group (by killing generators) or onto `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuotientSpec {
    KillGenerators { killed: Vec<String> },
    Cyclic { modulus: u64, residues: BTreeMap<String, u64> },
}

impl QuotientSpec {
    pub fn kill(names: &[&str]) -> QuotientSpec {
        QuotientSpec::KillGenerators {
            killed: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn cyclic(modulus: u64, residues: &[(&str, u64)]) -> QuotientSpec {
        QuotientSpec::Cyclic {
            modulus,
            residues: residues.iter().map(|(n, r)| (n.to_string(), *r)).collect(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            QuotientSpec::KillGenerators { killed } => format!("kill {{{}}}", killed.join(", ")),
            QuotientSpec::Cyclic { modulus, residues } => {
                let parts: Vec<String> = residues.iter().map(|(g, r)| format!("{g}->{r}")).collect();
                format!("Z/{modulus} with {}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum GenImage {
    Keep,
    Kill,
    Residue(u64),
}

/// Image of a word in the target group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetElement {
    Free(Word),
    Residue { value: u64, modulus: u64 },
}

/// A [`QuotientSpec`] bound to an alphabet and checked against the relators.
#[derive(Clone, Debug)]
pub struct Quotient {
    spec: QuotientSpec,
    alphabet: Alphabet,
    images: Vec<GenImage>,
}

impl Quotient {
    /// Binds `spec` to `pres`, checking that every relator maps to the identity.
    pub fn new(pres: &FinitePresentation, spec: QuotientSpec) -> Result<Quotient, QuotientError> {
        let alphabet = pres.alphabet().clone();
        let images = match &spec {
            QuotientSpec::KillGenerators { killed } => {
                let mut imgs = vec![GenImage::Keep; alphabet.len()];
                for k in killed {
                    let g = alphabet
                        .index_of(k)
                        .ok_or_else(|| QuotientError::UnknownGenerator(k.clone()))?;
                    imgs[g] = GenImage::Kill;
                }
                imgs
            }
            QuotientSpec::Cyclic { modulus, residues } => {
                if *modulus < 2 {
                    return Err(QuotientError::BadModulus(*modulus));
                }
                for k in residues.keys() {
                    if alphabet.index_of(k).is_none() {
                        return Err(QuotientError::UnknownGenerator(k.clone()));
                    }
                }
                alphabet
                    .names()
                    .iter()
                    .map(|n| {
                        residues
                            .get(n)
                            .map(|r| GenImage::Residue(r % modulus))
                            .ok_or_else(|| QuotientError::UnknownGenerator(format!("{n} (no residue given)")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let q = Quotient { spec, alphabet, images };
        for r in pres.relators() {
            let img = q.image(r)?;
            if !q.is_identity(&img) {
                return Err(QuotientError::RelatorNotKilled {
                    relator: q.alphabet.format(r),
                    image: q.format(&img),
                });
            }
        }
        Ok(q)
    }

    /// The same homomorphism on a larger alphabet whose extra generators map
    /// to the identity (e.g. stable letters of a tower).
    pub fn extend_trivially(&self, alphabet: &Alphabet) -> Result<Quotient, QuotientError> {
        let mut images = Vec::with_capacity(alphabet.len());
        for (i, n) in alphabet.names().iter().enumerate() {
            if i < self.alphabet.len() {
                if self.alphabet.name(i) != n {
                    return Err(QuotientError::AlphabetMismatch);
                }
                images.push(self.images[i].clone());
            } else {
                images.push(match self.spec {
                    QuotientSpec::KillGenerators { .. } => GenImage::Kill,
                    QuotientSpec::Cyclic { .. } => GenImage::Residue(0),
                });
            }
        }
        Ok(Quotient {
            spec: self.spec.clone(),
            alphabet: alphabet.clone(),
            images,
        })
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.spec {
            QuotientSpec::Cyclic { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// The retraction: killed letters deleted, or the residue mod `m`.
    pub fn image(&self, w: &Word) -> Result<TargetElement, QuotientError> {
        if !self.alphabet.contains_word(w) {
            return Err(QuotientError::AlphabetMismatch);
        }
        match self.modulus() {
            None => Ok(TargetElement::Free(Word::from_letters(
                w.letters()
                    .iter()
                    .copied()
                    .filter(|l| self.images[l.generator()] == GenImage::Keep),
            ))),
            Some(m) => {
                let mut acc: i128 = 0;
                for l in w.letters() {
                    if let GenImage::Residue(r) = self.images[l.generator()] {
                        acc += l.sign() as i128 * r as i128;
                    }
                }
                Ok(TargetElement::Residue {
                    value: acc.rem_euclid(m as i128) as u64,
                    modulus: m,
                })
            }
        }
    }

    pub fn is_identity(&self, e: &TargetElement) -> bool {
        match e {
            TargetElement::Free(w) => w.is_identity(),
            TargetElement::Residue { value, .. } => *value == 0,
        }
    }

    /// Conjugacy in the target: free-group conjugacy, or equality in `Z/m`.
    pub fn conjugate_in_target(&self, x: &TargetElement, y: &TargetElement) -> bool {
        match (x, y) {
            (TargetElement::Free(u), TargetElement::Free(v)) => is_conjugate(u, v).0,
            (TargetElement::Residue { value: a, .. }, TargetElement::Residue { value: b, .. }) => a == b,
            _ => false,
        }
    }

    pub fn format(&self, e: &TargetElement) -> String {
        match e {
            TargetElement::Free(w) => self.alphabet.format(w),
            TargetElement::Residue { value, modulus } => format!("{value} mod {modulus}"),
        }
    }

    pub fn parse_target(&self, s: &str) -> Option<TargetElement> {
        match self.modulus() {
            None => parse_word(&self.alphabet, s).ok().map(TargetElement::Free),
            Some(m) => {
                let (v, rest) = s.split_once(" mod ")?;
                let modulus: u64 = rest.trim().parse().ok()?;
                (modulus == m).then_some(())?;
                Some(TargetElement::Residue {
                    value: v.trim().parse().ok()?,
                    modulus,
                })
            }
        }
    }
}

/// Images of `u` and `v` that are not conjugate in the target, hence `u` and
/// `v` are not conjugate in the source group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonConjugacyCertificate {
    pub pair: (Word, Word),
    pub spec: QuotientSpec,
    pub images: (TargetElement, TargetElement),
    pub reason: String,
}

impl NonConjugacyCertificate {
    /// Recomputes both images and checks them against the stored pair.
    pub fn verify(&self, quotient: &Quotient) -> bool {
        if quotient.spec() != &self.spec {
            return false;
        }
        let (Ok(a), Ok(b)) = (quotient.image(&self.pair.0), quotient.image(&self.pair.1)) else {
            return false;
        };
        a == self.images.0 && b == self.images.1 && !quotient.conjugate_in_target(&a, &b)
    }

    pub fn to_record(&self, quotient: &Quotient) -> CertificateRecord {
        let al = quotient.alphabet();
        CertificateRecord {
            pair: [al.format(&self.pair.0), al.format(&self.pair.1)],
            spec: self.spec.clone(),
            images: [quotient.format(&self.images.0), quotient.format(&self.images.1)],
            reason: self.reason.clone(),
        }
    }
}

/// Stable serialized form of a [`NonConjugacyCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub pair: [String; 2],
    pub spec: QuotientSpec,
    pub images: [String; 2],
    pub reason: String,
}

impl CertificateRecord {
    /// Rebuilds the certificate against `pres` and re-verifies it from scratch.
    pub fn reverify(&self, pres: &FinitePresentation) -> Result<bool, QuotientError> {
        let q = Quotient::new(pres, self.spec.clone())?;
        let parse = |s: &str| parse_word(pres.alphabet(), s).map_err(|_| QuotientError::AlphabetMismatch);
        let pair = (parse(&self.pair[0])?, parse(&self.pair[1])?);
        let (Some(i0), Some(i1)) = (q.parse_target(&self.images[0]), q.parse_target(&self.images[1])) else {
            return Ok(false);
        };
        let cert = NonConjugacyCertificate {
            pair,
            spec: self.spec.clone(),
            images: (i0, i1),
            reason: self.reason.clone(),
        };
        Ok(cert.verify(&q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Certified(NonConjugacyCertificate),
    /// The images are conjugate in the target; nothing can be concluded.
    Inconclusive { images: (TargetElement, TargetElement) },
}

/// Tries to certify that `u` and `v` are not conjugate via `quotient`.
pub fn conjugacy_obstruction(u: &Word, v: &Word, quotient: &Quotient) -> Result<Obstruction, QuotientError> {
    let a = quotient.image(u)?;
    let b = quotient.image(v)?;
    if quotient.conjugate_in_target(&a, &b) {
        return Ok(Obstruction::Inconclusive { images: (a, b) });
    }
    let target = match quotient.spec() {
        QuotientSpec::KillGenerators { .. } => "free quotient",
        QuotientSpec::Cyclic { .. } => "cyclic quotient",
    };
    let reason = format!(
        "images `{}` and `{}` are not conjugate in the {target} ({})",
        quotient.format(&a),
        quotient.format(&b),
        quotient.spec().describe()
    );
    Ok(Obstruction::Certified(NonConjugacyCertificate {
        pair: (u.clone(), v.clone()),
        spec: quotient.spec().clone(),
        images: (a, b),
        reason,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_kill_a() -> (FinitePresentation, Quotient) {
        let p = FinitePresentation::klein_bottle();
        let q = Quotient::new(&p, QuotientSpec::kill(&["a"])).unwrap();
        (p, q)
    }

    #[test]
    fn retraction_examples() {
        let (p, q) = klein_kill_a();
        let t = p.word("t").unwrap();
        assert_eq!(q.image(&t).unwrap(), TargetElement::Free(t.clone()));
        assert_eq!(q.image(&p.word("a t a^-1").unwrap()).unwrap(), TargetElement::Free(t));
        assert!(q.is_identity(&q.image(&p.relators()[0]).unwrap()));
    }

    #[test]
    fn relators_must_die() {
        let p = FinitePresentation::klein_bottle();
        assert!(matches!(
            Quotient::new(&p, QuotientSpec::kill(&["t"])),
            Err(QuotientError::RelatorNotKilled { .. })
        ));
        // a -> 1 mod 3 would send t a t^-1 a to 2
        assert!(Quotient::new(&p, QuotientSpec::cyclic(3, &[("a", 1), ("t", 1)])).is_err());
        assert!(Quotient::new(&p, QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)])).is_ok());
        assert!(matches!(
            Quotient::new(&p, QuotientSpec::cyclic(1, &[("a", 0), ("t", 1)])),
            Err(QuotientError::BadModulus(1))
        ));
        assert!(matches!(
            Quotient::new(&p, QuotientSpec::kill(&["z"])),
            Err(QuotientError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn klein_t_not_conjugate_to_inverse() {
        let (p, q) = klein_kill_a();
        let t = p.word("t").unwrap();
        match conjugacy_obstruction(&t, &t.inverse(), &q).unwrap() {
            Obstruction::Certified(c) => {
                assert!(c.verify(&q));
                let rec = c.to_record(&q);
                assert_eq!(rec.images, ["t".to_string(), "t^-1".to_string()]);
                assert!(rec.reverify(&p).unwrap());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn bs12_powers_of_t() {
        let p = FinitePresentation::bs12();
        let q = Quotient::new(&p, QuotientSpec::kill(&["a"])).unwrap();
        let t2 = p.word("t^2").unwrap();
        let t4 = p.word("t^4").unwrap();
        assert!(matches!(
            conjugacy_obstruction(&t2, &t4, &q).unwrap(),
            Obstruction::Certified(_)
        ));
    }

    #[test]
    fn equal_images_are_inconclusive() {
        let (p, q) = klein_kill_a();
        let x = p.word("a t a^-1").unwrap();
        let t = p.word("t").unwrap();
        assert!(matches!(
            conjugacy_obstruction(&x, &t, &q).unwrap(),
            Obstruction::Inconclusive { .. }
        ));
    }

    #[test]
    fn tampered_record_fails() {
        let (p, q) = klein_kill_a();
        let t = p.word("t").unwrap();
        let Obstruction::Certified(c) = conjugacy_obstruction(&t, &t.inverse(), &q).unwrap() else {
            panic!()
        };
        let mut rec = c.to_record(&q);
        rec.images[1] = "t".into();
        assert!(!rec.reverify(&p).unwrap());
    }

    #[test]
    fn cyclic_images() {
        let p = FinitePresentation::klein_bottle();
        let q = Quotient::new(&p, QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)])).unwrap();
        let t = p.word("t").unwrap();
        assert_eq!(q.image(&t.inverse()).unwrap(), TargetElement::Residue { value: 2, modulus: 3 });
        assert_eq!(q.parse_target("2 mod 3"), Some(TargetElement::Residue { value: 2, modulus: 3 }));
    }
}
