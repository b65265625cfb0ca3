use num_integer::Integer;

use super::cyclic::{conjugator, primitive_period, strip_conjugation, CyclicWord};
use super::Word;
use crate::error::WordError;

/// `w = root^exponent` with `root` not a proper power.
pub fn primitive_root(w: &Word) -> Result<(Word, u64), WordError> {
    if w.is_identity() {
        return Err(WordError::IdentityInput);
    }
    let (h, core) = strip_conjugation(w);
    let p = primitive_period(core.letters());
    let root = core.slice(0, p).conjugate_by(&h);
    Ok((root, (core.len() / p) as u64))
}

/// Canonical label of the commensurability class of a nonidentity word:
/// the cyclic word of its primitive root, identified with that of the inverse.
pub fn commensurability_key(w: &Word) -> Result<CyclicWord, WordError> {
    let (root, _) = primitive_root(w)?;
    let (_, core) = strip_conjugation(&root);
    let c = CyclicWord::from_cyclically_reduced(&core).expect("stripped core");
    let ci = c.inverse();
    Ok(if ci < c { ci } else { c })
}

/// `conjugator · first^k · conjugator^-1 = second^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommensurabilityWitness {
    pub k: i64,
    pub l: i64,
    pub conjugator: Word,
}

impl CommensurabilityWitness {
    pub fn verify(&self, first: &Word, second: &Word) -> bool {
        self.k != 0 && self.l != 0 && first.pow(self.k).conjugate_by(&self.conjugator) == second.pow(self.l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommensurabilityVerdict {
    pub related: bool,
    pub witness: Option<CommensurabilityWitness>,
}

/// Exact commensurability in a free group: `u` and `v` are commensurable iff
/// their primitive roots are conjugate up to inversion.
pub fn commensurable(u: &Word, v: &Word) -> Result<CommensurabilityVerdict, WordError> {
    let (ru, eu) = primitive_root(u)?;
    let (rv, ev) = primitive_root(v)?;
    let d = eu.gcd(&ev);
    let (k, l_abs) = ((ev / d) as i64, (eu / d) as i64);
    let found = if let Some(g) = conjugator(&ru, &rv) {
        Some((g, l_abs))
    } else {
        conjugator(&ru, &rv.inverse()).map(|g| (g, -l_abs))
    };
    Ok(match found {
        Some((conjugator, l)) => CommensurabilityVerdict {
            related: true,
            witness: Some(CommensurabilityWitness { k, l, conjugator }),
        },
        None => CommensurabilityVerdict {
            related: false,
            witness: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    fn w(codes: &[i32]) -> Word {
        Word::from_letters(
            codes
                .iter()
                .map(|&c| Letter::new(c.unsigned_abs() as usize - 1, c < 0)),
        )
    }

    #[test]
    fn root_examples() {
        assert_eq!(primitive_root(&w(&[1, 2, 1, 2])).unwrap(), (w(&[1, 2]), 2));
        assert_eq!(primitive_root(&w(&[1; 6])).unwrap(), (w(&[1]), 6));
        assert_eq!(primitive_root(&w(&[1, 2])).unwrap(), (w(&[1, 2]), 1));
        assert!(matches!(
            primitive_root(&Word::identity()),
            Err(WordError::IdentityInput)
        ));
        // conjugated power
        let x = w(&[2, 1, 1, 1, -2]);
        let (r, e) = primitive_root(&x).unwrap();
        assert_eq!((r, e), (w(&[2, 1, -2]), 3));
    }

    #[test]
    fn commensurable_examples() {
        let x = w(&[1, 2, 2]);
        let v = commensurable(&x, &x.inverse()).unwrap();
        let wit = v.witness.unwrap();
        assert_eq!((wit.k, wit.l), (1, -1));
        assert!(wit.conjugator.is_identity());

        assert!(!commensurable(&w(&[1]), &w(&[2])).unwrap().related);

        let (u, v) = (w(&[1, 2, 1, 2]), w(&[2, 1]));
        let verdict = commensurable(&u, &v).unwrap();
        let wit = verdict.witness.unwrap();
        assert_eq!((wit.k, wit.l), (1, 2));
        assert!(wit.verify(&u, &v));
    }

    #[test]
    fn identity_is_rejected() {
        assert!(commensurable(&Word::identity(), &w(&[1])).is_err());
    }

    #[test]
    fn keys_identify_inverse_and_conjugate_powers() {
        let a = commensurability_key(&w(&[1, 2])).unwrap();
        assert_eq!(a, commensurability_key(&w(&[-2, -1, -2, -1])).unwrap());
        assert_eq!(a, commensurability_key(&w(&[3, 2, 1, -3])).unwrap());
        assert_ne!(a, commensurability_key(&w(&[1, -2])).unwrap());
    }
}
