use super::{conj_key, coset_rep, BuiltTower, TowerMode};
use crate::error::HnnError;
use crate::hnn::HnnTower;
use crate::presentation::Quotient;
use crate::word::{conjugator, Word};

/// `conjugator · g · conjugator^-1 = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatorWitness {
    pub conjugator: Word,
    pub target: Word,
    pub class: Option<usize>,
}

/// `x = g1 y g1^-1` or `x = g1 y g1^-1 · g2 y g2^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityWitness {
    pub x: Word,
    pub y: Word,
    pub g1: Word,
    pub g2: Option<Word>,
}

impl SimplicityWitness {
    pub fn conjugates(&self) -> usize {
        1 + self.g2.is_some() as usize
    }

    pub fn product(&self) -> Word {
        let mut p = self.y.conjugate_by(&self.g1);
        if let Some(g2) = &self.g2 {
            p = p.concat(&self.y.conjugate_by(g2));
        }
        p
    }

    pub fn verify(&self, tower: &HnnTower) -> Result<bool, HnnError> {
        Ok(tower.equal(&self.x, &self.product())?.is_yes())
    }
}

impl BuiltTower {
    /// A verified conjugator from `g` onto its representative, composed from
    /// the stage records; `None` when no built stage covers `g`.
    pub fn conjugator_witness(&self, g: &Word) -> Option<ConjugatorWitness> {
        if g.is_identity() || !self.is_base_word(g) {
            return None;
        }
        let found = match &self.config.mode {
            TowerMode::Ncc => {
                let e = self.conj_index.get(&conj_key(g))?;
                let c = conjugator(g, &e.reference)?;
                ConjugatorWitness {
                    conjugator: e.witness.concat(&c),
                    target: self.config.representatives[e.class - 1].clone(),
                    class: Some(e.class),
                }
            }
            TowerMode::Coset { reps, spec } => {
                let q = Quotient::new(&self.config.base, spec.clone()).ok()?;
                let (z, class) = coset_rep(&q, reps, g).ok()??;
                if self.tower.equal(g, &z).ok()?.is_yes() {
                    ConjugatorWitness {
                        conjugator: Word::identity(),
                        target: z,
                        class,
                    }
                } else {
                    let s = self
                        .stages
                        .iter()
                        .find(|s| self.tower.equal(g, &s.element).map(|v| v.is_yes()).unwrap_or(false))?;
                    ConjugatorWitness {
                        conjugator: s.witness(),
                        target: s.target.clone(),
                        class: s.class,
                    }
                }
            }
        };
        self.tower
            .verify_conjugator(g, &found.conjugator, &found.target)
            .ok()?
            .then_some(found)
    }
}

/// Writes `x` as a product of at most two conjugates of `y` using the stage
/// witnesses. Elements of different classes go through the commutator
/// `[a_j, b_i]`, which needs a gadget tower.
pub fn bounded_simple_witness(built: &BuiltTower, x: &Word, y: &Word) -> Option<SimplicityWitness> {
    let tower = built.tower();
    if x.is_identity() || y.is_identity() {
        return None;
    }
    let done = |w: SimplicityWitness| w.verify(tower).ok()?.then_some(w);
    if tower.equal(x, y).ok()?.is_yes() {
        return done(SimplicityWitness {
            x: x.clone(),
            y: y.clone(),
            g1: Word::identity(),
            g2: None,
        });
    }
    let wx = built.conjugator_witness(x)?;
    let wy = built.conjugator_witness(y)?;
    let (i, j) = (wx.class?, wy.class?);
    if i == j {
        return done(SimplicityWitness {
            x: x.clone(),
            y: y.clone(),
            g1: wx.conjugator.inverse().concat(&wy.conjugator),
            g2: None,
        });
    }
    if !built.config().gadget {
        return None;
    }
    let m = built.config().classes - 1;
    let a_j = Word::generator(m + j - 1);
    let b_i = Word::generator(2 * m + i - 1);
    let c = Word::product([&a_j, &b_i, &a_j.inverse(), &b_i.inverse()]);
    let wc = built.conjugator_witness(&c)?;
    let wa = built.conjugator_witness(&a_j)?;
    let wai = built.conjugator_witness(&a_j.inverse())?;
    // x = u c u^-1, a_j = p y p^-1, v a_j^-1 v^-1 = a_j
    let u = wx.conjugator.inverse().concat(&wc.conjugator);
    let p = wa.conjugator.inverse().concat(&wy.conjugator);
    let v = wa.conjugator.inverse().concat(&wai.conjugator);
    done(SimplicityWitness {
        x: x.clone(),
        y: y.clone(),
        g1: u.concat(&p),
        g2: Some(Word::product([&u, &b_i, &v.inverse(), &p])),
    })
}
