use std::fmt;

use super::tower::HnnTower;
use crate::error::HnnError;
use crate::word::{primitive_root, Letter, Word};

/// Three-valued answer; `Unknown` carries the exponent bound that ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict3 {
    Yes,
    No,
    Unknown { bound: u64 },
}

impl Verdict3 {
    pub fn is_yes(self) -> bool {
        self == Verdict3::Yes
    }

    pub fn is_no(self) -> bool {
        self == Verdict3::No
    }
}

impl fmt::Display for Verdict3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict3::Yes => f.write_str("yes"),
            Verdict3::No => f.write_str("no"),
            Verdict3::Unknown { bound } => write!(f, "unknown (bound {bound})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Power(i64),
    NotMember,
    Unknown { bound: u64 },
}

/// `g_0 s_1 g_1 s_2 ... s_k g_k` at a fixed level: the `s_i` are the stable
/// letters of that depth and the `g_i` are words of strictly smaller depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerWord {
    pub level: u32,
    pub segments: Vec<Word>,
    pub stable: Vec<Letter>,
}

impl TowerWord {
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            letters.extend_from_slice(seg.letters());
            if let Some(&s) = self.stable.get(i) {
                letters.push(s);
            }
        }
        Word::from_letters(letters)
    }

    pub fn stable_length(&self) -> usize {
        self.stable.len()
    }

    pub fn is_identity(&self) -> bool {
        self.stable.is_empty() && self.segments.iter().all(Word::is_identity)
    }
}

impl HnnTower {
    fn check(&self, w: &Word) -> Result<(), HnnError> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(HnnError::NotInTower)
        }
    }

    /// Britton-reduced form of `w` at the level of its deepest letter.
    pub fn britton_form(&self, w: &Word) -> Result<TowerWord, HnnError> {
        self.check(w)?;
        self.reduce_at(w.letters(), self.word_level(w), self.bound())
    }

    pub fn britton_reduce(&self, w: &Word) -> Result<Word, HnnError> {
        Ok(self.britton_form(w)?.to_word())
    }

    pub fn is_trivial(&self, w: &Word) -> Result<Verdict3, HnnError> {
        match self.britton_form(w) {
            Ok(f) if f.is_identity() => Ok(Verdict3::Yes),
            Ok(_) => Ok(Verdict3::No),
            Err(HnnError::MembershipUnknown { bound, .. }) => Ok(Verdict3::Unknown { bound }),
            Err(e) => Err(e),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<Verdict3, HnnError> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Whether `w g w^-1 = target`; an inconclusive reduction is an error.
    pub fn verify_conjugator(&self, g: &Word, w: &Word, target: &Word) -> Result<bool, HnnError> {
        match self.equal(&g.conjugate_by(w), target)? {
            Verdict3::Yes => Ok(true),
            Verdict3::No => Ok(false),
            Verdict3::Unknown { bound } => Err(HnnError::Inconclusive { bound }),
        }
    }

    /// Solves `w = c^m`. Over the free base the answer is exact. Above it the
    /// candidate `m` is forced by stable-letter lengths and only checked when
    /// `|m| <= bound`.
    pub fn cyclic_membership(&self, w: &Word, c: &Word, bound: u64) -> Result<Membership, HnnError> {
        self.check(w)?;
        self.check(c)?;
        let level = self.word_level(w).max(self.word_level(c));
        if self.reduce_at(c.letters(), level, bound)?.is_identity() {
            return Err(HnnError::IdentityAssociation(self.format(c)));
        }
        match self.member(w, c, level, bound) {
            Err(HnnError::MembershipUnknown { bound, .. }) => Ok(Membership::Unknown { bound }),
            other => other,
        }
    }

    /// Stable letters of the deepest level of `w`, after reduction.
    pub fn stable_signature(&self, w: &Word) -> Result<Vec<Letter>, HnnError> {
        let f = self.britton_form(w)?;
        Ok(f.stable)
    }

    /// Positions `(i, j)` of a pinch `s^±1 g s^∓1` in `w` whose middle has
    /// only letters shallower than `s` and lies in the matching cyclic subgroup.
    pub fn find_pinch(&self, w: &Word) -> Result<Option<(usize, usize)>, HnnError> {
        self.check(w)?;
        let ls = w.letters();
        for (i, &l) in ls.iter().enumerate() {
            let d = self.depth(l.generator());
            if d == 0 {
                continue;
            }
            for j in i + 1..ls.len() {
                let dj = self.depth(ls[j].generator());
                if dj < d {
                    continue;
                }
                if dj == d && l.cancels(ls[j]) {
                    let mid = Word::from_letters(ls[i + 1..j].iter().copied());
                    if self.pinch(l, &mid, d - 1, self.bound())?.is_some() {
                        return Ok(Some((i, j)));
                    }
                }
                break;
            }
        }
        Ok(None)
    }

    /// Replacement for `s mid s^-1` when it is a pinch.
    pub(crate) fn pinch(&self, s: Letter, mid: &Word, lower: u32, bound: u64) -> Result<Option<Word>, HnnError> {
        let a = self
            .association_of(s.generator())
            .expect("pinch letters are stable letters");
        let (from, to) = if s.is_inverse() {
            (&a.target, &a.source)
        } else {
            (&a.source, &a.target)
        };
        if mid.is_identity() {
            return Ok(Some(Word::identity()));
        }
        match self.member(mid, from, lower, bound)? {
            Membership::Power(m) => Ok(Some(to.pow(m))),
            Membership::NotMember => Ok(None),
            Membership::Unknown { bound } => Err(HnnError::MembershipUnknown {
                segment: self.format(mid),
                bound,
            }),
        }
    }

    fn reduce_flat(&self, letters: &[Letter], level: u32, bound: u64) -> Result<Word, HnnError> {
        if level == 0 {
            return Ok(Word::from_letters(letters.iter().copied()));
        }
        Ok(self.reduce_at(letters, level, bound)?.to_word())
    }

    fn reduce_at(&self, letters: &[Letter], level: u32, bound: u64) -> Result<TowerWord, HnnError> {
        if level == 0 {
            return Ok(TowerWord {
                level,
                segments: vec![Word::from_letters(letters.iter().copied())],
                stable: Vec::new(),
            });
        }
        // closed segments are reduced; the last one is open and raw
        let mut segs: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut tops: Vec<Letter> = Vec::new();
        for &l in letters {
            if self.depth(l.generator()) < level {
                segs.last_mut().expect("open segment").push(l);
                continue;
            }
            let open = self.reduce_flat(&segs.pop().expect("open segment"), level - 1, bound)?;
            if let Some(&prev) = tops.last() {
                if prev.cancels(l) {
                    if let Some(rep) = self.pinch(prev, &open, level - 1, bound)? {
                        tops.pop();
                        segs.last_mut().expect("segment before pinch").extend_from_slice(rep.letters());
                        continue;
                    }
                }
            }
            segs.push(open.into_letters());
            tops.push(l);
            segs.push(Vec::new());
        }
        let mut segments = Vec::with_capacity(segs.len());
        let n = segs.len();
        for (i, s) in segs.into_iter().enumerate() {
            segments.push(if i + 1 == n {
                self.reduce_flat(&s, level - 1, bound)?
            } else {
                Word::from_letters(s)
            });
        }
        Ok(TowerWord {
            level,
            segments,
            stable: tops,
        })
    }

    /// `c = h core h^-1` with `core` cyclically Britton-reduced at `level`.
    fn cyclic_core(&self, c: &Word, level: u32, bound: u64) -> Result<(Word, TowerWord), HnnError> {
        let mut h = Word::identity();
        let mut cur = self.reduce_flat(c.letters(), level, bound)?;
        loop {
            let f = self.reduce_at(cur.letters(), level, bound)?;
            if f.stable.is_empty() {
                return Ok((h, f));
            }
            let g0 = &f.segments[0];
            let rotated = g0.inverse().concat(&cur).concat(g0);
            h = h.concat(g0);
            let f = self.reduce_at(rotated.letters(), level, bound)?;
            let first = f.stable[0];
            let last = *f.stable.last().expect("nonempty");
            let wrap = f.segments.last().expect("segments").clone();
            if last.cancels(first) && self.pinch(last, &wrap, level - 1, bound)?.is_some() {
                let fw = Word::letter(first);
                cur = fw.inverse().concat(&f.to_word()).concat(&fw);
                h = h.concat(&fw);
                continue;
            }
            return Ok((h, f));
        }
    }

    pub(crate) fn member(&self, s: &Word, c: &Word, level: u32, bound: u64) -> Result<Membership, HnnError> {
        let level = level.min(self.word_level(s).max(self.word_level(c)));
        let s = self.reduce_flat(s.letters(), level, bound)?;
        if s.is_identity() {
            return Ok(Membership::Power(0));
        }
        if level == 0 {
            return Ok(free_membership(&s, c));
        }
        let (h, core) = self.cyclic_core(c, level, bound)?;
        if core.is_identity() {
            return Ok(Membership::NotMember);
        }
        let core_word = core.to_word();
        let s2 = self.reduce_at(h.inverse().concat(&s).concat(&h).letters(), level, bound)?;
        let k = core.stable_length();
        let big = s2.stable_length();
        if k == 0 {
            if big != 0 {
                return Ok(Membership::NotMember);
            }
            return self.member(&s2.to_word(), &core_word, level - 1, bound);
        }
        if big % k != 0 {
            return Ok(Membership::NotMember);
        }
        let q = (big / k) as u64;
        if q > bound {
            return Ok(Membership::Unknown { bound });
        }
        let s2w = s2.to_word();
        for m in [q as i64, -(q as i64)] {
            let diff = s2w.concat(&core_word.pow(-m));
            if self.reduce_at(diff.letters(), level, bound)?.is_identity() {
                return Ok(Membership::Power(m));
            }
        }
        Ok(Membership::NotMember)
    }
}

/// `s` lies in `<c>` iff their primitive roots agree up to inversion and the
/// exponent of `c` divides that of `s`.
fn free_membership(s: &Word, c: &Word) -> Membership {
    let (Ok((rs, es)), Ok((rc, ec))) = (primitive_root(s), primitive_root(c)) else {
        return if s.is_identity() {
            Membership::Power(0)
        } else {
            Membership::NotMember
        };
    };
    if es % ec != 0 {
        return Membership::NotMember;
    }
    let m = (es / ec) as i64;
    if rs == rc {
        Membership::Power(m)
    } else if rs == rc.inverse() {
        Membership::Power(-m)
    } else {
        Membership::NotMember
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::FinitePresentation;
    use crate::word::Alphabet;

    fn klein() -> HnnTower {
        HnnTower::from_presentation(&FinitePresentation::klein_bottle()).unwrap()
    }

    fn bs12() -> HnnTower {
        HnnTower::from_presentation(&FinitePresentation::bs12()).unwrap()
    }

    fn red(t: &HnnTower, s: &str) -> String {
        t.format(&t.britton_reduce(&t.word(s).unwrap()).unwrap())
    }

    #[test]
    fn klein_reductions() {
        let k = klein();
        assert_eq!(red(&k, "t a t^-1"), "a^-1");
        assert_eq!(k.is_trivial(&k.word("t a t^-1 a").unwrap()).unwrap(), Verdict3::Yes);
        assert_eq!(k.is_trivial(&k.word("t a t^-1 a^-1").unwrap()).unwrap(), Verdict3::No);
        assert_eq!(red(&k, "t a t^-1 a^-1"), "a^-1 a^-1");
        assert_eq!(k.is_trivial(&k.word("t t^-1").unwrap()).unwrap(), Verdict3::Yes);
        // t^2 is central
        assert_eq!(k.is_trivial(&k.word("t^2 a t^-2 a^-1").unwrap()).unwrap(), Verdict3::Yes);
    }

    #[test]
    fn bs12_reductions() {
        let b = bs12();
        assert_eq!(red(&b, "t^-1 a^2 t"), "a");
        assert_eq!(red(&b, "t^-1 a t"), "t^-1 a t");
        assert_eq!(red(&b, "t a t^-1"), "a a");
        assert_eq!(red(&b, "t^-1 a^6 t"), "a a a");
        assert_eq!(red(&b, "t^-2 a^4 t^2"), "a");
    }

    #[test]
    fn free_cyclic_membership() {
        let t = HnnTower::free(Alphabet::of(&["a", "b"]));
        let w = |s: &str| t.word(s).unwrap();
        assert_eq!(t.cyclic_membership(&w("a^6"), &w("a"), 64).unwrap(), Membership::Power(6));
        assert_eq!(t.cyclic_membership(&w("a^3"), &w("a^2"), 64).unwrap(), Membership::NotMember);
        assert_eq!(t.cyclic_membership(&w("b a b^-1"), &w("a"), 64).unwrap(), Membership::NotMember);
        assert_eq!(t.cyclic_membership(&w("a^-4"), &w("a^2"), 64).unwrap(), Membership::Power(-2));
        assert_eq!(
            t.cyclic_membership(&w("b a^3 b^-1"), &w("b a^-1 b^-1"), 64).unwrap(),
            Membership::Power(-3)
        );
        assert!(t.cyclic_membership(&w("a"), &w("1"), 64).is_err());
    }

    #[test]
    fn membership_above_the_base() {
        let k = klein();
        let w = |s: &str| k.word(s).unwrap();
        // (a t)^2 = a t a t = a a^-1 t t = t^2
        assert_eq!(k.cyclic_membership(&w("t^2"), &w("a t"), 64).unwrap(), Membership::Power(2));
        assert_eq!(k.cyclic_membership(&w("t^6"), &w("t^2"), 64).unwrap(), Membership::Power(3));
        assert_eq!(k.cyclic_membership(&w("t^3"), &w("t^2"), 64).unwrap(), Membership::NotMember);
        assert_eq!(k.cyclic_membership(&w("a t^2"), &w("t"), 64).unwrap(), Membership::NotMember);
        assert_eq!(k.cyclic_membership(&w("t^8"), &w("t"), 4).unwrap(), Membership::Unknown { bound: 4 });
    }

    #[test]
    fn conjugator_verification() {
        let mut t = HnnTower::free(Alphabet::of(&["x1", "x2"]));
        let g1 = t.word("x2 x1 x2").unwrap();
        let x1 = t.word("x1").unwrap();
        let t1 = t.attach("t1", g1.clone(), x1.clone()).unwrap();
        let tw = Word::generator(t1);
        assert!(t.verify_conjugator(&g1, &tw, &x1).unwrap());
        assert!(t.verify_conjugator(&g1, &Word::identity(), &g1).unwrap());
        assert!(!t.verify_conjugator(&g1, &Word::identity(), &x1).unwrap());
    }

    #[test]
    fn pinch_scan_on_reduced_words() {
        let k = klein();
        let w = k.word("a t a^2 t^-1 a").unwrap();
        assert_eq!(k.find_pinch(&w).unwrap(), Some((1, 4)));
        let r = k.britton_reduce(&w).unwrap();
        assert_eq!(k.find_pinch(&r).unwrap(), None);
        let b = bs12();
        assert_eq!(b.find_pinch(&b.word("t^-1 a t").unwrap()).unwrap(), None);
    }
}
