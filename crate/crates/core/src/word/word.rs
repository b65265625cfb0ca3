use std::fmt;
use std::ops::Mul;

/// A generator together with a sign.
///
/// Encoded as `2 * generator + (sign == -1)`, so the natural ordering of
/// letters is generator order with `g < g^-1` for each generator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter(((generator as u32) << 1) | inverse as u32)
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn from_code(code: u32) -> Letter {
        Letter(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.0 ^ 1 == other.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn generator(g: usize) -> Word {
        Word::letter(Letter::pos(g))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        push_reduced(&mut out, letters);
        Word { letters: out }
    }

    /// Wraps letters that the caller knows are already freely reduced.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(is_freely_reduced(&letters));
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        push_reduced(&mut out, other.letters.iter().copied());
        Word { letters: out }
    }

    /// Product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut out = Vec::new();
        for w in words {
            push_reduced(&mut out, w.letters.iter().copied());
        }
        Word { letters: out }
    }

    /// `g w g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        Word::product([g, self, &g.inverse()])
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            push_reduced(&mut out, base.letters.iter().copied());
        }
        Word { letters: out }
    }

    /// Sum of the signs of all occurrences of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == g)
            .map(|l| l.sign())
            .sum()
    }

    pub fn contains_generator(&self, g: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == g)
    }

    /// Subword `[start, end)`; subwords of reduced words are reduced.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Cyclic shift `w[k..] w[..k]`, freely reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::identity();
        }
        let k = k % self.len();
        Word::from_letters(
            self.letters[k..]
                .iter()
                .chain(self.letters[..k].iter())
                .copied(),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    /// Replaces every letter with a word (a free-group homomorphism),
    /// indexed by generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.letters {
            let img = &images[l.generator()];
            if l.is_inverse() {
                push_reduced(&mut out, img.letters.iter().rev().map(|x| x.inverse()));
            } else {
                push_reduced(&mut out, img.letters.iter().copied());
            }
        }
        Word { letters: out }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(mut self, rhs: Word) -> Word {
        push_reduced(&mut self.letters, rhs.letters);
        self
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}

pub(crate) fn push_reduced<I: IntoIterator<Item = Letter>>(out: &mut Vec<Letter>, letters: I) {
    for l in letters {
        if out.last().is_some_and(|&p| p.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}
