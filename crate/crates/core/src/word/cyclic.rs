use std::fmt;

use super::{Letter, Word};

/// A cyclically reduced word stored in its lexicographically least rotation,
/// so that equality of cyclic words is equality of data.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    /// Canonical form of a word that is already cyclically reduced.
    /// Returns `None` if `w` is not cyclically reduced.
    pub fn from_cyclically_reduced(w: &Word) -> Option<CyclicWord> {
        if !w.is_cyclically_reduced() {
            return None;
        }
        let k = least_rotation(w.letters());
        let mut letters = Vec::with_capacity(w.len());
        letters.extend_from_slice(&w.letters()[k..]);
        letters.extend_from_slice(&w.letters()[..k]);
        Some(CyclicWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_reduced_unchecked(self.letters.clone())
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(&self.to_word().inverse())
            .expect("inverse of a cyclically reduced word is cyclically reduced")
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.letters)
    }
}

/// Index of the lexicographically least rotation (smallest such index).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Smallest period `p` of `s` with `p | len(s)`, i.e. `s = (s[..p])^(n/p)`.
pub fn primitive_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    // KMP failure function
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Splits `w` as `h · core · h^-1` with `core` cyclically reduced.
pub fn strip_conjugation(w: &Word) -> (Word, Word) {
    let ls = w.letters();
    let n = ls.len();
    let mut i = 0;
    while 2 * i + 1 < n && ls[i].cancels(ls[n - 1 - i]) {
        i += 1;
    }
    (w.slice(0, i), w.slice(i, n - i))
}

/// Cyclic reduction: returns the canonical cyclic word and a conjugator `c`
/// with `c · core · c^-1 = w`.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let (h, core) = strip_conjugation(w);
    let k = least_rotation(core.letters());
    // core = u v, canonical = v u, so core = u (v u) u^-1
    let u = core.slice(0, k);
    let cyc = CyclicWord::from_cyclically_reduced(&core).expect("stripped core");
    (cyc, h.concat(&u))
}

/// Conjugacy in the free group. Returns `g` with `g u g^-1 = v`.
pub fn conjugator(u: &Word, v: &Word) -> Option<Word> {
    let (hu, cu) = strip_conjugation(u);
    let (hv, cv) = strip_conjugation(v);
    if cu.len() != cv.len() {
        return None;
    }
    let n = cu.len();
    if n == 0 {
        return Some(Word::identity());
    }
    let ku = least_rotation(cu.letters());
    let kv = least_rotation(cv.letters());
    let same = (0..n).all(|i| cu.letters()[(ku + i) % n] == cv.letters()[(kv + i) % n]);
    if !same {
        return None;
    }
    let p = primitive_period(cu.letters());
    let r = (ku + n - kv) % n % p;
    // cv = P^-1 cu P with P = cu[..r]
    let pre = cu.slice(0, r);
    Some(Word::product([&hv, &pre.inverse(), &hu.inverse()]))
}

/// `is_conjugate` with its witness: `(true, Some(g))` with `g u g^-1 = v`.
pub fn is_conjugate(u: &Word, v: &Word) -> (bool, Option<Word>) {
    match conjugator(u, v) {
        Some(g) => (true, Some(g)),
        None => (false, None),
    }
}
