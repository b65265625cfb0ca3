use super::{Member, SymmetrizedSet};
use crate::word::{cyclic_reduce, Word};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct State {
    len: u32,
    link: u32,
    next: Vec<(u32, u32)>,
    /// One occurrence per distinct cyclic word length: (length, word, end offset in the doubled word).
    occ: Vec<(u32, u32, u32)>,
}

impl State {
    fn go(&self, c: u32) -> u32 {
        self.next.iter().find(|e| e.0 == c).map_or(NONE, |e| e.1)
    }

    fn set(&mut self, c: u32, to: u32) {
        match self.next.iter_mut().find(|e| e.0 == c) {
            Some(e) => e.1 = to,
            None => self.next.push((c, to)),
        }
    }
}

/// Suffix automaton over the doubled cyclic words of a closure.
///
/// A substring of length `L ≤ n` of a doubled word of length `2n` is a prefix
/// of a closure member, and every prefix of a member arises this way.
#[derive(Clone, Debug)]
pub struct DehnIndex {
    states: Vec<State>,
    words: Vec<Word>,
    min_len: usize,
}

impl DehnIndex {
    pub fn new(set: &SymmetrizedSet) -> DehnIndex {
        let mut sa = DehnIndex {
            states: vec![State {
                len: 0,
                link: NONE,
                next: Vec::new(),
                occ: Vec::new(),
            }],
            words: set.words().to_vec(),
            min_len: set.min_relator_length(),
        };
        let mut last = 0u32;
        for (w, word) in set.words().iter().enumerate() {
            let n = word.len() as u32;
            for (e, l) in word.letters().iter().chain(word.letters()).enumerate() {
                last = sa.extend(last, l.code());
                sa.states[last as usize].occ = vec![(n, w as u32, e as u32)];
            }
            // a fresh separator per word keeps matches inside one word
            last = sa.extend(last, (1 << 20) + w as u32);
        }
        let mut order: Vec<u32> = (1..sa.states.len() as u32).collect();
        order.sort_unstable_by_key(|&s| std::cmp::Reverse(sa.states[s as usize].len));
        for s in order {
            let link = sa.states[s as usize].link;
            if link == NONE {
                continue;
            }
            let occ = sa.states[s as usize].occ.clone();
            let parent = &mut sa.states[link as usize].occ;
            for o in occ {
                if !parent.iter().any(|p| p.0 == o.0) {
                    parent.push(o);
                }
            }
        }
        sa
    }

    fn extend(&mut self, last: u32, c: u32) -> u32 {
        let cur = self.states.len() as u32;
        self.states.push(State {
            len: self.states[last as usize].len + 1,
            link: 0,
            next: Vec::new(),
            occ: Vec::new(),
        });
        let mut p = last;
        while p != NONE && self.states[p as usize].go(c) == NONE {
            self.states[p as usize].set(c, cur);
            p = self.states[p as usize].link;
        }
        if p == NONE {
            return cur;
        }
        let q = self.states[p as usize].go(c);
        if self.states[p as usize].len + 1 == self.states[q as usize].len {
            self.states[cur as usize].link = q;
            return cur;
        }
        let clone = self.states.len() as u32;
        let mut st = self.states[q as usize].clone();
        st.len = self.states[p as usize].len + 1;
        st.occ = Vec::new();
        self.states.push(st);
        while p != NONE && self.states[p as usize].go(c) == q {
            self.states[p as usize].set(c, clone);
            p = self.states[p as usize].link;
        }
        self.states[q as usize].link = clone;
        self.states[cur as usize].link = clone;
        cur
    }

    /// The longest subword of the cyclic word `w` that is more than half of
    /// a closure member: (start in `w`, length, member).
    pub fn find_long_subword(&self, w: &Word) -> Option<(usize, usize, Member)> {
        let m = w.len();
        if m == 0 {
            return None;
        }
        let letters = w.letters();
        let mut best: Option<(usize, usize, Member)> = None;
        let (mut state, mut l) = (0u32, 0usize);
        for i in 0..2 * m {
            let c = letters[i % m].code();
            while state != 0 && self.states[state as usize].go(c) == NONE {
                state = self.states[state as usize].link;
                l = self.states[state as usize].len as usize;
            }
            let to = self.states[state as usize].go(c);
            if to != NONE {
                state = to;
                l += 1;
            }
            let cap = l.min(m);
            let (mut s, mut top) = (state, cap);
            while s != 0 && 2 * top > self.min_len {
                let st = &self.states[s as usize];
                let low = self.states[st.link as usize].len as usize;
                for &(n, word, end) in &st.occ {
                    let n = n as usize;
                    let hi = top.min(n);
                    let lo = low.max(n / 2) + 1;
                    if hi >= lo && best.is_none_or(|b| hi > b.1) {
                        let start = (i + 1 - hi) % m;
                        let offset = (end as usize + 1 + n - hi) % n;
                        best = Some((start, hi, Member { word: word as usize, offset }));
                    }
                }
                s = st.link;
                top = top.min(self.states[s as usize].len as usize);
            }
        }
        best
    }

    /// Dehn's algorithm on the cyclic word of `w`: replace a subword `u`
    /// with `u v` a closure member and `|u| > |v|` by `v^-1` until none is left.
    /// The result is cyclically reduced and conjugate to `w` in the quotient;
    /// under `C'(1/6)` it is empty iff `w` is trivial there.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = cyclic_reduce(w).0.to_word();
        while let Some((start, len, mem)) = self.find_long_subword(&cur) {
            let r = self.words[mem.word].rotate(mem.offset);
            let v_inv = r.slice(len, r.len()).inverse();
            let rest = cur.rotate(start);
            let rest = rest.slice(len, rest.len());
            cur = cyclic_reduce(&v_inv.concat(&rest)).0.to_word();
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::super::symmetrize;
    use crate::presentation::parse_word;
    use crate::word::Alphabet;

    #[test]
    fn commutator_relator_reduces_away() {
        let al = Alphabet::of(&["a", "b", "c", "d"]);
        let w = |s: &str| parse_word(&al, s).unwrap();
        let set = symmetrize(&[w("a b a^-1 b^-1 c d c^-1 d^-1")]).unwrap();
        assert!(set.dehn_reduce(&w("d^-1 a b a^-1 b^-1 c d c^-1")).is_empty());
        assert!(set.dehn_reduce(&w("a b a^-1 b^-1 c d c^-1 d^-1")).is_empty());
        assert!(!set.dehn_reduce(&w("a b a^-1")).is_empty());
        // five letters of eight replaced by the missing three, inverted
        let r = set.dehn_reduce(&w("a b a^-1 b^-1 c a"));
        assert_eq!(al.format(&r), al.format(&crate::word::cyclic_reduce(&w("d c d^-1 a")).0.to_word()));
    }
}
