use super::{Letter, Word};

/// Nonidentity freely reduced words over `rank` generators in shortlex order
/// (length first, then letter order with `g < g^-1 < h`).
#[derive(Clone, Debug)]
pub struct ShortLex {
    rank: usize,
    current: Vec<u32>,
    max_len: Option<usize>,
}

impl ShortLex {
    pub fn new(rank: usize) -> ShortLex {
        ShortLex {
            rank,
            current: Vec::new(),
            max_len: None,
        }
    }

    /// Stops after the words of length `max_len`.
    pub fn up_to_length(rank: usize, max_len: usize) -> ShortLex {
        ShortLex {
            rank,
            current: Vec::new(),
            max_len: Some(max_len),
        }
    }

    fn letters(&self) -> u32 {
        2 * self.rank as u32
    }

    fn smallest_after(&self, prev: Option<u32>, above: Option<u32>) -> Option<u32> {
        let start = above.map_or(0, |c| c + 1);
        (start..self.letters()).find(|&c| prev.is_none_or(|p| p ^ 1 != c))
    }

    fn fill_from(&mut self, pos: usize, len: usize) {
        self.current.truncate(pos);
        while self.current.len() < len {
            let prev = self.current.last().copied();
            let c = self
                .smallest_after(prev, None)
                .expect("rank >= 1 always has a continuation");
            self.current.push(c);
        }
    }

    fn advance(&mut self) -> bool {
        let len = self.current.len();
        for i in (0..len).rev() {
            let prev = if i == 0 { None } else { Some(self.current[i - 1]) };
            if let Some(c) = self.smallest_after(prev, Some(self.current[i])) {
                self.current[i] = c;
                self.fill_from(i + 1, len);
                return true;
            }
        }
        false
    }
}

impl Iterator for ShortLex {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.rank == 0 {
            return None;
        }
        if self.current.is_empty() || !self.advance() {
            let len = self.current.len() + 1;
            if self.max_len.is_some_and(|m| len > m) {
                return None;
            }
            self.fill_from(0, len);
        }
        Some(Word::from_reduced_unchecked(
            self.current.iter().map(|&c| Letter::from_code(c)).collect(),
        ))
    }
}

/// All freely reduced words of length at most `max_len`, identity included.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    out.extend(ShortLex::up_to_length(rank, max_len));
    out
}
