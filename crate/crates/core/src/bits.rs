//! Fixed-width bitsets backing relation values.
//!
//! Three 64-bit words cover every calculus in this crate (the widest basis
//! has 169 basic relations).

pub const WORDS: usize = 3;
pub const MAX_WIDTH: usize = WORDS * 64;

/// A set of basic-relation indices, width-limited by the owning calculus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    words: [u64; WORDS],
}

impl Bits {
    pub const EMPTY: Bits = Bits { words: [0; WORDS] };

    pub fn singleton(index: usize) -> Bits {
        debug_assert!(index < MAX_WIDTH);
        let mut words = [0u64; WORDS];
        words[index / 64] = 1 << (index % 64);
        Bits { words }
    }

    /// All indices below `width` set.
    pub fn all_below(width: usize) -> Bits {
        debug_assert!(width <= MAX_WIDTH);
        let mut words = [0u64; WORDS];
        for (w, word) in words.iter_mut().enumerate() {
            let lo = w * 64;
            if width >= lo + 64 {
                *word = u64::MAX;
            } else if width > lo {
                *word = (1u64 << (width - lo)) - 1;
            }
        }
        Bits { words }
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words[index / 64] & (1 << (index % 64)) != 0
    }

    pub fn insert(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        Bits { words }
    }

    pub fn intersect(&self, other: &Bits) -> Bits {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= o;
        }
        Bits { words }
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        Bits { words }
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Iterate set indices in ascending order.
    pub fn iter(&self) -> BitIter {
        BitIter {
            words: self.words,
            word: 0,
        }
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

pub struct BitIter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let tz = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + tz);
            }
            self.word += 1;
        }
        None
    }
}
