//! Fixed-width 256-bit sets over element indices.

use std::cmp::Ordering;
use std::fmt;

/// Largest group order any bit-vector subset can address.
pub const MAX_ORDER: usize = 256;

const WORDS: usize = MAX_ORDER / 64;

/// A set of element indices in `0..256`, stored as four 64-bit words.
///
/// Ordering compares the words as one 256-bit unsigned integer, so for
/// subsets of a group of order `n <= 64` it coincides with the numeric order
/// of the subset mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bits([u64; WORDS]);

impl Bits {
    pub const EMPTY: Bits = Bits([0; WORDS]);

    pub fn from_mask(mask: u64) -> Self {
        Bits([mask, 0, 0, 0])
    }

    pub fn singleton(x: usize) -> Self {
        let mut b = Bits::EMPTY;
        b.insert(x);
        b
    }

    /// Every index in `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        let mut b = Bits::EMPTY;
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                b.0[w] = u64::MAX;
            } else if n > lo {
                b.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        b
    }

    pub fn words(&self) -> &[u64; WORDS] {
        &self.0
    }

    /// The low word; exact when every member is below 64.
    pub fn low_word(&self) -> u64 {
        self.0[0]
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0[x >> 6] |= 1u64 << (x & 63);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0[x >> 6] &= !(1u64 << (x & 63));
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < MAX_ORDER && self.0[x >> 6] & (1u64 << (x & 63)) != 0
    }

    #[inline]
    pub fn with(mut self, x: usize) -> Self {
        self.insert(x);
        self
    }

    #[inline]
    pub fn without(mut self, x: usize) -> Self {
        self.remove(x);
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut out = *self;
        out.union_with(other);
        out
    }

    #[inline]
    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> BitsIter {
        BitsIter {
            words: self.0,
            word: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Hex string of the first `n` bits, most significant nibble first.
    pub fn to_hex(&self, n: usize) -> String {
        let nibbles = n.div_ceil(4).max(1);
        let mut s = String::with_capacity(nibbles);
        for k in (0..nibbles).rev() {
            let bit = k * 4;
            let word = self.0[bit >> 6];
            let v = (word >> (bit & 63)) & 0xf;
            s.push(char::from_digit(v as u32, 16).unwrap());
        }
        s
    }

    /// Image of the set under an index map.
    #[inline]
    pub fn map(&self, f: &[u8]) -> Bits {
        let mut out = Bits::EMPTY;
        for x in self.iter() {
            out.insert(f[x] as usize);
        }
        out
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut b = Bits::EMPTY;
        for x in iter {
            b.insert(x);
        }
        b
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        for w in (0..WORDS).rev() {
            match self.0[w].cmp(&other.0[w]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct BitsIter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for BitsIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + w.trailing_zeros() as usize);
            }
            self.word += 1;
        }
        None
    }
}
