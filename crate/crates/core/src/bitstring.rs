//! Fixed-length packed bit strings.
//!
//! Bit `i` (0-based, position `i + 1` in the usual `x_1 … x_n` notation) lives
//! in word `i / 64` at bit `i % 64`. Bits beyond `len` in the last word are
//! always zero, so word-wise equality, hashing and popcount are exact.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitString {
    /// All-zero string of length `len`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "bit string length must be at least 1");
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.clear_tail();
        s
    }

    /// `1^ones 0^(len - ones)`, the shape of every Pareto-optimal LOTZ point.
    pub fn prefix_ones(len: usize, ones: usize) -> Self {
        assert!(ones <= len, "prefix of {ones} ones exceeds length {len}");
        let mut s = Self::zeros(len);
        let full = ones / WORD;
        s.words[..full].iter_mut().for_each(|w| *w = u64::MAX);
        if !ones.is_multiple_of(WORD) {
            s.words[full] = (1u64 << (ones % WORD)) - 1;
        }
        s
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Uniform sample from `{0,1}^len`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = Self::zeros(len);
        s.words.iter_mut().for_each(|w| *w = rng.random());
        s.clear_tail();
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Number of one bits, `|x|_1`.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of zero bits, `|x|_0`.
    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Length of the longest all-ones prefix.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for &w in &self.words {
            let run = w.trailing_ones() as usize;
            total += run;
            if run < WORD {
                break;
            }
        }
        total.min(self.len)
    }

    /// Length of the longest all-zeros suffix.
    pub fn trailing_zeros(&self) -> usize {
        let tail_bits = self.len - (self.words.len() - 1) * WORD;
        let mut total = 0;
        for (k, &w) in self.words.iter().enumerate().rev() {
            let width = if k + 1 == self.words.len() {
                tail_bits
            } else {
                WORD
            };
            // Shift the `width` meaningful bits to the top so leading_zeros
            // counts from the highest position of this word.
            let shifted = w << (WORD - width);
            let run = (shifted.leading_zeros() as usize).min(width);
            total += run;
            if run < width {
                break;
            }
        }
        total
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> Self {
        let mut s = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.clear_tail();
        s
    }

    /// Whether the string has the form `1^i 0^(n-i)`.
    pub fn is_prefix_ones(&self) -> bool {
        self.leading_ones() + self.trailing_zeros() == self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Word-parallel splice: positions `< cut` from `self`, the rest from `other`.
    pub(crate) fn splice(&self, other: &Self, cut: usize) -> Self {
        debug_assert_eq!(self.len, other.len);
        debug_assert!(cut <= self.len);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .enumerate()
            .map(|(k, (&a, &b))| {
                let lo = k * WORD;
                let mask = if cut <= lo {
                    0
                } else if cut >= lo + WORD {
                    u64::MAX
                } else {
                    (1u64 << (cut - lo)) - 1
                };
                (a & mask) | (b & !mask)
            })
            .collect();
        Self {
            words,
            len: self.len,
        }
    }

    /// Word-parallel select: bit from `self` where `mask` is one, else from `other`.
    pub(crate) fn select(&self, other: &Self, mask: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .zip(&mask.words)
            .map(|((&a, &b), &m)| (a & m) | (b & !m))
            .collect();
        Self {
            words,
            len: self.len,
        }
    }

    /// Integer value with bit `i` at weight `2^i`; only for `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "index construction supports at most 64 bits");
        let mut s = Self::zeros(len);
        s.words[0] = index;
        s.clear_tail();
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidConfig("empty bit string".into()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidConfig(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}
