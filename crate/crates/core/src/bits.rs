//! A fixed-length packed bit vector.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = u64>) -> Self {
        let mut bits = Self::zeros(len);
        for i in positions {
            bits.set(i as usize, true);
        }
        bits
    }

    pub fn from_bools(values: impl IntoIterator<Item = bool>) -> Self {
        let values: Vec<bool> = values.into_iter().collect();
        let mut bits = Self::zeros(values.len());
        for (i, b) in values.into_iter().enumerate() {
            bits.set(i, b);
        }
        bits
    }

    /// Parses ASCII `0`/`1`, ignoring whitespace. Returns `None` on any other
    /// character.
    pub fn parse_ascii(text: &str) -> Option<Self> {
        let mut values = Vec::new();
        for c in text.chars() {
            match c {
                '0' => values.push(false),
                '1' => values.push(true),
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(Self::from_bools(values))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// `count` back-to-back copies of this vector.
    pub fn repeat(&self, count: usize) -> Self {
        let mut out = Self::zeros(self.len * count);
        for c in 0..count {
            for i in self.ones() {
                out.set(c * self.len + i, true);
            }
        }
        out
    }

    pub fn to_ascii(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Packs bits eight to a byte, first bit in the most significant
    /// position, zero-padding the final byte; returned as lowercase hex.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for chunk in 0..self.len.div_ceil(8) {
            let mut byte = 0u8;
            for k in 0..8 {
                let i = chunk * 8 + k;
                if i < self.len && self.get(i) {
                    byte |= 0x80 >> k;
                }
            }
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({})", self.to_ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_and_hex() {
        let b = Bits::parse_ascii("1110 00\n").unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.to_ascii(), "111000");
        assert_eq!(b.to_hex(), "e0");
        assert_eq!(b.weight(), 3);
        assert!(Bits::parse_ascii("10x").is_none());
        let long = Bits::from_positions(70, [0, 64, 69]);
        assert_eq!(long.ones().collect::<Vec<_>>(), vec![0, 64, 69]);
        assert_eq!(long.repeat(2).weight(), 6);
        assert!(long.repeat(2).get(139));
    }
}
