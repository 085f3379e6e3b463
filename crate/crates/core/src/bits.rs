//! Bit-exact strings used for certificates and node inputs.
//!
//! Bits are stored MSB-first. The textual form is `"<len>:<hex>"`, where the
//! hex part has exactly `ceil(len / 4)` lowercase digits and any padding bits
//! in the final nibble are zero. The explicit length keeps leading zeros
//! meaningful, which matters because certificate size is counted in bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// `ceil(log2(n))` for `n >= 1`; `0` for `n <= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Number of bits needed to write `value` in binary (`0` needs zero bits).
pub fn bit_width(value: u64) -> u32 {
    64 - value.leading_zeros()
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    // Field order matters: the derived `Ord` compares length first, then the
    // MSB-first bytes, giving shortest-first lexicographic order.
    len: usize,
    bytes: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            len: 0,
            bytes: Vec::with_capacity(bits.div_ceil(8)),
        }
    }

    /// `value` written in exactly `width` bits. Panics if it does not fit.
    pub fn from_uint(value: u64, width: u32) -> Self {
        let mut b = Self::with_capacity(width as usize);
        b.push_uint(value, width);
        b
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut b = Self::new();
        for bit in bits {
            b.push(bit);
        }
        b
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_binary_str(s: &str) -> Result<Self, ParseError> {
        let mut b = Self::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return Err(ParseError::Bitstring(format!("invalid binary digit {c:?}"))),
            }
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        if i >= self.len {
            return None;
        }
        Some(self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn push_uint(&mut self, value: u64, width: u32) {
        assert!(
            width >= 64 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            self.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    /// Elias-gamma code of `value + 1`; self-delimiting, `2*floor(log2(value+1)) + 1` bits.
    pub fn push_gamma(&mut self, value: u64) {
        let x = value.checked_add(1).expect("gamma value overflow");
        let n = bit_width(x) - 1;
        for _ in 0..n {
            self.push(false);
        }
        self.push_uint(x, n + 1);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        for bit in other.iter() {
            self.push(bit);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    /// The whole string as an unsigned integer, if it has at most 64 bits.
    /// The empty string decodes to `None`.
    pub fn to_uint(&self) -> Option<u64> {
        if self.len == 0 || self.len > 64 {
            return None;
        }
        self.reader().read_uint(self.len as u32)
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: self, pos: 0 }
    }

    /// Bits `start..end` as a new string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len);
        BitString::from_bools((start..end).map(|i| self.get(i).unwrap_or(false)))
    }

    pub fn to_binary_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn to_hex_string(&self) -> String {
        let nibbles = self.len.div_ceil(4);
        let mut out = format!("{}:", self.len);
        for i in 0..nibbles {
            let byte = self.bytes[i / 2];
            let nib = if i % 2 == 0 { byte >> 4 } else { byte & 0x0f };
            out.push(char::from_digit(nib as u32, 16).expect("nibble"));
        }
        out
    }

    pub fn parse_hex(s: &str) -> Result<Self, ParseError> {
        let err = |m: &str| ParseError::Bitstring(format!("{m} in {s:?}"));
        let (len_str, hex) = s.split_once(':').ok_or_else(|| err("missing ':'"))?;
        if len_str.is_empty() || !len_str.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err("invalid length"));
        }
        let len: usize = len_str.parse().map_err(|_| err("invalid length"))?;
        if hex.len() != len.div_ceil(4) {
            return Err(err("hex digit count does not match length"));
        }
        let mut bytes = vec![0u8; len.div_ceil(8)];
        for (i, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .filter(|_| !c.is_ascii_uppercase())
                .ok_or_else(|| err("invalid hex digit"))? as u8;
            bytes[i / 2] |= if i % 2 == 0 { nib << 4 } else { nib };
        }
        if len % 8 != 0 {
            let mask = 0xffu8 >> (len % 8);
            if bytes.last().is_some_and(|b| b & mask != 0) {
                return Err(err("nonzero padding bits"));
            }
        }
        Ok(BitString { len, bytes })
    }

    /// Every bitstring of length `0..=max_len`, shortest first, lexicographic within a length.
    pub fn all_up_to(max_len: usize) -> Vec<BitString> {
        assert!(max_len < 32, "enumerating bitstrings of length {max_len} is not sensible");
        let mut out = Vec::with_capacity((1usize << (max_len + 1)) - 1);
        for len in 0..=max_len {
            for v in 0..(1u64 << len) {
                out.push(BitString::from_uint(v, len as u32));
            }
        }
        out
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({:?})", self.to_binary_string())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex_string())
    }
}

impl FromStr for BitString {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_hex(s)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitString::parse_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Sequential decoder over a [`BitString`]. Every read returns `None` when
/// the string runs out, so malformed certificates decode to `None` rather
/// than panicking.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl BitReader<'_> {
    pub fn remaining(&self) -> usize {
        self.bits.len - self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining() == 0
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Option<u64> {
        if width > 64 || (width as usize) > self.remaining() {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Some(v)
    }

    /// Inverse of [`BitString::push_gamma`].
    pub fn read_gamma(&mut self) -> Option<u64> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 63 {
                return None;
            }
        }
        let rest = self.read_uint(zeros)?;
        let x = (1u64 << zeros) | rest;
        Some(x - 1)
    }

    pub fn read_bits(&mut self, n: usize) -> Option<BitString> {
        if n > self.remaining() {
            return None;
        }
        let out = self.bits.slice(self.pos, self.pos + n);
        self.pos += n;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(bit_width(0), 0);
        assert_eq!(bit_width(3), 2);
        assert_eq!(bit_width(4), 3);
    }

    #[test]
    fn hex_form_keeps_leading_zeros() {
        let b = BitString::from_binary_str("00101").unwrap();
        assert_eq!(b.to_hex_string(), "5:28");
        assert_eq!(BitString::new().to_hex_string(), "0:");
        assert_eq!(BitString::parse_hex("5:28").unwrap(), b);
        assert_eq!(b.to_uint(), Some(5));
    }

    #[test]
    fn hex_parse_rejects_noncanonical() {
        for bad in ["", "3", "3:", "3:ff", "3:f", "x:1", "4:F", "-1:", "1:12", "+1:8"] {
            assert!(BitString::parse_hex(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn gamma_codes() {
        let mut b = BitString::new();
        b.push_gamma(0);
        assert_eq!(b.to_binary_string(), "1");
        let mut b = BitString::new();
        b.push_gamma(4);
        assert_eq!(b.to_binary_string(), "00101");
        assert_eq!(b.reader().read_gamma(), Some(4));
        assert_eq!(BitString::from_binary_str("000").unwrap().reader().read_gamma(), None);
    }

    #[test]
    fn enumeration_order_is_shortest_first() {
        let all = BitString::all_up_to(2);
        let strs: Vec<_> = all.iter().map(|b| b.to_binary_string()).collect();
        assert_eq!(strs, ["", "0", "1", "00", "01", "10", "11"]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..80)) {
            let b = BitString::from_bools(bits.clone());
            let parsed = BitString::parse_hex(&b.to_hex_string()).unwrap();
            prop_assert_eq!(&parsed, &b);
            prop_assert_eq!(parsed.iter().collect::<Vec<_>>(), bits);
        }

        #[test]
        fn gamma_round_trip(values in proptest::collection::vec(0u64..1_000_000, 1..8)) {
            let mut b = BitString::new();
            for &v in &values { b.push_gamma(v); }
            let mut r = b.reader();
            for &v in &values { prop_assert_eq!(r.read_gamma(), Some(v)); }
            prop_assert!(r.is_exhausted());
        }
    }
}
