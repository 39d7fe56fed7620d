use crate::bits::BitString;
use crate::direct::BitSource;
use crate::error::{Error, Result};

/// Packs bits most-significant-first into bytes.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    buf: Vec<u8>,
    acc: u8,
    pending: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bytes: usize) -> Self {
        Self { buf: Vec::with_capacity(bytes), ..Self::default() }
    }

    /// Total number of bits written so far.
    pub fn bit_len(&self) -> u64 {
        self.buf.len() as u64 * 8 + self.pending as u64
    }

    #[inline]
    pub fn push_bit(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.pending += 1;
        if self.pending == 8 {
            self.buf.push(self.acc);
            self.acc = 0;
            self.pending = 0;
        }
    }

    pub fn append(&mut self, bits: &BitString) {
        for &b in bits.bits() {
            self.push_bit(b);
        }
    }

    /// Zero-pads the final partial byte and returns the packed bytes.
    pub fn finish(mut self) -> Vec<u8> {
        if self.pending > 0 {
            self.buf.push(self.acc << (8 - self.pending));
        }
        self.buf
    }
}

/// Reads bits most-significant-first, never past `limit` bits.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    data: &'a [u8],
    cursor: u64,
    limit: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, cursor: 0, limit: data.len() as u64 * 8 }
    }

    /// Reader restricted to the first `bits` bits of `data`.
    pub fn with_limit(data: &'a [u8], bits: u64) -> Self {
        Self { data, cursor: 0, limit: bits.min(data.len() as u64 * 8) }
    }

    pub fn position(&self) -> u64 {
        self.cursor
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.cursor
    }

    #[inline]
    fn bit_at(&self, pos: u64) -> bool {
        (self.data[(pos / 8) as usize] >> (7 - pos % 8)) & 1 == 1
    }
}

impl BitSource for BitReader<'_> {
    fn take(&mut self, k: u32) -> Result<u64> {
        assert!(k <= 64, "cannot take {k} bits at once");
        if self.remaining() < k as u64 {
            return Err(Error::Truncated);
        }
        let mut v = 0u64;
        for i in 0..k as u64 {
            v = (v << 1) | self.bit_at(self.cursor + i) as u64;
        }
        self.cursor += k as u64;
        Ok(v)
    }

    fn take_bit(&mut self) -> Result<bool> {
        if self.cursor >= self.limit {
            return Err(Error::Truncated);
        }
        let b = self.bit_at(self.cursor);
        self.cursor += 1;
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_concatenates() {
        let mut w = BitWriter::new();
        w.append(&"110".parse().unwrap());
        w.append(&"10".parse().unwrap());
        assert_eq!(w.bit_len(), 5);
        assert_eq!(w.finish(), [0b1101_0000]);
    }

    #[test]
    fn append_nothing() {
        let mut w = BitWriter::new();
        w.append(&BitString::new());
        assert_eq!(w.bit_len(), 0);
        assert!(w.finish().is_empty());
    }

    #[test]
    fn eight_ones_make_a_byte() {
        let mut w = BitWriter::new();
        w.append(&"11111111".parse().unwrap());
        assert_eq!(w.finish(), [0xFF]);
    }

    #[test]
    fn take_examples() {
        let mut r = BitReader::new(&[0xD0]);
        assert_eq!(r.take(3).unwrap(), 6);
        assert_eq!(r.take(0).unwrap(), 0);
        assert_eq!(r.position(), 3);

        let mut r = BitReader::new(&[0xFF]);
        assert_eq!(r.take(8).unwrap(), 255);
        assert!(matches!(r.take(1), Err(Error::Truncated)));
    }

    #[test]
    fn limit_is_respected() {
        let mut r = BitReader::with_limit(&[0xFF, 0xFF], 10);
        assert_eq!(r.take(9).unwrap(), 0x1FF);
        assert!(r.take_bit().unwrap());
        assert!(matches!(r.take_bit(), Err(Error::Truncated)));
    }

    #[test]
    fn take_spans_bytes() {
        let mut r = BitReader::new(&[0x12, 0x34, 0x56]);
        assert_eq!(r.take(4).unwrap(), 0x1);
        assert_eq!(r.take(16).unwrap(), 0x2345);
        assert_eq!(r.take(4).unwrap(), 0x6);
    }
}
