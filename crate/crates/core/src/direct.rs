//! Closed-form Huffman codes for uniform alphabets.
//!
//! For `n` equally likely symbols the optimal code uses only two lengths,
//! `lower = ⌊lg n⌋` and `upper = ⌈lg n⌉`. The first `n − diff` symbols get
//! their own index in `lower` bits; the remaining `diff` symbols are shifted
//! into the top of the `upper`-bit space.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitString;
use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::Symbol;

/// Largest alphabet accepted by the per-symbol operations.
pub const MAX_ALPHABET: u64 = 1 << 32;
/// Largest alphabet for which a whole codebook is materialized.
pub const MAX_CODEBOOK_ALPHABET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub n: u64,
    pub lower: u32,
    pub upper: u32,
    pub diff: u64,
}

impl CodeParams {
    /// Last symbol that takes a `lower`-bit code.
    pub fn last_short_symbol(&self) -> u64 {
        self.n - 1 - self.diff
    }

    pub fn count_lower(&self) -> u64 {
        self.n - self.diff
    }

    pub fn count_upper(&self) -> u64 {
        self.diff
    }

    pub fn is_power_of_two(&self) -> bool {
        self.lower == self.upper
    }

    /// True when `numb` takes the `lower`-bit branch.
    pub fn is_short(&self, numb: Symbol) -> bool {
        self.lower == self.upper || numb <= self.last_short_symbol()
    }

    pub fn code_len(&self, numb: Symbol) -> u32 {
        if self.is_short(numb) {
            self.lower
        } else {
            self.upper
        }
    }
}

/// `lower`, `upper` and `diff` for an alphabet of `n` symbols, computed from
/// the bit length of `n`.
pub fn code_params(n: u64) -> Result<CodeParams> {
    if !(2..=MAX_ALPHABET).contains(&n) {
        return Err(Error::UnsupportedAlphabet(n));
    }
    let lower = 63 - n.leading_zeros();
    let upper = if n.is_power_of_two() { lower } else { lower + 1 };
    let diff = 2 * (n - (1u64 << lower));
    Ok(CodeParams { n, lower, upper, diff })
}

/// `numb` in exactly `len` bits, zero padded on the left.
pub fn binary_fixed(numb: u64, len: u32) -> Result<BitString> {
    BitString::from_value(numb, len)
}

pub fn direct_encode(p: &CodeParams, numb: Symbol) -> Result<BitString> {
    direct_encode_counted(p, numb, &mut OpCounters::default())
}

pub fn direct_encode_counted(p: &CodeParams, numb: Symbol, counters: &mut OpCounters) -> Result<BitString> {
    if numb >= p.n {
        return Err(Error::InvalidSymbol { symbol: numb, n: p.n });
    }
    let code = if p.lower == p.upper || numb <= p.n - 1 - p.diff {
        binary_fixed(numb, p.lower)?
    } else {
        binary_fixed((1u64 << p.upper) + numb - p.n, p.upper)?
    };
    counters.bits_emitted += code.len() as u64;
    Ok(code)
}

/// A sequential source of bits, most significant first.
pub trait BitSource {
    /// Reads `k ≤ 64` bits as a big-endian value.
    fn take(&mut self, k: u32) -> Result<u64>;

    fn take_bit(&mut self) -> Result<bool> {
        Ok(self.take(1)? == 1)
    }
}

/// Reads exactly one codeword produced by [`direct_encode`] with the same params.
pub fn direct_decode<S: BitSource + ?Sized>(p: &CodeParams, reader: &mut S) -> Result<Symbol> {
    let v = reader.take(p.lower)?;
    let symbol = if p.lower == p.upper || v <= p.n - 1 - p.diff {
        v
    } else {
        let b = reader.take_bit()? as u64;
        // 2v + b ≥ 2(n − diff), so the result lands in [n − diff, n)
        ((v << 1) | b) + p.n - (1u64 << p.upper)
    };
    if symbol >= p.n {
        return Err(Error::Corrupt(format!("decoded symbol {symbol} outside alphabet of size {}", p.n)));
    }
    Ok(symbol)
}

pub fn direct_codebook(n: u64) -> Result<Codebook> {
    let p = code_params(n)?;
    if n > MAX_CODEBOOK_ALPHABET {
        return Err(Error::TooLarge(format!("codebook for n = {n} exceeds {MAX_CODEBOOK_ALPHABET} entries")));
    }
    Codebook::from_sequence((0..n).map(|i| direct_encode(&p, i)).collect::<Result<Vec<_>>>()?)
}

/// Code set obtained from `book` by replacing its lexicographically largest
/// minimum-length codeword `c` with `c0` and `c1`.
///
/// Applied to the book for `n − 1` symbols this yields the book for `n`.
pub fn expand_last_short_code(book: &Codebook) -> Option<BTreeSet<BitString>> {
    let min = book.codes().map(BitString::len).min()?;
    let last = book.codes().filter(|c| c.len() == min).max()?.clone();
    let mut set: BTreeSet<BitString> = book.codes().cloned().collect();
    set.remove(&last);
    set.insert(last.extended(false));
    set.insert(last.extended(true));
    Some(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bit source over a `0`/`1` string, for decoding tests without the container.
    struct StrBits(Vec<bool>, usize);

    impl StrBits {
        fn new(s: &str) -> Self {
            Self(s.chars().map(|c| c == '1').collect(), 0)
        }
    }

    impl BitSource for StrBits {
        fn take(&mut self, k: u32) -> Result<u64> {
            let k = k as usize;
            if self.1 + k > self.0.len() {
                return Err(Error::Truncated);
            }
            let v = self.0[self.1..self.1 + k].iter().fold(0, |a, &b| (a << 1) | b as u64);
            self.1 += k;
            Ok(v)
        }
    }

    fn strings(n: u64) -> Vec<String> {
        direct_codebook(n).unwrap().codes().map(ToString::to_string).collect()
    }

    #[test]
    fn params_examples() {
        assert_eq!(code_params(5).unwrap(), CodeParams { n: 5, lower: 2, upper: 3, diff: 2 });
        assert_eq!(code_params(8).unwrap(), CodeParams { n: 8, lower: 3, upper: 3, diff: 0 });
        assert_eq!(code_params(100).unwrap(), CodeParams { n: 100, lower: 6, upper: 7, diff: 72 });
    }

    #[test]
    fn params_range() {
        assert!(matches!(code_params(0), Err(Error::UnsupportedAlphabet(0))));
        assert!(matches!(code_params(1), Err(Error::UnsupportedAlphabet(1))));
        let top = code_params(MAX_ALPHABET).unwrap();
        assert_eq!((top.lower, top.upper, top.diff), (32, 32, 0));
        let below = code_params(MAX_ALPHABET - 1).unwrap();
        assert_eq!((below.lower, below.upper), (31, 32));
        assert!(code_params(MAX_ALPHABET + 1).is_err());
    }

    #[test]
    fn params_invariants_small() {
        for n in 2..=5000u64 {
            let p = code_params(n).unwrap();
            assert_eq!(p.lower, (n as f64).log2().floor() as u32, "n={n}");
            assert_eq!(p.upper, (n as f64).log2().ceil() as u32, "n={n}");
            assert_eq!(p.diff % 2, 0);
            assert_eq!(p.upper == p.lower, p.diff == 0);
            assert_eq!(p.upper == p.lower, n.is_power_of_two());
            if p.upper > p.lower {
                assert_eq!(n - p.diff, (1 << (p.lower + 1)) - n);
                assert!(n - p.diff > 0);
                assert!(p.diff >= 2 && p.diff <= (1 << p.upper) - 2);
            }
        }
    }

    #[test]
    fn binary_fixed_examples() {
        assert_eq!(binary_fixed(6, 3).unwrap().to_string(), "110");
        assert_eq!(binary_fixed(0, 3).unwrap().to_string(), "000");
        assert_eq!(binary_fixed(14, 4).unwrap().to_string(), "1110");
        assert!(matches!(binary_fixed(8, 3), Err(Error::Overflow { .. })));
    }

    #[test]
    fn encode_examples() {
        let p5 = code_params(5).unwrap();
        assert_eq!(direct_encode(&p5, 3).unwrap().to_string(), "110");
        assert_eq!(direct_encode(&code_params(4).unwrap(), 2).unwrap().to_string(), "10");
        assert_eq!(direct_encode(&code_params(100).unwrap(), 50).unwrap().to_string(), "1001110");
        assert!(matches!(direct_encode(&p5, 5), Err(Error::InvalidSymbol { symbol: 5, n: 5 })));
    }

    #[test]
    fn short_branch_condition_is_redundant_for_powers_of_two() {
        for r in 1..=12 {
            let p = code_params(1 << r).unwrap();
            assert_eq!(p.diff, 0);
            for numb in 0..p.n {
                assert!(numb <= p.n - 1 - p.diff);
            }
        }
    }

    #[test]
    fn decode_examples() {
        let p5 = code_params(5).unwrap();
        assert_eq!(direct_decode(&p5, &mut StrBits::new("110")).unwrap(), 3);
        assert_eq!(direct_decode(&p5, &mut StrBits::new("10")).unwrap(), 2);
        assert_eq!(direct_decode(&code_params(8).unwrap(), &mut StrBits::new("101")).unwrap(), 5);
    }

    #[test]
    fn decode_consumes_one_codeword() {
        let p = code_params(5).unwrap();
        let mut src = StrBits::new("1101000111");
        let got: Vec<_> = (0..4).map(|_| direct_decode(&p, &mut src).unwrap()).collect();
        assert_eq!(got, [3, 2, 0, 4]);
        assert_eq!(src.1, 10);
    }

    #[test]
    fn decode_truncated() {
        let p = code_params(5).unwrap();
        assert!(matches!(direct_decode(&p, &mut StrBits::new("11")), Err(Error::Truncated)));
        assert!(matches!(direct_decode(&p, &mut StrBits::new("1")), Err(Error::Truncated)));
    }

    #[test]
    fn table_rows() {
        assert_eq!(strings(2), ["0", "1"]);
        assert_eq!(strings(7), ["00", "010", "011", "100", "101", "110", "111"]);
        assert_eq!(strings(9), ["000", "001", "010", "011", "100", "101", "110", "1110", "1111"]);
    }

    #[test]
    fn last_short_code_chain() {
        for n in 3..=300 {
            let prev = direct_codebook(n - 1).unwrap();
            let next: BTreeSet<BitString> = direct_codebook(n).unwrap().codes().cloned().collect();
            assert_eq!(expand_last_short_code(&prev).unwrap(), next, "n={n}");
        }
    }

    #[test]
    fn codebook_cap() {
        assert!(matches!(direct_codebook(MAX_CODEBOOK_ALPHABET + 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn round_trip_large_n() {
        let p = code_params(MAX_ALPHABET - 3).unwrap();
        for numb in [0, 1, p.last_short_symbol(), p.last_short_symbol() + 1, p.n - 1] {
            let s = direct_encode(&p, numb).unwrap().to_string();
            assert_eq!(direct_decode(&p, &mut StrBits::new(&s)).unwrap(), numb);
        }
    }
}
