//! On-disk container: a fixed header followed by packed codeword bits.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "QIHC"
//! 4       1     version (0x01)
//! 5       1     mode (0x00 uniform, 0x01 byte Huffman)
//! mode 0: 6  4  n, little-endian u32
//!         10 1  symbol width in bytes (1, 2 or 4)
//! mode 1: 6  256 canonical code length per byte value (0 = absent)
//! then    8     symbol count, little-endian u64
//! then          payload, MSB-first, zero padded to a byte boundary
//! ```

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::One;

use crate::codebook::{canonical_from_lengths, kraft_sum_of_lengths, Codebook};
use crate::direct::{code_params, direct_decode, direct_encode, CodeParams};
use crate::error::{Error, Result};
use crate::huffman::{huffman_codebook, SymbolDistribution};
use crate::qstate::{build_state, qstate_encode};
use crate::Symbol;

use super::bitio::{BitReader, BitWriter};
use super::prefix::PrefixDecoder;

pub const MAGIC: [u8; 4] = *b"QIHC";
pub const VERSION: u8 = 0x01;
pub const MODE_UNIFORM: u8 = 0x00;
pub const MODE_BYTES: u8 = 0x01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alphabet {
    /// `n` equally weighted symbols stored as `symbol_width`-byte integers.
    Uniform { n: u32, symbol_width: u8 },
    /// Bytes coded with a canonical Huffman book given by its lengths.
    Bytes { lengths: Box<[u8; 256]> },
}

impl Alphabet {
    pub fn mode(&self) -> u8 {
        match self {
            Alphabet::Uniform { .. } => MODE_UNIFORM,
            Alphabet::Bytes { .. } => MODE_BYTES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerHeader {
    pub alphabet: Alphabet,
    pub symbol_count: u64,
}

impl ContainerHeader {
    pub fn encoded_len(&self) -> usize {
        match self.alphabet {
            Alphabet::Uniform { .. } => 6 + 5 + 8,
            Alphabet::Bytes { .. } => 6 + 256 + 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.alphabet {
            Alphabet::Uniform { n, symbol_width } => {
                if *n < 2 {
                    return Err(Error::CorruptHeader(format!("alphabet size {n} below 2")));
                }
                if !matches!(symbol_width, 1 | 2 | 4) {
                    return Err(Error::CorruptHeader(format!("symbol width {symbol_width} not in {{1, 2, 4}}")));
                }
                if (*n as u64) > 1u64 << (8 * *symbol_width as u32) {
                    return Err(Error::CorruptHeader(format!(
                        "alphabet size {n} does not fit {symbol_width}-byte symbols"
                    )));
                }
            }
            Alphabet::Bytes { lengths } => {
                let present: Vec<u32> = lengths.iter().filter(|&&l| l > 0).map(|&l| l as u32).collect();
                let kraft = kraft_sum_of_lengths(present.iter().copied());
                if kraft > Ratio::one() {
                    return Err(Error::CorruptHeader("code lengths violate the Kraft inequality".into()));
                }
                if present.len() >= 2 && kraft != Ratio::one() {
                    return Err(Error::CorruptHeader("code lengths do not form a complete code".into()));
                }
                if present.is_empty() && self.symbol_count > 0 {
                    return Err(Error::CorruptHeader("symbols present but no code lengths".into()));
                }
            }
        }
        Ok(())
    }

    /// Canonical codebook for mode 1 headers.
    pub fn byte_codebook(&self) -> Result<Option<Codebook>> {
        match &self.alphabet {
            Alphabet::Uniform { .. } => Ok(None),
            Alphabet::Bytes { lengths } => {
                let map: BTreeMap<Symbol, u32> = lengths
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l > 0)
                    .map(|(s, &l)| (s as Symbol, l as u32))
                    .collect();
                canonical_from_lengths(&map).map(Some)
            }
        }
    }
}

pub fn emit_header(h: &ContainerHeader) -> Result<Vec<u8>> {
    h.validate()?;
    let mut out = Vec::with_capacity(h.encoded_len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(h.alphabet.mode());
    match &h.alphabet {
        Alphabet::Uniform { n, symbol_width } => {
            out.extend_from_slice(&n.to_le_bytes());
            out.push(*symbol_width);
        }
        Alphabet::Bytes { lengths } => out.extend_from_slice(&lengths[..]),
    }
    out.extend_from_slice(&h.symbol_count.to_le_bytes());
    Ok(out)
}

/// Parses and validates a header, returning it with its length in bytes.
pub fn parse_header(bytes: &[u8]) -> Result<(ContainerHeader, usize)> {
    let need = |len: usize| -> Result<&[u8]> {
        bytes.get(..len).ok_or_else(|| Error::Format(format!("header needs {len} bytes, got {}", bytes.len())))
    };
    if bytes.get(..4) != Some(&MAGIC[..]) {
        return Err(Error::Format("bad magic".into()));
    }
    let head = need(6)?;
    if head[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", head[4])));
    }
    let (alphabet, at) = match head[5] {
        MODE_UNIFORM => {
            let b = need(11)?;
            let n = u32::from_le_bytes(b[6..10].try_into().expect("4 bytes"));
            (Alphabet::Uniform { n, symbol_width: b[10] }, 11)
        }
        MODE_BYTES => {
            let b = need(6 + 256)?;
            let lengths: [u8; 256] = b[6..262].try_into().expect("256 bytes");
            (Alphabet::Bytes { lengths: Box::new(lengths) }, 262)
        }
        other => return Err(Error::Format(format!("unknown mode {other}"))),
    };
    let b = need(at + 8)?;
    let symbol_count = u64::from_le_bytes(b[at..at + 8].try_into().expect("8 bytes"));
    let header = ContainerHeader { alphabet, symbol_count };
    header.validate()?;
    Ok((header, at + 8))
}

/// Which encoder produces the codewords of a uniform-mode container.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniformEncoder {
    Direct,
    QState,
}

/// Mode 0: every symbol coded with the closed-form uniform code for `n`.
pub fn compress_uniform(n: u64, symbol_width: u8, symbols: &[Symbol], encoder: UniformEncoder) -> Result<Vec<u8>> {
    let params = code_params(n)?;
    let n32 = u32::try_from(n).map_err(|_| Error::UnsupportedAlphabet(n))?;
    let header = ContainerHeader {
        alphabet: Alphabet::Uniform { n: n32, symbol_width },
        symbol_count: symbols.len() as u64,
    };
    let mut out = emit_header(&header)?;

    let mut w = BitWriter::with_capacity(symbols.len() * params.upper as usize / 8 + 1);
    match encoder {
        UniformEncoder::Direct => {
            for &s in symbols {
                w.append(&direct_encode(&params, s)?);
            }
        }
        UniformEncoder::QState => {
            let state = build_state(n)?;
            for &s in symbols {
                w.append(&qstate_encode(&state, s)?);
            }
        }
    }
    out.extend(w.finish());
    Ok(out)
}

/// Mode 1: bytes coded with a canonical Huffman book over their own frequencies.
pub fn compress_bytes(data: &[u8]) -> Result<Vec<u8>> {
    let mut lengths = [0u8; 256];
    let mut codes = Vec::new();
    if !data.is_empty() {
        let mut freq = [0u64; 256];
        for &b in data {
            freq[b as usize] += 1;
        }
        let book = huffman_codebook(&SymbolDistribution::from_counts(&freq)?)?;
        codes = vec![None; 256];
        for (s, code) in book.iter() {
            lengths[s as usize] = u8::try_from(code.len())
                .map_err(|_| Error::TooLarge(format!("code length {} exceeds 255", code.len())))?;
            codes[s as usize] = Some(code.clone());
        }
    }
    let header = ContainerHeader {
        alphabet: Alphabet::Bytes { lengths: Box::new(lengths) },
        symbol_count: data.len() as u64,
    };
    let mut out = emit_header(&header)?;
    let mut w = BitWriter::with_capacity(data.len());
    for &b in data {
        w.append(codes[b as usize].as_ref().expect("every present byte has a code"));
    }
    out.extend(w.finish());
    Ok(out)
}

/// Decompressed container contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub header: ContainerHeader,
    pub symbols: Vec<Symbol>,
}

impl Decoded {
    /// Raw file bytes: little-endian symbols of the stored width, or the bytes themselves.
    pub fn to_file_bytes(&self) -> Vec<u8> {
        match self.header.alphabet {
            Alphabet::Uniform { symbol_width, .. } => write_symbols(&self.symbols, symbol_width),
            Alphabet::Bytes { .. } => self.symbols.iter().map(|&s| s as u8).collect(),
        }
    }
}

pub fn decompress(bytes: &[u8]) -> Result<Decoded> {
    let (header, start) = parse_header(bytes)?;
    let payload = &bytes[start..];
    let mut reader = BitReader::new(payload);
    // Never trust the count for allocation: each symbol needs at least one bit.
    let cap = header.symbol_count.min(payload.len() as u64 * 8) as usize;
    let mut symbols = Vec::with_capacity(cap);

    match &header.alphabet {
        Alphabet::Uniform { n, .. } => {
            let params: CodeParams = code_params(*n as u64)?;
            for _ in 0..header.symbol_count {
                symbols.push(direct_decode(&params, &mut reader)?);
            }
        }
        Alphabet::Bytes { .. } => {
            if header.symbol_count > 0 {
                let book = header.byte_codebook()?.expect("mode 1");
                let decoder = PrefixDecoder::new(&book)?;
                for _ in 0..header.symbol_count {
                    symbols.push(decoder.decode(&mut reader)?);
                }
            }
        }
    }

    let used = reader.position();
    let expected_bytes = used.div_ceil(8) as usize;
    if payload.len() != expected_bytes {
        return Err(Error::Corrupt(format!(
            "payload is {} bytes, codewords occupy {expected_bytes}",
            payload.len()
        )));
    }
    if !used.is_multiple_of(8) && payload[expected_bytes - 1] & (0xFF >> (used % 8)) != 0 {
        return Err(Error::Corrupt("nonzero padding bits".into()));
    }
    Ok(Decoded { header, symbols })
}

/// Splits raw bytes into little-endian unsigned symbols of `width` bytes.
pub fn read_symbols(raw: &[u8], width: u8) -> Result<Vec<Symbol>> {
    if !matches!(width, 1 | 2 | 4) {
        return Err(Error::Format(format!("symbol width {width} not in {{1, 2, 4}}")));
    }
    let w = width as usize;
    if !raw.len().is_multiple_of(w) {
        return Err(Error::Format(format!("input length {} is not a multiple of {w}", raw.len())));
    }
    Ok(raw
        .chunks_exact(w)
        .map(|c| c.iter().rev().fold(0u64, |acc, &b| (acc << 8) | b as u64))
        .collect())
}

pub fn write_symbols(symbols: &[Symbol], width: u8) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|&s| s.to_le_bytes().into_iter().take(width as usize))
        .collect()
}
