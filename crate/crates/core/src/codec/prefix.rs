use crate::codebook::Codebook;
use crate::direct::BitSource;
use crate::error::{Error, Result};
use crate::Symbol;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
enum Slot {
    Branch([u32; 2]),
    Leaf(Symbol),
}

/// Binary trie over a prefix-free codebook; decodes one bit at a time.
#[derive(Debug, Clone)]
pub struct PrefixDecoder {
    slots: Vec<Slot>,
}

impl PrefixDecoder {
    pub fn new(book: &Codebook) -> Result<Self> {
        let mut slots = vec![Slot::Branch([NONE; 2])];
        for (symbol, code) in book.iter() {
            let mut at = 0usize;
            for &bit in code.bits() {
                let next = match slots[at] {
                    Slot::Leaf(_) => return Err(Error::Corrupt("codebook is not prefix-free".into())),
                    Slot::Branch(children) => children[bit as usize],
                };
                at = if next == NONE {
                    slots.push(Slot::Branch([NONE; 2]));
                    let id = slots.len() - 1;
                    if let Slot::Branch(children) = &mut slots[at] {
                        children[bit as usize] = id as u32;
                    }
                    id
                } else {
                    next as usize
                };
            }
            match slots[at] {
                Slot::Branch([NONE, NONE]) => slots[at] = Slot::Leaf(symbol),
                _ => return Err(Error::Corrupt("codebook is not prefix-free".into())),
            }
        }
        Ok(Self { slots })
    }

    pub fn decode<S: BitSource + ?Sized>(&self, source: &mut S) -> Result<Symbol> {
        let mut at = 0usize;
        loop {
            match self.slots[at] {
                Slot::Leaf(s) => return Ok(s),
                Slot::Branch(children) => {
                    let next = children[source.take_bit()? as usize];
                    if next == NONE {
                        return Err(Error::Corrupt("bit pattern matches no codeword".into()));
                    }
                    at = next as usize;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::bitio::{BitReader, BitWriter};

    #[test]
    fn decodes_mixed_lengths() {
        let book = Codebook::from_sequence(["0", "10", "110", "111"].map(|c| c.parse().unwrap())).unwrap();
        let dec = PrefixDecoder::new(&book).unwrap();
        let mut w = BitWriter::new();
        for s in [3, 0, 1, 2, 0] {
            w.append(book.get(s).unwrap());
        }
        let bits = w.bit_len();
        let bytes = w.finish();
        let mut r = BitReader::with_limit(&bytes, bits);
        let out: Vec<_> = (0..5).map(|_| dec.decode(&mut r).unwrap()).collect();
        assert_eq!(out, [3, 0, 1, 2, 0]);
    }

    #[test]
    fn rejects_non_prefix_free() {
        let book = Codebook::from_sequence(["0", "01"].map(|c| c.parse().unwrap())).unwrap();
        assert!(PrefixDecoder::new(&book).is_err());
        let book = Codebook::from_sequence(["01", "0"].map(|c| c.parse().unwrap())).unwrap();
        assert!(PrefixDecoder::new(&book).is_err());
    }

    #[test]
    fn incomplete_code_reports_corruption() {
        let book = Codebook::from_sequence(["0".parse().unwrap()]).unwrap();
        let dec = PrefixDecoder::new(&book).unwrap();
        let mut r = BitReader::new(&[0x80]);
        assert!(matches!(dec.decode(&mut r), Err(Error::Corrupt(_))));
    }
}
