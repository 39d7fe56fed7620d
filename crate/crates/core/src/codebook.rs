//! Codebooks and the code-class predicates shared by every encoder.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::Symbol;

/// Mapping from symbol index to a nonempty codeword.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Codebook {
    codes: BTreeMap<Symbol, BitString>,
}

impl Codebook {
    /// Builds a codebook, rejecting empty codewords.
    pub fn new(codes: BTreeMap<Symbol, BitString>) -> Result<Self> {
        if let Some((&sym, _)) = codes.iter().find(|(_, c)| c.is_empty()) {
            return Err(Error::MalformedTree(format!("empty codeword for symbol {sym}")));
        }
        Ok(Self { codes })
    }

    /// Codebook over symbols `0..codes.len()`.
    pub fn from_sequence<I: IntoIterator<Item = BitString>>(codes: I) -> Result<Self> {
        Self::new(
            codes
                .into_iter()
                .enumerate()
                .map(|(i, c)| (i as Symbol, c))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn get(&self, symbol: Symbol) -> Option<&BitString> {
        self.codes.get(&symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &BitString)> + '_ {
        self.codes.iter().map(|(&s, c)| (s, c))
    }

    pub fn codes(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.codes.values()
    }

    pub fn lengths(&self) -> BTreeMap<Symbol, u32> {
        self.codes.iter().map(|(&s, c)| (s, c.len() as u32)).collect()
    }

    /// Code lengths in ascending order.
    pub fn sorted_lengths(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.codes.values().map(|c| c.len() as u32).collect();
        v.sort_unstable();
        v
    }

    pub fn max_len(&self) -> usize {
        self.codes.values().map(BitString::len).max().unwrap_or(0)
    }
}

/// True iff no codeword is a prefix of a different symbol's codeword.
///
/// After lexicographic sorting, a word that prefixes any other word also
/// prefixes its immediate successor, so one linear pass suffices.
pub fn is_prefix_free(book: &Codebook) -> bool {
    let mut codes: Vec<&BitString> = book.codes().collect();
    codes.sort_unstable();
    codes.windows(2).all(|w| !w[0].is_prefix_of(w[1]))
}

/// True iff all codewords are pairwise distinct.
pub fn is_non_singular(book: &Codebook) -> bool {
    let mut seen = HashSet::with_capacity(book.len());
    book.codes().all(|c| seen.insert(c))
}

/// Exact Kraft sum computed as `Σ 2^(Lmax − l) / 2^Lmax`.
pub fn kraft_sum(book: &Codebook) -> Ratio<BigUint> {
    kraft_sum_of_lengths(book.codes().map(|c| c.len() as u32))
}

/// True iff the Kraft sum is exactly 1, i.e. the code tree is full.
pub fn is_complete(book: &Codebook) -> bool {
    kraft_sum(book) == Ratio::one()
}

pub(crate) fn kraft_sum_of_lengths<I: IntoIterator<Item = u32>>(lengths: I) -> Ratio<BigUint> {
    // Group by length so each distinct length costs one shift.
    let mut census: BTreeMap<u32, u64> = BTreeMap::new();
    for l in lengths {
        *census.entry(l).or_default() += 1;
    }
    let Some(&max) = census.keys().next_back() else {
        return Ratio::zero();
    };
    let numer = census
        .into_iter()
        .fold(BigUint::zero(), |acc, (l, count)| acc + (BigUint::from(count) << (max - l)));
    Ratio::new(numer, BigUint::one() << max)
}

/// Canonical code assignment: symbols sorted by `(length, symbol)` receive
/// consecutive left-justified binary values.
pub fn canonical_from_lengths(lengths: &BTreeMap<Symbol, u32>) -> Result<Codebook> {
    if let Some((&sym, _)) = lengths.iter().find(|(_, &l)| l == 0) {
        return Err(Error::MalformedTree(format!("zero code length for symbol {sym}")));
    }
    if kraft_sum_of_lengths(lengths.values().copied()) > Ratio::one() {
        return Err(Error::InfeasibleLengths);
    }
    let mut order: Vec<(u32, Symbol)> = lengths.iter().map(|(&s, &l)| (l, s)).collect();
    order.sort_unstable();

    let mut codes = BTreeMap::new();
    let mut current: Vec<bool> = Vec::new();
    for (i, &(len, sym)) in order.iter().enumerate() {
        if i > 0 && !increment(&mut current) {
            return Err(Error::InfeasibleLengths);
        }
        current.resize(len as usize, false);
        codes.insert(sym, BitString::from_bits(current.clone()));
    }
    Codebook::new(codes)
}

/// Binary increment in place; false on overflow.
fn increment(bits: &mut [bool]) -> bool {
    for b in bits.iter_mut().rev() {
        if *b {
            *b = false;
        } else {
            *b = true;
            return true;
        }
    }
    false
}
