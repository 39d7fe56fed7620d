//! Exhaustive consistency sweep over alphabet sizes.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::codebook::{canonical_from_lengths, is_non_singular, is_prefix_free, kraft_sum, Codebook};
use crate::codec::BitReader;
use crate::codec::BitWriter;
use crate::direct::{code_params, direct_codebook, direct_decode, expand_last_short_code, MAX_CODEBOOK_ALPHABET};
use crate::error::{Error, Result};
use crate::huffman::{build_tree, SymbolDistribution};
use crate::qstate::{build_state, qstate_encode};

/// Above this size the register encoder is not cross-checked.
pub const QSTATE_CHECK_LIMIT: u64 = 1024;

/// Known uniform-alphabet Huffman codes for n = 2..=9.
pub const REFERENCE_CODES: [&[&str]; 8] = [
    &["0", "1"],
    &["0", "10", "11"],
    &["00", "01", "10", "11"],
    &["00", "01", "10", "110", "111"],
    &["00", "01", "100", "101", "110", "111"],
    &["00", "010", "011", "100", "101", "110", "111"],
    &["000", "001", "010", "011", "100", "101", "110", "111"],
    &["000", "001", "010", "011", "100", "101", "110", "1110", "1111"],
];

pub const PROPERTIES: [&str; 9] = [
    "reference-codes",
    "huffman-length-multiset",
    "kraft-sum-one",
    "prefix-free",
    "non-singular",
    "length-census",
    "canonical-identity",
    "last-short-code-replacement",
    "decode-round-trip",
];
pub const QSTATE_PROPERTY: &str = "qstate-equals-direct";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_range: (u64, u64),
    pub failures: Vec<(u64, String)>,
    pub checked_properties: Vec<&'static str>,
}

impl VerifyReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every property for each `n` in `[2, max_n]`.
pub fn verify(max_n: u64) -> Result<VerifyReport> {
    if !(2..=MAX_CODEBOOK_ALPHABET).contains(&max_n) {
        return Err(Error::UnsupportedAlphabet(max_n));
    }
    let failures: Vec<(u64, String)> = (2..=max_n)
        .into_par_iter()
        .map(|n| check_n(n).into_iter().map(move |f| (n, f)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut checked_properties = PROPERTIES.to_vec();
    checked_properties.push(QSTATE_PROPERTY);
    Ok(VerifyReport { n_range: (2, max_n), failures, checked_properties })
}

/// All property failures for one alphabet size.
pub fn check_n(n: u64) -> Vec<String> {
    let mut failures = Vec::new();
    if let Err(e) = check_n_inner(n, &mut failures) {
        failures.push(format!("error: {e}"));
    }
    failures
}

fn check_n_inner(n: u64, failures: &mut Vec<String>) -> Result<()> {
    let mut fail = |name: &str, detail: String| failures.push(format!("{name}: {detail}"));
    let params = code_params(n)?;
    let book = direct_codebook(n)?;

    if let Some(reference) = REFERENCE_CODES.get(n as usize - 2) {
        let got: Vec<String> = book.codes().map(ToString::to_string).collect();
        if got != *reference {
            fail("reference-codes", format!("{got:?} != {reference:?}"));
        }
    }

    let depths = build_tree(&SymbolDistribution::uniform(n)?)?.leaf_depths()?;
    if book.sorted_lengths() != depths {
        fail("huffman-length-multiset", "direct lengths differ from Huffman leaf depths".into());
    }
    if kraft_sum(&book) != Ratio::one() {
        fail("kraft-sum-one", format!("{}", kraft_sum(&book)));
    }
    if !is_prefix_free(&book) {
        fail("prefix-free", "a codeword prefixes another".into());
    }
    if !is_non_singular(&book) {
        fail("non-singular", "duplicate codewords".into());
    }

    let upper = book.codes().filter(|c| c.len() == params.upper as usize).count() as u64;
    let lower = book.codes().filter(|c| c.len() == params.lower as usize).count() as u64;
    let census_ok = if params.lower == params.upper {
        lower == n
    } else {
        upper == params.diff && lower == n - params.diff
    };
    if !census_ok {
        fail("length-census", format!("{lower} short / {upper} long, diff = {}", params.diff));
    }

    let increasing = book.codes().zip(book.codes().skip(1)).all(|(a, b)| a < b);
    if canonical_from_lengths(&book.lengths())? != book || !increasing {
        fail("canonical-identity", "book is not its own canonical form".into());
    }

    if n >= 3 {
        let expected = expand_last_short_code(&direct_codebook(n - 1)?);
        let got: BTreeSet<BitString> = book.codes().cloned().collect();
        if expected.as_ref() != Some(&got) {
            fail("last-short-code-replacement", format!("book for {n} is not derived from book for {}", n - 1));
        }
    }

    if !round_trips(&book, &params)? {
        fail("decode-round-trip", "decoded symbols differ".into());
    }

    if n <= QSTATE_CHECK_LIMIT {
        let state = build_state(n)?;
        for (symbol, code) in book.iter() {
            let q = qstate_encode(&state, symbol)?;
            if &q != code {
                fail(QSTATE_PROPERTY, format!("symbol {symbol}: {q} != {code}"));
                break;
            }
        }
    }
    Ok(())
}

fn round_trips(book: &Codebook, params: &crate::direct::CodeParams) -> Result<bool> {
    let mut w = BitWriter::new();
    for code in book.codes() {
        w.append(code);
    }
    let bits = w.bit_len();
    let bytes = w.finish();
    let mut r = BitReader::with_limit(&bytes, bits);
    for (symbol, _) in book.iter() {
        if direct_decode(params, &mut r)? != symbol {
            return Ok(false);
        }
    }
    Ok(r.remaining() == 0)
}
