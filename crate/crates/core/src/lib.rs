//! Prefix coders for symbol streams: classical Huffman, closed-form codes for
//! uniform alphabets, and a ket-bra matrix encoder equivalent to the latter,
//! plus a container format that packs any of them to bytes.

pub mod bench;
pub mod bits;
pub mod codebook;
pub mod codec;
pub mod direct;
pub mod error;
pub mod huffman;
pub mod metrics;
pub mod qstate;
pub mod verify;

/// Symbol index within an alphabet.
pub type Symbol = u64;

pub use bits::BitString;
pub use codebook::{canonical_from_lengths, is_non_singular, is_prefix_free, kraft_sum, Codebook};
pub use direct::{binary_fixed, code_params, direct_codebook, direct_decode, direct_encode, BitSource, CodeParams};
pub use error::{Error, Result};
pub use huffman::{
    build_tree, codes_from_tree, entropy, expected_length, huffman_codebook, optimality_report, parse_frequency_table,
    HuffmanTree,
    OptimalityReport, SymbolDistribution,
};
pub use metrics::OpCounters;
pub use qstate::{basis_ket, build_state, densify, outer_product, qstate_encode, BasisKet, EncoderState, SparseZeroOneMatrix};
