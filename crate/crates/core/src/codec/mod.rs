//! Bit packing and the container format.

pub mod bitio;
pub mod container;
pub mod prefix;

pub use bitio::{BitReader, BitWriter};
pub use container::{
    compress_bytes, compress_uniform, decompress, emit_header, parse_header, read_symbols, write_symbols, Alphabet,
    ContainerHeader, Decoded, UniformEncoder,
};
pub use prefix::PrefixDecoder;
