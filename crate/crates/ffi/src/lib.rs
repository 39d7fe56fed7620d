//! C ABI over `qhuff-core`.
//!
//! Every fallible function returns a [`QhStatus`]; results are written
//! through out-pointers. Codebooks and encoder states are opaque handles
//! released with their matching `*_free` function. Buffers returned by the
//! library must be released with [`qh_buffer_free`] or [`qh_symbols_free`].
//! The message of the most recent failure on the calling thread is available
//! from [`qh_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qhuff::codec::{compress_bytes, compress_uniform, decompress, UniformEncoder};
use qhuff::direct::{code_params, direct_codebook, direct_decode, direct_encode};
use qhuff::qstate::{build_state, qstate_encode};
use qhuff::codebook::is_complete;
use qhuff::{is_prefix_free, BitString, Codebook, EncoderState, Error, SymbolDistribution};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedAlphabet = 3,
    InvalidSymbol = 4,
    Overflow = 5,
    Truncated = 6,
    Corrupt = 7,
    Format = 8,
    TooLarge = 9,
    StateCorruption = 10,
    BufferTooSmall = 11,
    Internal = 12,
}

impl From<&Error> for QhStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidDistribution(_)
            | Error::IncompleteCodebook(_)
            | Error::InfeasibleLengths
            | Error::MalformedTree(_) => QhStatus::InvalidArgument,
            Error::UnsupportedAlphabet(_) => QhStatus::UnsupportedAlphabet,
            Error::Overflow { .. } => QhStatus::Overflow,
            Error::InvalidSymbol { .. } => QhStatus::InvalidSymbol,
            Error::Truncated => QhStatus::Truncated,
            Error::Corrupt(_) | Error::CorruptHeader(_) => QhStatus::Corrupt,
            Error::Format(_) => QhStatus::Format,
            Error::TooLarge(_) => QhStatus::TooLarge,
            Error::StateCorruption(_) => QhStatus::StateCorruption,
            Error::Io(_) => QhStatus::Internal,
        }
    }
}

/// Alphabet parameters of the closed-form uniform code.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QhCodeParams {
    pub n: u64,
    pub lower: u32,
    pub upper: u32,
    pub diff: u64,
}

/// A codeword of at most 64 bits, right-aligned in `value`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QhCode {
    pub value: u64,
    pub len: u32,
}

/// Opaque codebook handle.
pub struct QhCodebook(Codebook);

/// Opaque encoder-register handle.
pub struct QhEncoderState(EncoderState);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, recording the error message and mapping panics to `Internal`.
fn guard<F: FnOnce() -> Result<(), QhError>>(f: F) -> QhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QhStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.message);
            e.status
        }
        Err(_) => {
            set_error("internal panic".into());
            QhStatus::Internal
        }
    }
}

struct QhError {
    status: QhStatus,
    message: String,
}

impl From<Error> for QhError {
    fn from(e: Error) -> Self {
        Self { status: QhStatus::from(&e), message: e.to_string() }
    }
}

fn null(name: &str) -> QhError {
    QhError { status: QhStatus::NullPointer, message: format!("{name} is null") }
}

fn invalid(message: impl Into<String>) -> QhError {
    QhError { status: QhStatus::InvalidArgument, message: message.into() }
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, QhError> {
    p.as_mut().ok_or_else(|| null(name))
}

/// Slice view that accepts a null pointer when `len == 0`.
unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], QhError> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(name))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

fn to_code(bits: &BitString) -> Result<QhCode, QhError> {
    let value = bits
        .value()
        .ok_or_else(|| QhError { status: QhStatus::TooLarge, message: format!("{}-bit code exceeds 64 bits", bits.len()) })?;
    Ok(QhCode { value, len: bits.len() as u32 })
}

fn leak_bytes(v: Vec<u8>, out_buf: &mut *mut u8, out_len: &mut usize) {
    let boxed = v.into_boxed_slice();
    *out_len = boxed.len();
    *out_buf = Box::into_raw(boxed) as *mut u8;
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qh_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qh_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// # Safety
/// `out` must be a valid pointer to a `QhCodeParams`.
#[no_mangle]
pub unsafe extern "C" fn qh_code_params(n: u64, out: *mut QhCodeParams) -> QhStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let p = code_params(n)?;
        *out = QhCodeParams { n: p.n, lower: p.lower, upper: p.upper, diff: p.diff };
        Ok(())
    })
}

/// Closed-form code of `symbol` in an alphabet of `n` equally likely symbols.
///
/// # Safety
/// `out` must be a valid pointer to a `QhCode`.
#[no_mangle]
pub unsafe extern "C" fn qh_direct_encode(n: u64, symbol: u64, out: *mut QhCode) -> QhStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        *out = to_code(&direct_encode(&code_params(n)?, symbol)?)?;
        Ok(())
    })
}

/// Decodes a single codeword; every bit of `code` must be consumed.
///
/// # Safety
/// `out_symbol` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_direct_decode(n: u64, code: QhCode, out_symbol: *mut u64) -> QhStatus {
    guard(|| {
        let out_symbol = out(out_symbol, "out_symbol")?;
        let p = code_params(n)?;
        let bits = BitString::from_value(code.value, code.len)?;
        let mut w = qhuff::codec::BitWriter::new();
        w.append(&bits);
        let bytes = w.finish();
        let mut r = qhuff::codec::BitReader::with_limit(&bytes, code.len as u64);
        let symbol = direct_decode(&p, &mut r)?;
        if r.remaining() != 0 {
            return Err(QhError { status: QhStatus::Corrupt, message: "code longer than one codeword".into() });
        }
        *out_symbol = symbol;
        Ok(())
    })
}

/// Codebook `0..n` of the closed-form uniform code.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to release
/// with [`qh_codebook_free`].
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_direct(n: u64, out: *mut *mut QhCodebook) -> QhStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        *out = Box::into_raw(Box::new(QhCodebook(direct_codebook(n)?)));
        Ok(())
    })
}

/// Canonical Huffman codebook for `counts[i]` occurrences of symbol `i`.
/// Symbols with a zero count receive no code.
///
/// # Safety
/// `counts` must point to `len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_huffman(counts: *const u64, len: usize, out: *mut *mut QhCodebook) -> QhStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let counts = slice(counts, len, "counts")?;
        let dist = SymbolDistribution::from_counts(counts)?;
        *out = Box::into_raw(Box::new(QhCodebook(qhuff::huffman_codebook(&dist)?)));
        Ok(())
    })
}

/// # Safety
/// `book` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_free(book: *mut QhCodebook) {
    if !book.is_null() {
        drop(Box::from_raw(book));
    }
}

/// Number of symbols with a code.
///
/// # Safety
/// `book` and `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_len(book: *const QhCodebook, out_len: *mut usize) -> QhStatus {
    guard(|| {
        let book = book.as_ref().ok_or_else(|| null("book"))?;
        *out(out_len, "out_len")? = book.0.len();
        Ok(())
    })
}

/// Writes the code of `symbol` as a NUL-terminated string of `'0'`/`'1'`
/// characters. `out_len` receives the code length; if `cap` is too small
/// nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `book` must be valid; `buf` must point to `cap` writable bytes; `out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_code(
    book: *const QhCodebook,
    symbol: u64,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> QhStatus {
    guard(|| {
        let book = book.as_ref().ok_or_else(|| null("book"))?;
        let out_len = out(out_len, "out_len")?;
        let code = book.0.get(symbol).ok_or_else(|| QhError {
            status: QhStatus::InvalidSymbol,
            message: format!("symbol {symbol} has no code"),
        })?;
        *out_len = code.len();
        if buf.is_null() || cap <= code.len() {
            return Err(QhError { status: QhStatus::BufferTooSmall, message: format!("need {} bytes", code.len() + 1) });
        }
        let text = code.to_string();
        ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// Whether the codebook is prefix-free and its Kraft sum is exactly one.
///
/// # Safety
/// `book`, `out_prefix_free` and `out_kraft_one` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_codebook_check(
    book: *const QhCodebook,
    out_prefix_free: *mut bool,
    out_kraft_one: *mut bool,
) -> QhStatus {
    guard(|| {
        let book = book.as_ref().ok_or_else(|| null("book"))?;
        *out(out_prefix_free, "out_prefix_free")? = is_prefix_free(&book.0);
        *out(out_kraft_one, "out_kraft_one")? = is_complete(&book.0);
        Ok(())
    })
}

/// Builds the two encoder registers for `n` symbols.
///
/// # Safety
/// `out` must be valid; release the handle with [`qh_state_free`].
#[no_mangle]
pub unsafe extern "C" fn qh_state_new(n: u64, out: *mut *mut QhEncoderState) -> QhStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        *out = Box::into_raw(Box::new(QhEncoderState(build_state(n)?)));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a live handle from [`qh_state_new`].
#[no_mangle]
pub unsafe extern "C" fn qh_state_free(state: *mut QhEncoderState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of ones in register 1 or 2.
///
/// # Safety
/// `state` and `out_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_state_ones(state: *const QhEncoderState, register: u32, out_count: *mut u64) -> QhStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        let reg = match register {
            1 => state.0.state1(),
            2 => state.0.state2(),
            other => return Err(invalid(format!("register must be 1 or 2, got {other}"))),
        };
        *out(out_count, "out_count")? = reg.count_ones() as u64;
        Ok(())
    })
}

/// # Safety
/// `state` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_state_encode(state: *const QhEncoderState, symbol: u64, out: *mut QhCode) -> QhStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        *self::out(out, "out")? = to_code(&qstate_encode(&state.0, symbol)?)?;
        Ok(())
    })
}

/// Uniform-mode container. `encoder` is 0 for the closed form, 1 for the
/// register encoder; both yield identical bytes.
///
/// # Safety
/// `symbols` must point to `count` values; `out_buf`/`out_len` must be valid.
/// Release the buffer with [`qh_buffer_free`].
#[no_mangle]
pub unsafe extern "C" fn qh_compress_uniform(
    n: u64,
    symbol_width: u8,
    symbols: *const u64,
    count: usize,
    encoder: u32,
    out_buf: *mut *mut u8,
    out_len: *mut usize,
) -> QhStatus {
    guard(|| {
        let symbols = slice(symbols, count, "symbols")?;
        let encoder = match encoder {
            0 => UniformEncoder::Direct,
            1 => UniformEncoder::QState,
            other => return Err(invalid(format!("encoder must be 0 or 1, got {other}"))),
        };
        let (buf, len) = (out(out_buf, "out_buf")?, out(out_len, "out_len")?);
        leak_bytes(compress_uniform(n, symbol_width, symbols, encoder)?, buf, len);
        Ok(())
    })
}

/// Byte-Huffman container.
///
/// # Safety
/// `data` must point to `len` bytes; `out_buf`/`out_len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_compress_bytes(
    data: *const u8,
    len: usize,
    out_buf: *mut *mut u8,
    out_len: *mut usize,
) -> QhStatus {
    guard(|| {
        let data = slice(data, len, "data")?;
        let (buf, olen) = (out(out_buf, "out_buf")?, out(out_len, "out_len")?);
        leak_bytes(compress_bytes(data)?, buf, olen);
        Ok(())
    })
}

/// Decodes any container into symbol values. `out_mode` receives 0 for
/// uniform mode and 1 for byte Huffman. Release with [`qh_symbols_free`].
///
/// # Safety
/// `data` must point to `len` bytes; all out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_decompress(
    data: *const u8,
    len: usize,
    out_symbols: *mut *mut u64,
    out_count: *mut usize,
    out_mode: *mut u8,
) -> QhStatus {
    guard(|| {
        let data = slice(data, len, "data")?;
        let (syms, count, mode) = (out(out_symbols, "out_symbols")?, out(out_count, "out_count")?, out(out_mode, "out_mode")?);
        let decoded = decompress(data)?;
        *mode = decoded.header.alphabet.mode();
        let boxed = decoded.symbols.into_boxed_slice();
        *count = boxed.len();
        *syms = Box::into_raw(boxed) as *mut u64;
        Ok(())
    })
}

/// # Safety
/// `buf`/`len` must come from a compress call and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_buffer_free(buf: *mut u8, len: usize) {
    if !buf.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(buf, len)));
    }
}

/// # Safety
/// `symbols`/`count` must come from [`qh_decompress`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_symbols_free(symbols: *mut u64, count: usize) {
    if !symbols.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(symbols, count)));
    }
}

/// Entropy in bits per symbol of `counts`.
///
/// # Safety
/// `counts` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qh_entropy(counts: *const u64, len: usize, out: *mut f64) -> QhStatus {
    guard(|| {
        let dist = SymbolDistribution::from_counts(slice(counts, len, "counts")?)?;
        *self::out(out, "out")? = qhuff::entropy(&dist);
        Ok(())
    })
}
