//! Ket-bra matrix encoder for uniform alphabets.
//!
//! The encoder state is a sum of outer products `|input⟩⟨code|` of
//! computational-basis vectors. Short codes accumulate into a
//! `2^upper × 2^lower` register and long codes into a `2^upper × 2^upper`
//! register. Encoding applies the transpose of the selected register to the
//! input ket; because every register is a partial permutation, that product
//! is a single coordinate lookup.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bits::BitString;
use crate::direct::{code_params, CodeParams};
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::Symbol;

/// Largest alphabet for which registers are built.
pub const MAX_STATE_ALPHABET: u64 = 1 << 24;
/// Largest `rows · cols` that [`densify`] will materialize.
pub const MAX_DENSE_CELLS: u64 = 1 << 24;

/// Standard basis column vector with a single 1 at `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisKet {
    dim: u64,
    index: u64,
}

impl BasisKet {
    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Number of qubits (bits) spanned by the ket.
    pub fn width(&self) -> u32 {
        self.dim.trailing_zeros()
    }

    /// Dense column form.
    pub fn to_dense(&self) -> Vec<u8> {
        (0..self.dim).map(|i| (i == self.index) as u8).collect()
    }

    /// The basis index written in `width()` bits.
    pub fn to_bits(&self) -> BitString {
        BitString::from_value(self.index, self.width()).expect("index < dim")
    }
}

pub fn basis_ket(index: u64, dim: u64) -> Result<BasisKet> {
    if !dim.is_power_of_two() {
        return Err(Error::TooLarge(format!("ket dimension {dim} is not a power of two")));
    }
    if index >= dim {
        return Err(Error::InvalidSymbol { symbol: index, n: dim });
    }
    Ok(BasisKet { dim, index })
}

/// 0/1 matrix with at most one 1 per row and per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseZeroOneMatrix {
    rows: u64,
    cols: u64,
    by_row: BTreeMap<u64, u64>,
    used_cols: BTreeSet<u64>,
}

impl SparseZeroOneMatrix {
    pub fn zeros(rows: u64, cols: u64) -> Self {
        Self { rows, cols, by_row: BTreeMap::new(), used_cols: BTreeSet::new() }
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn cols(&self) -> u64 {
        self.cols
    }

    pub fn count_ones(&self) -> usize {
        self.by_row.len()
    }

    /// `(row, col)` coordinates of the ones, by row.
    pub fn ones(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.by_row.iter().map(|(&r, &c)| (r, c))
    }

    pub fn get(&self, row: u64, col: u64) -> bool {
        self.by_row.get(&row) == Some(&col)
    }

    /// Sets entry `(row, col)` to 1, refusing anything that would break the
    /// partial-permutation shape.
    pub fn set_one(&mut self, row: u64, col: u64) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::StateCorruption(format!(
                "({row}, {col}) outside {}x{} register",
                self.rows, self.cols
            )));
        }
        if self.by_row.contains_key(&row) || self.used_cols.contains(&col) {
            return Err(Error::StateCorruption(format!("({row}, {col}) shares a row or column with another one")));
        }
        self.by_row.insert(row, col);
        self.used_cols.insert(col);
        Ok(())
    }

    /// `self += other` for matrices of equal shape.
    pub fn accumulate(&mut self, other: &SparseZeroOneMatrix) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::StateCorruption(format!(
                "cannot add {}x{} to {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        other.ones().try_for_each(|(r, c)| self.set_one(r, c))
    }

    /// `selfᵀ · ket`. The result is a basis ket of dimension `cols`, or `None`
    /// for the zero vector.
    pub fn apply_transpose(&self, ket: &BasisKet) -> Result<Option<BasisKet>> {
        if ket.dim != self.rows {
            return Err(Error::StateCorruption(format!(
                "ket of dimension {} against register with {} rows",
                ket.dim, self.rows
            )));
        }
        Ok(self.by_row.get(&ket.index).map(|&col| BasisKet { dim: self.cols, index: col }))
    }
}

/// `|k⟩⟨b|`: a single 1 at `(k.index, b.index)`.
pub fn outer_product(k: &BasisKet, b: &BasisKet) -> SparseZeroOneMatrix {
    let mut m = SparseZeroOneMatrix::zeros(k.dim, b.dim);
    m.set_one(k.index, b.index).expect("single entry within bounds");
    m
}

/// The two encoder registers for an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderState {
    params: CodeParams,
    state1: SparseZeroOneMatrix,
    state2: SparseZeroOneMatrix,
}

impl EncoderState {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    /// Register of short codes, `2^upper × 2^lower`.
    pub fn state1(&self) -> &SparseZeroOneMatrix {
        &self.state1
    }

    /// Register of long codes, `2^upper × 2^upper`; empty when `n` is a power of two.
    pub fn state2(&self) -> &SparseZeroOneMatrix {
        &self.state2
    }
}

pub fn build_state(n: u64) -> Result<EncoderState> {
    build_state_counted(n, &mut OpCounters::default())
}

pub fn build_state_counted(n: u64, counters: &mut OpCounters) -> Result<EncoderState> {
    let params = code_params(n)?;
    if n > MAX_STATE_ALPHABET {
        return Err(Error::TooLarge(format!("encoder registers for n = {n} exceed {MAX_STATE_ALPHABET} symbols")));
    }
    let CodeParams { lower, upper, diff, .. } = params;
    let (in_dim, short_dim) = (1u64 << upper, 1u64 << lower);
    let mut state1 = SparseZeroOneMatrix::zeros(in_dim, short_dim);
    let mut state2 = SparseZeroOneMatrix::zeros(in_dim, in_dim);

    let mut add = |reg: &mut SparseZeroOneMatrix, input: u64, code: u64, code_dim: u64| -> Result<()> {
        let term = outer_product(&basis_ket(input, in_dim)?, &basis_ket(code, code_dim)?);
        reg.accumulate(&term)?;
        counters.state_ones_written += 1;
        Ok(())
    };

    if lower == upper {
        for counter in 0..n {
            add(&mut state1, counter, counter, short_dim)?;
        }
    } else {
        for counter in 0..=(n - 1 - diff) {
            add(&mut state1, counter, counter, short_dim)?;
        }
        for counter in (n - diff)..n {
            add(&mut state2, counter, in_dim + counter - n, in_dim)?;
        }
    }
    Ok(EncoderState { params, state1, state2 })
}

pub fn qstate_encode(s: &EncoderState, numb: Symbol) -> Result<BitString> {
    qstate_encode_counted(s, numb, &mut OpCounters::default())
}

/// Applies the transpose of the register selected for `numb` to `|numb⟩`
/// and reads the resulting basis index as the codeword.
pub fn qstate_encode_counted(s: &EncoderState, numb: Symbol, counters: &mut OpCounters) -> Result<BitString> {
    let p = &s.params;
    if numb >= p.n {
        return Err(Error::InvalidSymbol { symbol: numb, n: p.n });
    }
    let input = basis_ket(numb, 1u64 << p.upper)?;
    let register = if p.lower == p.upper || numb <= p.n - 1 - p.diff {
        &s.state1
    } else {
        &s.state2
    };
    counters.coord_lookups += 1;
    let out = register
        .apply_transpose(&input)?
        .ok_or_else(|| Error::StateCorruption(format!("symbol {numb} maps to the zero vector")))?;
    let code = out.to_bits();
    counters.bits_emitted += code.len() as u64;
    Ok(code)
}

/// Dense row-major 0/1 grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseGrid {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<u8>,
}

impl DenseGrid {
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self { rows: rows.len(), cols, cells: rows.concat() }
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.cols + col]
    }

    /// Re-extracts the sparse form; fails if the grid is not a partial permutation.
    pub fn to_sparse(&self) -> Result<SparseZeroOneMatrix> {
        let mut m = SparseZeroOneMatrix::zeros(self.rows as u64, self.cols as u64);
        for (i, &v) in self.cells.iter().enumerate() {
            match v {
                0 => {}
                1 => m.set_one((i / self.cols) as u64, (i % self.cols) as u64)?,
                other => return Err(Error::Corrupt(format!("grid entry {other} is not 0/1"))),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for DenseGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.cols.max(1)) {
            let line: Vec<&str> = row.iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn densify(m: &SparseZeroOneMatrix) -> Result<DenseGrid> {
    let cells = m.rows.checked_mul(m.cols).filter(|&c| c <= MAX_DENSE_CELLS).ok_or_else(|| {
        Error::TooLarge(format!("{}x{} register exceeds {MAX_DENSE_CELLS} cells", m.rows, m.cols))
    })?;
    let (rows, cols) = (m.rows as usize, m.cols as usize);
    let mut grid = DenseGrid { rows, cols, cells: vec![0; cells as usize] };
    for (r, c) in m.ones() {
        grid.cells[r as usize * cols + c as usize] = 1;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::direct_encode;

    fn ones(m: &SparseZeroOneMatrix) -> Vec<(u64, u64)> {
        m.ones().collect()
    }

    #[test]
    fn ket_examples() {
        assert_eq!(basis_ket(0, 2).unwrap().to_dense(), [1, 0]);
        assert_eq!(basis_ket(1, 2).unwrap().to_dense(), [0, 1]);
        assert_eq!(basis_ket(2, 8).unwrap().to_dense(), [0, 0, 1, 0, 0, 0, 0, 0]);
        assert!(basis_ket(2, 2).is_err());
        assert!(basis_ket(0, 6).is_err());
    }

    #[test]
    fn outer_product_examples() {
        let k = |i, d| basis_ket(i, d).unwrap();
        assert_eq!(ones(&outer_product(&k(0, 2), &k(0, 2))), [(0, 0)]);
        assert_eq!(ones(&outer_product(&k(3, 8), &k(6, 8))), [(3, 6)]);
        let m = outer_product(&k(4, 8), &k(7, 8));
        assert_eq!(ones(&m), [(4, 7)]);
        assert_eq!((m.rows(), m.cols()), (8, 8));
        let rect = outer_product(&k(1, 8), &k(1, 4));
        assert_eq!((rect.rows(), rect.cols()), (8, 4));
    }

    #[test]
    fn state_five() {
        let s = build_state(5).unwrap();
        assert_eq!(ones(s.state1()), [(0, 0), (1, 1), (2, 2)]);
        assert_eq!(ones(s.state2()), [(3, 6), (4, 7)]);
        assert_eq!((s.state1().rows(), s.state1().cols()), (8, 4));
        assert_eq!((s.state2().rows(), s.state2().cols()), (8, 8));
    }

    #[test]
    fn state_four_is_square_identity() {
        let s = build_state(4).unwrap();
        assert_eq!(ones(s.state1()), [(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!((s.state1().rows(), s.state1().cols()), (4, 4));
        assert_eq!(s.state2().count_ones(), 0);
    }

    #[test]
    fn state_nine() {
        let s = build_state(9).unwrap();
        assert_eq!(ones(s.state2()), [(7, 14), (8, 15)]);
        assert_eq!((s.state2().rows(), s.state2().cols()), (16, 16));
    }

    #[test]
    fn encode_examples() {
        let s = build_state(5).unwrap();
        assert_eq!(qstate_encode(&s, 2).unwrap().to_string(), "10");
        assert_eq!(qstate_encode(&s, 3).unwrap().to_string(), "110");
        assert_eq!(qstate_encode(&build_state(8).unwrap(), 0).unwrap().to_string(), "000");
        assert!(matches!(qstate_encode(&s, 5), Err(Error::InvalidSymbol { .. })));
    }

    #[test]
    fn partial_permutation_enforced() {
        let mut m = SparseZeroOneMatrix::zeros(4, 4);
        m.set_one(0, 1).unwrap();
        assert!(m.set_one(0, 2).is_err());
        assert!(m.set_one(2, 1).is_err());
        assert!(m.set_one(4, 0).is_err());
    }

    #[test]
    fn corrupted_state_detected() {
        let mut s = build_state(5).unwrap();
        s.state2 = SparseZeroOneMatrix::zeros(8, 8);
        assert!(matches!(qstate_encode(&s, 3), Err(Error::StateCorruption(_))));
    }

    #[test]
    fn matches_direct_small() {
        for n in 2..=64 {
            let s = build_state(n).unwrap();
            let p = code_params(n).unwrap();
            for x in 0..n {
                assert_eq!(qstate_encode(&s, x).unwrap(), direct_encode(&p, x).unwrap());
            }
        }
    }

    #[test]
    fn densify_bounds_and_empty() {
        let g = densify(&SparseZeroOneMatrix::zeros(2, 2)).unwrap();
        assert_eq!(g.cells, [0, 0, 0, 0]);
        assert!(matches!(densify(&SparseZeroOneMatrix::zeros(1 << 13, 1 << 12)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dense_round_trip() {
        let s = build_state(13).unwrap();
        for reg in [s.state1(), s.state2()] {
            assert_eq!(&densify(reg).unwrap().to_sparse().unwrap(), reg);
        }
    }
}
