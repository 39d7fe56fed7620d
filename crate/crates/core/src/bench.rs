//! Operation-count benchmark of the three uniform-alphabet encoders.
//!
//! Counters are exact and checked against upper bounds; wall time is
//! recorded for inspection only.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::direct::{code_params, direct_encode_counted};
use crate::error::{Error, Result};
use crate::huffman::{build_tree_counted, codes_from_tree_counted, SymbolDistribution};
use crate::metrics::OpCounters;
use crate::qstate::{build_state_counted, qstate_encode_counted};

pub const MAX_BENCH_ALPHABET: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    Tree,
    Direct,
    QState,
}

impl BenchMode {
    pub const ALL: [BenchMode; 3] = [BenchMode::Tree, BenchMode::Direct, BenchMode::QState];

    pub fn name(&self) -> &'static str {
        match self {
            BenchMode::Tree => "tree",
            BenchMode::Direct => "direct",
            BenchMode::QState => "qstate",
        }
    }
}

impl fmt::Display for BenchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(BenchMode::Tree),
            "direct" => Ok(BenchMode::Direct),
            "qstate" => Ok(BenchMode::QState),
            other => Err(Error::Format(format!("unknown bench mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub n: u64,
    pub mode: BenchMode,
    pub counters: OpCounters,
    pub nanos: u128,
    /// Violated bounds, empty when the row conforms.
    pub violations: Vec<String>,
}

/// Builds the encoder for `n` equally likely symbols and encodes every symbol once.
pub fn bench_one(n: u64, mode: BenchMode) -> Result<BenchRow> {
    if n > MAX_BENCH_ALPHABET {
        return Err(Error::TooLarge(format!("bench alphabet {n} exceeds {MAX_BENCH_ALPHABET}")));
    }
    let params = code_params(n)?;
    let mut c = OpCounters::default();
    let mut violations = Vec::new();
    let in_range = |len: u64| len == params.lower as u64 || len == params.upper as u64;
    let start = Instant::now();
    match mode {
        BenchMode::Tree => {
            let tree = build_tree_counted(&SymbolDistribution::uniform(n)?, &mut c)?;
            let book = codes_from_tree_counted(&tree, &mut c)?;
            for (_, code) in book.iter() {
                c.bits_emitted += code.len() as u64;
            }
        }
        BenchMode::Direct => {
            for x in 0..n {
                let before = c.bits_emitted;
                direct_encode_counted(&params, x, &mut c)?;
                if !in_range(c.bits_emitted - before) {
                    violations.push(format!("symbol {x}: {} bits not in {{lower, upper}}", c.bits_emitted - before));
                }
            }
        }
        BenchMode::QState => {
            let state = build_state_counted(n, &mut c)?;
            for x in 0..n {
                let (bits, lookups) = (c.bits_emitted, c.coord_lookups);
                qstate_encode_counted(&state, x, &mut c)?;
                if !in_range(c.bits_emitted - bits) {
                    violations.push(format!("symbol {x}: {} bits not in {{lower, upper}}", c.bits_emitted - bits));
                }
                let lg2 = (params.upper as u64).pow(2).max(1);
                if c.coord_lookups - lookups > lg2 {
                    violations.push(format!("symbol {x}: {} lookups exceed (lg n)^2", c.coord_lookups - lookups));
                }
            }
        }
    }
    let nanos = start.elapsed().as_nanos();
    violations.extend(check_bounds(n, mode, &c));
    Ok(BenchRow { n, mode, counters: c, nanos, violations })
}

/// Exact counter identities and the asymptotic upper bounds (constant 1).
pub fn check_bounds(n: u64, mode: BenchMode, c: &OpCounters) -> Vec<String> {
    let mut v = Vec::new();
    let p = code_params(n).expect("validated alphabet");
    let census_bits = p.count_lower() * p.lower as u64 + p.count_upper() * p.upper as u64;
    let lg = (n as f64).log2();
    match mode {
        BenchMode::Tree => {
            if c.tree_merges != n - 1 {
                v.push(format!("tree_merges = {} != n - 1 = {}", c.tree_merges, n - 1));
            }
            if c.tree_merges > n * n {
                v.push(format!("tree_merges = {} exceeds n^2", c.tree_merges));
            }
            if c.tree_walk_steps != c.bits_emitted || c.tree_walk_steps > n * n {
                v.push(format!("tree_walk_steps = {} inconsistent with n^2 bound", c.tree_walk_steps));
            }
            if c.bits_emitted != census_bits {
                v.push(format!("bits_emitted = {} != uniform length census {census_bits}", c.bits_emitted));
            }
        }
        BenchMode::Direct | BenchMode::QState => {
            if c.bits_emitted != census_bits {
                v.push(format!("bits_emitted = {} != length census {census_bits}", c.bits_emitted));
            }
            if c.bits_emitted > n * p.upper as u64 {
                v.push(format!("bits_emitted = {} exceeds n * ceil(lg n)", c.bits_emitted));
            }
        }
    }
    if mode == BenchMode::QState {
        if c.state_ones_written != n {
            v.push(format!("state_ones_written = {} != n = {n}", c.state_ones_written));
        }
        if c.state_ones_written as f64 > n as f64 * lg * lg + 1e-9 {
            v.push(format!("state_ones_written = {} exceeds n (lg n)^2", c.state_ones_written));
        }
        if c.coord_lookups != n {
            v.push(format!("coord_lookups = {} != n = {n}", c.coord_lookups));
        }
    }
    v
}

/// Benchmarks every `(n, mode)` pair, returned in `(n, mode)` order.
pub fn run_bench(ns: &[u64], modes: &[BenchMode]) -> Result<Vec<BenchRow>> {
    let jobs: Vec<(u64, BenchMode)> = ns.iter().flat_map(|&n| modes.iter().map(move |&m| (n, m))).collect();
    jobs.into_par_iter().map(|(n, m)| bench_one(n, m)).collect()
}

/// CSV with columns `n,mode,counter,value,nanos`.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,mode,counter,value,nanos\n");
    for r in rows {
        for (name, value) in r.counters.entries() {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.mode, name, value, r.nanos));
        }
    }
    out
}
