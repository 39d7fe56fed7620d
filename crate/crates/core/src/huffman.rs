//! Classical Huffman coding over exact integer frequencies.
//!
//! Frequencies are kept as `u64` weights. Rational inputs (probabilities such
//! as `1/4`, `3/20`) are scaled by the least common multiple of their
//! denominators, which preserves every ratio exactly.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use num_integer::Integer;
use num_rational::Ratio;

use crate::bits::BitString;
use crate::codebook::{canonical_from_lengths, Codebook};
use crate::error::{Error, Result};
use crate::metrics::OpCounters;
use crate::Symbol;

/// Symbols with nonnegative integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDistribution {
    entries: Vec<(Symbol, u64)>,
    total: u64,
}

impl SymbolDistribution {
    /// Validates distinct symbols, at least one positive weight, and a total
    /// that fits in 64 bits. Entries are kept sorted by symbol.
    pub fn new(mut entries: Vec<(Symbol, u64)>) -> Result<Self> {
        entries.sort_unstable_by_key(|&(s, _)| s);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(format!("duplicate symbol {}", w[0].0)));
        }
        let total = entries
            .iter()
            .try_fold(0u64, |acc, &(_, f)| acc.checked_add(f))
            .ok_or_else(|| Error::InvalidDistribution("total frequency overflows u64".into()))?;
        if total == 0 {
            return Err(Error::InvalidDistribution("all frequencies are zero".into()));
        }
        Ok(Self { entries, total })
    }

    /// Counts for symbols `0..counts.len()`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        Self::new(counts.iter().enumerate().map(|(i, &c)| (i as Symbol, c)).collect())
    }

    pub fn uniform(n: u64) -> Result<Self> {
        Self::new((0..n).map(|s| (s, 1)).collect())
    }

    /// Exact rational weights, rescaled to integers by the common denominator.
    pub fn from_ratios(entries: &[(Symbol, Ratio<u64>)]) -> Result<Self> {
        let overflow = || Error::InvalidDistribution("rational weights overflow u64".into());
        let mut common = 1u64;
        for (_, r) in entries {
            let l = (common as u128).lcm(&(*r.denom() as u128));
            common = u64::try_from(l).map_err(|_| overflow())?;
        }
        let scaled = entries
            .iter()
            .map(|(s, r)| {
                r.numer()
                    .checked_mul(common / r.denom())
                    .map(|w| (*s, w))
                    .ok_or_else(overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(scaled)
    }

    pub fn entries(&self) -> &[(Symbol, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Entries with positive weight, in symbol order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Symbol, u64)> + '_ {
        self.entries.iter().copied().filter(|&(_, f)| f > 0)
    }

    pub fn probability(&self, symbol: Symbol) -> Option<Ratio<u64>> {
        self.entries
            .binary_search_by_key(&symbol, |&(s, _)| s)
            .ok()
            .map(|i| Ratio::new(self.entries[i].1, self.total))
    }
}

/// Parses `symbol count` lines. Counts may be integers or decimals such as
/// `0.25`; blank lines and lines starting with `#` are skipped.
pub fn parse_frequency_table(text: &str) -> Result<SymbolDistribution> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| Error::InvalidDistribution(format!("line {}: {why}: {line:?}", i + 1));
        let mut parts = line.split_whitespace();
        let (Some(sym), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected `symbol count`"));
        };
        let sym: Symbol = sym.parse().map_err(|_| bad("invalid symbol"))?;
        let weight = parse_decimal(count).ok_or_else(|| bad("invalid count"))?;
        entries.push((sym, weight));
    }
    SymbolDistribution::from_ratios(&entries)
}

fn parse_decimal(s: &str) -> Option<Ratio<u64>> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: u64 = format!("{int}{frac}").parse().ok()?;
    let denom = 10u64.checked_pow(frac.len() as u32)?;
    Some(Ratio::new(numer, denom))
}

/// Base-2 entropy of the normalized distribution, with `0·lg 0 = 0`.
pub fn entropy(dist: &SymbolDistribution) -> f64 {
    let total = dist.total() as f64;
    dist.nonzero()
        .map(|(_, f)| {
            let p = f as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

/// Probability-weighted mean codeword length.
pub fn expected_length(dist: &SymbolDistribution, book: &Codebook) -> Result<f64> {
    let total = dist.total() as f64;
    dist.nonzero().try_fold(0.0, |acc, (s, f)| {
        let code = book.get(s).ok_or(Error::IncompleteCodebook(s))?;
        Ok(acc + (f as f64 / total) * code.len() as f64)
    })
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub freq: u64,
    pub parent: Option<NodeId>,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub symbol: Option<Symbol>,
}

/// Arena-allocated Huffman tree. Leaves come first in symbol order; merged
/// parents are appended in creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTree {
    nodes: Vec<Node>,
    root: NodeId,
}

impl HuffmanTree {
    /// Wraps raw nodes without validation; `codes_from_tree` checks structure.
    pub fn from_parts(nodes: Vec<Node>, root: NodeId) -> Self {
        Self { nodes, root }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn leaves(&self) -> impl Iterator<Item = (NodeId, &Node)> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.symbol.is_some())
    }

    /// Depth of every leaf, ascending.
    pub fn leaf_depths(&self) -> Result<Vec<u32>> {
        let mut depths = Vec::new();
        for (id, _) in self.leaves() {
            depths.push(self.depth(id)?);
        }
        depths.sort_unstable();
        Ok(depths)
    }

    fn depth(&self, mut id: NodeId) -> Result<u32> {
        let mut d = 0u32;
        while let Some(p) = self.nodes[id].parent {
            d += 1;
            if d as usize > self.nodes.len() {
                return Err(Error::MalformedTree("parent cycle".into()));
            }
            id = p;
        }
        Ok(d)
    }
}

pub fn build_tree(dist: &SymbolDistribution) -> Result<HuffmanTree> {
    build_tree_counted(dist, &mut OpCounters::default())
}

/// Repeatedly merges the two parentless nodes of lowest frequency; ties go to
/// the earlier-created node. The first node popped becomes the left child.
pub fn build_tree_counted(dist: &SymbolDistribution, counters: &mut OpCounters) -> Result<HuffmanTree> {
    let mut nodes: Vec<Node> = dist
        .nonzero()
        .map(|(s, f)| Node { freq: f, parent: None, left: None, right: None, symbol: Some(s) })
        .collect();
    if nodes.is_empty() {
        return Err(Error::InvalidDistribution("no symbol has positive frequency".into()));
    }
    let mut heap: BinaryHeap<Reverse<(u64, NodeId)>> =
        nodes.iter().enumerate().map(|(id, n)| Reverse((n.freq, id))).collect();

    while heap.len() > 1 {
        let Reverse((lf, left)) = heap.pop().expect("heap has two entries");
        let Reverse((rf, right)) = heap.pop().expect("heap has two entries");
        let id = nodes.len();
        // cannot overflow: bounded by the distribution total
        let freq = lf + rf;
        nodes.push(Node { freq, parent: None, left: Some(left), right: Some(right), symbol: None });
        nodes[left].parent = Some(id);
        nodes[right].parent = Some(id);
        heap.push(Reverse((freq, id)));
        counters.tree_merges += 1;
    }
    let Reverse((_, root)) = heap.pop().expect("non-empty heap");
    Ok(HuffmanTree { nodes, root })
}

pub fn codes_from_tree(tree: &HuffmanTree) -> Result<Codebook> {
    codes_from_tree_counted(tree, &mut OpCounters::default())
}

/// Walks each leaf up to the root, recording 0 for a left step and 1 for a
/// right step, then reverses the path. A lone leaf gets the code `0`.
pub fn codes_from_tree_counted(tree: &HuffmanTree, counters: &mut OpCounters) -> Result<Codebook> {
    validate(tree)?;
    let nodes = &tree.nodes;
    let mut codes = BTreeMap::new();
    for (id, leaf) in tree.leaves() {
        let symbol = leaf.symbol.expect("leaf");
        let mut path = Vec::new();
        let mut cur = id;
        while let Some(p) = nodes[cur].parent {
            let bit = if nodes[p].left == Some(cur) {
                false
            } else if nodes[p].right == Some(cur) {
                true
            } else {
                return Err(Error::MalformedTree(format!("node {cur} is not a child of its parent {p}")));
            };
            path.push(bit);
            cur = p;
            counters.tree_walk_steps += 1;
            if path.len() > nodes.len() {
                return Err(Error::MalformedTree("parent cycle".into()));
            }
        }
        if cur != tree.root {
            return Err(Error::MalformedTree(format!("leaf {id} does not reach the root")));
        }
        if path.is_empty() {
            path.push(false);
        }
        path.reverse();
        if codes.insert(symbol, BitString::from_bits(path)).is_some() {
            return Err(Error::MalformedTree(format!("symbol {symbol} appears in two leaves")));
        }
    }
    Codebook::new(codes)
}

fn validate(tree: &HuffmanTree) -> Result<()> {
    let nodes = &tree.nodes;
    let len = nodes.len();
    let in_range = |id: NodeId| -> Result<NodeId> {
        if id < len {
            Ok(id)
        } else {
            Err(Error::MalformedTree(format!("node id {id} out of range")))
        }
    };
    in_range(tree.root)?;
    if nodes[tree.root].parent.is_some() {
        return Err(Error::MalformedTree("root has a parent".into()));
    }
    for (id, n) in nodes.iter().enumerate() {
        match (n.left, n.right, n.symbol) {
            (None, None, Some(_)) => {}
            (Some(l), Some(r), None) => {
                for c in [in_range(l)?, in_range(r)?] {
                    if nodes[c].parent != Some(id) {
                        return Err(Error::MalformedTree(format!("child {c} of {id} has wrong parent")));
                    }
                }
                if l == r {
                    return Err(Error::MalformedTree(format!("node {id} has the same child twice")));
                }
            }
            _ => return Err(Error::MalformedTree(format!("node {id} is neither leaf nor full internal node"))),
        }
        match n.parent {
            None if id != tree.root => {
                return Err(Error::MalformedTree(format!("orphan node {id}")));
            }
            Some(p) => {
                let p = in_range(p)?;
                if nodes[p].left != Some(id) && nodes[p].right != Some(id) {
                    return Err(Error::MalformedTree(format!("node {id} not listed by its parent {p}")));
                }
            }
            None => {}
        }
    }
    Ok(())
}

/// Canonical Huffman codebook for the distribution: tree-derived lengths
/// reassigned with [`canonical_from_lengths`].
pub fn huffman_codebook(dist: &SymbolDistribution) -> Result<Codebook> {
    let raw = codes_from_tree(&build_tree(dist)?)?;
    canonical_from_lengths(&raw.lengths())
}

/// Checks the three structural properties every optimal prefix code has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct OptimalityReport {
    /// More frequent symbols never have longer codes.
    pub monotone_ok: bool,
    /// At least two codewords share the maximum length.
    pub longest_pair_ok: bool,
    /// Two maximum-length codewords differ only in their last bit.
    pub sibling_pair_ok: bool,
}

impl OptimalityReport {
    pub fn all(&self) -> bool {
        self.monotone_ok && self.longest_pair_ok && self.sibling_pair_ok
    }
}

pub fn optimality_report(dist: &SymbolDistribution, book: &Codebook) -> Result<OptimalityReport> {
    let mut weighted: Vec<(u64, usize, &BitString)> = Vec::new();
    for (s, f) in dist.nonzero() {
        let code = book.get(s).ok_or(Error::IncompleteCodebook(s))?;
        weighted.push((f, code.len(), code));
    }
    weighted.sort_unstable_by_key(|w| std::cmp::Reverse(w.0));

    // Every group of equal frequency must have codes no shorter than the
    // longest code of any strictly more frequent group.
    let mut monotone_ok = true;
    let mut longest_above = 0usize;
    for group in weighted.chunk_by(|a, b| a.0 == b.0) {
        let shortest = group.iter().map(|g| g.1).min().unwrap_or(0);
        if shortest < longest_above {
            monotone_ok = false;
            break;
        }
        longest_above = longest_above.max(group.iter().map(|g| g.1).max().unwrap_or(0));
    }

    let max_len = weighted.iter().map(|w| w.1).max().unwrap_or(0);
    let longest: Vec<&BitString> = weighted.iter().filter(|w| w.1 == max_len).map(|w| w.2).collect();
    let longest_pair_ok = longest.len() >= 2;
    let set: HashSet<&BitString> = longest.iter().copied().collect();
    let sibling_pair_ok = longest.iter().any(|c| {
        let mut bits = c.bits().to_vec();
        if let Some(last) = bits.last_mut() {
            *last = !*last;
        }
        set.contains(&BitString::from_bits(bits))
    });

    Ok(OptimalityReport { monotone_ok, longest_pair_ok, sibling_pair_ok })
}
