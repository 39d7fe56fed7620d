use serde::Serialize;

/// Exact operation counts gathered by the instrumented code paths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    pub tree_merges: u64,
    pub tree_walk_steps: u64,
    pub bits_emitted: u64,
    pub state_ones_written: u64,
    pub coord_lookups: u64,
}

impl OpCounters {
    pub const NAMES: [&'static str; 5] = [
        "tree_merges",
        "tree_walk_steps",
        "bits_emitted",
        "state_ones_written",
        "coord_lookups",
    ];

    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, u64); 5] {
        [
            (Self::NAMES[0], self.tree_merges),
            (Self::NAMES[1], self.tree_walk_steps),
            (Self::NAMES[2], self.bits_emitted),
            (Self::NAMES[3], self.state_ones_written),
            (Self::NAMES[4], self.coord_lookups),
        ]
    }
}
