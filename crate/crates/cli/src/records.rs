//! CSV row types. Field order defines the column order.

use serde::{Deserialize, Serialize};

/// One row of `sweep` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub dim: u8,
    pub n: usize,
    pub tpb: usize,
    pub k: usize,
    pub overlap: usize,
    pub cycles: usize,
    pub total_subiterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub operational_blocks: usize,
    pub operational_threads: usize,
    pub shared_bytes_per_block: usize,
}

/// One row of `resources` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceRecord {
    pub dim: u8,
    pub n: usize,
    pub tpb: usize,
    pub overlap: usize,
    pub operational_blocks: usize,
    pub operational_threads: usize,
    pub shared_bytes_per_block: usize,
}
