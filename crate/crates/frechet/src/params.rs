//! Tuning knobs for the layered decision procedure.

use crate::error::Error;
use crate::Result;

/// How a block automaton stores its chunk transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMode {
    /// Tabulate every (state, chunk) transition up front.
    EagerTable,
    /// Compute transitions on first use and memoize them.
    LazyMemo,
}

/// Sizes of the layer/block/chunk decomposition.
///
/// The asymptotic analysis ties these to log n with unspecified constants;
/// here they are concrete, user-tunable values. The defaults were picked by
/// the bench harness on random walks.
#[derive(Debug, Clone, Copy)]
pub struct TuningParams {
    /// Points of A per block (consecutive blocks share one point).
    pub block_size: usize,
    /// Blocks per layer (consecutive layers share one point).
    pub blocks_per_layer: usize,
    /// B-positions folded into one automaton input symbol.
    pub chunk_len: usize,
    /// Bits per face label in the chunk encoding. `None` derives the width
    /// from each layer's face count.
    pub face_label_bits: Option<u32>,
    pub table_mode: TableMode,
}

impl Default for TuningParams {
    fn default() -> Self {
        TuningParams {
            block_size: 8,
            blocks_per_layer: 8,
            chunk_len: 4,
            face_label_bits: None,
            table_mode: TableMode::LazyMemo,
        }
    }
}

impl TuningParams {
    /// Validates the invariants the rest of the pipeline relies on.
    pub fn validate(&self) -> Result<()> {
        if self.block_size < 2 {
            return Err(Error::BadParams("block_size must be >= 2".into()));
        }
        if self.block_size > 64 {
            return Err(Error::BadParams(
                "block_size must be <= 64 (valid sets are one machine word)".into(),
            ));
        }
        if self.blocks_per_layer < 1 {
            return Err(Error::BadParams("blocks_per_layer must be >= 1".into()));
        }
        if self.chunk_len < 1 {
            return Err(Error::BadParams("chunk_len must be >= 1".into()));
        }
        if let Some(beta) = self.face_label_bits {
            check_chunk_width(self.chunk_len as u32, beta)?;
        }
        Ok(())
    }

    /// Number of chunks a stream of `n` B-positions packs into (position 1
    /// feeds the start state, so `n - 1` positions are chunked).
    pub fn chunk_count(&self, n: usize) -> usize {
        (n - 1).div_ceil(self.chunk_len)
    }

    /// Points of A spanned by one full layer, overlaps included.
    pub fn layer_span(&self) -> usize {
        self.blocks_per_layer * (self.block_size - 1) + 1
    }

    /// Number of layers needed to cover `m` points of A.
    pub fn layer_count(&self, m: usize) -> usize {
        if m <= 1 {
            1
        } else {
            (m - 1).div_ceil(self.layer_span() - 1)
        }
    }
}

/// The packed chunk must fit one machine word: `tau * (beta + 1) <= 64`,
/// with at least one bit per face label.
pub(crate) fn check_chunk_width(tau: u32, beta: u32) -> Result<()> {
    if beta < 1 {
        return Err(Error::BadParams("face_label_bits must be >= 1".into()));
    }
    let needed = tau * (beta + 1);
    if needed > 64 {
        Err(Error::ChunkTooWide { tau, beta, needed })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        TuningParams::default().validate().unwrap();
    }

    #[test]
    fn degenerate_sizes_rejected() {
        let bad = [
            TuningParams { block_size: 1, ..TuningParams::default() },
            TuningParams { block_size: 65, ..TuningParams::default() },
            TuningParams { chunk_len: 0, ..TuningParams::default() },
            // 8 * 9 = 72 bits do not fit one word
            TuningParams { chunk_len: 8, face_label_bits: Some(8), ..TuningParams::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn derived_counts() {
        let p = TuningParams {
            block_size: 4,
            blocks_per_layer: 2,
            ..TuningParams::default()
        };
        assert_eq!(p.layer_span(), 7);
        assert_eq!(p.layer_count(10), 2);
        assert_eq!(p.layer_count(7), 1);
        assert_eq!(p.layer_count(1), 1);
        let q = TuningParams { chunk_len: 4, ..TuningParams::default() };
        assert_eq!(q.chunk_count(1), 0);
        assert_eq!(q.chunk_count(2), 1);
        assert_eq!(q.chunk_count(9), 2);
    }
}
