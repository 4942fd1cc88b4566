//! Per-block finite-state transducers.
//!
//! For one block of A (disks `D_1..D_s`), the character-level machine reads
//! a stream of (face, flag) pairs — the face of the arrangement containing
//! the next B-point, and a flag saying whether the A-frog could be parked at
//! the block's first point for that B-point — and tracks the aggregate state
//! `(face, valid)`: the set of block disks whose centers the A-frog could
//! currently occupy. Each state emits one bit: whether the block's last disk
//! is valid, i.e. whether the placement (block end, current B-point) is
//! reachable.
//!
//! The compact machine processes `tau` characters per step. Its input symbol
//! is the packed integer
//!
//! ```text
//! e(chunk) = sum_i face_i * 2^(beta*(i-1) + tau)  +  sum_i flag_i * 2^(i-1)
//! ```
//!
//! whose two summands (the per-layer face part and the per-block flag part)
//! occupy disjoint bit ranges and are combined by plain addition. Transitions
//! are either tabulated up front (eager) or memoized on first use (lazy);
//! each stores the tau output bits of the steps it compresses.

use rustc_hash::FxHashMap;

use crate::arrangement::{block_restrict, FaceId, FaceTable};
use crate::bits::{fill_runs_word, prefix_run};
use crate::error::Error;
use crate::geometry::MoveModel;
use crate::params::{check_chunk_width, TableMode};
use crate::Result;

/// Upper bound on an eager transition table, in bytes.
pub const EAGER_TABLE_BUDGET: u64 = 1 << 26;

/// A block's view of the layer faces: for every face label, the membership
/// restricted to the block's `s` disks (bit 0 = the block's first disk).
#[derive(Debug, Clone)]
pub struct BlockSpec {
    masks: Vec<u64>,
    s: u32,
}

impl BlockSpec {
    /// `masks[f]` holds face `f`'s membership of the block's disks.
    pub fn new(masks: Vec<u64>, s: u32) -> Result<Self> {
        if !(1..=64).contains(&s) {
            return Err(Error::BadParams(format!("block size {s} outside 1..=64")));
        }
        if masks.is_empty() {
            return Err(Error::BadParams("a block needs at least one face".into()));
        }
        if s < 64 {
            let over = !((1u64 << s) - 1);
            if masks.iter().any(|&m| m & over != 0) {
                return Err(Error::BadParams("face mask exceeds block width".into()));
            }
        }
        Ok(BlockSpec { masks, s })
    }

    /// Restricts every face of a layer table to the block `[lo, lo + len)`.
    pub fn from_layer(tab: &FaceTable, block_lo: usize, block_len: usize) -> Result<Self> {
        let masks = (0..tab.len() as FaceId)
            .map(|f| block_restrict(tab, f, block_lo, block_len))
            .collect();
        BlockSpec::new(masks, block_len as u32)
    }

    pub fn block_size(&self) -> u32 {
        self.s
    }

    pub fn face_count(&self) -> u32 {
        self.masks.len() as u32
    }

    pub fn disk_mask(&self, face: FaceId) -> Result<u64> {
        self.masks
            .get(face as usize)
            .copied()
            .ok_or(Error::FaceOutOfRange { face, count: self.face_count() })
    }

    /// Bit of the block's last disk.
    fn last_disk_bit(&self) -> u64 {
        1u64 << (self.s - 1)
    }
}

/// Automaton state: the face the B-frog sits in, plus the valid set — the
/// block disks whose centers the A-frog may occupy right now.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AggregateState {
    pub face: FaceId,
    pub valid: u64,
}

/// One input character: the face of the next B-point and its reachability
/// flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepInput {
    pub face: FaceId,
    pub flag: bool,
}

#[cfg(debug_assertions)]
fn debug_check_state(spec: &BlockSpec, state: &AggregateState) {
    let mask = spec.masks[state.face as usize];
    debug_assert_eq!(state.valid & !mask, 0, "valid set must lie inside the face mask");
    // closure: a valid disk followed by a containing disk keeps it valid
    debug_assert_eq!(
        (state.valid << 1) & mask & !state.valid,
        0,
        "valid set must be closed under consecutive containment"
    );
}

/// One character step of the basic machine.
///
/// The new valid set contains every disk of the target face reachable from a
/// valid disk through a run of consecutive disks all containing the target
/// face; a raised flag additionally admits the maximal prefix of block disks
/// containing it. Under [`MoveModel::WithDiagonal`] the run may start one
/// disk after the valid seed (the simultaneous hop).
pub fn transition_basic(
    spec: &BlockSpec,
    state: &AggregateState,
    input: StepInput,
    model: MoveModel,
) -> Result<AggregateState> {
    let target = spec.disk_mask(input.face)?;
    let mut seeds = state.valid & target;
    if model == MoveModel::WithDiagonal {
        seeds |= (state.valid << 1) & target;
    }
    let mut valid = fill_runs_word(target, seeds);
    if input.flag {
        valid |= prefix_run(target);
    }
    let next = AggregateState { face: input.face, valid };
    #[cfg(debug_assertions)]
    debug_check_state(spec, &next);
    Ok(next)
}

/// The per-state output bit: 1 iff the block's last disk is valid, i.e. the
/// placement (block end, current B-point) is reachable.
pub fn moore_output(spec: &BlockSpec, state: &AggregateState) -> bool {
    state.valid & spec.last_disk_bit() != 0
}

/// State before any character is read: for a raised first flag the valid set
/// is the maximal prefix of block disks containing the first face, otherwise
/// empty.
pub fn start_state(spec: &BlockSpec, first_face: FaceId, first_flag: bool) -> Result<AggregateState> {
    let mask = spec.disk_mask(first_face)?;
    let valid = if first_flag { prefix_run(mask) } else { 0 };
    Ok(AggregateState { face: first_face, valid })
}

/// `tau` consecutive (face, flag) pairs packed into one machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedChunk {
    /// The full code: `face_part + flag_part`.
    pub code: u64,
    /// Faces only, shifted past the flag field. Computed once per layer.
    pub face_part: u64,
    /// Flags only, in the low `len` bits. Changes from block to block.
    pub flag_part: u64,
    /// Number of real positions; shorter than `tau` only for the final
    /// chunk of a stream, whose padding is skipped on replay.
    pub len: u32,
}

/// Packs `faces` and `flags` (bit i = flag of position i) into a chunk.
pub fn encode_chunk(faces: &[FaceId], flags: u64, beta: u32, tau: u32) -> Result<EncodedChunk> {
    check_chunk_width(tau, beta)?;
    let len = faces.len() as u32;
    if len > tau {
        return Err(Error::BadParams(format!("{len} faces exceed chunk_len {tau}")));
    }
    if len < 64 && flags >> len != 0 {
        return Err(Error::BadParams("flag bits past the chunk length".into()));
    }
    let mut face_part = 0u64;
    for (i, &f) in faces.iter().enumerate() {
        if beta < 32 && f >= 1 << beta {
            return Err(Error::EncodingOverflow { face: f, bits: beta });
        }
        face_part += (f as u64) << (beta * i as u32 + tau);
    }
    let chunk = EncodedChunk { code: face_part + flags, face_part, flag_part: flags, len };
    debug_assert_eq!(chunk.code, chunk.face_part | chunk.flag_part);
    Ok(chunk)
}

/// Unpacks a chunk back into its (face, flag) pairs.
pub fn decode_chunk(chunk: &EncodedChunk, beta: u32, tau: u32) -> (Vec<FaceId>, u64) {
    let faces = (0..chunk.len).map(|i| chunk_face_at(chunk.code, i, beta, tau)).collect();
    let flags = chunk.code & ((1u64 << chunk.len) - 1);
    (faces, flags)
}

fn chunk_face_at(code: u64, i: u32, beta: u32, tau: u32) -> FaceId {
    let label_mask = if beta >= 32 { u32::MAX as u64 } else { (1u64 << beta) - 1 };
    (code >> (beta * i + tau) & label_mask) as FaceId
}

enum Store {
    Eager {
        states: Vec<AggregateState>,
        index: FxHashMap<AggregateState, u32>,
        /// `(next state, output bits)` per state and chunk code;
        /// `u32::MAX` marks codes whose faces are out of range.
        table: Vec<(u32, u32)>,
        codes: usize,
    },
    Lazy {
        /// Transitions do not depend on the source face, so the memo keys on
        /// the valid set and the chunk code alone; the target face is the
        /// chunk's last face.
        memo: FxHashMap<(u64, u64), (u64, u32)>,
    },
}

/// A block machine operating on packed chunks, with its transition store.
pub struct CompactAutomaton {
    spec: BlockSpec,
    beta: u32,
    tau: u32,
    model: MoveModel,
    store: Store,
}

/// Builds the compact machine for one block.
///
/// Eager mode enumerates the states reachable from every possible start
/// state and tabulates all `2^(tau*(beta+1))` chunk transitions per state;
/// it refuses when that table would exceed [`EAGER_TABLE_BUDGET`]. Lazy mode
/// computes transitions on first use.
pub fn build_compact(
    spec: BlockSpec,
    beta: u32,
    tau: u32,
    model: MoveModel,
    mode: TableMode,
) -> Result<CompactAutomaton> {
    check_chunk_width(tau, beta)?;
    let faces = spec.face_count();
    if beta < 32 && u64::from(faces) > 1u64 << beta {
        return Err(Error::EncodingOverflow { face: faces - 1, bits: beta });
    }
    let store = match mode {
        TableMode::LazyMemo => Store::Lazy { memo: FxHashMap::default() },
        TableMode::EagerTable => {
            let width = tau * (beta + 1);
            if width >= 60 || 8u64 << width > EAGER_TABLE_BUDGET {
                return Err(Error::TableBudget {
                    needed: if width >= 60 { u64::MAX } else { 8u64 << width },
                    budget: EAGER_TABLE_BUDGET,
                });
            }
            let codes = 1usize << width;
            let max_states = (EAGER_TABLE_BUDGET / 8 / codes as u64) as usize;

            // breadth-first closure over single characters; chunk
            // transitions are compositions of these, so they stay inside
            let mut states: Vec<AggregateState> = Vec::new();
            let mut index: FxHashMap<AggregateState, u32> = FxHashMap::default();
            let add = |st: AggregateState,
                           states: &mut Vec<AggregateState>,
                           index: &mut FxHashMap<AggregateState, u32>| {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(st) {
                    e.insert(states.len() as u32);
                    states.push(st);
                }
            };
            for f in 0..faces {
                for flag in [false, true] {
                    add(start_state(&spec, f, flag)?, &mut states, &mut index);
                }
            }
            let mut head = 0;
            while head < states.len() {
                if states.len() > max_states {
                    return Err(Error::TableBudget {
                        needed: states.len() as u64 * codes as u64 * 8,
                        budget: EAGER_TABLE_BUDGET,
                    });
                }
                let st = states[head];
                head += 1;
                for g in 0..faces {
                    for flag in [false, true] {
                        let next = transition_basic(&spec, &st, StepInput { face: g, flag }, model)?;
                        add(next, &mut states, &mut index);
                    }
                }
            }
            let needed = states.len() as u64 * codes as u64 * 8;
            if needed > EAGER_TABLE_BUDGET {
                return Err(Error::TableBudget { needed, budget: EAGER_TABLE_BUDGET });
            }

            let mut table = vec![(u32::MAX, 0u32); states.len() * codes];
            for (si, st) in states.iter().enumerate() {
                for code in 0..codes as u64 {
                    if let Ok((next, out)) = replay_code(&spec, st, code, tau, tau, beta, model) {
                        let ni = index[&next];
                        table[si * codes + code as usize] = (ni, out as u32);
                    }
                }
            }
            Store::Eager { states, index, table, codes }
        }
    };
    Ok(CompactAutomaton { spec, beta, tau, model, store })
}

/// Runs `len` characters of a packed code through the basic machine,
/// collecting the per-step output bits.
fn replay_code(
    spec: &BlockSpec,
    start: &AggregateState,
    code: u64,
    len: u32,
    tau: u32,
    beta: u32,
    model: MoveModel,
) -> Result<(AggregateState, u64)> {
    let mut state = *start;
    let mut out = 0u64;
    for i in 0..len {
        let face = chunk_face_at(code, i, beta, tau);
        let flag = code >> i & 1 == 1;
        state = transition_basic(spec, &state, StepInput { face, flag }, model)?;
        out |= (moore_output(spec, &state) as u64) << i;
    }
    Ok((state, out))
}

impl CompactAutomaton {
    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// Number of enumerated states (eager mode only).
    pub fn state_count(&self) -> Option<usize> {
        self.eager_states().map(<[_]>::len)
    }

    /// The enumerated reachable states (eager mode only).
    pub fn eager_states(&self) -> Option<&[AggregateState]> {
        match &self.store {
            Store::Eager { states, .. } => Some(states),
            Store::Lazy { .. } => None,
        }
    }

    /// Folds the chunk stream from `start`, returning the final state and
    /// one output word per chunk (`chunk.len` meaningful bits each).
    ///
    /// Takes `&mut self`: lazy mode fills its memo during the run. Runs on
    /// distinct automata are independent.
    pub fn run(
        &mut self,
        start: AggregateState,
        chunks: &[EncodedChunk],
    ) -> Result<(AggregateState, Vec<u64>)> {
        let mut out = Vec::with_capacity(chunks.len());
        let mut state = start;
        // eager mode walks the table by state index
        let mut eager_idx: Option<u32> = match &self.store {
            Store::Eager { index, .. } => Some(*index.get(&state).ok_or_else(|| {
                Error::Internal("start state missing from the eager enumeration".into())
            })?),
            Store::Lazy { .. } => None,
        };
        for chunk in chunks {
            if chunk.len > self.tau {
                return Err(Error::Internal("chunk longer than the machine's tau".into()));
            }
            if chunk.len == 0 {
                out.push(0);
                continue;
            }
            if state.valid == 0 && chunk.flag_part == 0 {
                // an empty valid set with no raised flags stays empty; only
                // the current face moves
                let face = chunk_face_at(chunk.code, chunk.len - 1, self.beta, self.tau);
                if face >= self.spec.face_count() {
                    return Err(Error::FaceOutOfRange { face, count: self.spec.face_count() });
                }
                state = AggregateState { face, valid: 0 };
                eager_idx = None;
                out.push(0);
                continue;
            }
            if chunk.len < self.tau {
                // short final chunk: replay the real positions only
                let (next, bits) =
                    replay_code(&self.spec, &state, chunk.code, chunk.len, self.tau, self.beta, self.model)?;
                state = next;
                eager_idx = None; // replay leaves the indexed walk
                out.push(bits);
                continue;
            }
            match &mut self.store {
                Store::Eager { states, index, table, codes } => {
                    let si = match eager_idx {
                        Some(i) => i,
                        None => *index.get(&state).ok_or_else(|| {
                            Error::Internal("state missing from the eager enumeration".into())
                        })?,
                    };
                    if chunk.code >= *codes as u64 {
                        return Err(Error::Internal("chunk code exceeds the table width".into()));
                    }
                    let (ni, bits) = table[si as usize * *codes + chunk.code as usize];
                    if ni == u32::MAX {
                        return Err(Error::FaceOutOfRange {
                            face: 0,
                            count: self.spec.face_count(),
                        });
                    }
                    state = states[ni as usize];
                    eager_idx = Some(ni);
                    out.push(bits as u64);
                }
                Store::Lazy { memo } => {
                    let key = (state.valid, chunk.code);
                    let (valid, bits) = match memo.get(&key) {
                        Some(&v) => v,
                        None => {
                            let (next, bits) = replay_code(
                                &self.spec, &state, chunk.code, chunk.len, self.tau, self.beta,
                                self.model,
                            )?;
                            memo.insert(key, (next.valid, bits as u32));
                            (next.valid, bits as u32)
                        }
                    };
                    let face = chunk_face_at(chunk.code, self.tau - 1, self.beta, self.tau);
                    state = AggregateState { face, valid };
                    out.push(bits as u64);
                }
            }
        }
        Ok((state, out))
    }
}
