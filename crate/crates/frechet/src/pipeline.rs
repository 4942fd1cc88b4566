//! The layered decision procedure.
//!
//! A is cut into layers of `t` blocks of `s` points, consecutive layers and
//! blocks sharing one point. Per layer: build the disk arrangement of the
//! layer's points at radius delta, locate every B-point in it once, and pack
//! the face labels into per-chunk partial codes. Then each block combines
//! those face codes with the incoming flag words by plain addition and runs
//! its compact automaton, whose output flags say which placements
//! (block end, b_i) are reachable — the input for the next block. The last
//! flag of the last block of the last layer is the answer.

use crate::arrangement::{build_face_structure_lazy, locate_interning, DiskSet, FaceId};
use crate::automaton::{
    build_compact, moore_output, start_state, BlockSpec, CompactAutomaton, EncodedChunk,
};
use crate::error::Error;
use crate::geometry::{within_sq, MoveModel, Point2, PointSeq};
use crate::params::{check_chunk_width, TuningParams};
use crate::Result;

/// Index ranges (0-based, inclusive) of one layer of A and its blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub start: usize,
    pub end: usize,
    pub blocks: Vec<(usize, usize)>,
}

/// The layer/block decomposition of an A-sequence.
#[derive(Debug, Clone)]
pub struct LayerPlan {
    m: usize,
    layers: Vec<Layer>,
}

impl LayerPlan {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }
}

/// Cuts `1..=m` into blocks of `block_size` points overlapping by one, and
/// groups them `blocks_per_layer` at a time into layers.
pub fn plan(m: usize, params: &TuningParams) -> Result<LayerPlan> {
    params.validate()?;
    if m < 1 {
        return Err(Error::EmptySequence("A"));
    }
    let s = params.block_size;
    let mut blocks = Vec::new();
    let mut p = 0usize;
    loop {
        let end = (p + s - 1).min(m - 1);
        blocks.push((p, end));
        p += s - 1;
        if p >= m - 1 {
            break;
        }
    }
    let layers = blocks
        .chunks(params.blocks_per_layer)
        .map(|grp| Layer {
            start: grp[0].0,
            end: grp[grp.len() - 1].1,
            blocks: grp.to_vec(),
        })
        .collect();
    Ok(LayerPlan { m, layers })
}

/// Reachability flags for all B positions: bit i says whether the placement
/// (current A-frontier, b_i) is reachable. Position 0 is stored apart; the
/// rest is packed `chunk_len` bits per word, ready to be added to a chunk's
/// face code.
#[derive(Debug, Clone)]
pub struct FlagStream {
    first: bool,
    words: Vec<u64>,
    n: usize,
    tau: u32,
}

impl FlagStream {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn first(&self) -> bool {
        self.first
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// 0-based position lookup.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.n);
        if i == 0 {
            self.first
        } else {
            self.words[(i - 1) / self.tau as usize] >> ((i - 1) % self.tau as usize) & 1 == 1
        }
    }

    pub fn last(&self) -> bool {
        self.bit(self.n - 1)
    }

    fn word_lengths(n: usize, tau: u32) -> impl Iterator<Item = u32> {
        let rest = n - 1;
        let tau_us = tau as usize;
        (0..rest.div_ceil(tau_us)).map(move |k| (rest - k * tau_us).min(tau_us) as u32)
    }
}

/// Flags before any layer runs: only position 1 can be reachable, and only
/// if the frogs' starting stones are within delta. A false first bit is the
/// caller's rejection sentinel.
pub fn init_flags(a: &PointSeq, b: &PointSeq, delta: f64, params: &TuningParams) -> Result<FlagStream> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NonFinite("delta"));
    }
    Ok(init_flags_sq(a, b, delta * delta, params))
}

/// [`init_flags`] against a squared rope length.
pub fn init_flags_sq(a: &PointSeq, b: &PointSeq, delta_sq: f64, params: &TuningParams) -> FlagStream {
    let n = b.len();
    let tau = params.chunk_len as u32;
    FlagStream {
        first: within_sq(a.at(1), b.at(1), delta_sq),
        words: vec![0; (n - 1).div_ceil(params.chunk_len)],
        n,
        tau,
    }
}

/// One layer's work: arrangement, point location, per-chunk face codes, and
/// one automaton pass per block, each feeding the next.
pub fn process_layer(
    layer_points: &[Point2],
    b: &PointSeq,
    delta: f64,
    flags: &FlagStream,
    params: &TuningParams,
    model: MoveModel,
) -> Result<FlagStream> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NonFinite("delta"));
    }
    let blocks = local_blocks(layer_points.len(), params.block_size);
    process_layer_sq(layer_points, &blocks, b, delta * delta, flags, params, model)
}

/// Block ranges local to a layer slice.
fn local_blocks(len: usize, block_size: usize) -> Vec<(usize, usize)> {
    let mut blocks = Vec::new();
    let mut p = 0usize;
    loop {
        let end = (p + block_size - 1).min(len - 1);
        blocks.push((p, end));
        p += block_size - 1;
        if p >= len - 1 {
            break;
        }
    }
    blocks
}

fn process_layer_sq(
    layer_points: &[Point2],
    blocks: &[(usize, usize)],
    b: &PointSeq,
    delta_sq: f64,
    flags: &FlagStream,
    params: &TuningParams,
    model: MoveModel,
) -> Result<FlagStream> {
    let n = b.len();
    debug_assert_eq!(flags.n, n);
    let tau = params.chunk_len as u32;

    let disks = DiskSet::new_sq(layer_points.to_vec(), delta_sq)?;
    let (mut tab, loc) = build_face_structure_lazy(&disks);
    let faces: Vec<FaceId> =
        b.points().iter().map(|&p| locate_interning(&loc, &mut tab, p)).collect();

    // the label width is fixed only now that every visited face has a label
    let beta = match params.face_label_bits {
        Some(beta) => {
            if beta < 32 && tab.len() as u64 > 1u64 << beta {
                return Err(Error::EncodingOverflow {
                    face: tab.len() as u32 - 1,
                    bits: beta,
                });
            }
            beta
        }
        None => tab.beta(),
    };
    check_chunk_width(tau, beta)?;

    // partial face codes, shared by every block of this layer
    let face_parts: Vec<(u64, u32)> = FlagStream::word_lengths(n, tau)
        .enumerate()
        .map(|(k, len)| {
            let base = 1 + k * tau as usize;
            let mut part = 0u64;
            for i in 0..len {
                part += (faces[base + i as usize] as u64) << (beta * i + tau);
            }
            (part, len)
        })
        .collect();

    let mut current = flags.clone();
    let mut chunks: Vec<EncodedChunk> = Vec::with_capacity(face_parts.len());
    for &(lo, hi) in blocks {
        let spec = BlockSpec::from_layer(&tab, lo, hi - lo + 1)?;
        let mut aut: CompactAutomaton =
            build_compact(spec, beta, tau, model, params.table_mode)?;

        let start = start_state(aut.spec(), faces[0], current.first)?;
        let out_first = moore_output(aut.spec(), &start);

        chunks.clear();
        chunks.extend(face_parts.iter().zip(current.words.iter()).map(
            |(&(face_part, len), &flag_part)| EncodedChunk {
                code: face_part + flag_part,
                face_part,
                flag_part,
                len,
            },
        ));
        let (_, out_words) = aut.run(start, &chunks)?;
        current = FlagStream { first: out_first, words: out_words, n, tau };
    }
    Ok(current)
}

/// Decides `delta_dF(a, b) <= delta` by the layered procedure. Agrees with
/// [`crate::naive::decide_naive`] on every input.
pub fn decide(
    a: &PointSeq,
    b: &PointSeq,
    delta: f64,
    params: &TuningParams,
    model: MoveModel,
) -> Result<bool> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NonFinite("delta"));
    }
    decide_sq(a, b, delta * delta, params, model)
}

/// [`decide`] against a squared rope length; the optimizer's workhorse.
pub fn decide_sq(
    a: &PointSeq,
    b: &PointSeq,
    delta_sq: f64,
    params: &TuningParams,
    model: MoveModel,
) -> Result<bool> {
    let layout = plan(a.len(), params)?;
    let mut flags = init_flags_sq(a, b, delta_sq, params);
    if !flags.first {
        // the frogs' starting stones are already too far apart
        return Ok(false);
    }
    for layer in layout.layers() {
        let pts = &a.points()[layer.start..=layer.end];
        let blocks: Vec<(usize, usize)> = layer
            .blocks
            .iter()
            .map(|&(lo, hi)| (lo - layer.start, hi - layer.start))
            .collect();
        flags = process_layer_sq(pts, &blocks, b, delta_sq, &flags, params, model)?;
        // per-layer scratch (arrangement, locator, automata) is dropped here
    }
    Ok(flags.last())
}
