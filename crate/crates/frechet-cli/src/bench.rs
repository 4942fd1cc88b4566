//! Deterministic decision-procedure benchmarks.
//!
//! The walk family matches a random walk against a jittered copy of itself —
//! the trajectory-similarity workload — at a delta slightly above the jitter
//! ceiling, so both algorithms process the full instance and the timings are
//! reproducible per seed. The lowerbound family reports the adversarial
//! automaton state counts instead of a speedup.

use std::time::Instant;

use anyhow::Result;
use frechet::geometry::{MoveModel, Point2, PointSeq, SeqRole};
use frechet::lowerbound;
use frechet::naive::decide_naive;
use frechet::pipeline::decide;
use frechet::TuningParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::{self, Kind};

/// Jitter radius for the walk family's B-sequence.
pub const WALK_JITTER: f64 = 0.3;
/// Decision radius for the walk family; comfortably above the jitter, so
/// the answer is true and neither side exits early.
pub const WALK_DELTA: f64 = 1.6;

#[derive(Debug, Clone)]
pub struct WalkRow {
    pub m: usize,
    pub n: usize,
    pub delta: f64,
    pub naive_ms: f64,
    pub fast_ms: f64,
    pub speedup: f64,
    pub decision: bool,
    /// Present when cross-checking; false means the algorithms disagreed.
    pub agree: Option<bool>,
}

/// The walk-family instance for one size and seed.
pub fn walk_instance(size: usize, seed: u64) -> (PointSeq, PointSeq) {
    let base = generate::generate(Kind::Walk, size, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let tracked: Vec<Point2> = base
        .iter()
        .map(|p| {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.0..WALK_JITTER);
            Point2::new(p.x + r * angle.cos(), p.y + r * angle.sin())
        })
        .collect();
    let a = PointSeq::new(base, SeqRole::A).expect("nonempty walk");
    let b = PointSeq::new(tracked, SeqRole::B).expect("nonempty walk");
    (a, b)
}

pub fn bench_walks(
    sizes: &[usize],
    seed: u64,
    params: &TuningParams,
    model: MoveModel,
    cross_check: bool,
) -> Result<Vec<WalkRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let (a, b) = walk_instance(size, seed ^ (size as u64) << 1);
        let delta = WALK_DELTA;

        let t0 = Instant::now();
        let naive_answer = decide_naive(&a, &b, delta, model)?;
        let naive_ms = t0.elapsed().as_secs_f64() * 1e3;

        let t1 = Instant::now();
        let fast_answer = decide(&a, &b, delta, params, model)?;
        let fast_ms = t1.elapsed().as_secs_f64() * 1e3;

        rows.push(WalkRow {
            m: size,
            n: size,
            delta,
            naive_ms,
            fast_ms,
            speedup: naive_ms / fast_ms,
            decision: fast_answer,
            agree: cross_check.then_some(naive_answer == fast_answer),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct LowerBoundRow {
    pub m: usize,
    pub distinct_states: usize,
    pub expected_states: usize,
    pub ok: bool,
    pub ms: f64,
}

pub fn bench_lowerbound(ms_values: &[usize]) -> Result<Vec<LowerBoundRow>> {
    let mut rows = Vec::new();
    for &m in ms_values {
        let t0 = Instant::now();
        let inst = lowerbound::generate(m)?;
        let report = lowerbound::verify_exponential(&inst)?;
        rows.push(LowerBoundRow {
            m,
            distinct_states: report.distinct_states,
            expected_states: report.expected_states,
            ok: report.ok(),
            ms: t0.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}
