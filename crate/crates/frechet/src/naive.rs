//! The O(mn) dynamic-programming reference: decision, full reachability
//! matrix, and brute-force optimization. Ground truth for everything else.

use crate::bits::fill_runs_carry;
use crate::error::Error;
use crate::geometry::{dist_sq, MoveModel, Point2, PointSeq};
use crate::Result;

/// Largest m*n the quadratic optimizer accepts before deferring to the fast
/// path; the oracle exists for verification, not scale.
pub const ORACLE_PAIR_LIMIT: u64 = 1_000_000;

/// Bit matrix with `reach(i, j) = true` iff the placement `(a_i, b_j)` is
/// reachable from `(a_1, b_1)` hopping at rope length `delta`.
#[derive(Debug, Clone)]
pub struct ReachMatrix {
    m: usize,
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl ReachMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based lookup.
    pub fn reach(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i <= self.m && j >= 1 && j <= self.n);
        let row = self.row_words(i);
        row[(j - 1) / 64] >> ((j - 1) % 64) & 1 == 1
    }

    /// Row `i` (1-based) as packed words, low bit = column 1.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[(i - 1) * self.words_per_row..i * self.words_per_row]
    }
}

/// One row of within-bits: bit j-1 set iff `||p - b_j|| <= delta`.
fn within_row(p: Point2, b: &[Point2], delta_sq: f64, out: &mut [u64]) {
    out.fill(0);
    for (j, q) in b.iter().enumerate() {
        let dx = p.x - q.x;
        let dy = p.y - q.y;
        if dx * dx + dy * dy <= delta_sq {
            out[j / 64] |= 1u64 << (j % 64);
        }
    }
}

/// Advances one DP row. A column is reachable iff it is within delta and
/// some predecessor column (same row to the left through a within-run, the
/// row above, or diagonally above-left when allowed) is reachable.
fn advance_row(prev: &[u64], w: &[u64], model: MoveModel, cur: &mut [u64]) {
    let mut carry = false;
    let mut shift_carry = 0u64;
    for k in 0..w.len() {
        let seeds = match model {
            MoveModel::Orthogonal => prev[k] & w[k],
            MoveModel::WithDiagonal => {
                let shifted = prev[k] << 1 | shift_carry;
                shift_carry = prev[k] >> 63;
                (prev[k] | shifted) & w[k]
            }
        };
        carry = fill_runs_carry(w[k], seeds, carry, &mut cur[k]);
    }
}

/// First DP row: reachable columns are the maximal all-within prefix.
fn first_row(w: &[u64], cur: &mut [u64]) {
    let mut carry = false;
    for k in 0..w.len() {
        let seeds = if k == 0 { w[0] & 1 } else { 0 };
        carry = fill_runs_carry(w[k], seeds, carry, &mut cur[k]);
    }
}

/// Fills the full reachability matrix by the first-row/first-column rules
/// and the predecessor recurrence.
pub fn reach_matrix(
    a: &PointSeq,
    b: &PointSeq,
    delta: f64,
    model: MoveModel,
) -> Result<ReachMatrix> {
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta"));
    }
    Ok(reach_matrix_sq(a, b, delta * delta, model))
}

/// [`reach_matrix`] against a squared rope length.
pub fn reach_matrix_sq(
    a: &PointSeq,
    b: &PointSeq,
    delta_sq: f64,
    model: MoveModel,
) -> ReachMatrix {
    let (m, n) = (a.len(), b.len());
    let words = n.div_ceil(64);
    let mut bits = vec![0u64; m * words];
    let mut w = vec![0u64; words];

    within_row(a.points()[0], b.points(), delta_sq, &mut w);
    let (head, mut rest) = bits.split_at_mut(words);
    first_row(&w, head);
    let mut prev: &[u64] = head;
    for i in 1..m {
        within_row(a.points()[i], b.points(), delta_sq, &mut w);
        let (cur, tail) = rest.split_at_mut(words);
        advance_row(prev, &w, model, cur);
        prev = cur;
        rest = tail;
    }
    ReachMatrix { m, n, words_per_row: words, bits }
}

/// Decides `delta_dF(a, b) <= delta` by the quadratic DP with two rolling
/// rows (rolled over the shorter sequence).
pub fn decide_naive(a: &PointSeq, b: &PointSeq, delta: f64, model: MoveModel) -> Result<bool> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NonFinite("delta"));
    }
    Ok(decide_naive_sq(a, b, delta * delta, model))
}

/// Same decision against a squared rope length. This is the canonical form:
/// the optimizers search over squared pairwise distances and must evaluate
/// the predicate at those exact values, with no square-root round trip.
pub fn decide_naive_sq(a: &PointSeq, b: &PointSeq, delta_sq: f64, model: MoveModel) -> bool {
    // reachability is symmetric in the two sequences; roll the shorter one
    let (rows, cols) = if b.len() <= a.len() { (a, b) } else { (b, a) };
    let n = cols.len();
    let words = n.div_ceil(64);

    let mut w = vec![0u64; words];
    let mut prev = vec![0u64; words];
    let mut cur = vec![0u64; words];

    within_row(rows.points()[0], cols.points(), delta_sq, &mut w);
    first_row(&w, &mut prev);
    for i in 1..rows.len() {
        // an empty row can never be revived
        if prev.iter().all(|&x| x == 0) {
            return false;
        }
        within_row(rows.points()[i], cols.points(), delta_sq, &mut w);
        advance_row(&prev, &w, model, &mut cur);
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[(n - 1) / 64] >> ((n - 1) % 64) & 1 == 1
}

/// The squared critical value: the smallest squared pairwise distance at
/// which the decision flips to true. Refuses instances with more than
/// [`ORACLE_PAIR_LIMIT`] pairs.
pub fn frechet_naive_sq(a: &PointSeq, b: &PointSeq, model: MoveModel) -> Result<f64> {
    let mn = a.len() as u64 * b.len() as u64;
    if mn > ORACLE_PAIR_LIMIT {
        return Err(Error::OracleTooLarge { mn });
    }
    let mut dists: Vec<f64> = Vec::with_capacity(mn as usize);
    for &p in a.points() {
        for &q in b.points() {
            dists.push(dist_sq(p, q));
        }
    }
    dists.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    dists.dedup();
    // monotone predicate: false ... false true ... true; the largest
    // pairwise distance always decides true (every placement is within it)
    let idx = dists.partition_point(|&d| !decide_naive_sq(a, b, d, model));
    debug_assert!(idx < dists.len());
    Ok(dists[idx])
}

/// Exact discrete Fréchet distance; one square root at the very end.
pub fn frechet_naive(a: &PointSeq, b: &PointSeq, model: MoveModel) -> Result<f64> {
    Ok(frechet_naive_sq(a, b, model)?.sqrt())
}
