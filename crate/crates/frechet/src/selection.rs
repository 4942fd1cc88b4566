//! Distance selection and the optimization driver.
//!
//! The exact Fréchet distance is always one of the m*n pairwise distances,
//! so the optimizer binary-searches their ranks, evaluating the decision
//! procedure at the k-th smallest squared distance. Rank queries are served
//! by bichromatic counting (group the A-points, build each group's disk
//! locator at the query radius, sum the depths of the B-points) plus an
//! enumeration endgame once the candidate interval is thin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::arrangement::{build_locator, locate_depth, DiskSet};
use crate::error::Error;
use crate::geometry::{dist_sq, MoveModel, PointSeq};
use crate::params::TuningParams;
use crate::pipeline::decide_sq;
use crate::Result;

/// Largest number of in-interval pairs the enumeration endgame accepts.
pub const ENUMERATION_THRESHOLD: usize = 4096;

/// Disks per counting group (at most sqrt(n), capped at one mask word).
fn group_size(n: usize) -> usize {
    (n as f64).sqrt().ceil().clamp(1.0, 64.0) as usize
}


/// Number of pairs (a, b) with `||a - b|| <= delta`.
pub fn count_pairs_within(a: &PointSeq, b: &PointSeq, delta: f64) -> Result<u64> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NonFinite("delta"));
    }
    count_pairs_within_sq(a, b, delta * delta)
}

/// [`count_pairs_within`] against a squared radius.
pub fn count_pairs_within_sq(a: &PointSeq, b: &PointSeq, delta_sq: f64) -> Result<u64> {
    if delta_sq < 0.0 {
        return Ok(0);
    }
    if delta_sq == 0.0 {
        // only exact coordinate matches; bucket by bit pattern
        let norm = |v: f64| (v + 0.0).to_bits();
        let mut buckets: FxHashMap<(u64, u64), u64> = FxHashMap::default();
        for p in a.points() {
            *buckets.entry((norm(p.x), norm(p.y))).or_insert(0) += 1;
        }
        return Ok(b
            .points()
            .iter()
            .filter_map(|q| buckets.get(&(norm(q.x), norm(q.y))))
            .sum());
    }
    let mut total = 0u64;
    for group in a.points().chunks(group_size(b.len())) {
        let disks = DiskSet::new_sq(group.to_vec(), delta_sq)?;
        let loc = build_locator(&disks);
        for &q in b.points() {
            total += locate_depth(&loc, q) as u64;
        }
    }
    Ok(total)
}

/// Exact multiset of squared pairwise distances in `(lo_sq, hi_sq]`, via a
/// uniform grid of cell width sqrt(hi) over A and neighborhood scans per b.
pub fn enumerate_pairs_in(a: &PointSeq, b: &PointSeq, lo_sq: f64, hi_sq: f64) -> Result<Vec<f64>> {
    if !lo_sq.is_finite() || !hi_sq.is_finite() || lo_sq >= hi_sq {
        return Err(Error::BadParams("enumerate_pairs_in needs lo < hi, both finite".into()));
    }
    let width = hi_sq.sqrt().max(f64::MIN_POSITIVE);
    let cell = |v: f64| (v / width).floor() as i64;
    let mut grid: FxHashMap<(i64, i64), Vec<u32>> = FxHashMap::default();
    for (i, p) in a.points().iter().enumerate() {
        grid.entry((cell(p.x), cell(p.y))).or_default().push(i as u32);
    }
    let mut out = Vec::new();
    for q in b.points() {
        let (cx, cy) = (cell(q.x), cell(q.y));
        for nx in cx - 1..=cx + 1 {
            for ny in cy - 1..=cy + 1 {
                let Some(ids) = grid.get(&(nx, ny)) else { continue };
                for &i in ids {
                    let d = dist_sq(a.points()[i as usize], *q);
                    if lo_sq < d && d <= hi_sq {
                        if out.len() == ENUMERATION_THRESHOLD {
                            return Err(Error::IntervalTooDense {
                                count: out.len() + 1,
                                limit: ENUMERATION_THRESHOLD,
                            });
                        }
                        out.push(d);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Candidate interval of a rank search: the sought distance lies in
/// `(lo, hi]` (squared values).
#[derive(Debug, Clone, Copy)]
pub struct RankInterval {
    pub lo: f64,
    pub hi: f64,
    pub count_le_lo: u64,
    pub count_le_hi: u64,
}

/// The k-th smallest squared pairwise distance (1-based), by randomized
/// pivoting over the pairs with an enumeration endgame.
pub fn kth_distance(a: &PointSeq, b: &PointSeq, k: u64) -> Result<f64> {
    let (m, n) = (a.len() as u64, b.len() as u64);
    let mn = m * n;
    if k < 1 || k > mn {
        return Err(Error::BadParams(format!("rank {k} outside 1..={mn}")));
    }
    // a squared bounding-box diameter dominates every pairwise distance
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in a.points().iter().chain(b.points()) {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let dx = max_x - min_x;
    let dy = max_y - min_y;
    let mut iv = RankInterval {
        lo: -1.0,
        hi: dx * dx + dy * dy,
        count_le_lo: 0,
        count_le_hi: mn,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1ec7 ^ k ^ (mn << 20));

    while iv.count_le_hi - iv.count_le_lo > ENUMERATION_THRESHOLD as u64 {
        // prefer a pivot that is an actual pairwise distance; when the mass
        // is clustered and no draw lands inside, bisect the value range
        let mut pivot = None;
        for _ in 0..8 {
            let p = a.points()[rng.gen_range(0..m) as usize];
            let q = b.points()[rng.gen_range(0..n) as usize];
            let d = dist_sq(p, q);
            if iv.lo < d && d < iv.hi {
                pivot = Some(d);
                break;
            }
        }
        let pivot = match pivot {
            Some(d) => d,
            None => {
                let mid = iv.lo + (iv.hi - iv.lo) / 2.0;
                if mid <= iv.lo || mid >= iv.hi {
                    // no representable value strictly inside: the remaining
                    // mass sits exactly at hi
                    return Ok(iv.hi);
                }
                mid
            }
        };
        let count = count_pairs_within_sq(a, b, pivot)?;
        if count >= k {
            iv.hi = pivot;
            iv.count_le_hi = count;
        } else {
            iv.lo = pivot;
            iv.count_le_lo = count;
        }
    }

    let mut inside = enumerate_pairs_in(a, b, iv.lo, iv.hi)?;
    debug_assert_eq!(inside.len() as u64, iv.count_le_hi - iv.count_le_lo);
    inside.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(inside[(k - iv.count_le_lo - 1) as usize])
}

/// Counters from one [`optimize`] run.
#[derive(Debug, Clone, Copy)]
pub struct OptimizeStats {
    /// Calls into the layered decision procedure.
    pub decide_calls: u32,
    /// Rank of the returned distance among all pairs.
    pub rank: u64,
    /// The squared critical value the search converged to.
    pub value_sq: f64,
}

/// Computes the discrete Fréchet distance: binary search on the rank of the
/// answer among all pairwise distances, deciding at each probe.
pub fn optimize(
    a: &PointSeq,
    b: &PointSeq,
    params: &TuningParams,
    model: MoveModel,
) -> Result<f64> {
    Ok(optimize_with_stats(a, b, params, model)?.0)
}

/// [`optimize`], also returning search counters.
pub fn optimize_with_stats(
    a: &PointSeq,
    b: &PointSeq,
    params: &TuningParams,
    model: MoveModel,
) -> Result<(f64, OptimizeStats)> {
    params.validate()?;
    let mn = a.len() as u64 * b.len() as u64;
    let mut lo = 1u64;
    let mut hi = mn;
    let mut decide_calls = 0u32;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let v = kth_distance(a, b, mid)?;
        decide_calls += 1;
        if decide_sq(a, b, v, params, model)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    // the largest pairwise distance always decides true, so rank `lo` is
    // the minimal true rank
    let value_sq = kth_distance(a, b, lo)?;
    let budget = 2 * (mn.max(2) as f64).log2().ceil() as u32 + 10;
    debug_assert!(decide_calls <= budget, "{decide_calls} decide calls > budget {budget}");
    let stats = OptimizeStats { decide_calls, rank: lo, value_sq };
    Ok((value_sq.sqrt(), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::{frechet_naive, tests::{seq_a, seq_b}};
    use rand::Rng;

    fn brute_count(a: &PointSeq, b: &PointSeq, delta_sq: f64) -> u64 {
        let mut c = 0;
        for &p in a.points() {
            for &q in b.points() {
                if dist_sq(p, q) <= delta_sq {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn counting_worked_example() {
        let a = seq_a(&[(0.0, 0.0), (2.0, 0.0)]);
        let b = seq_b(&[(0.0, 1.0), (2.0, 1.0)]);
        assert_eq!(count_pairs_within(&a, &b, 1.0).unwrap(), 2);
        assert_eq!(count_pairs_within(&a, &b, 0.0).unwrap(), 0);
        assert_eq!(count_pairs_within(&a, &b, 10.0).unwrap(), 4);
    }

    #[test]
    fn counting_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for _ in 0..60 {
            let m = rng.gen_range(1..=120);
            let n = rng.gen_range(1..=120);
            let a = seq_a(&(0..m).map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0))).collect::<Vec<_>>());
            let b = seq_b(&(0..n).map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0))).collect::<Vec<_>>());
            let d: f64 = rng.gen_range(0.0..4.0);
            assert_eq!(
                count_pairs_within_sq(&a, &b, d * d).unwrap(),
                brute_count(&a, &b, d * d)
            );
        }
        // duplicated points at radius zero
        let a = seq_a(&[(1.0, 1.0), (1.0, 1.0), (2.0, 2.0)]);
        let b = seq_b(&[(1.0, 1.0), (3.0, 3.0)]);
        assert_eq!(count_pairs_within_sq(&a, &b, 0.0).unwrap(), 2);
    }

    #[test]
    fn enumeration_worked_examples() {
        let a = seq_a(&[(0.0, 0.0), (2.0, 0.0)]);
        let b = seq_b(&[(0.0, 1.0), (2.0, 1.0)]);
        let mut got = enumerate_pairs_in(&a, &b, 1.0, 5.0).unwrap();
        got.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(got, vec![5.0, 5.0]);
        assert!(enumerate_pairs_in(&a, &b, 25.0, 100.0).unwrap().is_empty());
        let mut low = enumerate_pairs_in(&a, &b, 0.0, 1.0).unwrap();
        low.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(low, vec![1.0, 1.0]);
    }

    #[test]
    fn enumeration_rejects_dense_intervals() {
        let pts: Vec<(f64, f64)> = (0..80).map(|i| (i as f64 * 1e-6, 0.0)).collect();
        let a = seq_a(&pts);
        let b = seq_b(&pts);
        assert!(matches!(
            enumerate_pairs_in(&a, &b, -1.0, 10.0),
            Err(Error::IntervalTooDense { .. })
        ));
    }

    #[test]
    fn kth_worked_examples() {
        let a = seq_a(&[(0.0, 0.0), (2.0, 0.0)]);
        let b = seq_b(&[(0.0, 1.0), (2.0, 1.0)]);
        // squared distances sorted: 1, 1, 5, 5
        assert_eq!(kth_distance(&a, &b, 1).unwrap(), 1.0);
        assert_eq!(kth_distance(&a, &b, 2).unwrap(), 1.0);
        assert_eq!(kth_distance(&a, &b, 3).unwrap(), 5.0);
        assert_eq!(kth_distance(&a, &b, 4).unwrap(), 5.0);
    }

    #[test]
    fn kth_matches_sorting() {
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        for _ in 0..40 {
            let m = rng.gen_range(1..=30);
            let n = rng.gen_range(1..=30);
            let a = seq_a(&(0..m).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let b = seq_b(&(0..n).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let mut all: Vec<f64> = a
                .points()
                .iter()
                .flat_map(|&p| b.points().iter().map(move |&q| dist_sq(p, q)))
                .collect();
            all.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
            let mut prev = f64::NEG_INFINITY;
            for k in 1..=all.len() as u64 {
                let v = kth_distance(&a, &b, k).unwrap();
                assert_eq!(v, all[(k - 1) as usize], "k={k}");
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn kth_survives_heavy_duplication() {
        // every pairwise distance is 0 or 4: huge ties
        let a = seq_a(&vec![(0.0, 0.0); 90]);
        let b = seq_b(&{
            let mut v = vec![(0.0, 0.0); 90];
            v.extend(vec![(2.0, 0.0); 30]);
            v
        });
        let mn = 90 * 120;
        assert_eq!(kth_distance(&a, &b, 1).unwrap(), 0.0);
        assert_eq!(kth_distance(&a, &b, 90 * 90).unwrap(), 0.0);
        assert_eq!(kth_distance(&a, &b, 90 * 90 + 1).unwrap(), 4.0);
        assert_eq!(kth_distance(&a, &b, mn).unwrap(), 4.0);
    }

    #[test]
    fn optimize_worked_examples() {
        let a = seq_a(&[(0.0, 0.0), (2.0, 0.0)]);
        let b = seq_b(&[(0.0, 1.0), (2.0, 1.0)]);
        let params = TuningParams::default();
        assert_eq!(optimize(&a, &b, &params, MoveModel::Orthogonal).unwrap(), 5f64.sqrt());
        assert_eq!(optimize(&a, &b, &params, MoveModel::WithDiagonal).unwrap(), 1.0);
        // single pair
        let one = optimize(&seq_a(&[(0.0, 0.0)]), &seq_b(&[(3.0, 4.0)]), &params, MoveModel::Orthogonal)
            .unwrap();
        assert_eq!(one, 5.0);
    }

    #[test]
    fn optimize_matches_oracle_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        let params = TuningParams { block_size: 4, blocks_per_layer: 2, chunk_len: 3, ..TuningParams::default() };
        for _ in 0..60 {
            let m = rng.gen_range(1..=25);
            let n = rng.gen_range(1..=25);
            let a = seq_a(&(0..m).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let b = seq_b(&(0..n).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            for model in [MoveModel::Orthogonal, MoveModel::WithDiagonal] {
                let fast = optimize(&a, &b, &params, model).unwrap();
                let slow = frechet_naive(&a, &b, model).unwrap();
                assert_eq!(fast.to_bits(), slow.to_bits(), "m={m} n={n} model={model:?}");
            }
        }
    }

    #[test]
    fn optimize_result_is_the_tight_critical_pair() {
        use crate::pipeline::decide_sq;
        let mut rng = ChaCha8Rng::seed_from_u64(139);
        let params = TuningParams::default();
        for _ in 0..30 {
            let m = rng.gen_range(1..=15);
            let n = rng.gen_range(1..=15);
            let a = seq_a(&(0..m).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let b = seq_b(&(0..n).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            for model in [MoveModel::Orthogonal, MoveModel::WithDiagonal] {
                let (v, stats) = optimize_with_stats(&a, &b, &params, model).unwrap();
                // the result is one of the pairwise distances
                assert!(a
                    .points()
                    .iter()
                    .any(|&p| b.points().iter().any(|&q| dist_sq(p, q) == stats.value_sq)));
                assert_eq!(v.to_bits(), stats.value_sq.sqrt().to_bits());
                // it decides true, and every smaller pairwise distance false
                assert!(decide_sq(&a, &b, stats.value_sq, &params, model).unwrap());
                for &p in a.points() {
                    for &q in b.points() {
                        let d = dist_sq(p, q);
                        if d < stats.value_sq {
                            assert!(!decide_sq(&a, &b, d, &params, model).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn optimize_call_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(137);
        let params = TuningParams::default();
        for _ in 0..10 {
            let m = rng.gen_range(1..=40);
            let n = rng.gen_range(1..=40);
            let a = seq_a(&(0..m).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let b = seq_b(&(0..n).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect::<Vec<_>>());
            let (_, stats) =
                optimize_with_stats(&a, &b, &params, MoveModel::Orthogonal).unwrap();
            let budget = 2 * ((m * n) as f64).log2().ceil() as u32 + 10;
            assert!(stats.decide_calls <= budget);
        }
    }
}
