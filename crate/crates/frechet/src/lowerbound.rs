//! Adversarial generator: a disk configuration on which the block automaton
//! really does reach 2^m distinct states.
//!
//! With 2m unit disks — m "red" disks clustered around the origin and m
//! "blue" disks about two units to the right, interleaved so that blue
//! disk 2k-1 overlaps red disk 2k in a thin lens but misses red disk 2k+2 —
//! every subset S of the red disks is realized as the valid set of some
//! B-sequence: walking straight through lens k keeps red 2k reachable,
//! taking a vertical detour above the lens expels it for good. This is why
//! block sizes must stay small: the automaton's state count is genuinely
//! exponential in the block size in the worst case.

use crate::automaton::{moore_output, start_state, transition_basic, BlockSpec, StepInput};
use crate::error::Error;
use crate::geometry::{within, MoveModel, Point2, PointSeq, SeqRole};
use crate::naive::reach_matrix;
use crate::Result;

/// One generated configuration. Disks are unit disks; A-point 2k-1 is the
/// k-th blue center, A-point 2k the k-th red center.
#[derive(Debug, Clone)]
pub struct LbInstance {
    m: usize,
    epsilon: f64,
    a_centers: Vec<Point2>,
    /// Lens midpoints b_1..b_m.
    b_main: Vec<Point2>,
    /// Above-lens detour points b'_1..b'_m.
    b_detour: Vec<Point2>,
    /// The deep red-intersection endpoint b_{m+1}.
    b_final: Point2,
}

impl LbInstance {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn radius(&self) -> f64 {
        1.0
    }

    /// The A-sequence a_1..a_2m (blue, red, blue, red, ...).
    pub fn a_centers(&self) -> &[Point2] {
        &self.a_centers
    }

    pub fn b_main(&self) -> &[Point2] {
        &self.b_main
    }

    pub fn b_detour(&self) -> &[Point2] {
        &self.b_detour
    }

    pub fn b_final(&self) -> Point2 {
        self.b_final
    }

    pub fn a_seq(&self) -> PointSeq {
        PointSeq::new(self.a_centers.clone(), SeqRole::A).expect("verified construction")
    }
}

/// Membership a point must have: red disks up to index `red_up_to`, blue
/// disks from `blue_from` on (1-based k), possibly with the pair at `skip`
/// removed.
fn expected_membership(m: usize, red_up_to: usize, blue_from: usize, skip: Option<usize>) -> Vec<bool> {
    let mut member = vec![false; 2 * m];
    for k in 1..=red_up_to {
        member[2 * k - 1] = true; // disk 2k, 0-based index 2k-1
    }
    for k in blue_from..=m {
        member[2 * k - 2] = true; // disk 2k-1
    }
    if let Some(k) = skip {
        member[2 * k - 1] = false;
        member[2 * k - 2] = false;
    }
    member
}

fn check_membership(
    inst: &LbInstance,
    p: Point2,
    want: &[bool],
    what: &str,
) -> Result<()> {
    for (idx, &c) in inst.a_centers.iter().enumerate() {
        let got = within(c, p, 1.0);
        if got != want[idx] {
            return Err(Error::Construction(format!(
                "{what}: disk {} should {}contain it (m={})",
                idx + 1,
                if want[idx] { "" } else { "not " },
                inst.m
            )));
        }
    }
    Ok(())
}

/// Builds the m-pair configuration with spacing 1/(4m) and verifies every
/// claimed membership with the shared predicate before returning it.
pub fn generate(m: usize) -> Result<LbInstance> {
    if !(1..=20).contains(&m) {
        return Err(Error::BadParams(format!("lower-bound size {m} outside 1..=20")));
    }
    let eps = 1.0 / (4 * m) as f64;
    let red: Vec<Point2> = (1..=m).map(|k| Point2::new(-((k - 1) as f64) * eps, 0.0)).collect();
    let blue: Vec<Point2> = red.iter().map(|r| Point2::new(r.x + 2.0 - eps / 2.0, 0.0)).collect();
    let mut a_centers = Vec::with_capacity(2 * m);
    for k in 0..m {
        a_centers.push(blue[k]);
        a_centers.push(red[k]);
    }

    let b_main: Vec<Point2> = red.iter().map(|r| Point2::new(r.x + 1.0 - eps / 4.0, 0.0)).collect();
    let mut b_detour = Vec::with_capacity(m);
    for (k, &bk) in b_main.iter().enumerate() {
        // the lens of blue 2k-1 and red 2k tops out at the same height on
        // this vertical line; climb halfway to the next disk boundary
        let half = 1.0 - eps / 4.0;
        let lens_top = (1.0 - half * half).max(0.0).sqrt();
        let mut min_exit = lens_top + 2.0;
        for (idx, &c) in a_centers.iter().enumerate() {
            if idx == 2 * k || idx == 2 * k + 1 {
                continue;
            }
            let dx = (bk.x - c.x).abs();
            if dx < 1.0 {
                let exit = (1.0 - dx * dx).sqrt();
                if within(c, bk, 1.0) {
                    min_exit = min_exit.min(exit);
                }
            }
        }
        if min_exit <= lens_top {
            return Err(Error::Construction(format!(
                "detour {k} has no headroom: lens top {lens_top}, next exit {min_exit}"
            )));
        }
        b_detour.push(Point2::new(bk.x, (lens_top + min_exit) / 2.0));
    }
    let b_final = Point2::new(0.0, 0.0);

    let inst = LbInstance { m, epsilon: eps, a_centers, b_main, b_detour, b_final };

    // every qualitative claim of the construction, checked quantitatively
    for k in 1..=m {
        check_membership(&inst, inst.b_main[k - 1], &expected_membership(m, k, k, None), "b")?;
        check_membership(
            &inst,
            inst.b_detour[k - 1],
            &expected_membership(m, k, k, Some(k)),
            "b'",
        )?;
    }
    check_membership(&inst, inst.b_final, &expected_membership(m, m, m + 1, None), "b_final")?;
    for k in 1..m {
        let d_next = crate::geometry::dist_sq(inst.blue_center(k), inst.red_center(k + 1));
        if d_next <= 4.0 {
            return Err(Error::Construction(format!(
                "blue {k} must miss red {}",
                k + 1
            )));
        }
    }
    for k in 1..=m {
        let d_cap = crate::geometry::dist_sq(inst.blue_center(k), inst.red_center(k));
        if d_cap >= 4.0 {
            return Err(Error::Construction(format!("blue {k} must overlap red {k}")));
        }
    }
    Ok(inst)
}

impl LbInstance {
    fn blue_center(&self, k: usize) -> Point2 {
        self.a_centers[2 * k - 2]
    }

    fn red_center(&self, k: usize) -> Point2 {
        self.a_centers[2 * k - 1]
    }
}

/// The B-sequence realizing subset `subset` (bit k-1 = red disk 2k kept):
/// straight through kept lenses, detouring above dropped ones.
pub fn sequence_for_subset(inst: &LbInstance, subset: u64) -> Result<PointSeq> {
    if inst.m < 64 && subset >> inst.m != 0 {
        return Err(Error::BadParams("subset has bits beyond the red disks".into()));
    }
    let mut pts = Vec::with_capacity(2 * inst.m + 1);
    for k in 0..inst.m {
        pts.push(inst.b_main[k]);
        if subset >> k & 1 == 0 {
            pts.push(inst.b_detour[k]);
        }
    }
    pts.push(inst.b_final);
    PointSeq::new(pts, SeqRole::B)
}

/// Outcome of enumerating all 2^m subsets.
#[derive(Debug, Clone)]
pub struct LbReport {
    pub m: usize,
    /// Distinct final aggregate states over all subsets (standard moves).
    pub distinct_states: usize,
    /// The target count 2^m.
    pub expected_states: usize,
    /// Distinct final states under the diagonal-move variant; recorded but
    /// not asserted (the construction is only claimed for standard moves).
    pub diagonal_distinct_states: usize,
    /// Human-readable mismatches; empty on success.
    pub failures: Vec<String>,
}

impl LbReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.distinct_states == self.expected_states
    }
}

/// The single-block view of an instance: one face label per distinct
/// B-point (label 2k = b_{k+1}, 2k+1 = b'_{k+1}, last = b_final), with the
/// disk membership of each computed by the shared predicate.
pub fn block_spec_of(inst: &LbInstance) -> Result<(BlockSpec, u32)> {
    let m = inst.m;
    let point_mask = |p| {
        let mut mask = 0u64;
        for (idx, &c) in inst.a_centers.iter().enumerate() {
            if within(c, p, 1.0) {
                mask |= 1 << idx;
            }
        }
        mask
    };
    let mut masks = Vec::with_capacity(2 * m + 1);
    for k in 0..m {
        masks.push(point_mask(inst.b_main[k]));
        masks.push(point_mask(inst.b_detour[k]));
    }
    masks.push(point_mask(inst.b_final));
    let final_label = (masks.len() - 1) as u32;
    Ok((BlockSpec::new(masks, 2 * m as u32)?, final_label))
}

/// For every subset S of red disks, runs the single-block automaton on the
/// subset's B-sequence and checks the final valid set equals S exactly,
/// cross-checking reachability against the quadratic DP.
pub fn verify_exponential(inst: &LbInstance) -> Result<LbReport> {
    let m = inst.m;
    if m > 12 {
        return Err(Error::BadParams(format!("verification enumerates 2^m subsets; m={m} > 12")));
    }
    let s = 2 * m;
    let (spec, final_label) = block_spec_of(inst)?;
    let label_of_main = |k: usize| (2 * k) as u32;
    let label_of_detour = |k: usize| (2 * k + 1) as u32;

    let a_seq = inst.a_seq();
    let mut failures = Vec::new();
    let mut finals = std::collections::HashSet::new();
    let mut finals_diag = std::collections::HashSet::new();

    for subset in 0u64..1 << m {
        // label stream of B_S
        let mut labels = Vec::with_capacity(2 * m + 1);
        for k in 0..m {
            labels.push(label_of_main(k));
            if subset >> k & 1 == 0 {
                labels.push(label_of_detour(k));
            }
        }
        labels.push(final_label);

        for model in [MoveModel::Orthogonal, MoveModel::WithDiagonal] {
            let mut state = start_state(&spec, labels[0], true)?;
            let mut outputs = vec![moore_output(&spec, &state)];
            for &g in &labels[1..] {
                state = transition_basic(&spec, &state, StepInput { face: g, flag: false }, model)?;
                outputs.push(moore_output(&spec, &state));
            }
            if model == MoveModel::WithDiagonal {
                finals_diag.insert(state);
                continue;
            }
            finals.insert(state);

            // the valid set at the end must be exactly the chosen reds
            let want: u64 = (0..m).filter(|k| subset >> k & 1 == 1).map(|k| 1u64 << (2 * k + 1)).sum();
            if state.valid != want {
                failures.push(format!(
                    "subset {subset:#b}: final valid set {:#b}, want {want:#b}",
                    state.valid
                ));
            }

            // and the quadratic DP agrees about which endpoints are reachable
            let b_seq = sequence_for_subset(inst, subset)?;
            let matrix = reach_matrix(&a_seq, &b_seq, 1.0, model)?;
            let last = b_seq.len();
            for j in 1..=s {
                let reached = matrix.reach(j, last);
                let kept = j % 2 == 0 && subset >> (j / 2 - 1) & 1 == 1;
                if reached != kept {
                    failures.push(format!(
                        "subset {subset:#b}: DP says endpoint {j} reachable={reached}, construction wants {kept}"
                    ));
                }
            }
            // the Moore output at the end mirrors reachability of a_2m
            let want_last = subset >> (m - 1) & 1 == 1;
            if *outputs.last().unwrap() != want_last {
                failures.push(format!("subset {subset:#b}: final output flag mismatch"));
            }
        }
    }

    Ok(LbReport {
        m,
        distinct_states: finals.len(),
        expected_states: 1 << m,
        diagonal_distinct_states: finals_diag.len(),
        failures,
    })
}
