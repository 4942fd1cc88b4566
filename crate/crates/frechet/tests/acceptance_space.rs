//! Space-scaling acceptance check, alone in its own binary so the counting
//! allocator sees only the decision procedure's allocations.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

use frechet::geometry::{MoveModel, Point2, PointSeq, SeqRole};
use frechet::pipeline::decide;
use frechet::TuningParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct CountingAllocator;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

fn on_alloc(size: usize) {
    let cur = CURRENT.fetch_add(size, Ordering::Relaxed) + size;
    PEAK.fetch_max(cur, Ordering::Relaxed);
}

unsafe impl GlobalAlloc for CountingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            on_alloc(layout.size());
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            on_alloc(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
            on_alloc(new_size);
        }
        p
    }
}

#[global_allocator]
static ALLOCATOR: CountingAllocator = CountingAllocator;

fn smooth_walk(len: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(len);
    let (mut x, mut y) = (0.0f64, 0.0);
    let mut heading = rng.gen_range(0.0..std::f64::consts::TAU);
    pts.push(Point2::new(x, y));
    for _ in 1..len {
        heading += rng.gen_range(-0.35..0.35);
        x += heading.cos();
        y += heading.sin();
        pts.push(Point2::new(x, y));
    }
    pts
}

fn jittered(base: &[Point2], seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    base.iter()
        .map(|p| {
            let ang = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.0..0.3);
            Point2::new(p.x + r * ang.cos(), p.y + r * ang.sin())
        })
        .collect()
}

/// Peak auxiliary allocation of one decide call, inputs excluded. A is a
/// prefix of the walk B jitters, so the flag streams stay live through
/// every layer and the whole pipeline runs.
fn peak_aux_of_decide(m: usize, n: usize) -> usize {
    let base = smooth_walk(n, 11);
    let a = PointSeq::new(base[..m].to_vec(), SeqRole::A).unwrap();
    let b = PointSeq::new(jittered(&base, 13), SeqRole::B).unwrap();
    let params = TuningParams::default();

    let baseline = CURRENT.load(Ordering::Relaxed);
    PEAK.store(baseline, Ordering::Relaxed);
    let result = decide(&a, &b, 1.8, &params, MoveModel::Orthogonal).unwrap();
    let peak = PEAK.load(Ordering::Relaxed);
    // keep the inputs alive through the measurement
    assert!(result || a.len() + b.len() > 0);
    peak - baseline
}

#[test]
fn criterion_08_linear_space_scaling() {
    let m = 1 << 12;
    let aux_small = peak_aux_of_decide(m, 1 << 15);
    let aux_large = peak_aux_of_decide(m, 1 << 16);
    let ratio = aux_large as f64 / aux_small as f64;
    assert!(
        ratio <= 2.5,
        "peak auxiliary memory grew {ratio:.2}x when n doubled ({aux_small} -> {aux_large} bytes)"
    );
    println!(
        "criterion 8 PASS: decide peak auxiliary {aux_small} bytes at n=2^15, {aux_large} at n=2^16 (x{ratio:.2})"
    );
}
