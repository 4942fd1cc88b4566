//! Seeded dataset generators. The same seed always produces byte-identical
//! files.

use frechet::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Heading drift per step of the smooth walk, radians.
const TURN_RATE: f64 = 0.35;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// Unit-step walk with a smoothly drifting heading (trajectory-like).
    Walk,
    /// Uniform points in a square box.
    Uniform,
}

pub fn generate(kind: Kind, len: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Kind::Walk => {
            let mut pts = Vec::with_capacity(len);
            let (mut x, mut y) = (0.0f64, 0.0f64);
            let mut heading = rng.gen_range(0.0..std::f64::consts::TAU);
            pts.push(Point2::new(x, y));
            for _ in 1..len {
                heading += rng.gen_range(-TURN_RATE..TURN_RATE);
                x += heading.cos();
                y += heading.sin();
                pts.push(Point2::new(x, y));
            }
            pts
        }
        Kind::Uniform => (0..len)
            .map(|_| Point2::new(rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_determinism() {
        for kind in [Kind::Walk, Kind::Uniform] {
            let a = generate(kind, 100, 7);
            let b = generate(kind, 100, 7);
            let c = generate(kind, 100, 8);
            assert_eq!(a.len(), 100);
            for (p, q) in a.iter().zip(&b) {
                assert_eq!(p.x.to_bits(), q.x.to_bits());
                assert_eq!(p.y.to_bits(), q.y.to_bits());
            }
            assert!(a.iter().zip(&c).any(|(p, q)| p.x != q.x || p.y != q.y));
        }
    }
}
