//! Shared domain types and the one distance predicate everything agrees on.
//!
//! Every distance comparison in the crate goes through [`within`] (or its
//! squared form [`within_sq`]), so the quadratic oracle and the fast path
//! answer bit-for-bit identically on every input, including points that land
//! exactly on a disk boundary.

use crate::error::Error;
use crate::Result;

/// A point in the plane. Coordinates are dimensionless; the query radius
/// `delta` carries the scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2 { x, y }
    }
}

/// Squared Euclidean distance between two points.
#[inline]
pub fn dist_sq(p: Point2, q: Point2) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

/// Closed-disk membership: true iff `||p - q|| <= delta`.
///
/// Compares squared values; `delta` is squared once here and nowhere else,
/// so callers that already hold a squared radius use [`within_sq`].
#[inline]
pub fn within(p: Point2, q: Point2, delta: f64) -> bool {
    debug_assert!(p.is_finite() && q.is_finite() && delta.is_finite());
    within_sq(p, q, delta * delta)
}

/// Closed-disk membership against a squared radius.
#[inline]
pub fn within_sq(p: Point2, q: Point2, delta_sq: f64) -> bool {
    dist_sq(p, q) <= delta_sq
}

/// Which of the two input sequences a [`PointSeq`] plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqRole {
    A,
    B,
}

/// An ordered, immutable sequence of stepping stones.
#[derive(Debug, Clone)]
pub struct PointSeq {
    points: Vec<Point2>,
    role: SeqRole,
}

impl PointSeq {
    /// Builds a sequence, rejecting empty input and non-finite coordinates.
    pub fn new(points: Vec<Point2>, role: SeqRole) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySequence(match role {
                SeqRole::A => "A",
                SeqRole::B => "B",
            }));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("point coordinate"));
        }
        Ok(PointSeq { points, role })
    }

    pub fn role(&self) -> SeqRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// 1-based access, matching the indexing used in all external formats.
    pub fn at(&self, i: usize) -> Point2 {
        self.points[i - 1]
    }
}

/// How the frogs are allowed to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveModel {
    /// Exactly one frog hops per move.
    Orthogonal,
    /// Additionally both frogs may hop simultaneously.
    WithDiagonal,
}

/// A joint walk through both sequences, as a list of 1-based index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Traversal {
    pairs: Vec<(usize, usize)>,
}

impl Traversal {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Traversal { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Checks that `path` is a legal traversal of `(a, b)` at rope length `delta`.
///
/// Legal means: starts at (1,1), ends at (m,n), each step advances exactly
/// one index by 1 (or, under [`MoveModel::WithDiagonal`], both), and every
/// visited pair is within `delta`. Indices outside the sequences are an
/// error rather than a plain `false`.
pub fn check_traversal(
    path: &Traversal,
    a: &PointSeq,
    b: &PointSeq,
    delta: f64,
    model: MoveModel,
) -> Result<bool> {
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta"));
    }
    let (m, n) = (a.len(), b.len());
    for &(i, j) in path.pairs() {
        if i == 0 || j == 0 || i > m || j > n {
            return Err(Error::InvalidPath { i, j, m, n });
        }
    }
    let pairs = path.pairs();
    if pairs.first() != Some(&(1, 1)) || pairs.last() != Some(&(m, n)) {
        return Ok(false);
    }
    let delta_sq = delta * delta;
    for window in pairs.windows(2) {
        let (i0, j0) = window[0];
        let (i1, j1) = window[1];
        let legal = match model {
            MoveModel::Orthogonal => {
                (i1 == i0 + 1 && j1 == j0) || (i1 == i0 && j1 == j0 + 1)
            }
            MoveModel::WithDiagonal => {
                (i1 == i0 + 1 && j1 == j0)
                    || (i1 == i0 && j1 == j0 + 1)
                    || (i1 == i0 + 1 && j1 == j0 + 1)
            }
        };
        if !legal {
            return Ok(false);
        }
    }
    Ok(pairs
        .iter()
        .all(|&(i, j)| within_sq(a.at(i), b.at(j), delta_sq)))
}
