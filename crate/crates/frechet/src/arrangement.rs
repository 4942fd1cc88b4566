//! Disk-arrangement faces and point location for one layer.
//!
//! A layer's disks (equal radius, centered at consecutive A-points) cut the
//! plane into faces. Two faces are interchangeable for the automata whenever
//! the same set of disks contains them, so faces are identified with their
//! disk-membership bitmask and given dense integer labels. Point location is
//! a vertical slab decomposition: x-breakpoints at circle extrema and at
//! pairwise circle intersections, with the vertically sorted arcs per slab
//! and one membership mask per gap.
//!
//! Queries that land within tolerance of an arc fall back to the direct
//! per-disk predicate, so `locate` agrees with `within` on every input.

use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;

use crate::error::Error;
use crate::geometry::{dist_sq, within_sq, Point2, PointSeq};
use crate::Result;

/// Dense face label, 0..L-1 within one [`FaceTable`]. Label 0 is always the
/// unbounded (empty-membership) face.
pub type FaceId = u32;

/// Distance considered "on an arc"; such queries take the fallback path.
pub const ARC_TOLERANCE: f64 = 1e-12;

/// Disk-membership bitmask over a layer's disks (bit k = disk k contains the
/// region). Inline for up to 64 disks, boxed words beyond.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiskMask {
    One(u64),
    Many(Box<[u64]>),
}

impl DiskMask {
    pub fn empty(disk_count: usize) -> Self {
        if disk_count <= 64 {
            DiskMask::One(0)
        } else {
            DiskMask::Many(vec![0; disk_count.div_ceil(64)].into_boxed_slice())
        }
    }

    pub fn set(&mut self, k: usize) {
        match self {
            DiskMask::One(w) => *w |= 1u64 << k,
            DiskMask::Many(ws) => ws[k / 64] |= 1u64 << (k % 64),
        }
    }

    pub fn clear(&mut self, k: usize) {
        match self {
            DiskMask::One(w) => *w &= !(1u64 << k),
            DiskMask::Many(ws) => ws[k / 64] &= !(1u64 << (k % 64)),
        }
    }

    pub fn test(&self, k: usize) -> bool {
        match self {
            DiskMask::One(w) => w >> k & 1 == 1,
            DiskMask::Many(ws) => ws[k / 64] >> (k % 64) & 1 == 1,
        }
    }

    pub fn count_ones(&self) -> u32 {
        match self {
            DiskMask::One(w) => w.count_ones(),
            DiskMask::Many(ws) => ws.iter().map(|w| w.count_ones()).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            DiskMask::One(w) => *w == 0,
            DiskMask::Many(ws) => ws.iter().all(|&w| w == 0),
        }
    }

    /// Bits `[lo, lo + width)` as one word, bit 0 = disk `lo`.
    pub fn extract(&self, lo: usize, width: usize) -> u64 {
        assert!((1..=64).contains(&width));
        let mut out = match self {
            DiskMask::One(w) => {
                debug_assert!(lo < 64);
                w >> lo
            }
            DiskMask::Many(ws) => {
                let word = lo / 64;
                let shift = lo % 64;
                let mut v = ws[word] >> shift;
                if shift != 0 && word + 1 < ws.len() {
                    v |= ws[word + 1] << (64 - shift);
                }
                v
            }
        };
        if width < 64 {
            out &= (1u64 << width) - 1;
        }
        out
    }
}

/// A layer's disks: equal radius, centers in A-subsequence order.
///
/// The squared radius is the authoritative value — membership is always
/// decided by the shared squared-distance predicate — while the plain radius
/// only steers the slab geometry.
#[derive(Debug, Clone)]
pub struct DiskSet {
    centers: Vec<Point2>,
    radius: f64,
    radius_sq: f64,
}

impl DiskSet {
    pub fn new(centers: Vec<Point2>, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::NonFinite("disk radius"));
        }
        Self::with_radius_sq(centers, radius, radius * radius)
    }

    /// Constructor for callers that hold an exact squared radius (the
    /// optimizers search over squared pairwise distances).
    pub fn new_sq(centers: Vec<Point2>, radius_sq: f64) -> Result<Self> {
        if !radius_sq.is_finite() || radius_sq < 0.0 {
            return Err(Error::NonFinite("disk radius"));
        }
        Self::with_radius_sq(centers, radius_sq.sqrt(), radius_sq)
    }

    fn with_radius_sq(centers: Vec<Point2>, radius: f64, radius_sq: f64) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::EmptySequence("disk centers"));
        }
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("disk center"));
        }
        Ok(DiskSet { centers, radius, radius_sq })
    }

    pub fn from_points(points: &[Point2], radius: f64) -> Result<Self> {
        DiskSet::new(points.to_vec(), radius)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn radius_sq(&self) -> f64 {
        self.radius_sq
    }

    /// Membership of `p` by the shared predicate, one bit per disk.
    pub fn membership(&self, p: Point2) -> DiskMask {
        let mut mask = DiskMask::empty(self.len());
        for (k, &c) in self.centers.iter().enumerate() {
            if within_sq(c, p, self.radius_sq) {
                mask.set(k);
            }
        }
        mask
    }

    /// Number of disks containing `p`.
    pub fn depth(&self, p: Point2) -> u32 {
        self.centers
            .iter()
            .filter(|&&c| within_sq(c, p, self.radius_sq))
            .count() as u32
    }
}

/// Bijection between the distinct membership bitmasks of a layer and dense
/// labels 0..L-1.
#[derive(Debug, Clone)]
pub struct FaceTable {
    label_of: FxHashMap<DiskMask, FaceId>,
    membership_of: Vec<DiskMask>,
}

impl FaceTable {
    fn with_empty_face(disk_count: usize) -> Self {
        let mut t = FaceTable { label_of: FxHashMap::default(), membership_of: Vec::new() };
        t.intern(DiskMask::empty(disk_count)); // unbounded face gets label 0
        t
    }

    pub(crate) fn intern(&mut self, mask: DiskMask) -> FaceId {
        if let Some(&id) = self.label_of.get(&mask) {
            return id;
        }
        let id = self.membership_of.len() as FaceId;
        self.membership_of.push(mask.clone());
        self.label_of.insert(mask, id);
        id
    }

    pub fn lookup(&self, mask: &DiskMask) -> Option<FaceId> {
        self.label_of.get(mask).copied()
    }

    /// Number of distinct labels L.
    pub fn len(&self) -> usize {
        self.membership_of.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the empty face is always present
    }

    pub fn membership(&self, face: FaceId) -> &DiskMask {
        &self.membership_of[face as usize]
    }

    /// Bits per label: ceil(log2 L), at least 1.
    pub fn beta(&self) -> u32 {
        let l = self.len();
        if l <= 2 {
            1
        } else {
            usize::BITS - (l - 1).leading_zeros()
        }
    }

    pub fn empty_face(&self) -> FaceId {
        0
    }
}

/// Restricts a layer face's membership to a block's disks, shifted to
/// block-local bit positions. This is the block super-face membership the
/// per-block automata read.
pub fn block_restrict(tab: &FaceTable, face: FaceId, block_lo: usize, block_len: usize) -> u64 {
    tab.membership(face).extract(block_lo, block_len)
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    disk: u32,
    upper: bool,
}

/// Vertical slab decomposition over a [`DiskSet`].
///
/// Slab `s` spans `breakpoints[s]..breakpoints[s+1]`; its arcs (sorted
/// bottom to top) live at `arcs[arc_offsets[s]..arc_offsets[s+1]]` and its
/// gap masks at `cells[arc_offsets[s] + s ..][..arcs + 1]` (`None` marks a
/// tolerance-thin gap whose queries go to the fallback path).
#[derive(Debug)]
pub struct SlabLocator {
    disks: DiskSet,
    breakpoints: Vec<f64>,
    arc_offsets: Vec<u32>,
    arcs: Vec<Arc>,
    cells: Vec<Option<DiskMask>>,
    y_lo: f64,
    y_hi: f64,
    degenerate_queries: AtomicU64,
}

pub(crate) enum Located {
    /// Outside every disk's reach: the unbounded face.
    Outside,
    /// Inside slab `.0`, gap `.1` (whose mask is present).
    Cell(u32, u32),
    /// Within tolerance of an arc (or inside a degenerate gap); resolve by
    /// the direct predicate.
    Degenerate,
}

impl SlabLocator {
    /// Queries that were resolved by the direct predicate instead of the
    /// slab structure.
    pub fn degenerate_query_count(&self) -> u64 {
        self.degenerate_queries.load(Ordering::Relaxed)
    }

    pub fn disks(&self) -> &DiskSet {
        &self.disks
    }

    fn arc_y(&self, arc: Arc, x: f64) -> f64 {
        let c = self.disks.centers[arc.disk as usize];
        let r = self.disks.radius;
        let dx = x - c.x;
        let t = (r * r - dx * dx).max(0.0);
        let h = t.sqrt();
        if arc.upper {
            c.y + h
        } else {
            c.y - h
        }
    }

    /// True when `p` is too close to disk `k`'s boundary (in the squared
    /// domain the predicate actually compares in) to classify reliably.
    fn near_boundary(&self, p: Point2, disk: u32) -> bool {
        let c = self.disks.centers[disk as usize];
        let d2 = dist_sq(p, c);
        let rr = self.disks.radius_sq;
        let tol = ARC_TOLERANCE * (2.0 * self.disks.radius + 1.0) + 1e-14 * (d2 + rr);
        (d2 - rr).abs() <= tol
    }

    fn slab_count(&self) -> usize {
        self.arc_offsets.len().saturating_sub(1)
    }

    fn slab_arcs(&self, s: usize) -> &[Arc] {
        &self.arcs[self.arc_offsets[s] as usize..self.arc_offsets[s + 1] as usize]
    }

    fn slab_cells(&self, s: usize) -> &[Option<DiskMask>] {
        let start = self.arc_offsets[s] as usize + s;
        let len = (self.arc_offsets[s + 1] - self.arc_offsets[s]) as usize + 1;
        &self.cells[start..start + len]
    }

    pub(crate) fn locate_raw(&self, p: Point2) -> Located {
        let bp = &self.breakpoints;
        let first = bp[0];
        let last = bp[bp.len() - 1];
        // outside the x-range or the y-band of all disks: unbounded face
        if p.x < first - ARC_TOLERANCE || p.x > last + ARC_TOLERANCE {
            return Located::Outside;
        }
        if p.y < self.y_lo - ARC_TOLERANCE || p.y > self.y_hi + ARC_TOLERANCE {
            return Located::Outside;
        }
        if p.x < first || p.x > last || self.slab_count() == 0 {
            // hugging the outer extremes, or a collapsed x-range
            return Located::Degenerate;
        }
        // slab with bp[s] <= x <= bp[s+1]
        let s = bp.partition_point(|&v| v < p.x).clamp(1, bp.len() - 1) - 1;
        if p.x - bp[s] <= ARC_TOLERANCE || bp[s + 1] - p.x <= ARC_TOLERANCE {
            // on or next to a breakpoint: arcs may appear/vanish here
            return Located::Degenerate;
        }
        let arcs = self.slab_arcs(s);
        // gap index = number of arcs strictly below p
        let cell = arcs.partition_point(|&a| self.arc_y(a, p.x) < p.y);
        // classification is only trusted away from the bounding boundaries
        if cell > 0 && self.near_boundary(p, arcs[cell - 1].disk) {
            return Located::Degenerate;
        }
        if cell < arcs.len() && self.near_boundary(p, arcs[cell].disk) {
            return Located::Degenerate;
        }
        match self.slab_cells(s)[cell] {
            Some(_) => Located::Cell(s as u32, cell as u32),
            None => Located::Degenerate,
        }
    }

    fn cell_mask(&self, slab: u32, cell: u32) -> &DiskMask {
        self.slab_cells(slab as usize)[cell as usize]
            .as_ref()
            .expect("located cells carry masks")
    }

    fn note_degenerate(&self) {
        self.degenerate_queries.fetch_add(1, Ordering::Relaxed);
    }

    /// Sample point and membership of every non-degenerate cell; test hook
    /// for the cell/membership invariant.
    pub fn cell_samples(&self) -> Vec<(Point2, DiskMask)> {
        let mut out = Vec::new();
        for s in 0..self.slab_count() {
            let x = (self.breakpoints[s] + self.breakpoints[s + 1]) / 2.0;
            let arcs = self.slab_arcs(s);
            for (c, mask) in self.slab_cells(s).iter().enumerate() {
                let Some(mask) = mask else { continue };
                let lo = if c == 0 { self.y_lo - 1.0 } else { self.arc_y(arcs[c - 1], x) };
                let hi = if c == arcs.len() { self.y_hi + 1.0 } else { self.arc_y(arcs[c], x) };
                out.push((Point2::new(x, (lo + hi) / 2.0), mask.clone()));
            }
        }
        out
    }
}

/// Builds the slab structure only; face labels are interned later, either
/// wholesale (public build) or per visited point (the pipeline).
pub(crate) fn build_locator(disks: &DiskSet) -> SlabLocator {
    let k = disks.len();
    let r = disks.radius();
    let centers = disks.centers();

    let mut breakpoints: Vec<f64> = Vec::with_capacity(2 * k);
    for c in centers {
        breakpoints.push(c.x - r);
        breakpoints.push(c.x + r);
    }
    // pairwise circle intersections (equal radii)
    for i in 0..k {
        for j in i + 1..k {
            let (ci, cj) = (centers[i], centers[j]);
            let d2 = dist_sq(ci, cj);
            if d2 == 0.0 || d2 > 4.0 * r * r {
                continue;
            }
            let d = d2.sqrt();
            let h = (r * r - d2 / 4.0).max(0.0).sqrt();
            let mx = (ci.x + cj.x) / 2.0;
            let perp_x = -(cj.y - ci.y) / d;
            breakpoints.push(mx + h * perp_x);
            breakpoints.push(mx - h * perp_x);
        }
    }
    breakpoints.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|next, kept| *next - *kept <= ARC_TOLERANCE);

    let slab_count = breakpoints.len().saturating_sub(1);
    let mut arc_offsets: Vec<u32> = Vec::with_capacity(slab_count + 1);
    arc_offsets.push(0);
    let mut arcs: Vec<Arc> = Vec::new();
    let mut cells: Vec<Option<DiskMask>> = Vec::new();
    let mut scratch: Vec<(f64, Arc)> = Vec::new();
    for w in breakpoints.windows(2) {
        let mid = (w[0] + w[1]) / 2.0;
        scratch.clear();
        for (idx, c) in centers.iter().enumerate() {
            if c.x - r < mid && mid < c.x + r {
                let h = (r * r - (mid - c.x) * (mid - c.x)).max(0.0).sqrt();
                scratch.push((c.y - h, Arc { disk: idx as u32, upper: false }));
                scratch.push((c.y + h, Arc { disk: idx as u32, upper: true }));
            }
        }
        scratch.sort_unstable_by(|a, b| {
            (a.0, a.1.disk, a.1.upper).partial_cmp(&(b.0, b.1.disk, b.1.upper)).unwrap()
        });

        // walk bottom to top, toggling membership at each arc
        let mut mask = DiskMask::empty(k);
        cells.push(Some(mask.clone()));
        for (i, &(y, arc)) in scratch.iter().enumerate() {
            if arc.upper {
                mask.clear(arc.disk as usize);
            } else {
                mask.set(arc.disk as usize);
            }
            let degenerate = match scratch.get(i + 1) {
                Some(&(ny, _)) => ny - y <= ARC_TOLERANCE,
                None => false,
            };
            cells.push(if degenerate { None } else { Some(mask.clone()) });
        }
        debug_assert!(mask.is_empty(), "arc walk must end outside all disks");
        arcs.extend(scratch.iter().map(|&(_, a)| a));
        arc_offsets.push(arcs.len() as u32);
    }

    let y_lo = centers.iter().map(|c| c.y).fold(f64::INFINITY, f64::min) - r;
    let y_hi = centers.iter().map(|c| c.y).fold(f64::NEG_INFINITY, f64::max) + r;
    SlabLocator {
        disks: disks.clone(),
        breakpoints,
        arc_offsets,
        arcs,
        cells,
        y_lo,
        y_hi,
        degenerate_queries: AtomicU64::new(0),
    }
}

/// Builds the point-location structure and the full face-label table (every
/// membership class realized by some cell, plus the unbounded face).
pub fn build_face_structure(disks: &DiskSet) -> Result<(FaceTable, SlabLocator)> {
    let locator = build_locator(disks);
    let mut table = FaceTable::with_empty_face(disks.len());
    for mask in locator.cells.iter().flatten() {
        table.intern(mask.clone());
    }
    Ok((table, locator))
}

/// Locator plus a label table holding only the unbounded face; labels are
/// interned as queries visit faces. The pipeline prefers this: per-layer
/// tables stay as small as the set of faces B actually touches.
pub(crate) fn build_face_structure_lazy(disks: &DiskSet) -> (FaceTable, SlabLocator) {
    (FaceTable::with_empty_face(disks.len()), build_locator(disks))
}

/// Face containing `p`. Points within [`ARC_TOLERANCE`] of an arc are
/// resolved by the direct per-disk predicate.
pub fn locate(loc: &SlabLocator, tab: &FaceTable, p: Point2) -> Result<FaceId> {
    match loc.locate_raw(p) {
        Located::Outside => Ok(tab.empty_face()),
        Located::Cell(s, c) => tab.lookup(loc.cell_mask(s, c)).ok_or_else(unindexed),
        Located::Degenerate => {
            loc.note_degenerate();
            tab.lookup(&loc.disks.membership(p)).ok_or_else(unindexed)
        }
    }
}

fn unindexed() -> Error {
    Error::Internal(
        "query hit a membership class with no label; use the interning locate path".into(),
    )
}

/// [`locate`], interning labels on first visit. Used by the decision
/// pipeline, which owns its table and fixes the label width afterwards.
pub(crate) fn locate_interning(loc: &SlabLocator, tab: &mut FaceTable, p: Point2) -> FaceId {
    match loc.locate_raw(p) {
        Located::Outside => tab.empty_face(),
        Located::Cell(s, c) => tab.intern(loc.cell_mask(s, c).clone()),
        Located::Degenerate => {
            loc.note_degenerate();
            tab.intern(loc.disks.membership(p))
        }
    }
}

/// Face of every point of `b`, in order.
pub fn locate_all(loc: &SlabLocator, tab: &FaceTable, b: &PointSeq) -> Result<Vec<FaceId>> {
    b.points().iter().map(|&p| locate(loc, tab, p)).collect()
}

/// Number of disks containing `p` (the depth of its face). Degenerate
/// queries count directly, so this needs no label table and never fails.
pub fn locate_depth(loc: &SlabLocator, p: Point2) -> u32 {
    match loc.locate_raw(p) {
        Located::Outside => 0,
        Located::Cell(s, c) => loc.cell_mask(s, c).count_ones(),
        Located::Degenerate => {
            loc.note_degenerate();
            loc.disks.depth(p)
        }
    }
}
