//! Chunk graphs of cells cut by slices, spanning forests that contain every
//! chunk edge, and the resulting slice order.

mod voxel;

pub use voxel::{voxel_chunk_graph, voxel_chunk_count, VoxelSlice};

use crate::geom::{Plane, Point2, Point3};
use crate::num::sign;
use std::collections::{BTreeMap, BTreeSet};

/// A slicing face lying in one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceRecord {
    pub id: usize,
    pub owner: usize,
    pub cell: usize,
    pub plane: Plane,
    /// Face polygon in the owner's chart.
    pub poly: Vec<Point2>,
}

impl SliceRecord {
    pub fn sample(&self) -> Point3 {
        self.plane.lift(&crate::geom::polygon::vertex_average(&self.poly))
    }
}

/// Tripartite graph on chunks and slice halves. Vertex ids: chunks are
/// `0..chunks`; slice `i` has top `chunks + 2i` and bottom `chunks + 2i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkGraph {
    pub chunks: usize,
    pub slices: usize,
    /// `(chunk, half)` pairs.
    pub chunk_edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SliceError {
    #[error("chunk edges contain a cycle through half {0}")]
    ChunkEdgeCycle(usize),
    #[error("slice half {0} touches more than one chunk")]
    HalfDegree(usize),
    #[error("malformed edge ({0}, {1})")]
    Malformed(usize, usize),
    #[error("slice {0} meets the plane of slice {1}")]
    Crossing(usize, usize),
}

impl ChunkGraph {
    pub fn top(&self, s: usize) -> usize {
        self.chunks + 2 * s
    }

    pub fn bottom(&self, s: usize) -> usize {
        self.chunks + 2 * s + 1
    }

    pub fn slice_of(&self, half: usize) -> usize {
        (half - self.chunks) / 2
    }

    pub fn v(&self) -> usize {
        self.chunks + 2 * self.slices
    }

    pub fn e(&self) -> usize {
        self.chunk_edges.len() + self.slices
    }

    /// Connected components with all twin edges present.
    pub fn x(&self) -> usize {
        self.components(&BTreeSet::new())
    }

    pub fn cyclomatic(&self) -> usize {
        self.e() + self.x() - self.v()
    }

    /// Components after deleting the twin edges of `removed` slices.
    pub fn components(&self, removed: &BTreeSet<usize>) -> usize {
        let mut uf = Uf::new(self.v());
        let mut c = self.v();
        for &(a, b) in &self.chunk_edges {
            if uf.union(a, b) {
                c -= 1;
            }
        }
        for s in 0..self.slices {
            if !removed.contains(&s) && uf.union(self.top(s), self.bottom(s)) {
                c -= 1;
            }
        }
        c
    }

    /// Simplicity, tripartiteness and the half-degree bound.
    pub fn validate(&self) -> Result<(), SliceError> {
        let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
        for &(c, h) in &self.chunk_edges {
            if c >= self.chunks || h < self.chunks || h >= self.v() {
                return Err(SliceError::Malformed(c, h));
            }
            *deg.entry(h).or_default() += 1;
        }
        match deg.into_iter().find(|&(_, d)| d > 1) {
            Some((h, _)) => Err(SliceError::HalfDegree(h)),
            None => Ok(()),
        }
    }
}

pub(crate) struct Uf(Vec<usize>);

impl Uf {
    pub(crate) fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceOrdering {
    /// Non-disconnecting slices first, then the rest.
    pub order: Vec<usize>,
    pub non_disconnecting: BTreeSet<usize>,
}

/// Spanning forest grown from all chunk edges first; twin edges left out of
/// it mark non-disconnecting slices.
pub fn order_slices(g: &ChunkGraph) -> Result<SliceOrdering, SliceError> {
    g.validate()?;
    let mut uf = Uf::new(g.v());
    for &(c, h) in &g.chunk_edges {
        if !uf.union(c, h) {
            return Err(SliceError::ChunkEdgeCycle(h));
        }
    }
    let mut non = BTreeSet::new();
    let mut forest = Vec::new();
    for s in 0..g.slices {
        if uf.union(g.top(s), g.bottom(s)) {
            forest.push(s);
        } else {
            non.insert(s);
        }
    }
    assert_eq!(non.len(), g.cyclomatic(), "non-forest twins must equal e - v + x");
    let mut order: Vec<usize> = non.iter().copied().collect();
    order.extend(forest);
    Ok(SliceOrdering { order, non_disconnecting: non })
}

/// Chunk counts while the slices are inserted one by one in `order`,
/// starting from the bare cell: entry `k` is the count after `k` insertions.
/// A slice is present when its twin edge is absent.
pub fn replay_order(g: &ChunkGraph, order: &[usize]) -> Vec<usize> {
    let mut present = BTreeSet::new();
    let mut counts = vec![bare_components(g, &present)];
    for &s in order {
        present.insert(s);
        counts.push(bare_components(g, &present));
    }
    counts
}

/// Components of the cell with only `present` slices inserted, counted on
/// the graph: halves of absent slices are glued back together.
fn bare_components(g: &ChunkGraph, present: &BTreeSet<usize>) -> usize {
    let mut uf = Uf::new(g.v());
    for &(a, b) in &g.chunk_edges {
        uf.union(a, b);
    }
    for s in 0..g.slices {
        if !present.contains(&s) {
            uf.union(g.top(s), g.bottom(s));
        }
    }
    let roots: BTreeSet<usize> = (0..g.chunks).map(|c| uf.find(c)).collect();
    roots.len()
}

/// Checks the replay: non-disconnecting insertions keep the count, the
/// others raise it by exactly one.
pub fn replay_consistent(ord: &SliceOrdering, counts: &[usize]) -> bool {
    ord.order.iter().enumerate().all(|(k, s)| {
        let d = counts[k + 1] as i64 - counts[k] as i64;
        if ord.non_disconnecting.contains(s) {
            d == 0
        } else {
            d == 1
        }
    })
}

/// Chunks of a convex cell cut by spanning slices: the sign vectors, with
/// respect to the slice planes, of points just above and below each slice.
pub struct ConvexChunks {
    pub graph: ChunkGraph,
    /// Sign vector of each chunk.
    pub vectors: Vec<Vec<i8>>,
}

pub fn convex_chunk_graph(slices: &[SliceRecord]) -> Result<ConvexChunks, SliceError> {
    let t = slices.len();
    let samples: Vec<Point3> = slices.iter().map(|s| s.sample()).collect();
    let mut vectors: Vec<Vec<i8>> = Vec::new();
    let mut index: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
    let mut halves: Vec<(Vec<i8>, usize)> = Vec::new();
    for i in 0..t {
        let mut v = Vec::with_capacity(t);
        for j in 0..t {
            if i == j {
                v.push(0);
                continue;
            }
            let s = sign(&slices[j].plane.height(&samples[i]));
            if s == 0 {
                return Err(SliceError::Crossing(i, j));
            }
            v.push(s as i8);
        }
        for (own, half) in [(1i8, 2 * i), (-1i8, 2 * i + 1)] {
            let mut w = v.clone();
            w[i] = own;
            halves.push((w, half));
        }
    }
    for (w, _) in &halves {
        if !index.contains_key(w) {
            index.insert(w.clone(), vectors.len());
            vectors.push(w.clone());
        }
    }
    let chunks = vectors.len().max(1);
    if vectors.is_empty() {
        vectors.push(vec![]);
    }
    let chunk_edges = halves.iter().map(|(w, h)| (index[w], chunks + h)).collect();
    Ok(ConvexChunks { graph: ChunkGraph { chunks, slices: t, chunk_edges }, vectors })
}

impl ConvexChunks {
    /// Chunk count with only `present` slices, recounted from the sign vectors.
    pub fn recount(&self, present: &BTreeSet<usize>) -> usize {
        let keys: BTreeSet<Vec<i8>> = self
            .vectors
            .iter()
            .map(|v| v.iter().enumerate().filter(|(j, _)| present.contains(j)).map(|(_, &s)| s).collect())
            .collect();
        keys.len()
    }
}

/// Per-cell row: `cell_id chunks slices non_disconnecting e v x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSliceReport {
    pub cell: String,
    pub chunks: usize,
    pub slices: usize,
    pub non_disconnecting: usize,
    pub e: usize,
    pub v: usize,
    pub x: usize,
}

impl CellSliceReport {
    pub fn new(cell: String, g: &ChunkGraph, ord: &SliceOrdering) -> Self {
        Self {
            cell,
            chunks: g.chunks,
            slices: g.slices,
            non_disconnecting: ord.non_disconnecting.len(),
            e: g.e(),
            v: g.v(),
            x: g.x(),
        }
    }

    pub fn row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.cell, self.chunks, self.slices, self.non_disconnecting, self.e, self.v, self.x
        )
    }
}

/// Total non-disconnecting slices and the ratio to `D^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct BettiReport {
    pub total: usize,
    pub degree: usize,
    pub ratio: f64,
}

pub fn audit_betti(rows: &[CellSliceReport], degree: usize) -> BettiReport {
    let total = rows.iter().map(|r| r.non_disconnecting).sum();
    let d3 = (degree.max(1) as f64).powi(3);
    BettiReport { total, degree, ratio: total as f64 / d3 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(chunks: usize, slices: usize, e: &[(usize, usize)]) -> ChunkGraph {
        ChunkGraph { chunks, slices, chunk_edges: e.iter().copied().collect() }
    }

    #[test]
    fn empty_cell() {
        let g = graph(1, 0, &[]);
        let o = order_slices(&g).unwrap();
        assert!(o.order.is_empty() && o.non_disconnecting.is_empty());
        assert_eq!(g.cyclomatic(), 0);
    }

    #[test]
    fn path_and_triangle() {
        // Ball: chunk 0 - top, bottom - chunk 1.
        let g = graph(2, 1, &[(0, 2), (1, 3)]);
        assert_eq!((g.e(), g.v(), g.x()), (3, 4, 1));
        assert!(order_slices(&g).unwrap().non_disconnecting.is_empty());
        // Torus: one chunk on both sides.
        let g = graph(1, 1, &[(0, 1), (0, 2)]);
        assert_eq!((g.e(), g.v(), g.x()), (3, 3, 1));
        let o = order_slices(&g).unwrap();
        assert_eq!(o.non_disconnecting.len(), 1);
        let c = replay_order(&g, &o.order);
        assert_eq!(c, vec![1, 1]);
        assert!(replay_consistent(&o, &c));
    }

    #[test]
    fn two_slices_in_a_tube() {
        // Solid torus cut twice: two chunks, either slice alone keeps it connected.
        let g = graph(2, 2, &[(0, 2), (1, 3), (1, 4), (0, 5)]);
        let o = order_slices(&g).unwrap();
        assert_eq!(o.non_disconnecting.len(), 1);
        let c = replay_order(&g, &o.order);
        assert_eq!(c, vec![1, 1, 2]);
        assert!(replay_consistent(&o, &c));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(graph(2, 1, &[(0, 2), (1, 2)]).validate(), Err(SliceError::HalfDegree(2))));
    }
}
