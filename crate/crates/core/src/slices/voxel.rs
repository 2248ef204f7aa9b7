//! Chunk graphs on voxel cells: slices become one-voxel-thick membranes with
//! a top and a bottom side.

use super::{ChunkGraph, SliceError};
use crate::geom::polygon::to_f64_poly;
use crate::geom::{Plane, Point2};
use crate::num::to_f64;
use crate::partition::voxel::{flood, BUFFER};
use crate::partition::CellDecomposition;
use std::collections::BTreeSet;

/// Slice in a voxel cell: the part of `plane` over `proj` inside the cell.
#[derive(Clone, Debug)]
pub struct VoxelSlice {
    pub plane: Plane,
    /// Counter-clockwise projection of the owning triangle.
    pub proj: Vec<Point2>,
}

/// Range of `z - plane(x, y)` over a voxel.
fn height_range(d: &CellDecomposition, v: usize, p: &Plane) -> (f64, f64) {
    let b = d.voxel_box(v);
    let (a, bb, c) = (to_f64(&p.a), to_f64(&p.b), to_f64(&p.c));
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in b[0] {
        for y in b[1] {
            for z in b[2] {
                let h = z - a * x - bb * y - c;
                lo = lo.min(h);
                hi = hi.max(h);
            }
        }
    }
    (lo, hi)
}

fn in_proj(d: &CellDecomposition, v: usize, proj: &[[f64; 2]]) -> bool {
    let c = d.center(v);
    let n = proj.len();
    (0..n).all(|i| {
        let (p, q) = (proj[i], proj[(i + 1) % n]);
        crate::geom::orient2d_f64(p, q, [c[0], c[1]]) >= 0.0
    })
}

/// Membrane voxels of each slice inside `cell`.
fn membranes(d: &CellDecomposition, cell: usize, slices: &[VoxelSlice]) -> Vec<Vec<bool>> {
    let n = d.labels.len();
    slices
        .iter()
        .map(|s| {
            let proj = to_f64_poly(&s.proj);
            (0..n)
                .map(|v| {
                    d.labels[v] == cell as u32 && {
                        let (lo, hi) = height_range(d, v, &s.plane);
                        lo <= 0.0 && hi >= 0.0 && in_proj(d, v, &proj)
                    }
                })
                .collect()
        })
        .collect()
}

/// Components smaller than this (or than 0.5% of the cell) are slivers
/// between a membrane and the buffer and are not chunks.
pub const MIN_CHUNK: usize = 16;

/// Labels of the chunks of `cell` with the `present` membranes as barriers.
fn chunk_labels(d: &CellDecomposition, cell: usize, mem: &[Vec<bool>], present: &BTreeSet<usize>) -> (Vec<u32>, usize) {
    let signs: Vec<i8> = d.labels.iter().map(|&l| if l == cell as u32 { 1 } else { 0 }).collect();
    let blocked = |v: usize| present.iter().any(|&s| mem[s][v]);
    let (labels, comps) = flood(d, &signs, &blocked);
    let mut sizes = vec![0usize; comps.len()];
    for &l in &labels {
        if l != BUFFER {
            sizes[l as usize] += 1;
        }
    }
    let total: usize = sizes.iter().sum();
    let floor = MIN_CHUNK.max(total / 200);
    let mut remap = vec![BUFFER; comps.len()];
    let mut next = 0u32;
    for (c, &n) in sizes.iter().enumerate() {
        if n >= floor {
            remap[c] = next;
            next += 1;
        }
    }
    let labels = labels.into_iter().map(|l| if l == BUFFER { BUFFER } else { remap[l as usize] }).collect();
    (labels, next as usize)
}

/// Chunks of a voxel cell with all slices inserted, linked to the slice sides they touch.
pub fn voxel_chunk_graph(d: &CellDecomposition, cell: usize, slices: &[VoxelSlice]) -> Result<ChunkGraph, SliceError> {
    let mem = membranes(d, cell, slices);
    let all: BTreeSet<usize> = (0..slices.len()).collect();
    let (labels, chunks) = chunk_labels(d, cell, &mem, &all);
    let mut g = ChunkGraph { chunks, slices: slices.len(), chunk_edges: BTreeSet::new() };
    for (s, m) in mem.iter().enumerate() {
        for v in (0..m.len()).filter(|&v| m[v]) {
            for w in d.neighbours(v) {
                if labels[w] == BUFFER {
                    continue;
                }
                let (lo, hi) = height_range(d, w, &slices[s].plane);
                let half = if lo > 0.0 {
                    g.top(s)
                } else if hi < 0.0 {
                    g.bottom(s)
                } else {
                    continue;
                };
                g.chunk_edges.insert((labels[w] as usize, half));
            }
        }
    }
    g.validate()?;
    Ok(g)
}

/// Chunk count of `cell` with only the `present` slices inserted (re-flood).
pub fn voxel_chunk_count(d: &CellDecomposition, cell: usize, slices: &[VoxelSlice], present: &BTreeSet<usize>) -> usize {
    let mem = membranes(d, cell, slices);
    chunk_labels(d, cell, &mem, present).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BBox;
    use crate::num::{q, qi, Q};
    use crate::partition::{decompose_cells, Located};
    use crate::poly::{xyz, Poly, TriPoly};
    use crate::slices::{order_slices, replay_consistent, replay_order};
    use num_traits::Zero;

    fn pt(x: i64, y: i64) -> Point2 {
        Point2::new(qi(x), qi(y))
    }

    fn check(d: &CellDecomposition, cell: usize, slices: &[VoxelSlice]) -> (usize, usize) {
        let g = voxel_chunk_graph(d, cell, slices).unwrap();
        let o = order_slices(&g).unwrap();
        let counts = replay_order(&g, &o.order);
        assert!(replay_consistent(&o, &counts));
        // Re-flood after each insertion agrees with the graph.
        let mut present = BTreeSet::new();
        for (k, &s) in o.order.iter().enumerate() {
            present.insert(s);
            assert_eq!(voxel_chunk_count(d, cell, slices, &present), counts[k + 1]);
        }
        (g.chunks, o.non_disconnecting.len())
    }

    #[test]
    fn ball_and_two_slices() {
        let (x, y, z) = xyz();
        let f = TriPoly::new(&(&(&x * &x) + &(&y * &y)) + &(&(&z * &z) - &Poly::one(3))).unwrap();
        let d = decompose_cells(&f, &BBox::cube(2), &q(1, 16));
        let Located::Cell(inside) = d.locate_f64([0.01, 0.02, 0.03]) else { panic!() };
        let big = vec![pt(-3, -3), pt(3, -3), pt(0, 3)];
        let s0 = VoxelSlice { plane: Plane::new(q(1, 10), Q::zero(), q(1, 3)), proj: big.clone() };
        let s1 = VoxelSlice { plane: Plane::new(Q::zero(), q(1, 10), q(-1, 3)), proj: big };
        assert_eq!(check(&d, inside, &[s0.clone()]), (2, 0));
        assert_eq!(check(&d, inside, &[s0, s1]), (3, 0));
    }

    #[test]
    fn torus_tunnel() {
        let (x, y, z) = xyz();
        let rho2 = &(&x * &x) + &(&y * &y);
        let inner = &(&rho2 + &(&z * &z)) + &Poly::constant(3, qi(3));
        let f = TriPoly::new(&(&inner * &inner) - &rho2.scale(&qi(16))).unwrap();
        let bbox = BBox { lo: [qi(-4), qi(-4), qi(-2)], hi: [qi(4), qi(4), qi(2)] };
        let d = decompose_cells(&f, &bbox, &q(1, 12));
        assert_eq!(d.count(), 2);
        let Located::Cell(tube) = d.locate_f64([2.01, 0.02, 0.03]) else { panic!() };
        let proj = vec![pt(0, -1), Point2::new(q(9, 2), qi(-1)), Point2::new(q(11, 5), qi(2))];
        let s = VoxelSlice { plane: Plane::new(Q::zero(), qi(4), Q::zero()), proj };
        assert_eq!(check(&d, tube, &[s]), (1, 1));
    }
}
