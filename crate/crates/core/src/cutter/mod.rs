//! Recursive cycle elimination: partition, draw, classify, recurse, and
//! finish the leaves with an autopartition.

pub mod bsp;

pub use bsp::{autopartition, BspCut, BspOutput};

use crate::arrangement::{
    build_segment_map, classify_faces, draw_cylinder_trace, line_chord, DrawnCurve, FaceKind, MapError, Origin,
    SliceBoundary,
};
use crate::depth::{verify_acyclic, DepthError, Piece, Verdict};
use crate::geom::polygon::{self, Lin2};
use crate::geom::{Scene, Triangle};
use crate::num::{qi, sign, to_f64, Q};
use crate::partition::{build_partition, edge_segments, PartitionError, PartitionParams, PlanePartition, Region, Signs};
use crate::slices::{
    convex_chunk_graph, order_slices, replay_consistent, replay_order, CellSliceReport, SliceError, SliceRecord,
};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Default bound on the measured partition constant.
pub const DEFAULT_C_TARGET: i64 = 6;

#[derive(Clone, Debug)]
pub struct CutParams {
    pub degree: usize,
    pub c_target: Q,
    pub seed: u64,
    pub max_depth: usize,
    pub node_budget: usize,
    /// Lower bound on the leaf threshold.
    pub leaf_floor: usize,
}

impl CutParams {
    pub fn new(degree: usize) -> Self {
        Self { degree, c_target: qi(DEFAULT_C_TARGET), seed: 1, max_depth: 12, node_budget: 4096, leaf_floor: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafReason {
    Small,
    DepthCap,
    Budget,
    PartitionFailed,
    NoProgress,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeStats {
    pub curves: usize,
    pub slices: usize,
    pub non_disconnecting: usize,
    pub bsp_cuts: usize,
    /// Triangle counts of the children.
    pub child_sizes: Vec<usize>,
    /// Most child cells pierced by a single triangle.
    pub max_pierced: usize,
}

#[derive(Clone, Debug)]
pub struct RecursionNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub tris: Vec<usize>,
    pub region: Region,
    pub partition: Option<PlanePartition>,
    pub leaf: Option<LeafReason>,
    pub stats: NodeStats,
}

#[derive(Clone, Debug, Default)]
pub struct CutPlan {
    pub nodes: Vec<RecursionNode>,
    /// Clipped curves per triangle id.
    pub curves: BTreeMap<usize, Vec<DrawnCurve>>,
    pub slice_reports: Vec<CellSliceReport>,
    pub log: Vec<String>,
}

impl CutPlan {
    pub fn curve_count(&self) -> usize {
        self.curves.values().map(|v| v.len()).sum()
    }

    pub fn non_disconnecting(&self) -> usize {
        self.slice_reports.iter().map(|r| r.non_disconnecting).sum()
    }

    /// Largest audited constant among accepted partitions.
    pub fn max_c(&self) -> Option<Q> {
        self.nodes.iter().filter_map(|n| n.partition.as_ref().map(|p| p.audit.measured_c.clone())).max()
    }
}

#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub plan: CutPlan,
    pub pieces: Vec<Piece>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CutError {
    #[error("depth relation: {0}")]
    Depth(#[from] DepthError),
    #[error("planar map of triangle {tri}: {err}")]
    Map { tri: usize, err: MapError },
    #[error("node {node}: cells pierced by triangle {tri} disagree between the 3D and 2D routes")]
    RouteMismatch { node: usize, tri: usize },
    #[error("node {node}: {err}")]
    Slice { node: usize, err: SliceError },
    #[error("node {node}: slice replay disagrees with the recount")]
    Replay { node: usize },
    #[error("output pieces contain a depth cycle: {witness:?}")]
    Cycle { witness: Vec<usize>, pieces: usize },
}

fn leaf_threshold(params: &CutParams, c: &Q) -> usize {
    let d2 = (params.degree * params.degree) as f64;
    let c = to_f64(c).max(1e-9);
    (d2 / (3.0 * c)).ceil().max(params.leaf_floor as f64) as usize
}

struct Work {
    id: usize,
    parent: Option<usize>,
    depth: usize,
    tris: Vec<usize>,
    region: Region,
    parent_c: Q,
    force_leaf: Option<LeafReason>,
}

/// Runs the recursion and the final per-triangle decomposition.
pub fn eliminate_cycles(scene: &Scene, params: &CutParams) -> Result<CutOutcome, CutError> {
    let plan = build_plan(scene, params)?;
    let pieces = assemble(scene, &plan)?;
    let verdict = verify_acyclic(&pieces)?;
    if !verdict.acyclic {
        return Err(CutError::Cycle { witness: verdict.witness.clone(), pieces: pieces.len() });
    }
    Ok(CutOutcome { plan, pieces, verdict })
}

pub fn build_plan(scene: &Scene, params: &CutParams) -> Result<CutPlan, CutError> {
    let by_id: BTreeMap<usize, &Triangle> = scene.triangles.iter().map(|t| (t.id, t)).collect();
    let mut plan = CutPlan::default();
    let mut stack = vec![Work {
        id: 0,
        parent: None,
        depth: 0,
        tris: scene.triangles.iter().map(|t| t.id).collect(),
        region: Region::new(scene.bbox.clone()),
        parent_c: params.c_target.clone(),
        force_leaf: None,
    }];
    let mut next_id = 1;
    while let Some(w) = stack.pop() {
        let tris: Vec<&Triangle> = w.tris.iter().map(|i| by_id[i]).collect();
        let mut node = RecursionNode {
            id: w.id,
            parent: w.parent,
            depth: w.depth,
            tris: w.tris.clone(),
            region: w.region.clone(),
            partition: None,
            leaf: w.force_leaf,
            stats: NodeStats::default(),
        };
        if node.leaf.is_none() {
            if tris.len() < leaf_threshold(params, &w.parent_c) {
                node.leaf = Some(LeafReason::Small);
            } else if w.depth >= params.max_depth {
                node.leaf = Some(LeafReason::DepthCap);
            } else if next_id >= params.node_budget {
                node.leaf = Some(LeafReason::Budget);
            }
        }
        if node.leaf.is_none() {
            let segs = edge_segments(&tris, &w.region);
            let pp = PartitionParams::new(params.degree, params.c_target.clone(), params.seed ^ (w.id as u64).wrapping_mul(0x2545_f491));
            match build_partition(&segs, &w.region, &pp) {
                Ok(p) => node.partition = Some(p),
                Err(e) => {
                    if let PartitionError::NotFound { .. } = e {
                        plan.log.push(format!("node {}: {e}; forced leaf", w.id));
                    }
                    node.leaf = Some(LeafReason::PartitionFailed);
                }
            }
        }
        if node.leaf.is_some() {
            run_leaf(&mut node, &tris, &mut plan);
            if node.leaf != Some(LeafReason::Small) {
                plan.log.push(format!("node {}: leaf ({:?}) with {} triangles", node.id, node.leaf.unwrap(), tris.len()));
            }
            plan.nodes.push(node);
            continue;
        }
        let children = run_internal(&mut node, &tris, &mut plan)?;
        let c = node.partition.as_ref().unwrap().audit.measured_c.clone();
        for (signs, pierce) in children {
            node.stats.child_sizes.push(pierce.len());
            let force = (pierce.len() >= tris.len()).then_some(LeafReason::NoProgress);
            stack.push(Work {
                id: next_id,
                parent: Some(node.id),
                depth: w.depth + 1,
                tris: pierce,
                region: w.region.with(&node.partition.as_ref().unwrap().planes, &signs),
                parent_c: c.clone(),
                force_leaf: force,
            });
            next_id += 1;
        }
        plan.nodes.push(node);
    }
    plan.nodes.sort_by_key(|n| n.id);
    Ok(plan)
}

fn push_curve(plan: &mut CutPlan, stats: &mut NodeStats, c: DrawnCurve) {
    stats.curves += 1;
    plan.curves.entry(c.tri).or_default().push(c);
}

fn run_leaf(node: &mut RecursionNode, tris: &[&Triangle], plan: &mut CutPlan) {
    let mut frags = Vec::new();
    for t in tris {
        let poly = node.region.on_triangle(t);
        if poly.len() >= 3 && polygon::area2(&poly) > Q::zero() {
            frags.push(Piece::new(frags.len(), t.id, t.plane.clone(), poly));
        }
    }
    let out = autopartition(frags);
    node.stats.bsp_cuts = out.cuts.len();
    for c in out.cuts {
        push_curve(plan, &mut node.stats, DrawnCurve::segment(c.tri, Origin::LeafBsp, node.id, c.a, c.b));
    }
}

/// Draws the node's curves and returns the children as (cell, piercing triangles).
fn run_internal(node: &mut RecursionNode, tris: &[&Triangle], plan: &mut CutPlan) -> Result<Vec<(Signs, Vec<usize>)>, CutError> {
    let part = node.partition.clone().expect("internal node has a partition");
    let planes = &part.planes;
    let curtains = part.curtain_lines();
    // Cells crossed by each triangle's edges (3D route).
    let mut pierced3: BTreeMap<usize, BTreeSet<Signs>> = BTreeMap::new();
    let segs = edge_segments(tris, &node.region);
    for (signs, members) in &part.audit.crossings {
        for &i in members {
            pierced3.entry(segs[i].tri).or_default().insert(signs.clone());
        }
    }
    let contained: Vec<usize> = tris.iter().filter(|t| planes.contains(&t.plane)).map(|t| t.id).collect();
    let mut pierce: BTreeMap<Signs, Vec<usize>> = BTreeMap::new();
    let mut slices: BTreeMap<Signs, Vec<SliceRecord>> = BTreeMap::new();
    for t in tris {
        if contained.contains(&t.id) {
            plan.log.push(format!("node {}: triangle {} lies in the zero set", node.id, t.id));
            continue;
        }
        let poly = node.region.on_triangle(t);
        if poly.len() < 3 || polygon::area2(&poly) <= Q::zero() {
            continue;
        }
        let zero_lines: Vec<Lin2> = planes.iter().map(|p| Lin2::from_array(t.plane.diff(p))).collect();
        let mut chords = Vec::new();
        for l in &zero_lines {
            if let Some((a, b)) = line_chord(l, &poly) {
                chords.push((a.clone(), b.clone()));
                push_curve(plan, &mut node.stats, DrawnCurve::segment(t.id, Origin::ZeroSet, node.id, a, b));
            }
        }
        for (_, _, l) in &curtains {
            if let Some((a, b)) = line_chord(l, &poly) {
                push_curve(plan, &mut node.stats, DrawnCurve::segment(t.id, Origin::Curtain, node.id, a, b));
            }
        }
        for &cid in &contained {
            let other = tris.iter().find(|u| u.id == cid).unwrap();
            if let Some((a, b)) = line_chord(&Lin2::from_array(t.plane.diff(&other.plane)), &poly) {
                push_curve(plan, &mut node.stats, DrawnCurve::segment(t.id, Origin::PlaneTrace, node.id, a, b));
            }
        }
        // Faces of the triangle in the node region minus the zero set (2D route).
        let map = build_segment_map(&poly, &chords, t.id as u64 ^ ((node.id as u64) << 20))
            .map_err(|err| CutError::Map { tri: t.id, err })?;
        let kinds = classify_faces(t, &map);
        let mut pierced2 = BTreeSet::new();
        for (f, s) in map.face_samples().iter().enumerate() {
            let signs: Signs = zero_lines.iter().map(|l| sign(&l.eval(s)) as i8).collect();
            match kinds[f] {
                FaceKind::Piercing => {
                    pierced2.insert(signs.clone());
                    pierce.entry(signs).or_default().push(t.id);
                }
                FaceKind::Slicing => {
                    let mut face = poly.clone();
                    for (l, &s) in zero_lines.iter().zip(&signs) {
                        face = polygon::clip(&face, &if s > 0 { l.clone() } else { l.neg() });
                    }
                    let e = slices.entry(signs).or_default();
                    e.push(SliceRecord { id: e.len(), owner: t.id, cell: 0, plane: t.plane.clone(), poly: face });
                }
            }
        }
        if pierced2 != pierced3.remove(&t.id).unwrap_or_default() {
            return Err(CutError::RouteMismatch { node: node.id, tri: t.id });
        }
        node.stats.max_pierced = node.stats.max_pierced.max(pierced2.len());
    }
    // Slices per cell: chunk graph, order, and cylinder traces for the
    // non-disconnecting ones.
    let cells: BTreeSet<Signs> = pierce.keys().chain(slices.keys()).cloned().collect();
    for (ci, cell) in cells.iter().enumerate() {
        let recs = slices.get(cell).cloned().unwrap_or_default();
        node.stats.slices += recs.len();
        if recs.is_empty() {
            continue;
        }
        let chunks = convex_chunk_graph(&recs).map_err(|err| CutError::Slice { node: node.id, err })?;
        let ord = order_slices(&chunks.graph).map_err(|err| CutError::Slice { node: node.id, err })?;
        let counts = replay_order(&chunks.graph, &ord.order);
        let mut present = BTreeSet::new();
        let mut ok = replay_consistent(&ord, &counts) && chunks.recount(&present) == counts[0];
        for (k, &s) in ord.order.iter().enumerate() {
            present.insert(s);
            ok &= chunks.recount(&present) == counts[k + 1];
        }
        if !ok {
            return Err(CutError::Replay { node: node.id });
        }
        node.stats.non_disconnecting += ord.non_disconnecting.len();
        plan.slice_reports.push(CellSliceReport::new(format!("{}.{}", node.id, ci), &chunks.graph, &ord));
        let cell_region = node.region.with(planes, cell);
        for &s in &ord.non_disconnecting {
            let rec = &recs[s];
            let n = rec.poly.len();
            let boundary = SliceBoundary {
                owner: rec.owner,
                segments: (0..n).map(|i| (rec.poly[i].clone(), rec.poly[(i + 1) % n].clone())).collect(),
                curves: vec![],
            };
            let others: BTreeSet<usize> =
                pierce.get(cell).into_iter().flatten().copied().chain(recs.iter().map(|r| r.owner)).collect();
            for o in others {
                let t = tris.iter().find(|u| u.id == o).unwrap();
                let local = cell_region.on_triangle(t);
                for c in draw_cylinder_trace(t, &boundary, node.id) {
                    let Some((a, b)) = c.as_segment() else { continue };
                    if let Some((a, b)) = crate::arrangement::clip_to_region(&local, a, b) {
                        push_curve(plan, &mut node.stats, DrawnCurve::segment(o, Origin::CylinderTrace, node.id, a, b));
                    }
                }
            }
        }
    }
    Ok(pierce.into_iter().collect())
}

/// Cuts every triangle along all of its curves into trapezoids.
pub fn assemble(scene: &Scene, plan: &CutPlan) -> Result<Vec<Piece>, CutError> {
    let mut pieces = Vec::new();
    for t in &scene.triangles {
        let segs: Vec<_> = plan
            .curves
            .get(&t.id)
            .into_iter()
            .flatten()
            .filter_map(|c| c.as_segment().map(|(a, b)| (a.clone(), b.clone())))
            .collect();
        let map = build_segment_map(&t.proj(), &segs, t.id as u64).map_err(|err| CutError::Map { tri: t.id, err })?;
        for tr in map.trapezoids {
            pieces.push(Piece::new(pieces.len(), t.id, t.plane.clone(), tr.poly));
        }
    }
    Ok(pieces)
}

/// Fit of the recursion against its per-node bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
    pub total_curves: usize,
    /// Largest `local curves / (n D^3)` over internal nodes.
    pub overhead: f64,
    /// Largest `children / D^3` over internal nodes.
    pub b: f64,
    /// Every child has at most `3 c n / D^2` triangles.
    pub child_contract: bool,
    /// No triangle pierces more than `3 (D + 1)` children.
    pub pierce_bound: bool,
}

pub fn recurrence_audit(plan: &CutPlan) -> RecurrenceReport {
    let mut r = RecurrenceReport {
        nodes: plan.nodes.len(),
        leaves: plan.nodes.iter().filter(|n| n.leaf.is_some()).count(),
        depth: plan.nodes.iter().map(|n| n.depth).max().unwrap_or(0),
        total_curves: plan.curve_count(),
        overhead: 0.0,
        b: 0.0,
        child_contract: true,
        pierce_bound: true,
    };
    for n in &plan.nodes {
        let Some(p) = &n.partition else { continue };
        let d = p.degree();
        let d3 = (d * d * d) as f64;
        let size = n.tris.len().max(1);
        r.overhead = r.overhead.max(n.stats.curves as f64 / (size as f64 * d3));
        r.b = r.b.max(n.stats.child_sizes.len() as f64 / d3);
        let bound = qi(3) * &p.audit.measured_c * qi(size as i64) / qi((d * d) as i64);
        if n.stats.child_sizes.iter().any(|&k| qi(k as i64) > bound) {
            r.child_contract = false;
        }
        if n.stats.max_pierced > 3 * (d + 1) {
            r.pierce_bound = false;
        }
    }
    r
}
