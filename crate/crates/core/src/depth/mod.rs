//! Depth relation over planar convex pieces, cycle witnesses and painter orders.

mod cycles;

pub use cycles::{find_cycle, strongly_connected_components, CycleResult};

use crate::geom::polygon::{self, area2, contains_strict, sat_f64, to_f64_poly, vertex_average, Lin2, Overlap};
use crate::geom::{Plane, Point2, Point3, Triangle};
use crate::num::{from_f64, sign, Q};
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Convex planar piece of a non-vertical triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub id: usize,
    /// Id of the triangle the piece was cut from.
    pub tri: usize,
    pub plane: Plane,
    /// Counter-clockwise projection with positive area.
    pub poly: Vec<Point2>,
}

impl Piece {
    pub fn new(id: usize, tri: usize, plane: Plane, poly: Vec<Point2>) -> Self {
        Self { id, tri, plane, poly: polygon::make_ccw(poly) }
    }

    pub fn from_triangle(id: usize, t: &Triangle) -> Self {
        Self { id, tri: t.id, plane: t.plane.clone(), poly: t.proj().to_vec() }
    }

    pub fn vertices3(&self) -> Vec<Point3> {
        self.poly.iter().map(|p| self.plane.lift(p)).collect()
    }

    pub fn bbox_f64(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for p in &self.poly {
            let [x, y] = p.to_f64();
            b[0] = b[0].min(x);
            b[1] = b[1].min(y);
            b[2] = b[2].max(x);
            b[3] = b[3].max(y);
        }
        b
    }

    pub fn area2(&self) -> Q {
        area2(&self.poly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DepthError {
    #[error("pieces {0} and {1} have no consistent depth order (they meet)")]
    Ambiguous(usize, usize),
}

/// Directed graph on objects; edge `(i, j)` (indices) means object `i` lies below `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepthRelation {
    pub ids: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DepthRelation {
    pub fn new(ids: Vec<usize>) -> Self {
        Self { ids, edges: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
        }
        adj
    }

    /// `i -> j` lines with object ids.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "{} -> {}", self.ids[i], self.ids[j]);
        }
        s
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }
}

/// Label of piece `a` against piece `b` at one exact sample of their overlap:
/// `Some(true)` when `a` is lower, `None` when the projections do not share interior.
pub fn compare_pieces(a: &Piece, b: &Piece) -> Result<Option<bool>, DepthError> {
    let pa = to_f64_poly(&a.poly);
    let pb = to_f64_poly(&b.poly);
    let scale = a.bbox_f64().iter().chain(b.bbox_f64().iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    let witness = match sat_f64(&pa, &pb, 1e-9 * scale) {
        Overlap::Disjoint => return Ok(None),
        Overlap::Overlapping => float_witness(a, b),
        Overlap::Unsure => None,
    };
    let w = match witness {
        Some(w) => w,
        None => {
            let ov = polygon::intersect(&a.poly, &b.poly);
            if ov.len() < 3 || sign(&area2(&ov)) <= 0 {
                return Ok(None);
            }
            vertex_average(&ov)
        }
    };
    let d = Lin2::from_array(a.plane.diff(&b.plane)).eval(&w);
    match sign(&d) {
        -1 => Ok(Some(true)),
        1 => Ok(Some(false)),
        _ => Err(DepthError::Ambiguous(a.id, b.id)),
    }
}

/// Float clip centroid rounded to a rational, kept only if it is exactly interior to both.
fn float_witness(a: &Piece, b: &Piece) -> Option<Point2> {
    let pa = to_f64_poly(&a.poly);
    let pb = to_f64_poly(&b.poly);
    let mut cur = pa;
    for i in 0..pb.len() {
        let p = pb[i];
        let q = pb[(i + 1) % pb.len()];
        let f = |v: [f64; 2]| crate::geom::orient2d_f64(p, q, v);
        let mut next = Vec::new();
        for k in 0..cur.len() {
            let u = cur[k];
            let v = cur[(k + 1) % cur.len()];
            let (fu, fv) = (f(u), f(v));
            if fu >= 0.0 {
                next.push(u);
            }
            if (fu > 0.0 && fv < 0.0) || (fu < 0.0 && fv > 0.0) {
                let t = fu / (fu - fv);
                next.push([u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1])]);
            }
        }
        cur = next;
        if cur.is_empty() {
            return None;
        }
    }
    let n = cur.len() as f64;
    let cx = cur.iter().map(|v| v[0]).sum::<f64>() / n;
    let cy = cur.iter().map(|v| v[1]).sum::<f64>() / n;
    if !cx.is_finite() || !cy.is_finite() {
        return None;
    }
    let w = Point2::new(from_f64(cx), from_f64(cy));
    (contains_strict(&a.poly, &w) && contains_strict(&b.poly, &w)).then_some(w)
}

/// Builds the relation; pieces cut from one triangle are never compared.
pub fn build_relation(pieces: &[Piece]) -> Result<DepthRelation, DepthError> {
    let mut rel = DepthRelation::new(pieces.iter().map(|p| p.id).collect());
    let boxes: Vec<[f64; 4]> = pieces.iter().map(|p| p.bbox_f64()).collect();
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]));
    let m = 1e-9;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j][0] > boxes[i][2] + m {
                break;
            }
            if pieces[i].tri == pieces[j].tri {
                continue;
            }
            if boxes[j][1] > boxes[i][3] + m || boxes[i][1] > boxes[j][3] + m {
                continue;
            }
            match compare_pieces(&pieces[i], &pieces[j])? {
                Some(true) => {
                    rel.edges.insert((i, j));
                }
                Some(false) => {
                    rel.edges.insert((j, i));
                }
                None => {}
            }
        }
    }
    Ok(rel)
}

/// Random exact point strictly inside a convex polygon of positive area.
pub fn random_interior_point(poly: &[Point2], rng: &mut impl Rng) -> Point2 {
    let n = poly.len();
    let weights: Vec<Q> = (0..n).map(|_| crate::num::q(rng.gen_range(1..=1000), 1)).collect();
    let total: Q = weights.iter().sum();
    let mut x = Q::zero();
    let mut y = Q::zero();
    for (p, w) in poly.iter().zip(&weights) {
        x += &p.x * w;
        y += &p.y * w;
    }
    Point2::new(x / &total, y / total)
}

/// Checks `samples` random vertical lines through the overlap of `a` and `b`
/// against the expected label; returns the number of disagreements.
pub fn audit_pair(a: &Piece, b: &Piece, a_lower: bool, samples: usize, rng: &mut impl Rng) -> usize {
    let ov = polygon::intersect(&a.poly, &b.poly);
    if ov.len() < 3 {
        return 0;
    }
    let d = Lin2::from_array(a.plane.diff(&b.plane));
    (0..samples)
        .filter(|_| {
            let p = random_interior_point(&ov, rng);
            let s = sign(&d.eval(&p));
            (s < 0) != a_lower || s == 0
        })
        .count()
}

/// Outcome of the end-to-end check on a piece set.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub acyclic: bool,
    /// Back-to-front piece ids when acyclic.
    pub painter_order: Vec<usize>,
    /// Piece ids of a cycle when not acyclic.
    pub witness: Vec<usize>,
    pub relation: DepthRelation,
}

pub fn verify_acyclic(pieces: &[Piece]) -> Result<Verdict, DepthError> {
    let rel = build_relation(pieces)?;
    Ok(match find_cycle(&rel) {
        CycleResult::Acyclic(order) => Verdict {
            acyclic: true,
            painter_order: order.iter().map(|&i| rel.ids[i]).collect(),
            witness: vec![],
            relation: rel,
        },
        CycleResult::Cycle(c) => Verdict {
            acyclic: false,
            painter_order: vec![],
            witness: c.iter().map(|&i| rel.ids[i]).collect(),
            relation: rel,
        },
    })
}

pub fn pieces_from_triangles(tris: &[Triangle]) -> Vec<Piece> {
    tris.iter().map(|t| Piece::from_triangle(t.id, t)).collect()
}
