//! Autopartition binary space partition of planar convex fragments.

use crate::arrangement::line_chord;
use crate::depth::Piece;
use crate::geom::polygon::{self, Lin2};
use crate::geom::Point2;
use crate::num::{sign, Q};
use num_traits::Zero;

/// Straight cut made on a triangle by a splitting plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BspCut {
    pub tri: usize,
    pub a: Point2,
    pub b: Point2,
}

#[derive(Clone, Debug, Default)]
pub struct BspOutput {
    /// Fragments in back-to-front order for a viewer at `z = +infinity`.
    pub fragments: Vec<Piece>,
    pub cuts: Vec<BspCut>,
    pub depth: usize,
}

enum Side {
    Above,
    Below,
    Coplanar,
    Split,
}

fn classify(f: &Piece, h: &Lin2) -> Side {
    if h.is_constant() && h.c.is_zero() {
        return Side::Coplanar;
    }
    let mut pos = false;
    let mut neg = false;
    for p in &f.poly {
        match sign(&h.eval(p)) {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    match (pos, neg) {
        (true, true) => Side::Split,
        (false, true) => Side::Below,
        (true, false) => Side::Above,
        // Zero on every vertex of a polygon with area means coplanar.
        (false, false) => Side::Coplanar,
    }
}

/// Splitting line of `f` by the plane of `s`: positive where `f` is above it.
fn rel(f: &Piece, s: &Piece) -> Lin2 {
    Lin2::from_array(f.plane.diff(&s.plane))
}

/// Recursive autopartition; the splitter of each node is the fragment whose
/// plane crosses the fewest others.
pub fn autopartition(frags: Vec<Piece>) -> BspOutput {
    let mut out = BspOutput::default();
    let mut next_id = frags.iter().map(|f| f.id + 1).max().unwrap_or(0);
    recurse(frags, 0, &mut out, &mut next_id);
    out
}

fn recurse(frags: Vec<Piece>, depth: usize, out: &mut BspOutput, next_id: &mut usize) {
    out.depth = out.depth.max(depth);
    if frags.len() <= 1 {
        out.fragments.extend(frags);
        return;
    }
    // Fewest-crossings splitter among a bounded candidate set.
    let limit = frags.len().min(24);
    let mut best = 0;
    let mut best_cross = usize::MAX;
    for i in 0..limit {
        let cross = frags
            .iter()
            .enumerate()
            .filter(|&(j, f)| j != i && matches!(classify(f, &rel(f, &frags[i])), Side::Split))
            .count();
        if cross < best_cross {
            best_cross = cross;
            best = i;
        }
        if cross == 0 {
            break;
        }
    }
    let splitter = frags[best].clone();
    let mut above = Vec::new();
    let mut below = Vec::new();
    let mut on = vec![splitter.clone()];
    for (j, f) in frags.into_iter().enumerate() {
        if j == best {
            continue;
        }
        let h = rel(&f, &splitter);
        match classify(&f, &h) {
            Side::Above => above.push(f),
            Side::Below => below.push(f),
            Side::Coplanar => on.push(f),
            Side::Split => {
                if let Some((a, b)) = line_chord(&h, &f.poly) {
                    out.cuts.push(BspCut { tri: f.tri, a, b });
                }
                let up = polygon::clip(&f.poly, &h);
                let down = polygon::clip(&f.poly, &h.neg());
                for (poly, dst) in [(up, &mut above), (down, &mut below)] {
                    if poly.len() >= 3 && polygon::area2(&poly) > Q::zero() {
                        dst.push(Piece::new(*next_id, f.tri, f.plane.clone(), poly));
                        *next_id += 1;
                    }
                }
            }
        }
    }
    recurse(below, depth + 1, out, next_id);
    out.fragments.extend(on);
    recurse(above, depth + 1, out, next_id);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{pieces_from_triangles, verify_acyclic};
    use crate::geom::{Point3, Triangle};

    #[test]
    fn disjoint_projections_need_no_cuts() {
        let t: Vec<Triangle> = (0..3)
            .map(|i| Triangle::new(i, Point3::ints(10 * i as i64, 0, i as i64), Point3::ints(10 * i as i64 + 2, 0, 0), Point3::ints(10 * i as i64, 2, 1)).unwrap())
            .collect();
        let out = autopartition(pieces_from_triangles(&t));
        assert_eq!(out.fragments.len(), 3 + out.cuts.len());
        assert!(verify_acyclic(&out.fragments).unwrap().acyclic);
    }
}
