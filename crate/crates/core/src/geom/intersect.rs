//! Exact triangle-triangle predicates.

use super::polygon::{area2, intersect, vertex_average, Lin2};
use super::{GeomError, Point2, Triangle};
use crate::num::{sign, Q};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthOrderLabel {
    Above,
    Below,
    Unrelated,
}

impl DepthOrderLabel {
    pub fn flip(self) -> Self {
        match self {
            Self::Above => Self::Below,
            Self::Below => Self::Above,
            Self::Unrelated => Self::Unrelated,
        }
    }
}

/// Closed intersection of the two projections (possibly degenerate).
pub fn projections_overlap(t1: &Triangle, t2: &Triangle) -> Vec<Point2> {
    intersect(&t1.proj(), &t2.proj())
}

/// Whether the closed triangles share a point.
///
/// Both planes are non-vertical, so a common point exists exactly when the
/// height difference of the planes changes sign (or vanishes) on the overlap
/// of the projections.
pub fn tri_tri_intersect(t1: &Triangle, t2: &Triangle) -> bool {
    let ov = projections_overlap(t1, t2);
    if ov.is_empty() {
        return false;
    }
    let d = Lin2::from_array(t1.plane.diff(&t2.plane));
    let mut pos = false;
    let mut neg = false;
    for p in &ov {
        match sign(&d.eval(p)) {
            0 => return true,
            1 => pos = true,
            _ => neg = true,
        }
    }
    pos && neg
}

/// Label of `t1` relative to `t2` along vertical lines meeting both.
pub fn above_below(t1: &Triangle, t2: &Triangle) -> Result<DepthOrderLabel, GeomError> {
    if t1.id == t2.id {
        return Err(GeomError::SelfComparison(t1.id));
    }
    let ov = projections_overlap(t1, t2);
    if ov.is_empty() {
        return Ok(DepthOrderLabel::Unrelated);
    }
    let d = Lin2::from_array(t1.plane.diff(&t2.plane));
    // Sample inside the overlap; for a degenerate overlap any point will do.
    let probe = if !area2(&ov).is_zero() { vertex_average(&ov) } else { ov[0].clone() };
    let h: Q = d.eval(&probe);
    Ok(match sign(&h) {
        1 => DepthOrderLabel::Above,
        -1 => DepthOrderLabel::Below,
        _ => {
            // Touching triangles are outside the contract; report by the vertex max.
            let s: i32 = ov.iter().map(|p| sign(&d.eval(p))).sum();
            if s >= 0 {
                DepthOrderLabel::Above
            } else {
                DepthOrderLabel::Below
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use crate::num::q;

    fn flat(id: usize, z: i64, dx: i64) -> Triangle {
        Triangle::new(id, Point3::ints(dx, 0, z), Point3::ints(dx + 2, 0, z), Point3::ints(dx, 2, z)).unwrap()
    }

    #[test]
    fn stacked_labels() {
        let a = flat(0, 0, 0);
        let b = flat(1, 1, 0);
        assert_eq!(above_below(&a, &b).unwrap(), DepthOrderLabel::Below);
        assert_eq!(above_below(&b, &a).unwrap(), DepthOrderLabel::Above);
        assert_eq!(above_below(&a, &flat(2, 1, 10)).unwrap(), DepthOrderLabel::Unrelated);
        assert!(above_below(&a, &a).is_err());
        assert!(!tri_tri_intersect(&a, &b));
    }

    #[test]
    fn crossing_detected() {
        let a = flat(0, 0, 0);
        let b = Triangle::new(
            1,
            Point3::new(q(1, 2), q(1, 2), q(-1, 1)),
            Point3::new(q(3, 2), q(1, 2), q(1, 1)),
            Point3::new(q(1, 2), q(3, 2), q(1, 1)),
        )
        .unwrap();
        assert!(tri_tri_intersect(&a, &b));
        // shared edge
        let c = Triangle::new(2, Point3::ints(2, 0, 0), Point3::ints(0, 2, 0), Point3::ints(2, 2, 5)).unwrap();
        assert!(tri_tri_intersect(&a, &c));
    }
}
