//! Slab decomposition of algebraic curve arrangements.
//!
//! Vertical lines through every critical abscissa (region vertices, curve
//! extremes and singularities, pairwise intersections, boundary hits) split
//! a convex region into slabs; inside a slab the curves are disjoint graphs
//! over `x` and every consecutive pair of arcs bounds one pseudo-trapezoid.

use crate::geom::Point2;
use crate::num::{qi, Q};
use crate::poly::univariate::{refine, RealRoot, UPoly};
use crate::poly::{resultant, square_free, BiPoly, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SlabError {
    #[error("curve {0} contains a vertical line")]
    VerticalComponent(usize),
    #[error("curves {0} and {1} share a component")]
    CommonComponent(usize, usize),
    #[error("empty region")]
    EmptyRegion,
}

/// Arcs crossing a slab, bottom to top.
#[derive(Clone, Debug)]
pub struct Slab {
    /// Rational abscissa strictly inside the slab.
    pub x: Q,
    /// Curve index of each arc.
    pub arcs: Vec<usize>,
    pub ys: Vec<RealRoot>,
}

/// Pseudo-trapezoid of a slab; `None` sides are the region boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoTrapezoid {
    pub slab: usize,
    pub bottom: Option<usize>,
    pub top: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SlabMap {
    pub events: Vec<RealRoot>,
    pub slabs: Vec<Slab>,
    /// Transversal crossings between two curves inside the region.
    pub crossings: usize,
}

impl SlabMap {
    pub fn trapezoids(&self) -> Vec<PseudoTrapezoid> {
        let mut out = Vec::new();
        for (s, slab) in self.slabs.iter().enumerate() {
            let n = slab.arcs.len();
            for k in 0..=n {
                out.push(PseudoTrapezoid {
                    slab: s,
                    bottom: k.checked_sub(1).map(|i| slab.arcs[i]),
                    top: (k < n).then(|| slab.arcs[k]),
                });
            }
        }
        out
    }
}

fn x_poly(p: &Poly) -> UPoly {
    p.shrink_vars(1).to_upoly(0)
}

fn line_through(p: &Point2, q: &Point2) -> Poly {
    // (q.x - p.x)(y - p.y) - (q.y - p.y)(x - p.x)
    Poly::affine(&[
        -(&q.x - &p.x) * &p.y + (&q.y - &p.y) * &p.x,
        -(&q.y - &p.y),
        &q.x - &p.x,
    ])
}

/// Vertical extent of the convex polygon at abscissa `x`.
fn y_range(region: &[Point2], x: &Q) -> Option<(Q, Q)> {
    let n = region.len();
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for i in 0..n {
        let (p, q) = (&region[i], &region[(i + 1) % n]);
        if p.x == q.x {
            continue;
        }
        let (a, b) = if p.x < q.x { (p, q) } else { (q, p) };
        if x < &a.x || x > &b.x {
            continue;
        }
        let y = &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x);
        if lo.as_ref().map_or(true, |l| &y < l) {
            lo = Some(y.clone());
        }
        if hi.as_ref().map_or(true, |h| &y > h) {
            hi = Some(y);
        }
    }
    Some((lo?, hi?))
}

/// Roots of `f(x, .)` strictly inside `(lo, hi)`.
fn fibre_roots(f: &Poly, x: &Q, lo: &Q, hi: &Q) -> Option<(UPoly, Vec<RealRoot>)> {
    let u = f.eval_partial(&[Some(x.clone()), None]).to_upoly(1);
    if u.is_zero() {
        return None;
    }
    let g = u.square_free_part();
    let roots = g.real_roots_in(lo, hi).into_iter().filter(|r| !(r.is_exact() && (&r.lo == lo || &r.lo == hi))).collect();
    Some((g, roots))
}

/// Decomposes the convex counter-clockwise `region` along `curves`.
pub fn slab_decompose(region: &[Point2], curves: &[BiPoly]) -> Result<SlabMap, SlabError> {
    if region.len() < 3 {
        return Err(SlabError::EmptyRegion);
    }
    let polys: Vec<Poly> = curves.iter().map(|c| square_free(c.poly())).collect();
    let mut crit: Vec<UPoly> = Vec::new();
    for v in region {
        crit.push(UPoly::new(vec![-v.x.clone(), qi(1)]));
    }
    for (i, f) in polys.iter().enumerate() {
        if f.degree_in(1) == 0 {
            if f.uses(0) {
                return Err(SlabError::VerticalComponent(i));
            }
            continue;
        }
        crit.push(x_poly(&f.lead_in(1)));
        let disc = resultant(f, &f.derivative(1), 1);
        if disc.is_zero() {
            return Err(SlabError::VerticalComponent(i));
        }
        crit.push(x_poly(&disc));
        let n = region.len();
        for k in 0..n {
            let (p, q) = (&region[k], &region[(k + 1) % n]);
            if p.x != q.x {
                crit.push(x_poly(&resultant(f, &line_through(p, q), 1)));
            }
        }
        for (j, g) in polys.iter().enumerate().skip(i + 1) {
            if g.degree_in(1) == 0 {
                continue;
            }
            let r = resultant(f, g, 1);
            if r.is_zero() {
                return Err(SlabError::CommonComponent(i, j));
            }
            crit.push(x_poly(&r));
        }
    }
    let xmin = region.iter().map(|p| p.x.clone()).min().unwrap();
    let xmax = region.iter().map(|p| p.x.clone()).max().unwrap();
    let mut prod = UPoly::constant(qi(1));
    for c in crit.iter().filter(|c| c.degree() > 0) {
        prod = prod.mul(&c.square_free_part());
    }
    let events = prod.square_free_part().real_roots_in(&xmin, &xmax);
    let mut slabs = Vec::new();
    for w in events.windows(2) {
        let x = (&w[0].hi + &w[1].lo) / qi(2);
        let (lo, hi) = match y_range(region, &x) {
            Some(r) if r.0 < r.1 => r,
            _ => continue,
        };
        let mut arcs: Vec<(usize, UPoly, RealRoot)> = Vec::new();
        for (i, f) in polys.iter().enumerate() {
            let (g, roots) = fibre_roots(f, &x, &lo, &hi).ok_or(SlabError::VerticalComponent(i))?;
            arcs.extend(roots.into_iter().map(|r| (i, g.clone(), r)));
        }
        separate(&mut arcs);
        slabs.push(Slab { x, arcs: arcs.iter().map(|a| a.0).collect(), ys: arcs.into_iter().map(|a| a.2).collect() });
    }
    let mut crossings = 0;
    for w in slabs.windows(2) {
        let (a, b) = (&w[0].arcs, &w[1].arcs);
        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort();
        sb.sort();
        if sa == sb && a != b {
            crossings += 1;
        }
    }
    Ok(SlabMap { events, slabs, crossings })
}

/// Sorts fibre roots by `y`, refining until the intervals are disjoint.
fn separate(arcs: &mut [(usize, UPoly, RealRoot)]) {
    loop {
        arcs.sort_by(|a, b| a.2.lo.cmp(&b.2.lo).then(a.2.hi.cmp(&b.2.hi)));
        let mut changed = false;
        for i in 1..arcs.len() {
            if arcs[i - 1].2.hi >= arcs[i].2.lo {
                for j in [i - 1, i] {
                    if !arcs[j].2.is_exact() {
                        let (_, g, r) = &mut arcs[j];
                        refine(g, r);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}
