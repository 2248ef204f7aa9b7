//! Geometric operations on trivariate and bivariate polynomials.

use super::univariate::{refine, UPoly};
use super::{resultant, square_free, AlgebraError, BiPoly, Poly, RealRoot, TriPoly};
use crate::num::{format_rational, one, qi, zero, Q};

/// Formal derivative in `z`; `None` when `f` has no `z` terms.
pub fn partial_z(f: &TriPoly) -> Option<TriPoly> {
    TriPoly::new(f.poly().derivative(2)).ok()
}

pub fn square_free_part(f: &TriPoly) -> TriPoly {
    TriPoly::new(square_free(f.poly())).expect("square-free part is nonzero")
}

/// Outcome of substituting a plane into a trivariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// The plane lies inside the zero set.
    Contained,
    /// Nonzero constant: the plane misses the zero set.
    Empty,
    Curve(BiPoly),
}

impl Restriction {
    pub fn curve(&self) -> Option<&BiPoly> {
        match self {
            Restriction::Curve(g) => Some(g),
            _ => None,
        }
    }
}

/// Substitutes `z = a x + b y + c`; the result lives in the `(x, y)` chart.
pub fn restrict_to_plane(f: &TriPoly, a: &Q, b: &Q, c: &Q) -> Restriction {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let z = Poly::affine(&[c.clone(), a.clone(), b.clone()]);
    let g = f.poly().compose(&[x, y, z]);
    if g.is_zero() {
        Restriction::Contained
    } else if g.is_constant() {
        Restriction::Empty
    } else {
        Restriction::Curve(BiPoly::new(g).expect("nonzero"))
    }
}

/// `Res_z(f, g)` as a polynomial in `(x, y)`.
pub fn resultant_z(f: &TriPoly, g: &TriPoly) -> Result<BiPoly, AlgebraError> {
    let r = resultant(f.poly(), g.poly(), 2);
    if r.is_zero() {
        return Err(AlgebraError::CommonFactor);
    }
    Ok(BiPoly::new(r.shrink_vars(2)).expect("nonzero"))
}

fn vertical_upoly(f: &TriPoly, x0: &Q, y0: &Q) -> Result<UPoly, AlgebraError> {
    let u = f.poly().eval_partial(&[Some(x0.clone()), Some(y0.clone()), None]).to_upoly(2);
    if u.is_zero() {
        return Err(AlgebraError::VerticalLineInZeroSet {
            x: format_rational(x0),
            y: format_rational(y0),
        });
    }
    Ok(u)
}

/// Real roots of `F(z) = f(x0, y0, z)` with multiplicities.
pub fn roots_along_vertical(f: &TriPoly, x0: &Q, y0: &Q) -> Result<Vec<RealRoot>, AlgebraError> {
    Ok(vertical_upoly(f, x0, y0)?.real_roots())
}

/// Number of zeros of `f` on the open downward vertical ray from `q`, with multiplicity.
pub fn level(q: &[Q; 3], f: &TriPoly) -> Result<usize, AlgebraError> {
    let u = vertical_upoly(f, &q[0], &q[1])?;
    let mut total = 0usize;
    for (i, fac) in u.square_free_factors().iter().enumerate() {
        if fac.degree() == 0 {
            continue;
        }
        let s = super::univariate::Sturm::new(fac);
        let mut below = s.count_below(&q[2]);
        if fac.sign_at(&q[2]) == 0 {
            below -= 1;
        }
        total += below * (i + 1);
    }
    Ok(total)
}

/// Roots of a polynomial restricted to a segment, in the parameter `t in [0, 1]`.
#[derive(Clone, Debug)]
pub struct SegmentRoots {
    pub roots: Vec<RealRoot>,
    /// Sign on each open interval between consecutive roots (`roots.len() + 1` entries).
    pub signs: Vec<i32>,
}

/// Univariate restriction `t -> g(p + t (q - p))`.
pub fn restrict_to_segment(g: &Poly, p: &[Q], q: &[Q]) -> UPoly {
    let n = g.nvars();
    assert!(p.len() == n && q.len() == n);
    let subs: Vec<Poly> = (0..n)
        .map(|i| Poly::affine(&[p[i].clone(), &q[i] - &p[i]]))
        .collect();
    g.compose(&subs).to_upoly(0)
}

/// Roots and interval signs of `g` along the segment `p -> q`.
pub fn roots_along_segment(g: &Poly, p: &[Q], q: &[Q]) -> Result<SegmentRoots, AlgebraError> {
    let u = restrict_to_segment(g, p, q);
    if u.is_zero() {
        return Err(AlgebraError::SegmentInZeroSet);
    }
    let factors = u.square_free_factors();
    let mut roots = u.real_roots_in(&zero(), &one());
    // Interior sample points need strict gaps between intervals.
    loop {
        let mut ok = true;
        for i in 1..roots.len() {
            if roots[i - 1].hi >= roots[i].lo {
                ok = false;
                for j in [i - 1, i] {
                    let m = roots[j].multiplicity as usize - 1;
                    refine(&factors[m], &mut roots[j]);
                }
            }
        }
        if ok {
            break;
        }
    }
    let mut cuts = vec![zero()];
    for r in &roots {
        cuts.push(r.lo.clone());
        cuts.push(r.hi.clone());
    }
    cuts.push(one());
    let mut signs = Vec::with_capacity(roots.len() + 1);
    for k in 0..=roots.len() {
        let a = &cuts[2 * k];
        let b = &cuts[2 * k + 1];
        let s = if a == b {
            // Degenerate interval at a segment endpoint.
            u.sign_at(a)
        } else {
            // Open gap between roots: pick a point avoiding them.
            let mut m = (a + b) / qi(2);
            let mut s = u.sign_at(&m);
            let mut w = b - a;
            while s == 0 {
                w /= qi(3);
                m = a + &w;
                s = u.sign_at(&m);
            }
            s
        };
        signs.push(s);
    }
    Ok(SegmentRoots { roots, signs })
}
