//! Convex regions cut out by affine inequalities: Fourier-Motzkin feasibility
//! with witnesses, and exact clipping of segments.

use crate::num::{qi, sign, Q};
use num_traits::{One, Signed, Zero};

/// `c + a . x` over `n` variables, with a strict (`> 0`) or closed (`>= 0`) sense.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub c: Q,
    pub a: Vec<Q>,
    pub strict: bool,
}

impl HalfSpace {
    pub fn new(c: Q, a: Vec<Q>, strict: bool) -> Self {
        Self { c, a, strict }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = self.c.clone();
        for (ai, xi) in self.a.iter().zip(x) {
            if !ai.is_zero() {
                s += ai * xi;
            }
        }
        s
    }

    pub fn satisfied(&self, x: &[Q]) -> bool {
        let v = sign(&self.eval(x));
        if self.strict {
            v > 0
        } else {
            v >= 0
        }
    }

    /// Same half-space with the opposite side (closure flips with it).
    pub fn complement(&self) -> HalfSpace {
        HalfSpace { c: -&self.c, a: self.a.iter().map(|v| -v).collect(), strict: !self.strict }
    }

    fn normalized(&self) -> HalfSpace {
        let piv = self.a.iter().find(|v| !v.is_zero()).map(|v| v.abs()).unwrap_or_else(|| {
            if self.c.is_zero() {
                Q::one()
            } else {
                self.c.abs()
            }
        });
        HalfSpace {
            c: &self.c / &piv,
            a: self.a.iter().map(|v| v / &piv).collect(),
            strict: self.strict,
        }
    }
}

fn dedup(mut v: Vec<HalfSpace>) -> Vec<HalfSpace> {
    v = v.into_iter().map(|h| h.normalized()).collect();
    v.sort_by(|x, y| (&x.a, &x.c, x.strict).cmp(&(&y.a, &y.c, y.strict)));
    v.dedup();
    // Of two constraints with the same direction keep the tighter one.
    let mut out: Vec<HalfSpace> = Vec::with_capacity(v.len());
    for h in v {
        if let Some(last) = out.last_mut() {
            if last.a == h.a {
                if h.c < last.c || (h.c == last.c && h.strict) {
                    *last = h;
                }
                continue;
            }
        }
        out.push(h);
    }
    out
}

/// Eliminates the last variable.
fn eliminate(cons: &[HalfSpace]) -> Vec<HalfSpace> {
    let k = cons[0].a.len() - 1;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for h in cons {
        match sign(&h.a[k]) {
            1 => pos.push(h),
            -1 => neg.push(h),
            _ => out.push(HalfSpace { c: h.c.clone(), a: h.a[..k].to_vec(), strict: h.strict }),
        }
    }
    for p in &pos {
        for n in &neg {
            let wp = -&n.a[k];
            let wn = p.a[k].clone();
            let c = &p.c * &wp + &n.c * &wn;
            let a = (0..k).map(|i| &p.a[i] * &wp + &n.a[i] * &wn).collect();
            out.push(HalfSpace { c, a, strict: p.strict || n.strict });
        }
    }
    dedup(out)
}

/// A point satisfying every constraint, or `None` if the region is empty.
pub fn feasible_point(cons: &[HalfSpace], nvars: usize) -> Option<Vec<Q>> {
    let mut stages: Vec<Vec<HalfSpace>> = vec![dedup(cons.to_vec())];
    for _ in 0..nvars {
        let cur = stages.last().unwrap();
        if cur.is_empty() {
            break;
        }
        let next = eliminate(cur);
        stages.push(next);
    }
    let last = stages.last().unwrap();
    if last.first().map(|h| h.a.is_empty()).unwrap_or(true) && !last.iter().all(|h| h.satisfied(&[])) {
        return None;
    }
    let mut x: Vec<Q> = Vec::with_capacity(nvars);
    // stages[s] constrains variables 0..nvars-s; choose them from the deepest stage up.
    for v in 0..nvars {
        let s = nvars - v - 1;
        let cons = if s < stages.len() { &stages[s] } else { &stages[stages.len() - 1] };
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for h in cons {
            if h.a.len() <= v || h.a[v].is_zero() {
                continue;
            }
            // c + a_v x_v + rest(x_0..x_{v-1}) (>) 0; later variables are absent at this stage.
            if h.a[v + 1..].iter().any(|t| !t.is_zero()) {
                continue;
            }
            let mut rest = h.c.clone();
            for i in 0..v {
                rest += &h.a[i] * &x[i];
            }
            let bound = -rest / &h.a[v];
            if h.a[v].is_positive() {
                if lo.as_ref().map(|(b, s)| bound > *b || (bound == *b && h.strict && !s)).unwrap_or(true) {
                    lo = Some((bound, h.strict));
                }
            } else if hi.as_ref().map(|(b, s)| bound < *b || (bound == *b && h.strict && !s)).unwrap_or(true) {
                hi = Some((bound, h.strict));
            }
        }
        let val = match (lo, hi) {
            (None, None) => Q::zero(),
            (Some((l, _)), None) => l + Q::one(),
            (None, Some((h, _))) => h - Q::one(),
            (Some((l, ls)), Some((h, hs))) => {
                if l == h {
                    if ls || hs {
                        return None;
                    }
                    l
                } else if l > h {
                    return None;
                } else {
                    (l + h) / qi(2)
                }
            }
        };
        x.push(val);
    }
    if cons.iter().all(|h| h.satisfied(&x)) {
        Some(x)
    } else {
        None
    }
}

/// Interval of reals with optionally open ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub lo_open: bool,
    pub hi: Q,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: Q, hi: Q) -> Self {
        Self { lo, lo_open: false, hi, hi_open: false }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    /// Nonempty interior.
    pub fn has_interior(&self) -> bool {
        self.lo < self.hi
    }
}

/// Parameters `t in [0, 1]` with `p + t (q - p)` inside every half-space.
pub fn clip_segment(p: &[Q], q: &[Q], cons: &[HalfSpace]) -> Interval {
    let mut iv = Interval::closed(Q::zero(), Q::one());
    let d: Vec<Q> = p.iter().zip(q).map(|(a, b)| b - a).collect();
    for h in cons {
        let f0 = h.eval(p);
        let mut slope = Q::zero();
        for (ai, di) in h.a.iter().zip(&d) {
            slope += ai * di;
        }
        if slope.is_zero() {
            let ok = if h.strict { f0.is_positive() } else { !f0.is_negative() };
            if !ok {
                return Interval { lo: Q::one(), lo_open: true, hi: Q::zero(), hi_open: true };
            }
            continue;
        }
        let t = -&f0 / &slope;
        if slope.is_positive() {
            if t > iv.lo || (t == iv.lo && h.strict) {
                iv.lo = t;
                iv.lo_open = h.strict;
            }
        } else if t < iv.hi || (t == iv.hi && h.strict) {
            iv.hi = t;
            iv.hi_open = h.strict;
        }
    }
    iv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    fn h(c: i64, a: &[i64], strict: bool) -> HalfSpace {
        HalfSpace::new(qi(c), a.iter().map(|&v| qi(v)).collect(), strict)
    }

    #[test]
    fn fm_feasibility() {
        // 0 < x < 1, 0 < y < x, z > x + y
        let cons = vec![
            h(0, &[1, 0, 0], true),
            h(1, &[-1, 0, 0], true),
            h(0, &[0, 1, 0], true),
            h(0, &[1, -1, 0], true),
            h(0, &[-1, -1, 1], true),
        ];
        let p = feasible_point(&cons, 3).unwrap();
        assert!(cons.iter().all(|c| c.satisfied(&p)));
        // x > 0 and x < 0
        assert!(feasible_point(&[h(0, &[1, 0, 0], true), h(0, &[-1, 0, 0], true)], 3).is_none());
        // x >= 0 and x <= 0 is the plane x = 0
        assert!(feasible_point(&[h(0, &[1, 0, 0], false), h(0, &[-1, 0, 0], false)], 3).is_some());
        assert!(feasible_point(&[], 3).is_some());
    }

    #[test]
    fn segment_clip() {
        let p = [qi(-1), qi(0), qi(0)];
        let q_ = [qi(1), qi(0), qi(0)];
        let iv = clip_segment(&p, &q_, &[h(0, &[1, 0, 0], true)]);
        assert_eq!((iv.lo.clone(), iv.lo_open), (q(1, 2), true));
        assert!(iv.has_interior());
        let iv = clip_segment(&p, &q_, &[h(-5, &[1, 0, 0], true)]);
        assert!(iv.is_empty());
    }
}
