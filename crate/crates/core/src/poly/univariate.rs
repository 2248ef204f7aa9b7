//! Dense univariate polynomials with Sturm-sequence root isolation.

use crate::num::{qi, to_f64, Q};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Q>,
}

/// A real root isolated in `[lo, hi]`; `lo == hi` when the root is rational
/// and was hit exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: Q,
    pub hi: Q,
    pub multiplicity: u32,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn approx(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::num::format_rational(c))?;
        }
        write!(f, "]")
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| qi(v)).collect())
    }

    pub fn zero() -> Self {
        Self { c: vec![] }
    }

    pub fn constant(v: Q) -> Self {
        Self::new(vec![v])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.c.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        crate::num::sign(&self.eval(x))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect())
    }

    pub fn scale(&self, s: &Q) -> UPoly {
        UPoly::new(self.c.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = o.c.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.lead();
        let dn = d.c.len();
        let mut quot = vec![Q::zero(); r.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let coef = &r[k + dn - 1] / &dl;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dc;
                }
            }
            quot[k] = coef;
        }
        r.truncate(dn - 1);
        (UPoly::new(quot), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free factorisation: `self = lead * prod factors[i]^(i+1)`.
    pub fn square_free_factors(&self) -> Vec<UPoly> {
        if self.degree() == 0 {
            return vec![];
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_rem(&a).0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == 0) {
            out.pop();
        }
        out
    }

    pub fn square_free_part(&self) -> UPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Q::one()));
        }
        seq
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self.c[..self.c.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(Q::zero);
        m + qi(1)
    }

    /// All real roots with multiplicities, sorted, with pairwise disjoint intervals.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.degree() == 0 {
            return vec![];
        }
        let b = self.root_bound();
        self.real_roots_in(&-b.clone(), &b)
    }

    /// Real roots in the closed interval `[lo, hi]`.
    pub fn real_roots_in(&self, lo: &Q, hi: &Q) -> Vec<RealRoot> {
        if self.degree() == 0 || lo > hi {
            return vec![];
        }
        let mut all: Vec<RealRoot> = Vec::new();
        let factors = self.square_free_factors();
        for (i, fac) in factors.iter().enumerate() {
            if fac.degree() == 0 {
                continue;
            }
            let sturm = Sturm::new(fac);
            for (a, b) in sturm.isolate(lo, hi) {
                all.push(RealRoot { lo: a, hi: b, multiplicity: i as u32 + 1 });
            }
        }
        // Roots of distinct square-free factors are distinct; separate their intervals.
        all.sort_by(|a, b| a.lo.cmp(&b.lo));
        loop {
            let mut changed = false;
            for i in 1..all.len() {
                if all[i - 1].hi >= all[i].lo {
                    for j in [i - 1, i] {
                        if !all[j].is_exact() {
                            let fac = &factors[all[j].multiplicity as usize - 1];
                            refine(fac, &mut all[j]);
                            changed = true;
                        }
                    }
                }
            }
            all.sort_by(|a, b| a.lo.cmp(&b.lo));
            if !changed {
                break;
            }
        }
        all
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_distinct_roots(&self, a: &Q, b: &Q) -> usize {
        Sturm::new(&self.square_free_part()).count(a, b)
    }
}

/// Halves an isolating interval of a root of square-free `p`.
pub fn refine(p: &UPoly, root: &mut RealRoot) {
    if root.is_exact() {
        return;
    }
    let m = root.midpoint();
    let sm = p.sign_at(&m);
    if sm == 0 {
        root.lo = m.clone();
        root.hi = m;
        return;
    }
    let shi = p.sign_at(&root.hi);
    if shi == 0 {
        // Root at hi would make it exact; isolation never leaves that state.
        root.lo = root.hi.clone();
        return;
    }
    if sm == shi {
        root.hi = m;
    } else {
        root.lo = m;
    }
}

/// Refines until the interval width is below `eps`.
pub fn refine_to(p: &UPoly, root: &mut RealRoot, eps: &Q) {
    let sf = p.square_free_part();
    while !root.is_exact() && &(&root.hi - &root.lo) > eps {
        refine(&sf, root);
    }
}

pub struct Sturm {
    seq: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Self {
        Self { seq: p.sturm_sequence() }
    }

    fn variations(&self, x: &Q) -> usize {
        let mut last = 0i32;
        let mut v = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    fn variations_at_neg_inf(&self) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let mut s = crate::num::sign(&p.lead());
            if p.degree() % 2 == 1 {
                s = -s;
            }
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Distinct roots in `(-inf, b]`.
    pub fn count_below(&self, b: &Q) -> usize {
        self.variations_at_neg_inf().saturating_sub(self.variations(b))
    }

    /// Isolating intervals for the roots in `[lo, hi]`.
    pub fn isolate(&self, lo: &Q, hi: &Q) -> Vec<(Q, Q)> {
        let p = &self.seq[0];
        let mut out = Vec::new();
        if p.sign_at(lo) == 0 {
            out.push((lo.clone(), lo.clone()));
        }
        let mut stack = vec![(lo.clone(), hi.clone(), self.count(lo, hi))];
        while let Some((a, b, n)) = stack.pop() {
            if n == 0 {
                continue;
            }
            if n == 1 {
                if p.sign_at(&b) == 0 {
                    out.push((b.clone(), b));
                } else {
                    out.push((a, b));
                }
                continue;
            }
            let m = (&a + &b) / qi(2);
            let left = self.count(&a, &m);
            stack.push((m.clone(), b, n - left));
            stack.push((a, m, left));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}
