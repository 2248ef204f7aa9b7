//! Sparse multivariate polynomials over the rationals.
//!
//! [`Poly`] carries its variable count at runtime so that gcd and resultant
//! code can recurse over variables; [`TriPoly`] and [`BiPoly`] are the typed
//! faces used by the geometry (variables `x, y, z` and `x, y` respectively).

mod gcd;
mod io;
mod ops;
mod resultant;
pub mod univariate;

pub use gcd::{div_exact, gcd, square_free};
pub use io::{parse_poly, write_poly, PolyParseError};
pub use ops::{
    level, partial_z, restrict_to_plane, roots_along_segment, roots_along_vertical, resultant_z,
    square_free_part, Restriction, SegmentRoots,
};
pub use resultant::resultant;
pub use univariate::{RealRoot, UPoly};

use crate::num::{qi, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("vertical line through ({x}, {y}) lies in the zero set")]
    VerticalLineInZeroSet { x: String, y: String },
    #[error("restriction to the segment is identically zero")]
    SegmentInZeroSet,
    #[error("resultant vanishes identically: inputs share a factor")]
    CommonFactor,
    #[error("wrong variable count: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds `c0 + c1 x_0 + c2 x_1 + ...` (an affine form).
    pub fn affine(coeffs: &[Q]) -> Self {
        let nvars = coeffs.len() - 1;
        let mut p = Self::constant(nvars, coeffs[0].clone());
        for (i, c) in coeffs[1..].iter().enumerate() {
            p = &p + &Poly::var(nvars, i).scale(c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn uses(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut powers: Vec<Vec<Q>> = Vec::with_capacity(self.nvars);
        for (i, x) in point.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(Q::one());
            for k in 1..=d {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = crate::num::to_f64(c);
                for (i, &k) in e.iter().enumerate() {
                    t *= point[i].powi(k as i32);
                }
                t
            })
            .sum()
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                p.add_term(ne, c * qi(e[var] as i64));
            }
        }
        p
    }

    /// Coefficients of `x_var^k`, `k = 0..=deg`, each a polynomial free of `x_var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[var] as usize;
            ne[var] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (k, cf) in coeffs.iter().enumerate() {
            for (e, c) in &cf.terms {
                let mut ne = e.clone();
                ne[var] += k as u32;
                p.add_term(ne, c.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `x_var`.
    pub fn lead_in(&self, var: usize) -> Poly {
        let d = self.degree_in(var);
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == d {
                let mut ne = e.clone();
                ne[var] = 0;
                out.add_term(ne, c.clone());
            }
        }
        out
    }

    /// Lex-leading term (largest exponent vector, BTreeMap order).
    pub fn leading_term(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().next_back()
    }

    /// Substitutes each variable `x_i` by `subs[i]` (all in a common ring).
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let d = self.degree_in(i) as usize;
                let mut row = vec![Poly::one(target)];
                for k in 1..=d {
                    let next = &row[k - 1] * s;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &cache[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        cache.clear();
        acc
    }

    /// Fixes some variables to constants, keeping the variable count.
    pub fn eval_partial(&self, values: &[Option<Q>]) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut ne = e.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if ne[i] > 0 {
                        t *= num_traits::pow(v.clone(), ne[i] as usize);
                        ne[i] = 0;
                    }
                }
            }
            p.add_term(ne, t);
        }
        p
    }

    /// Univariate view in `x_var`; panics if other variables occur.
    pub fn to_upoly(&self, var: usize) -> UPoly {
        let d = self.degree_in(var) as usize;
        let mut c = vec![Q::zero(); d + 1];
        for (e, v) in &self.terms {
            assert!(
                e.iter().enumerate().all(|(i, &k)| i == var || k == 0),
                "to_upoly: other variables present"
            );
            c[e[var] as usize] += v;
        }
        UPoly::new(c)
    }

    /// Embeds into a ring with more variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = e.clone();
                    ne.resize(nvars, 0);
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables that do not occur.
    pub fn shrink_vars(&self, nvars: usize) -> Poly {
        assert!(self.terms.keys().all(|e| e[nvars..].iter().all(|&k| k == 0)));
        Poly {
            nvars,
            terms: self.terms.iter().map(|(e, c)| (e[..nvars].to_vec(), c.clone())).collect(),
        }
    }

    /// Divides by the lex-leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let s = crate::num::format_rational(c);
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", s)?;
            for (i, &k) in e.iter().enumerate() {
                let name = NAMES.get(i).copied().unwrap_or("w");
                match k {
                    0 => {}
                    1 => write!(f, "*{}", name)?,
                    _ => write!(f, "*{}^{}", name, k)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

macro_rules! typed_poly {
    ($name:ident, $n:expr, $doc:expr) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name(Poly);

        impl $name {
            pub const NVARS: usize = $n;

            /// Wraps a nonzero polynomial in the right number of variables.
            pub fn new(p: Poly) -> Result<Self, AlgebraError> {
                if p.nvars() != $n {
                    return Err(AlgebraError::Arity { expected: $n, got: p.nvars() });
                }
                if p.is_zero() {
                    return Err(AlgebraError::ZeroPolynomial);
                }
                Ok(Self(p))
            }

            pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Q)>) -> Result<Self, AlgebraError> {
                Self::new(Poly::from_terms($n, terms))
            }

            pub fn degree(&self) -> u32 {
                self.0.total_degree()
            }

            pub fn poly(&self) -> &Poly {
                &self.0
            }

            pub fn into_poly(self) -> Poly {
                self.0
            }

            pub fn eval(&self, p: &[Q]) -> Q {
                self.0.eval(p)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }
    };
}

typed_poly!(TriPoly, 3, "Nonzero polynomial in `x, y, z`.");
typed_poly!(BiPoly, 2, "Nonzero polynomial in the plane chart `(x, y)`.");

/// Convenience: `x`, `y`, `z` as three-variable polynomials.
pub fn xyz() -> (Poly, Poly, Poly) {
    (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2))
}

pub fn xy() -> (Poly, Poly) {
    (Poly::var(2, 0), Poly::var(2, 1))
}
