//! Multivariate gcd over the rationals by recursive primitive remainder sequences.

use super::Poly;

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let n = a.nvars();
    let (be, bc) = b.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rem = a.clone();
    let mut quot = Poly::zero(n);
    while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        if re.iter().zip(&be).any(|(r, b)| r < b) {
            return None;
        }
        let e: Vec<u32> = re.iter().zip(&be).map(|(r, b)| r - b).collect();
        let t = Poly::monomial(e, rc / &bc);
        rem = &rem - &(&t * b);
        quot = &quot + &t;
    }
    Some(quot)
}

fn highest_var(p: &Poly) -> Option<usize> {
    (0..p.nvars()).rev().find(|&v| p.uses(v))
}

/// Content with respect to `var`: gcd of the coefficients of `var^k`.
fn content(p: &Poly, var: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in p.coeffs_in(var) {
        if !c.is_zero() {
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one(p.nvars());
            }
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` in `var`, up to a factor free of `var`.
fn sparse_prem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lb = b.lead_in(var);
    let mut r = a.clone();
    while !r.is_zero() && r.uses(var) && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.lead_in(var);
        let mut e = vec![0; a.nvars()];
        e[var] = dr - db;
        let shift = Poly::monomial(e, num_traits::One::one());
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Greatest common divisor, normalised to a monic lex-leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let n = a.nvars();
    let va = highest_var(a);
    let vb = highest_var(b);
    let var = match (va, vb) {
        (None, _) | (_, None) => return Poly::one(n),
        (Some(x), Some(y)) => x.max(y),
    };
    if !a.uses(var) {
        return gcd(a, &content(b, var));
    }
    if !b.uses(var) {
        return gcd(&content(a, var), b);
    }
    let ca = content(a, var);
    let cb = content(b, var);
    let mut p = div_exact(a, &ca).expect("content divides");
    let mut q = div_exact(b, &cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = sparse_prem(&p, &q, var);
        if r.is_zero() {
            break q;
        }
        if !r.uses(var) {
            break Poly::one(n);
        }
        let cr = content(&r, var);
        p = q;
        q = div_exact(&r, &cr).expect("content divides");
    };
    let g = div_exact(&g, &content(&g, var)).expect("content divides");
    (&gcd(&ca, &cb) * &g).monic()
}

/// Square-free part: `f / gcd(f, df/dx_1, ..., df/dx_n)`.
pub fn square_free(f: &Poly) -> Poly {
    if f.is_constant() {
        return f.clone();
    }
    let mut g = f.clone();
    for v in 0..f.nvars() {
        let d = f.derivative(v);
        if !d.is_zero() {
            g = gcd(&g, &d);
        }
    }
    if g.is_constant() {
        return f.clone();
    }
    div_exact(f, &g).expect("gcd divides")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use crate::poly::xyz;

    #[test]
    fn gcd_of_products() {
        let (x, y, z) = xyz();
        let a = &(&x + &y) * &(&z - &Poly::one(3));
        let b = &(&x + &y) * &(&z + &x);
        let g = gcd(&a, &b);
        assert_eq!(g, (&x + &y).monic());
        assert!(gcd(&x, &y).is_constant());
    }

    #[test]
    fn exact_division() {
        let (x, y, _) = xyz();
        let a = &(&x + &y) * &(&x - &y);
        assert_eq!(div_exact(&a, &(&x - &y)), Some(&x + &y));
        assert_eq!(div_exact(&x, &y), None);
        let _ = qi(1);
    }

    #[test]
    fn square_free_examples() {
        let (x, y, z) = xyz();
        let one = Poly::one(3);
        assert_eq!(square_free(&(&z - &one).pow(2)).monic(), (&z - &one).monic());
        let xyzp = &(&x * &y) * &z;
        assert_eq!(square_free(&xyzp), xyzp);
        let f = &(&x + &y).pow(2) * &z;
        let s = square_free(&f);
        assert!(div_exact(&s, &(&(&x + &y) * &z)).is_some_and(|q| q.is_constant()));
    }
}
