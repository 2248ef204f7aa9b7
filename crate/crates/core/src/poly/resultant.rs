//! Sylvester resultants via fraction-free (Bareiss) elimination.

use super::{div_exact, Poly};

/// Sylvester matrix of `a` and `b` with respect to `var`.
pub(crate) fn sylvester(a: &Poly, b: &Poly, var: usize) -> Vec<Vec<Poly>> {
    let n = a.nvars();
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    let m = ca.len() - 1;
    let k = cb.len() - 1;
    let size = m + k;
    let mut rows = Vec::with_capacity(size);
    for i in 0..k {
        let mut row = vec![Poly::zero(n); size];
        for (j, c) in ca.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Poly::zero(n); size];
        for (j, c) in cb.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant over the polynomial ring by Bareiss elimination.
pub(crate) fn bareiss_det(mut m: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    let mut negate = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = div_exact(&num, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Resultant of `a` and `b` with respect to variable `var`.
///
/// Both inputs must actually involve `var`; a constant-in-`var` input
/// gives the usual convention `res(a, c) = c^deg(a)`.
pub fn resultant(a: &Poly, b: &Poly, var: usize) -> Poly {
    let n = a.nvars();
    if a.is_zero() || b.is_zero() {
        return Poly::zero(n);
    }
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    if da == 0 {
        return a.pow(db);
    }
    if db == 0 {
        return b.pow(da);
    }
    bareiss_det(sylvester(a, b, var), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qi;
    use crate::poly::xyz;

    #[test]
    fn circle_and_line() {
        let (x, y, z) = xyz();
        // z^2 + x^2 - 1 against z - y: eliminate z -> x^2 + y^2 - 1
        let f = &(&z.pow(2) + &x.pow(2)) - &Poly::one(3);
        let g = &z - &y;
        let r = resultant(&f, &g, 2);
        let expect = &(&x.pow(2) + &y.pow(2)) - &Poly::one(3);
        assert_eq!(r, expect);
    }

    #[test]
    fn common_root_gives_zero() {
        let (x, _, z) = xyz();
        let f = &(&z - &x) * &(&z + &Poly::one(3));
        let g = &(&z - &x) * &z;
        assert!(resultant(&f, &g, 2).is_zero());
        let r = resultant(&(&z - &x), &(&z - &Poly::constant(3, qi(2))), 2);
        assert_eq!(r.eval(&[qi(2), qi(0), qi(0)]), qi(0));
    }
}
