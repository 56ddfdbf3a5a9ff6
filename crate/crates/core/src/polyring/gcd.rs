//! Multivariate gcd by recursive content extraction and primitive
//! pseudo-remainder sequences over a main variable.

use std::collections::BTreeMap;

use super::Poly;

/// Normalized gcd: integer-primitive with positive leading coefficient.
/// `gcd(p, 0) = normalize(p)` and `gcd(0, 0) = 0`.
pub fn gcd_poly(p: &Poly, q: &Poly) -> Poly {
    gcd_rec(p, q).primitive()
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.vars());
    }
    let v = main_variable(a, b);
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.try_div(&ca).expect("content divides");
    let pb = b.try_div(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    c.mul(&g).primitive()
}

/// Prefer a variable occurring in both inputs, of smallest degree.
fn main_variable(a: &Poly, b: &Poly) -> usize {
    let n = a.nvars();
    let common = (0..n)
        .filter(|&i| a.degree_in(i) > 0 && b.degree_in(i) > 0)
        .min_by_key(|&i| a.degree_in(i).max(b.degree_in(i)));
    common.unwrap_or_else(|| (0..n).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0).expect("non-constant input"))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `n_v`.
pub(crate) fn content_in(p: &Poly, v: usize) -> Poly {
    let mut it = p.coeffs_in(v).into_values();
    let mut g = it.next().map(|c| c.primitive()).unwrap_or_else(|| Poly::zero(p.vars()));
    for c in it {
        if g.is_one() {
            break;
        }
        g = gcd_rec(&g, &c);
    }
    g
}

fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.try_div(&c).expect("content divides").primitive()
}

fn prem(f: &Poly, g: &Poly, v: usize) -> Poly {
    let dg = g.degree_in(v);
    let lc_g = g.coeffs_in(v).remove(&dg).expect("leading coefficient");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lc_r = r.coeffs_in(v).remove(&dr).expect("leading coefficient");
        let mut shift = BTreeMap::new();
        shift.insert(dr - dg, lc_r);
        let t = Poly::from_coeffs_in(r.vars(), v, &shift);
        r = r.mul(&lc_g).sub(&t.mul(g));
    }
    r
}

/// Gcd of two polynomials that are primitive with respect to `n_v`.
fn primitive_prs(a: Poly, b: Poly, v: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    if g.degree_in(v) == 0 {
        return Poly::one(f.vars());
    }
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return g.primitive();
        }
        if r.degree_in(v) == 0 {
            return Poly::one(f.vars());
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
}
