//! Rewriting `N^p y` in terms of shifts that lie far from `p` along the
//! first axis.
//!
//! Starting from `N^p y = f/a_p - sum_{s != p} (a_s/a_p) N^s y`, every term
//! whose first-coordinate offset from `p` lies in `[1, s]` is replaced using
//! the equation shifted by `i - p`. Offsets strictly increase under
//! substitution because `p` is the only point of minimal first coordinate,
//! so the process stops after at most `s` generations.

use std::collections::BTreeMap;

use num_traits::One;

use crate::equation::Plde;
use crate::factored::FactoredPoly;
use crate::lattice::IntVec;
use crate::polyring::{Poly, Rational, RationalFunction};
use crate::spread::Dispersion;

use super::BoundError;

/// `num / den` with a monic factored denominator built from shifted copies
/// of the factors of `a_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: Poly,
    pub den: FactoredPoly,
}

impl Frac {
    fn reduced(num: Poly, den: FactoredPoly) -> Frac {
        if num.is_zero() {
            return Frac { den: FactoredPoly::one(num.vars()), num };
        }
        let vars = num.vars().clone();
        let mut num = num;
        let mut removed = Vec::new();
        for f in den.factors() {
            let mut k = 0;
            while k < f.mult {
                match num.try_div(&f.poly) {
                    Some(q) => {
                        num = q;
                        k += 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                removed.push((f.poly.clone(), k));
            }
        }
        let cancel = FactoredPoly::new(&vars, Rational::one(), removed).expect("canonical factors");
        Frac { num, den: den.remove(&cancel) }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn add(&self, o: &Frac) -> Frac {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        let l = self.den.lcm(&o.den);
        let a = self.num.mul(&l.remove(&self.den).expand());
        let b = o.num.mul(&l.remove(&o.den).expand());
        Frac::reduced(a.add(&b), l)
    }

    fn shift(&self, d: &[i64]) -> Frac {
        Frac { num: self.num.shift(d), den: self.den.shift(d) }
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        RationalFunction::new(self.num.clone(), self.den.expand()).expect("nonzero denominator")
    }
}

#[derive(Clone, Debug)]
pub struct StripResult {
    pub p: IntVec,
    /// Strip width; `None` when no substitution was requested.
    pub s: Option<u64>,
    /// `p` and every substituted point.
    pub rminus: Vec<IntVec>,
    /// Points left on the right-hand side, all beyond the strip.
    pub rplus: Vec<IntVec>,
    pub b: Frac,
    pub terms: BTreeMap<IntVec, Frac>,
    /// Reduced common denominator of `b` and all `terms`.
    pub d_actual: FactoredPoly,
    /// `a_p` without its unit.
    pub a_p: FactoredPoly,
}

impl StripResult {
    /// `prod_{i in R^-} N^{i-p} a_p`, of which `d_actual` is a divisor.
    pub fn product_bound(&self) -> FactoredPoly {
        let mut out = FactoredPoly::one(self.a_p.vars());
        for i in &self.rminus {
            out = out.mul(&self.a_p.shift(&offset(i, &self.p)));
        }
        out
    }

    /// `N^p y - b - sum_i c_i N^i y` for a candidate solution `y`.
    pub fn residual(&self, y: &RationalFunction) -> RationalFunction {
        let mut r = y.shift(&self.p).sub(&self.b.to_rational_function());
        for (i, c) in &self.terms {
            r = r.sub(&c.to_rational_function().mul(&y.shift(i)));
        }
        r
    }
}

fn offset(i: &[i64], p: &[i64]) -> IntVec {
    i.iter().zip(p).map(|(a, b)| a - b).collect()
}

pub fn strip_rewrite(eq: &Plde, p: &[i64], s: Dispersion) -> Result<StripResult, BoundError> {
    let width = match s {
        Dispersion::NegInfinity => None,
        Dispersion::Finite(v) => Some(v),
        Dispersion::Infinity => return Err(BoundError::InfiniteDispersion),
    };
    let a_p_full = eq.coefficient(p).ok_or_else(|| BoundError::NotInSupport(p.to_vec()))?;
    for q in eq.terms().keys() {
        if q.as_slice() != p && q[0] <= p[0] {
            return Err(BoundError::NotSingleton { p: p.to_vec(), other: q.clone() });
        }
    }
    let unit = a_p_full.unit().clone();
    let a_p = a_p_full.monic();
    let vars = eq.vars();
    let b0 = Frac::reduced(eq.rhs().scale(&unit.recip()), a_p.clone());
    let c0: BTreeMap<IntVec, Frac> = eq
        .terms()
        .iter()
        .filter(|(q, _)| q.as_slice() != p)
        .map(|(q, a)| (q.clone(), Frac::reduced(a.expand().scale(&(-unit.recip())), a_p.clone())))
        .collect();
    let mut b = b0.clone();
    let mut terms = c0.clone();
    let mut rminus = vec![p.to_vec()];
    let limit = width.map_or(0, |w| w as i64);
    loop {
        let next =
            terms.keys().filter(|i| (1..=limit).contains(&(i[0] - p[0]))).min_by_key(|i| (i[0], (*i).clone())).cloned();
        let Some(i) = next else { break };
        let c = terms.remove(&i).expect("present");
        let d = offset(&i, p);
        b = b.add(&c.mul(&b0.shift(&d)));
        for (q, cq) in &c0 {
            let target: IntVec = q.iter().zip(&d).map(|(x, y)| x + y).collect();
            let add = c.mul(&cq.shift(&d));
            let entry =
                terms.remove(&target).unwrap_or_else(|| Frac { num: Poly::zero(vars), den: FactoredPoly::one(vars) });
            let sum = entry.add(&add);
            if !sum.num.is_zero() {
                terms.insert(target, sum);
            }
        }
        rminus.push(i);
    }
    let rplus: Vec<IntVec> = terms.keys().cloned().collect();
    for q in &rplus {
        assert!(q[0] - p[0] > limit, "point {q:?} left inside the strip");
    }
    let mut d_actual = b.den.clone();
    for c in terms.values() {
        d_actual = d_actual.lcm(&c.den);
    }
    let out = StripResult { p: p.to_vec(), s: width, rminus, rplus, b, terms, d_actual, a_p };
    debug_assert!(out.d_actual.divides(&out.product_bound()));
    Ok(out)
}
