//! Exact feasibility of linear systems `a . v >= b`, `a . v = b` over Q by
//! Fourier-Motzkin elimination.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::polyring::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: &[i64], rel: Relation, rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            rel,
            rhs: Rational::from_integer(rhs.into()),
        }
    }

    pub fn holds(&self, v: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(v).map(|(a, x)| a * x).sum();
        match self.rel {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `coeffs . v >= rhs`, scaled so the largest coefficient magnitude is 1.
type Ineq = (Vec<Rational>, Rational);

fn normalized(coeffs: Vec<Rational>, rhs: Rational) -> Ineq {
    let m = coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
    if m.is_zero() {
        return (coeffs, rhs);
    }
    (coeffs.iter().map(|c| c / &m).collect(), rhs / m)
}

/// One rational solution, or `None` if the system is infeasible.
pub fn lp_feasible(constraints: &[Constraint], nvars: usize) -> Option<Vec<Rational>> {
    let mut system: BTreeSet<Ineq> = BTreeSet::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint length must equal the number of unknowns");
        system.insert(normalized(c.coeffs.clone(), c.rhs.clone()));
        if c.rel == Relation::Eq {
            system.insert(normalized(c.coeffs.iter().map(|x| -x).collect(), -c.rhs.clone()));
        }
    }
    // stages[i] holds the system over unknowns 0..=i (later ones eliminated)
    let mut stages: Vec<BTreeSet<Ineq>> = vec![BTreeSet::new(); nvars];
    for i in (0..nvars).rev() {
        let mut next = BTreeSet::new();
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for q in &system {
            let c = &q.0[i];
            if c.is_zero() {
                next.insert(q.clone());
            } else if c.is_positive() {
                lower.push(q);
            } else {
                upper.push(q);
            }
        }
        for lo in &lower {
            for up in &upper {
                // lo: a v_i + ... >= b (a > 0), up: -c v_i + ... >= d (c > 0)
                let a = &lo.0[i];
                let c = -&up.0[i];
                let coeffs: Vec<Rational> = lo.0.iter().zip(&up.0).map(|(x, y)| x * &c + y * a).collect();
                let rhs = &lo.1 * &c + &up.1 * a;
                next.insert(normalized(coeffs, rhs));
            }
        }
        stages[i] = std::mem::replace(&mut system, next);
    }
    if system.iter().any(|(_, b)| b.is_positive()) {
        return None;
    }
    let mut v = vec![Rational::zero(); nvars];
    for i in 0..nvars {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b) in &stages[i] {
            let c = &a[i];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (0..i).map(|j| &a[j] * &v[j]).sum();
            let bound = (b - rest) / c;
            if c.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        let zero = Rational::zero();
        v[i] = match (lo, hi) {
            (Some(l), _) if l > zero => l,
            (_, Some(h)) if h < zero => h,
            _ => zero,
        };
    }
    for c in constraints {
        assert!(c.holds(&v), "Fourier-Motzkin back substitution produced an infeasible point");
    }
    Some(v)
}
