//! Shift equivalence of irreducible polynomials, spreads and dispersions.
//!
//! `shift_equiv(p, q)` is the set of integer `s` with `q(n+s) = c p(n)`.
//! It is computed exactly, one homogeneous layer at a time: matching the
//! degree-`e` layer of `q(n+tau)` against `c p` is a linear condition on
//! `tau` once `tau` is restricted to the directions annihilating every
//! layer above `e+1`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::factored::FactoredPoly;
use crate::lattice::{solve_integer, IntLattice, IntVec, ShiftCoset};
use crate::linalg::{self, QMatrix};
use crate::polyring::{gcd_poly, Monomial, Poly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpreadError {
    #[error("spread of the constant polynomial {0} is not defined")]
    Constant(String),
}

/// Dispersion value; the derived order is `NegInfinity < Finite < Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dispersion {
    NegInfinity,
    Finite(u64),
    Infinity,
}

impl std::fmt::Display for Dispersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dispersion::NegInfinity => write!(f, "-inf"),
            Dispersion::Finite(v) => write!(f, "{v}"),
            Dispersion::Infinity => write!(f, "inf"),
        }
    }
}

/// `sum_l lambda_l (B_l . grad g)` as a matrix over the monomials of the
/// directional derivatives, with `rhs` read off at the same monomials.
fn directional_system(g: &Poly, basis: &QMatrix, rhs: &Poly) -> (QMatrix, Vec<Rational>) {
    let r = g.nvars();
    let partials: Vec<Poly> = (0..r).map(|i| g.derivative(i)).collect();
    let dirs: Vec<Poly> = basis
        .iter()
        .map(|b| {
            let mut h = Poly::zero(g.vars());
            for (i, d) in partials.iter().enumerate() {
                if !b[i].is_zero() {
                    h = h.add(&d.scale(&b[i]));
                }
            }
            h
        })
        .collect();
    let mut monos: BTreeSet<Monomial> = rhs.terms().map(|(m, _)| m.clone()).collect();
    for h in &dirs {
        monos.extend(h.terms().map(|(m, _)| m.clone()));
    }
    let a = monos.iter().map(|m| dirs.iter().map(|h| h.coeff(m)).collect()).collect();
    let b = monos.iter().map(|m| rhs.coeff(m)).collect();
    (a, b)
}

fn combine(basis: &QMatrix, coeffs: &[Rational], r: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); r];
    for (b, c) in basis.iter().zip(coeffs) {
        for i in 0..r {
            v[i] += &b[i] * c;
        }
    }
    v
}

fn identity_q(r: usize) -> QMatrix {
    (0..r).map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// Integer lattice `span_Q(basis) /\ Z^r`.
fn integer_points(basis: &QMatrix, r: usize) -> IntLattice {
    let rows: Vec<IntVec> = basis.iter().map(|b| linalg::primitive_integer(b)).collect();
    IntLattice::from_generators(&rows, r).saturation()
}

/// `{g in Z^r : p(n+g) = p(n)}`, i.e. the integer directions along which
/// every partial derivative combination vanishes.
pub fn invariance_lattice(p: &Poly) -> Result<IntLattice, SpreadError> {
    if p.is_constant() {
        return Err(SpreadError::Constant(p.to_string()));
    }
    let r = p.nvars();
    let (a, _) = directional_system(p, &identity_q(r), &Poly::zero(p.vars()));
    let zeros = vec![Rational::zero(); a.len()];
    let (_, kernel) = linalg::solve_affine(&a, &zeros, r).expect("homogeneous system");
    Ok(integer_points(&kernel, r))
}

pub fn is_periodic(p: &Poly) -> Result<bool, SpreadError> {
    Ok(!invariance_lattice(p)?.is_zero())
}

/// `{s in Z^r : q(n+s) = c p(n), c != 0 constant}` as a coset of the
/// invariance lattice of `q`, or `Empty`.
pub fn shift_equiv(p: &Poly, q: &Poly) -> ShiftCoset {
    let r = p.nvars();
    match (p.is_constant(), q.is_constant()) {
        (true, true) if !p.is_zero() && !q.is_zero() => {
            return ShiftCoset::new(vec![0; r], IntLattice::full(r));
        }
        (false, false) => {}
        _ => return ShiftCoset::Empty,
    }
    let d = p.total_degree().expect("nonzero");
    if q.total_degree() != Some(d) {
        return ShiftCoset::Empty;
    }
    let pd = p.homogeneous_part(d);
    let qd = q.homogeneous_part(d);
    let c = qd.leading_coeff() / pd.leading_coeff();
    if qd != pd.scale(&c) {
        return ShiftCoset::Empty;
    }
    let target = p.scale(&c);
    let mut cur = q.clone();
    let mut total = vec![Rational::zero(); r];
    let mut basis = identity_q(r);
    for e in (0..d).rev() {
        if basis.is_empty() {
            break;
        }
        let g = cur.homogeneous_part(e + 1);
        let h = target.homogeneous_part(e).sub(&cur.homogeneous_part(e));
        let (a, b) = directional_system(&g, &basis, &h);
        let Some((lambda, kernel)) = linalg::solve_affine(&a, &b, basis.len()) else {
            return ShiftCoset::Empty;
        };
        let tau = combine(&basis, &lambda, r);
        if tau.iter().any(|x| !x.is_zero()) {
            cur = cur.shift_rational(&tau);
            for (t, x) in total.iter_mut().zip(&tau) {
                *t += x;
            }
        }
        basis = kernel.iter().map(|mu| combine(&basis, mu, r)).collect();
    }
    if cur != target {
        return ShiftCoset::Empty;
    }
    // integer points of total + span(basis)
    let ortho: Vec<IntVec> = if basis.is_empty() {
        (0..r).map(|i| crate::lattice::unit(r, i)).collect()
    } else {
        let zeros = vec![Rational::zero(); basis.len()];
        let (_, k) = linalg::solve_affine(&basis, &zeros, r).expect("homogeneous system");
        k.iter().map(|v| linalg::primitive_integer(v)).collect()
    };
    let mut rhs = Vec::with_capacity(ortho.len());
    for row in &ortho {
        let v: Rational = row.iter().zip(&total).map(|(a, t)| t * Rational::from_integer((*a).into())).sum();
        if !v.is_integer() {
            return ShiftCoset::Empty;
        }
        rhs.push(i64::try_from(v.to_integer()).expect("shift exceeds i64"));
    }
    match solve_integer(&ortho, &rhs, r) {
        Some((x, lattice)) => ShiftCoset::new(x, lattice),
        None => ShiftCoset::Empty,
    }
}

/// Spread of an irreducible pair: shifts `i` with `gcd(p, N^i q) != 1`.
pub fn spread_pair(p: &Poly, q: &Poly) -> ShiftCoset {
    shift_equiv(p, q)
}

/// Largest `|i_axis|` over a coset.
pub fn coset_dispersion(c: &ShiftCoset, axis: usize) -> Dispersion {
    match c {
        ShiftCoset::Empty => Dispersion::NegInfinity,
        ShiftCoset::Coset { base, lattice } => {
            if lattice.basis().iter().any(|g| g[axis] != 0) {
                Dispersion::Infinity
            } else {
                Dispersion::Finite(base[axis].unsigned_abs())
            }
        }
    }
}

/// `Disp_axis(a, b)` over all pairs of factors (axis is 0-based).
pub fn disp_k(a: &FactoredPoly, b: &FactoredPoly, axis: usize) -> Dispersion {
    let mut best = Dispersion::NegInfinity;
    for fa in a.factors() {
        for fb in b.factors() {
            best = best.max(coset_dispersion(&spread_pair(&fa.poly, &fb.poly), axis));
            if best == Dispersion::Infinity {
                return best;
            }
        }
    }
    best
}

fn box_points(r: usize, radius: i64) -> impl Iterator<Item = IntVec> {
    let side = (2 * radius + 1) as u64;
    let count = side.pow(r as u32);
    (0..count).map(move |mut idx| {
        let mut v = vec![0i64; r];
        for x in v.iter_mut() {
            *x = (idx % side) as i64 - radius;
            idx /= side;
        }
        v
    })
}

/// Exhaustive gcd test over `[-radius, radius]^r`.
pub fn spread_box_oracle(p: &Poly, q: &Poly, radius: u32) -> BTreeSet<IntVec> {
    box_points(p.nvars(), radius as i64).filter(|s| !gcd_poly(p, &q.shift(s)).is_constant()).collect()
}

/// Points of a coset inside `[-radius, radius]^r`.
pub fn coset_box_points(c: &ShiftCoset, r: usize, radius: u32) -> BTreeSet<IntVec> {
    box_points(r, radius as i64).filter(|s| c.contains(s)).collect()
}
