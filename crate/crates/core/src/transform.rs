//! Unimodular changes of variables.
//!
//! Two matrices appear. A substitution matrix `A` acts on functions by
//! `(A.y)(n) = y(A n)`. A point transform `M` moves shift vectors,
//! `s -> M s`. They are related by `M = A^{-1}`: if `y` solves an equation
//! with support `S`, then `A.y` solves the transformed equation with
//! support `M S`.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::equation::Plde;
use crate::lattice::{dot, unimodular_completion, IntLattice, IntVec, LatticeError, UnimodularMatrix};
use crate::linalg;
use crate::polyring::{Rational, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the module has full rank; there is no orthogonal direction")]
    FullRank,
}

/// `(A.y)(n) = y(A n)`.
pub fn act_on_rational(a: &UnimodularMatrix, y: &RationalFunction) -> RationalFunction {
    y.linear_substitute(a.rows())
}

/// The equation satisfied by `y(M^{-1} n)`: support `{M s}`, coefficients
/// and right-hand side composed with `M^{-1}`.
pub fn transform_equation(eq: &Plde, m: &UnimodularMatrix) -> Plde {
    let inv = m.inverse_rows();
    let terms: BTreeMap<IntVec, _> = eq.terms().iter().map(|(s, a)| (m.apply(s), a.linear_substitute(inv))).collect();
    Plde::new(eq.vars(), terms, eq.rhs().linear_substitute(inv)).expect("same shape as the input")
}

/// Point transform whose first `t` rows span `W^perp` with the witness as
/// first row; it maps `W` onto `{0}^t x Z^(r-t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedFrame {
    pub m: UnimodularMatrix,
    pub t: usize,
}

impl NormalizedFrame {
    /// The image `{0}^t x Z^(r-t)` of `W`.
    pub fn transformed_module(&self) -> IntLattice {
        let r = self.m.dim();
        let rows: Vec<IntVec> = (self.t..r).map(|i| crate::lattice::unit(r, i)).collect();
        IntLattice::from_generators(&rows, r)
    }
}

/// Builds the frame for a saturated `w` and a covector `u` that is
/// orthogonal to `w` and primitive.
pub fn build_normalizing_frame(w: &IntLattice, u: &[i64]) -> Result<NormalizedFrame, TransformError> {
    let r = w.dim();
    if w.basis().iter().any(|g| dot(g, u) != 0) {
        return Err(LatticeError::NotOrthogonal(u.to_vec()).into());
    }
    if !w.is_saturated() {
        return Err(LatticeError::NotSaturated.into());
    }
    let comp = w.orthogonal_complement();
    let t = comp.rank();
    if t == 0 {
        return Err(TransformError::FullRank);
    }
    let basis = comp.basis();
    // coordinates of u in the complement basis
    let bt: Vec<Vec<Rational>> =
        (0..r).map(|j| basis.iter().map(|b| Rational::from_integer(b[j].into())).collect()).collect();
    let target: Vec<Rational> = u.iter().map(|&x| Rational::from_integer(x.into())).collect();
    let (x, _) = linalg::solve_affine(&bt, &target, t).ok_or(LatticeError::NotOrthogonal(u.to_vec()))?;
    let x: IntVec = x.iter().map(|c| i64::try_from(c.to_integer()).expect("coordinate fits in i64")).collect();
    if x.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1 {
        return Err(LatticeError::NotPrimitive(u.to_vec()).into());
    }
    let q = unimodular_completion(&[x], t)?;
    let rows: Vec<IntVec> =
        q.rows().iter().map(|qr| (0..r).map(|j| qr.iter().zip(basis).map(|(c, b)| c * b[j]).sum()).collect()).collect();
    let m = unimodular_completion(&rows, r)?;
    debug_assert_eq!(m.rows()[0], u);
    Ok(NormalizedFrame { m, t })
}

/// Translates along the first axis so that the smallest first coordinate
/// of the support is 0. Returns the new equation, `k` (the largest first
/// coordinate afterwards) and the translation applied.
pub fn normalize_first_shift(eq: &Plde) -> (Plde, i64, IntVec) {
    let support = eq.support();
    let lo = support.iter().map(|s| s[0]).min().expect("nonempty support");
    let hi = support.iter().map(|s| s[0]).max().expect("nonempty support");
    let mut c = vec![0; eq.nvars()];
    c[0] = -lo;
    let out = if lo == 0 { eq.clone() } else { eq.translate(&c) };
    (out, hi - lo, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{make_vars, parse_rational_function};

    #[test]
    fn substitution_action() {
        let v = make_vars(&["n", "k"]);
        let y = parse_rational_function("(n^2+2*k^2)/(k+n+1)", &v).unwrap();
        assert_eq!(act_on_rational(&UnimodularMatrix::identity(2), &y), y);
        let a = UnimodularMatrix::parse("0,1;1,-1").unwrap();
        let want = parse_rational_function("(3*k^2-4*n*k+2*n^2)/(n+1)", &v).unwrap();
        assert_eq!(act_on_rational(&a, &y), want);
        let c = parse_rational_function("7", &v).unwrap();
        assert_eq!(act_on_rational(&a, &c), c);
    }

    #[test]
    fn frames() {
        let w = IntLattice::from_generators(&[vec![1, -1]], 2);
        let f = build_normalizing_frame(&w, &[1, 1]).unwrap();
        assert_eq!(f.m.rows()[0], vec![1, 1]);
        assert_eq!(f.m.det().abs(), 1);
        assert_eq!(f.m.apply(&[1, -1])[0], 0);
        let f = build_normalizing_frame(&IntLattice::zero(2), &[1, 0]).unwrap();
        assert_eq!(f.m, UnimodularMatrix::identity(2));
        let w = IntLattice::from_generators(&[vec![0, 1]], 2);
        assert_eq!(build_normalizing_frame(&w, &[1, 0]).unwrap().m, UnimodularMatrix::identity(2));
        assert!(build_normalizing_frame(&w, &[1, 1]).is_err());
        assert!(build_normalizing_frame(&w, &[2, 0]).is_err());
        assert!(build_normalizing_frame(&IntLattice::full(2), &[0, 0]).is_err());
    }

    #[test]
    fn frame_in_three_variables() {
        let w = IntLattice::from_generators(&[vec![1, -1, 0]], 3);
        let f = build_normalizing_frame(&w, &[1, 1, 2]).unwrap();
        assert_eq!(f.t, 2);
        assert_eq!(f.m.rows()[0], vec![1, 1, 2]);
        let img = f.m.apply(&[1, -1, 0]);
        assert_eq!(&img[..2], &[0, 0]);
        assert_eq!(img[2].abs(), 1);
    }
}
