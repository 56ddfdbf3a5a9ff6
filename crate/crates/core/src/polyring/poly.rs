use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::{PolyError, Rational, Vars};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map ordered by the graded-lex monomial order, so the
/// last entry is always the leading term. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn make_vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(vars: &Vars) -> Poly {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Poly {
        Poly::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn from_int(vars: &Vars, c: i64) -> Poly {
        Poly::constant(vars, Rational::from_integer(BigInt::from(c)))
    }

    /// The polynomial `n_i`.
    pub fn var(vars: &Vars, i: usize) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(vars.len(), i), Rational::one());
        Poly { vars: vars.clone(), terms }
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial length does not match variable count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[i]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Indices of the variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.degree_in(i) > 0).collect()
    }

    pub fn check_same_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(PolyError::VarMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same_ring(other)?;
        Ok(self.add(other))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same_ring(other)?;
        Ok(self.sub(other))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same_ring(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(same_vars(&self.vars, &other.vars));
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert!(same_vars(&self.vars, &other.vars));
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(same_vars(&self.vars, &other.vars));
        let mut r = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Partial derivative with respect to `n_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e > 0 {
                r.add_term(m.with_exponent(i, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        r
    }

    /// Substitutes `n_i -> images[i]` for every variable. The images may live
    /// in a different ring; the result lives in theirs.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars(), "one image per variable required");
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut r = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i]);
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// `p(n + s)` for a rational shift vector.
    pub fn shift_rational(&self, s: &[Rational]) -> Poly {
        assert_eq!(s.len(), self.nvars());
        if s.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let images: Vec<Poly> = (0..self.nvars())
            .map(|i| Poly::var(&self.vars, i).add(&Poly::constant(&self.vars, s[i].clone())))
            .collect();
        self.substitute(&images)
    }

    /// `p(n + s)`.
    pub fn shift(&self, s: &[i64]) -> Poly {
        let s: Vec<Rational> = s.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        self.shift_rational(&s)
    }

    pub fn checked_shift(&self, s: &[i64]) -> Result<Poly, PolyError> {
        if s.len() != self.nvars() {
            return Err(PolyError::WrongLength { expected: self.nvars(), got: s.len() });
        }
        Ok(self.shift(s))
    }

    /// `p(M n)`: variable `n_i` is replaced by `sum_j m[i][j] n_j`.
    pub fn linear_substitute(&self, m: &[Vec<i64>]) -> Poly {
        let images: Vec<Poly> = m
            .iter()
            .map(|row| {
                let mut p = Poly::zero(&self.vars);
                for (j, &a) in row.iter().enumerate() {
                    if a != 0 {
                        p.add_term(Monomial::var(self.nvars(), j), Rational::from_integer(BigInt::from(a)));
                    }
                }
                p
            })
            .collect();
        self.substitute(&images)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::WrongLength { expected: self.nvars(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact division by multivariate leading-term reduction.
    pub fn divide_exact(&self, q: &Poly) -> Result<Poly, PolyError> {
        self.check_same_ring(q)?;
        if q.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        self.try_div(q).ok_or(PolyError::NotDivisible)
    }

    /// `Some(self / q)` if `q` divides `self` exactly. Panics if `q` is zero.
    pub fn try_div(&self, q: &Poly) -> Option<Poly> {
        let (lm, lc) = q.leading_term().expect("division by the zero polynomial");
        if let Some(c) = q.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let t = Poly::from_terms(&self.vars, [(qm, qc)]);
            rem = rem.sub(&q.mul(&t));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn divides(&self, p: &Poly) -> bool {
        p.try_div(self).is_some()
    }

    /// Splits `p = unit * prim` where `prim` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn normalize_primitive(&self) -> Result<(Rational, Poly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut unit = Rational::new(num, den);
        if self.leading_coeff().is_negative() {
            unit = -unit;
        }
        let prim = self.scale(&unit.recip());
        Ok((unit, prim))
    }

    /// Canonical associate; zero maps to zero.
    pub fn primitive(&self) -> Poly {
        match self.normalize_primitive() {
            Ok((_, p)) => p,
            Err(_) => self.clone(),
        }
    }

    /// Coefficients with respect to `n_v`, keyed by exponent. The coefficient
    /// polynomials stay in the same ring and are free of `n_v`.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponents()[v];
            out.entry(e).or_insert_with(|| Poly::zero(&self.vars)).add_term(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, v: usize, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut r = Poly::zero(vars);
        for (&e, c) in coeffs {
            for (m, x) in &c.terms {
                r.add_term(m.with_exponent(v, e), x.clone());
            }
        }
        r
    }
}

impl Ord for Poly {
    /// Lower total degree first, then by terms from the leading one down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for (a, b) in self.terms().zip(other.terms()) {
                    let o = a.0.cmp(b.0).then_with(|| a.1.cmp(b.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                self.num_terms().cmp(&other.num_terms())
            })
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if m.is_one() || !a.is_one() {
                parts.push(fmt_rational(&a));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[i].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
