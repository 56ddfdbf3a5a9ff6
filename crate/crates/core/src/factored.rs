//! Polynomials kept as `unit * prod f_i^{m_i}` with canonical factors.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::lattice::IntLattice;
use crate::polyring::{
    format_rational, parse_poly, parse_product_factors, parse_rational, Poly, PolyError, Rational, Vars,
};
use crate::spread;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irreducibility {
    Unverified,
    DeclaredIrreducible,
    VerifiedLinear,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub poly: Poly,
    pub mult: u32,
    pub tag: Irreducibility,
}

#[derive(Debug, Error)]
pub enum FactoredError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("malformed factored polynomial: {0}")]
    Format(String),
    #[error("factor {0} is constant")]
    ConstantFactor(String),
    #[error("zero coefficient")]
    Zero,
}

/// `unit * prod poly^mult`. Factors are canonical (integer-primitive,
/// positive leading coefficient), non-constant, pairwise distinct and
/// sorted. Tags do not take part in equality.
#[derive(Clone, Debug)]
pub struct FactoredPoly {
    vars: Vars,
    unit: Rational,
    factors: Vec<Factor>,
}

impl PartialEq for FactoredPoly {
    fn eq(&self, other: &Self) -> bool {
        self.unit == other.unit
            && self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.poly == b.poly && a.mult == b.mult)
    }
}

impl Eq for FactoredPoly {}

fn default_tag(p: &Poly) -> Irreducibility {
    if p.total_degree() == Some(1) {
        Irreducibility::VerifiedLinear
    } else {
        Irreducibility::Unverified
    }
}

impl FactoredPoly {
    pub fn one(vars: &Vars) -> FactoredPoly {
        FactoredPoly::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, unit: Rational) -> FactoredPoly {
        assert!(!unit.is_zero(), "a factored polynomial is nonzero");
        FactoredPoly { vars: vars.clone(), unit, factors: Vec::new() }
    }

    /// Builds from a unit and raw factors; factors are normalized, units
    /// absorbed, and equal factors merged.
    pub fn new(vars: &Vars, unit: Rational, raw: Vec<(Poly, u32)>) -> Result<FactoredPoly, FactoredError> {
        let tagged = raw.into_iter().map(|(p, m)| (p.clone(), m, default_tag(&p))).collect();
        FactoredPoly::with_tags(vars, unit, tagged)
    }

    pub fn with_tags(
        vars: &Vars,
        unit: Rational,
        raw: Vec<(Poly, u32, Irreducibility)>,
    ) -> Result<FactoredPoly, FactoredError> {
        if unit.is_zero() {
            return Err(FactoredError::Zero);
        }
        let mut fp = FactoredPoly::constant(vars, unit);
        for (p, m, tag) in raw {
            if m == 0 {
                continue;
            }
            p.check_same_ring(&Poly::one(vars))?;
            if p.is_zero() {
                return Err(FactoredError::Zero);
            }
            let (c, prim) = p.normalize_primitive()?;
            fp.unit *= num_traits::pow(c, m as usize);
            if prim.is_one() {
                continue;
            }
            let tag = if prim.total_degree() == Some(1) { Irreducibility::VerifiedLinear } else { tag };
            fp.insert(prim, m, tag);
        }
        Ok(fp)
    }

    /// A single polynomial as one factor (not factored further).
    pub fn from_poly(p: &Poly) -> Result<FactoredPoly, FactoredError> {
        FactoredPoly::new(p.vars(), Rational::one(), vec![(p.clone(), 1)])
    }

    fn insert(&mut self, prim: Poly, m: u32, tag: Irreducibility) {
        match self.factors.binary_search_by(|f| f.poly.cmp(&prim)) {
            Ok(i) => {
                self.factors[i].mult += m;
                self.factors[i].tag = self.factors[i].tag.max(tag);
            }
            Err(i) => self.factors.insert(i, Factor { poly: prim, mult: m, tag }),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.unit.is_one()
    }

    pub fn multiplicity(&self, p: &Poly) -> u32 {
        self.factors.iter().find(|f| &f.poly == p).map_or(0, |f| f.mult)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|f| f.poly.total_degree().unwrap_or(0) * f.mult).sum()
    }

    pub fn expand(&self) -> Poly {
        let mut p = Poly::constant(&self.vars, self.unit.clone());
        for f in &self.factors {
            p = p.mul(&f.poly.pow(f.mult));
        }
        p
    }

    /// Same factors with unit 1.
    pub fn monic(&self) -> FactoredPoly {
        FactoredPoly { vars: self.vars.clone(), unit: Rational::one(), factors: self.factors.clone() }
    }

    pub fn mul(&self, other: &FactoredPoly) -> FactoredPoly {
        let mut out = self.clone();
        out.unit *= &other.unit;
        for f in &other.factors {
            out.insert(f.poly.clone(), f.mult, f.tag);
        }
        out
    }

    pub fn pow(&self, e: u32) -> FactoredPoly {
        let mut out = FactoredPoly::constant(&self.vars, num_traits::pow(self.unit.clone(), e as usize));
        if e == 0 {
            return out;
        }
        out.factors = self.factors.iter().map(|f| Factor { mult: f.mult * e, ..f.clone() }).collect();
        out
    }

    fn merge(&self, other: &FactoredPoly, keep_missing: bool, pick: fn(u32, u32) -> u32) -> FactoredPoly {
        let mut out = FactoredPoly::one(&self.vars);
        for f in &self.factors {
            let m = other.multiplicity(&f.poly);
            if m > 0 || keep_missing {
                out.insert(f.poly.clone(), pick(f.mult, m), f.tag);
            }
        }
        for f in &other.factors {
            if keep_missing && self.multiplicity(&f.poly) == 0 {
                out.insert(f.poly.clone(), f.mult, f.tag);
            }
        }
        out
    }

    pub fn gcd(&self, other: &FactoredPoly) -> FactoredPoly {
        self.merge(other, false, u32::min)
    }

    pub fn lcm(&self, other: &FactoredPoly) -> FactoredPoly {
        self.merge(other, true, u32::max)
    }

    /// Multiset containment of factors (units ignored).
    pub fn divides(&self, other: &FactoredPoly) -> bool {
        self.factors.iter().all(|f| other.multiplicity(&f.poly) >= f.mult)
    }

    /// Removes the factors of `other` (as a multiset), saturating at zero.
    pub fn remove(&self, other: &FactoredPoly) -> FactoredPoly {
        let mut out = FactoredPoly::constant(&self.vars, self.unit.clone());
        for f in &self.factors {
            let m = f.mult.saturating_sub(other.multiplicity(&f.poly));
            if m > 0 {
                out.insert(f.poly.clone(), m, f.tag);
            }
        }
        out
    }

    /// Rebuilds by mapping each factor; the result is re-canonicalized.
    pub fn map_factors(&self, vars: &Vars, f: impl Fn(&Poly) -> Poly) -> FactoredPoly {
        let raw = self.factors.iter().map(|x| (f(&x.poly), x.mult, x.tag)).collect();
        FactoredPoly::with_tags(vars, self.unit.clone(), raw).expect("image of a nonzero factor is nonzero")
    }

    pub fn shift(&self, s: &[i64]) -> FactoredPoly {
        self.map_factors(&self.vars, |p| p.shift(s))
    }

    /// `p(M n)` for every factor.
    pub fn linear_substitute(&self, m: &[Vec<i64>]) -> FactoredPoly {
        self.map_factors(&self.vars, |p| p.linear_substitute(m))
    }

    /// Keeps the factors whose spread lies inside `w`, with unit 1.
    /// Aperiodic factors (spread `{0}`) are dropped when `drop_aperiodic`.
    pub fn w_part(&self, w: &IntLattice, drop_aperiodic: bool) -> FactoredPoly {
        let mut out = FactoredPoly::one(&self.vars);
        for f in &self.factors {
            let sp = spread::invariance_lattice(&f.poly).expect("factors are non-constant");
            if sp.is_zero() && drop_aperiodic {
                continue;
            }
            if sp.is_sublattice_of(w) {
                out.insert(f.poly.clone(), f.mult, f.tag);
            }
        }
        out
    }

    pub fn unverified(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().filter(|f| f.tag == Irreducibility::Unverified).map(|f| &f.poly)
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                let mut e = vec![json!(f.poly.to_string()), json!(f.mult)];
                if f.tag == Irreducibility::DeclaredIrreducible {
                    e.push(json!("irreducible"));
                }
                Value::Array(e)
            })
            .collect();
        json!({"unit": format_rational(&self.unit), "factors": factors})
    }

    /// Reads the object form or a polynomial string. A string that is a
    /// top-level product is split into its syntactic factors.
    pub fn from_json(v: &Value, vars: &Vars) -> Result<FactoredPoly, FactoredError> {
        match v {
            Value::String(s) => FactoredPoly::parse(s, vars),
            Value::Number(n) => FactoredPoly::parse(&n.to_string(), vars),
            Value::Object(o) => {
                let unit = match o.get("unit") {
                    None => Rational::one(),
                    Some(Value::String(s)) => parse_rational(s)?,
                    Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                    Some(other) => return Err(FactoredError::Format(format!("bad unit {other}"))),
                };
                let mut raw = Vec::new();
                let list = match o.get("factors") {
                    None => Vec::new(),
                    Some(Value::Array(a)) => a.clone(),
                    Some(other) => return Err(FactoredError::Format(format!("bad factor list {other}"))),
                };
                for item in list {
                    let Value::Array(parts) = item else {
                        return Err(FactoredError::Format(format!("bad factor entry {item}")));
                    };
                    let text = parts.first().and_then(Value::as_str).ok_or_else(|| {
                        FactoredError::Format("factor entry must start with a polynomial string".into())
                    })?;
                    let mult = match parts.get(1) {
                        None => 1,
                        Some(m) => m
                            .as_u64()
                            .and_then(|m| u32::try_from(m).ok())
                            .filter(|&m| m > 0)
                            .ok_or_else(|| FactoredError::Format(format!("bad multiplicity {m}")))?,
                    };
                    let tag = match parts.get(2).and_then(Value::as_str) {
                        Some("irreducible") => Irreducibility::DeclaredIrreducible,
                        None => Irreducibility::Unverified,
                        Some(t) => return Err(FactoredError::Format(format!("unknown factor tag '{t}'"))),
                    };
                    let p = parse_poly(text, vars)?;
                    if p.is_constant() {
                        return Err(FactoredError::ConstantFactor(text.to_string()));
                    }
                    raw.push((p, mult, tag));
                }
                FactoredPoly::with_tags(vars, unit, raw)
            }
            other => Err(FactoredError::Format(format!("expected a polynomial, got {other}"))),
        }
    }

    /// Parses text; a top-level product becomes one factor per operand.
    pub fn parse(text: &str, vars: &Vars) -> Result<FactoredPoly, FactoredError> {
        match parse_product_factors(text, vars)? {
            Some((neg, parts)) => {
                let unit = if neg { -Rational::one() } else { Rational::one() };
                let raw: Vec<(Poly, u32)> = parts;
                if raw.iter().any(|(p, _)| p.is_zero()) {
                    return Err(FactoredError::Zero);
                }
                FactoredPoly::new(vars, unit, raw)
            }
            None => {
                let p = parse_poly(text, vars)?;
                if p.is_zero() {
                    return Err(FactoredError::Zero);
                }
                FactoredPoly::from_poly(&p)
            }
        }
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", format_rational(&self.unit));
        }
        let mut parts = Vec::new();
        if self.unit == -Rational::one() {
            write!(f, "-")?;
        } else if !self.unit.is_one() {
            parts.push(format_rational(&self.unit));
        }
        for x in &self.factors {
            if x.mult == 1 {
                parts.push(format!("({})", x.poly));
            } else {
                parts.push(format!("({})^{}", x.poly, x.mult));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::make_vars;

    fn vars() -> Vars {
        make_vars(&["n", "k"])
    }

    fn fp(s: &str) -> FactoredPoly {
        FactoredPoly::parse(s, &vars()).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &vars()).unwrap()
    }

    #[test]
    fn expansion() {
        assert!(FactoredPoly::one(&vars()).expand().is_one());
        let a = fp("-(k+n+1)*(2*k+3*n+1)");
        assert_eq!(a.expand(), p("-(k+n+1)*(2*k+3*n+1)"));
        assert_eq!(a.factors().len(), 2);
        assert_eq!(fp("(n+1)^2").expand(), p("n^2+2*n+1"));
        assert_eq!(fp("(-2*n-2)*(n+1)").to_string(), "-2*(n+1)^2");
    }

    #[test]
    fn gcd_lcm() {
        let d = fp("(n+k+1)*(3*n+2*k+1)");
        assert_eq!(d.lcm(&FactoredPoly::one(&vars())), d);
        let e = fp("(n^2+n+1)*(3*n+2*k+1)");
        assert_eq!(d.lcm(&e), fp("(n+k+1)*(n^2+n+1)*(3*n+2*k+1)"));
        assert_eq!(d.gcd(&e), fp("3*n+2*k+1"));
        let m = FactoredPoly::parse("(m+1)*(m+2)^2*(m+3)^3", &make_vars(&["m"])).unwrap();
        assert_eq!(m.gcd(&m), m);
    }

    #[test]
    fn shifting() {
        assert_eq!(fp("n^2+n+1").shift(&[0, -1]), fp("n^2+n+1"));
        assert_eq!(fp("2*k+3*n+3").shift(&[0, -1]), fp("2*k+3*n+1"));
        let a = fp("(k+n+1)*(n+2)^2");
        assert_eq!(a.shift(&[0, 0]), a);
        // distinct shifts stay distinct, coinciding ones merge
        assert_eq!(fp("(n+k+1)*(n+k+2)").shift(&[1, -1]), fp("(n+k+1)*(n+k+2)"));
    }

    #[test]
    fn w_parts() {
        let w = IntLattice::from_generators(&[vec![1, -1]], 2);
        assert_eq!(fp("-(k+n+1)*(2*k+3*n+1)").w_part(&w, true), fp("k+n+1"));
        let w = IntLattice::from_generators(&[vec![0, 1]], 2);
        assert_eq!(fp("(n^2+n+1)*(2*k+3*n+3)").w_part(&w, true), fp("n^2+n+1"));
        assert!(fp("(n*k+1)*(n^2+k)").w_part(&w, true).is_one());
        assert_eq!(fp("(n*k+1)").w_part(&IntLattice::zero(2), false), fp("n*k+1"));
    }

    #[test]
    fn json_forms() {
        let v = vars();
        let j = serde_json::json!({"unit":"-1","factors":[["k+n+1",1],["2*k+3*n+1",1]]});
        let a = FactoredPoly::from_json(&j, &v).unwrap();
        assert_eq!(a, fp("-(k+n+1)*(2*k+3*n+1)"));
        assert_eq!(FactoredPoly::from_json(&a.to_json(), &v).unwrap(), a);
        let j = serde_json::json!({"unit":"1","factors":[["n^2+n+1",1,"irreducible"]]});
        let b = FactoredPoly::from_json(&j, &v).unwrap();
        assert_eq!(b.factors()[0].tag, Irreducibility::DeclaredIrreducible);
        assert_eq!(fp("n^2+n+1").factors()[0].tag, Irreducibility::Unverified);
        assert!(FactoredPoly::from_json(&serde_json::json!({"factors":[["2",1]]}), &v).is_err());
        assert!(FactoredPoly::parse("0", &v).is_err());
    }
}
