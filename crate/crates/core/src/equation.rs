//! Linear difference equations `sum_s a_s(n) y(n+s) = f(n)` and their
//! JSON file format.
//!
//! ```json
//! {"variables": ["n", "k"],
//!  "terms": [{"shift": [0, 0], "coefficient": {"unit": "-1", "factors": [["k+n+1", 1]]}},
//!            {"shift": [1, 0], "coefficient": "2*(n+1)"}],
//!  "rhs": "0"}
//! ```
//!
//! A coefficient is either the factored object form or a string. Strings
//! are split at top-level `*`; a non-linear sum not written as a product
//! is rejected as unsupported because factorization is not attempted.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::factored::{FactoredError, FactoredPoly};
use crate::lattice::IntVec;
use crate::polyring::{make_vars, parse_poly, Poly, PolyError, Vars};

#[derive(Debug, Error)]
pub enum EquationError {
    #[error("malformed equation: {0}")]
    Malformed(String),
    #[error("unsupported equation: {0}")]
    Unsupported(String),
}

impl From<PolyError> for EquationError {
    fn from(e: PolyError) -> Self {
        EquationError::Malformed(e.to_string())
    }
}

impl From<FactoredError> for EquationError {
    fn from(e: FactoredError) -> Self {
        EquationError::Malformed(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plde {
    vars: Vars,
    terms: BTreeMap<IntVec, FactoredPoly>,
    rhs: Poly,
}

impl Plde {
    pub fn new(vars: &Vars, terms: BTreeMap<IntVec, FactoredPoly>, rhs: Poly) -> Result<Plde, EquationError> {
        if terms.is_empty() {
            return Err(EquationError::Malformed("an equation needs at least one term".into()));
        }
        let r = vars.len();
        for (s, a) in &terms {
            if s.len() != r {
                return Err(EquationError::Malformed(format!("shift {s:?} has length {}, expected {r}", s.len())));
            }
            if a.vars() != vars {
                return Err(EquationError::Malformed("coefficient over a different variable list".into()));
            }
        }
        if rhs.vars() != vars {
            return Err(EquationError::Malformed("right-hand side over a different variable list".into()));
        }
        Ok(Plde { vars: vars.clone(), terms, rhs })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<IntVec, FactoredPoly> {
        &self.terms
    }

    pub fn coefficient(&self, s: &[i64]) -> Option<&FactoredPoly> {
        self.terms.get(s)
    }

    pub fn support(&self) -> Vec<IntVec> {
        self.terms.keys().cloned().collect()
    }

    pub fn rhs(&self) -> &Poly {
        &self.rhs
    }

    /// Applies `N^c` to the whole equation: shift `s` moves to `s + c` and
    /// every coefficient and the right-hand side are shifted by `c`. The
    /// solutions are unchanged.
    pub fn translate(&self, c: &[i64]) -> Plde {
        let terms =
            self.terms.iter().map(|(s, a)| (s.iter().zip(c).map(|(x, y)| x + y).collect(), a.shift(c))).collect();
        Plde { vars: self.vars.clone(), terms, rhs: self.rhs.shift(c) }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(s, a)| json!({"shift": s, "coefficient": a.to_json()})).collect();
        json!({"variables": self.vars.iter().collect::<Vec<_>>(), "terms": terms, "rhs": self.rhs.to_string()})
    }

    pub fn from_json(v: &Value) -> Result<Plde, EquationError> {
        let bad = |m: &str| EquationError::Malformed(m.to_string());
        let names: Vec<String> = v
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"variables\" list"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variable names must be strings")))
            .collect::<Result<_, _>>()?;
        if names.is_empty() {
            return Err(bad("at least one variable is required"));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(EquationError::Malformed(format!("duplicate variable '{n}'")));
            }
            if !n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(EquationError::Malformed(format!("invalid variable name '{n}'")));
            }
        }
        let vars = make_vars(&names);
        let list = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\" list"))?;
        let mut terms = BTreeMap::new();
        for t in list {
            let shift: IntVec = t
                .get("shift")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without \"shift\""))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("shift entries must be integers")))
                .collect::<Result<_, _>>()?;
            let c = t.get("coefficient").ok_or_else(|| bad("term without \"coefficient\""))?;
            let a = coefficient_from_json(c, &vars)?;
            if terms.insert(shift.clone(), a).is_some() {
                return Err(EquationError::Malformed(format!("shift {shift:?} occurs twice")));
            }
        }
        let rhs = match v.get("rhs") {
            None => Poly::zero(&vars),
            Some(Value::String(s)) => parse_poly(s, &vars)?,
            Some(Value::Number(n)) => parse_poly(&n.to_string(), &vars)?,
            Some(_) => return Err(bad("\"rhs\" must be a polynomial string")),
        };
        Plde::new(&vars, terms, rhs)
    }

    pub fn parse(text: &str) -> Result<Plde, EquationError> {
        let v: Value = serde_json::from_str(text).map_err(|e| EquationError::Malformed(e.to_string()))?;
        Plde::from_json(&v)
    }
}

fn coefficient_from_json(c: &Value, vars: &Vars) -> Result<FactoredPoly, EquationError> {
    if let Value::String(text) = c {
        if crate::polyring::parse_product_factors(text, vars)?.is_none() {
            let p = parse_poly(text, vars)?;
            if p.total_degree().is_some_and(|d| d > 1) {
                return Err(EquationError::Unsupported(format!(
                    "coefficient '{text}' is a non-linear sum given unfactored; \
                     write it as a product or in the factored object form"
                )));
            }
        }
    }
    Ok(FactoredPoly::from_json(c, vars)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: &str = r#"{"variables":["n","k"],"terms":[
        {"shift":[0,0],"coefficient":{"unit":"-1","factors":[["k+n+1",1],["2*k+3*n+1",1]]}},
        {"shift":[1,0],"coefficient":"2*(n+1)"}],"rhs":"0"}"#;

    #[test]
    fn reads_and_writes() {
        let e = Plde::parse(EX).unwrap();
        assert_eq!(e.support(), vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(e.coefficient(&[1, 0]).unwrap().to_string(), "2*(n+1)");
        assert_eq!(Plde::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Plde::parse(r#"{"variables":["n"],"terms":[]}"#), Err(EquationError::Malformed(_))));
        assert!(matches!(Plde::parse("{"), Err(EquationError::Malformed(_))));
        let dup = r#"{"variables":["n"],"terms":[{"shift":[0],"coefficient":"1"},{"shift":[0],"coefficient":"2"}]}"#;
        assert!(matches!(Plde::parse(dup), Err(EquationError::Malformed(_))));
        let quad = r#"{"variables":["n","k"],"terms":[{"shift":[0,0],"coefficient":"n^2+k"}]}"#;
        assert!(matches!(Plde::parse(quad), Err(EquationError::Unsupported(_))));
        let zero = r#"{"variables":["n"],"terms":[{"shift":[0],"coefficient":"0"}]}"#;
        assert!(matches!(Plde::parse(zero), Err(EquationError::Malformed(_))));
    }

    #[test]
    fn translation() {
        let e = Plde::parse(EX).unwrap();
        let t = e.translate(&[1, 0]);
        assert_eq!(t.support(), vec![vec![1, 0], vec![2, 0]]);
        assert_eq!(t.coefficient(&[2, 0]).unwrap().to_string(), "2*(n+2)");
    }
}
