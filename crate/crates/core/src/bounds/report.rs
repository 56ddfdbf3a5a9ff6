//! Output of the combined algorithm and its JSON form.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::factored::FactoredPoly;
use crate::geometry::{ModuleClass, WitnessCertificate};
use crate::lattice::{IntLattice, IntVec};
use crate::polyring::{make_vars, parse_poly, Poly, Vars};
use crate::spread::Dispersion;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleReport {
    pub w: IntLattice,
    pub class: ModuleClass,
    pub s: Option<Dispersion>,
    pub d_w: Option<FactoredPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub vars: Vars,
    /// Bound for every union of modules classified `U`.
    pub d: FactoredPoly,
    /// Representatives, up to shift, of factors whose spread is only in `O`.
    pub p: Vec<Poly>,
    pub modules: Vec<ModuleReport>,
    /// Hull-face modules that are not in `U`.
    pub uncovered: Vec<IntLattice>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
#[error("malformed report: {0}")]
pub struct ReportError(pub String);

fn dispersion_json(d: &Dispersion) -> Value {
    match d {
        Dispersion::NegInfinity => json!("-inf"),
        Dispersion::Finite(v) => json!(v),
        Dispersion::Infinity => json!("inf"),
    }
}

fn dispersion_from(v: &Value) -> Result<Dispersion, ReportError> {
    match v {
        Value::String(s) if s == "-inf" => Ok(Dispersion::NegInfinity),
        Value::String(s) if s == "inf" => Ok(Dispersion::Infinity),
        Value::Number(n) => n.as_u64().map(Dispersion::Finite).ok_or_else(|| ReportError(format!("bad s {n}"))),
        other => Err(ReportError(format!("bad s {other}"))),
    }
}

fn vec_from(v: &Value) -> Result<IntVec, ReportError> {
    v.as_array()
        .ok_or_else(|| ReportError(format!("expected an integer vector, got {v}")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| ReportError(format!("bad entry {x}"))))
        .collect()
}

fn vecs_from(v: &Value) -> Result<Vec<IntVec>, ReportError> {
    v.as_array().ok_or_else(|| ReportError(format!("expected a list, got {v}")))?.iter().map(vec_from).collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, ReportError> {
    v.get(key).ok_or_else(|| ReportError(format!("missing \"{key}\"")))
}

impl ModuleReport {
    pub fn to_json(&self) -> Value {
        let mut o = json!({"W": self.w.to_string(), "class": self.class.label()});
        match &self.class {
            ModuleClass::InU(c) => {
                o["pair"] = json!([c.p, c.p_prime]);
                o["witness"] = json!(c.u);
                o["certificate"] = c.to_json();
            }
            ModuleClass::InOOnly { p, u } => {
                o["corner"] = json!(p);
                o["inner_vector"] = json!(u);
            }
            ModuleClass::Uncovered => {}
        }
        if let Some(s) = &self.s {
            o["s"] = dispersion_json(s);
        }
        if let Some(d) = &self.d_w {
            o["d_W"] = d.to_json();
        }
        o
    }

    fn from_json(v: &Value, vars: &Vars) -> Result<ModuleReport, ReportError> {
        let r = vars.len();
        let w_text = field(v, "W")?.as_str().ok_or_else(|| ReportError("\"W\" must be a string".into()))?;
        let w = IntLattice::parse(w_text, r).map_err(|e| ReportError(e.to_string()))?;
        let class = match field(v, "class")?.as_str() {
            Some("U") => {
                let c = field(v, "certificate")?;
                ModuleClass::InU(WitnessCertificate {
                    p: vec_from(field(c, "p")?)?,
                    p_prime: vec_from(field(c, "p_prime")?)?,
                    u: vec_from(field(c, "u")?)?,
                    min_face: vecs_from(field(c, "min_face")?)?,
                    max_face: vecs_from(field(c, "max_face")?)?,
                })
            }
            Some("O\\U") => {
                ModuleClass::InOOnly { p: vec_from(field(v, "corner")?)?, u: vec_from(field(v, "inner_vector")?)? }
            }
            Some("uncovered") => ModuleClass::Uncovered,
            _ => return Err(ReportError("unknown module class".into())),
        };
        let s = v.get("s").map(dispersion_from).transpose()?;
        let d_w = v
            .get("d_W")
            .map(|d| FactoredPoly::from_json(d, vars))
            .transpose()
            .map_err(|e| ReportError(e.to_string()))?;
        Ok(ModuleReport { w, class, s, d_w })
    }
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "variables": self.vars.iter().collect::<Vec<_>>(),
            "d": self.d.to_json(),
            "P": self.p.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "modules": self.modules.iter().map(ModuleReport::to_json).collect::<Vec<_>>(),
            "uncovered": self.uncovered.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }

    pub fn from_json(v: &Value) -> Result<BoundReport, ReportError> {
        let names: Vec<String> = field(v, "variables")?
            .as_array()
            .ok_or_else(|| ReportError("\"variables\" must be a list".into()))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| ReportError("bad variable".into())))
            .collect::<Result<_, _>>()?;
        let vars = make_vars(&names);
        let r = vars.len();
        let strings = |key: &str| -> Result<Vec<String>, ReportError> {
            field(v, key)?
                .as_array()
                .ok_or_else(|| ReportError(format!("\"{key}\" must be a list")))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| ReportError(format!("bad entry in \"{key}\""))))
                .collect()
        };
        let d = FactoredPoly::from_json(field(v, "d")?, &vars).map_err(|e| ReportError(e.to_string()))?;
        let p = strings("P")?
            .iter()
            .map(|s| parse_poly(s, &vars).map_err(|e| ReportError(e.to_string())))
            .collect::<Result<_, _>>()?;
        let modules = field(v, "modules")?
            .as_array()
            .ok_or_else(|| ReportError("\"modules\" must be a list".into()))?
            .iter()
            .map(|m| ModuleReport::from_json(m, &vars))
            .collect::<Result<_, _>>()?;
        let uncovered = strings("uncovered")?
            .iter()
            .map(|s| IntLattice::parse(s, r).map_err(|e| ReportError(e.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(BoundReport { vars, d, p, modules, uncovered, warnings: strings("warnings")? })
    }

    pub fn module(&self, w: &IntLattice) -> Option<&ModuleReport> {
        self.modules.iter().find(|m| &m.w == w)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d: {}", self.d)?;
        let p: Vec<String> = self.p.iter().map(Poly::to_string).collect();
        writeln!(f, "P: {{{}}}", p.join(", "))?;
        writeln!(f, "modules:")?;
        for m in &self.modules {
            write!(f, "  {} {}", m.w.generators_text(), m.class.label())?;
            if let ModuleClass::InU(c) = &m.class {
                write!(f, " pair {:?} -> {:?} witness {:?}", c.p, c.p_prime, c.u)?;
            }
            if let Some(s) = &m.s {
                write!(f, " s={s}")?;
            }
            if let Some(d) = &m.d_w {
                write!(f, " d_W={d}")?;
            }
            writeln!(f)?;
        }
        let u: Vec<String> = self.uncovered.iter().map(IntLattice::generators_text).collect();
        writeln!(f, "uncovered: {}", if u.is_empty() { "none".to_string() } else { u.join(", ") })?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
