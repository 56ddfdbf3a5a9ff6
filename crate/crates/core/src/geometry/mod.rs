//! Geometry of the support set: corner points, witness vectors and the
//! classification of modules.

mod fm;

pub use fm::{lp_feasible, Constraint, Relation};

use serde_json::{json, Value};

use crate::lattice::{dot, IntLattice, IntVec};
use crate::linalg;
use crate::polyring::Rational;

fn sub(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn ge(coeffs: IntVec, rhs: i64) -> Constraint {
    Constraint::new(&coeffs, Relation::Ge, rhs)
}

fn eq(coeffs: IntVec, rhs: i64) -> Constraint {
    Constraint::new(&coeffs, Relation::Eq, rhs)
}

fn orthogonal_to(w: &IntLattice) -> Vec<Constraint> {
    w.basis().iter().map(|g| eq(g.clone(), 0)).collect()
}

/// `(s - p) . v >= 1` for every `s != p`.
fn strict_min(support: &[IntVec], p: &[i64]) -> Vec<Constraint> {
    support.iter().filter(|s| s.as_slice() != p).map(|s| ge(sub(s, p), 1)).collect()
}

fn to_integer(v: &[Rational]) -> IntVec {
    linalg::primitive_integer(v)
}

/// Vertices of the convex hull of `support`, in input order.
pub fn corner_points(support: &[IntVec]) -> Vec<IntVec> {
    let r = support.first().map_or(0, Vec::len);
    support.iter().filter(|p| lp_feasible(&strict_min(support, p), r).is_some()).cloned().collect()
}

/// Inner vector of a corner point `p`, orthogonal to `w`, if one exists.
pub fn inner_vector(support: &[IntVec], p: &[i64], w: &IntLattice) -> Option<IntVec> {
    let mut cs = strict_min(support, p);
    cs.extend(orthogonal_to(w));
    lp_feasible(&cs, w.dim()).map(|v| to_integer(&v))
}

/// A witness `u` for the pair `(p, p')`: `u` is orthogonal to `W`, `p` is
/// the unique minimizer of `s . u` over the support, `p'` is a maximizer,
/// and no two maximizers differ by an element of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub p: IntVec,
    pub p_prime: IntVec,
    pub u: IntVec,
    pub min_face: Vec<IntVec>,
    pub max_face: Vec<IntVec>,
}

fn faces(support: &[IntVec], u: &[i64]) -> (Vec<IntVec>, Vec<IntVec>) {
    let vals: Vec<i64> = support.iter().map(|s| dot(s, u)).collect();
    let lo = *vals.iter().min().expect("nonempty support");
    let hi = *vals.iter().max().expect("nonempty support");
    let pick = |t: i64| support.iter().zip(&vals).filter(|(_, &v)| v == t).map(|(s, _)| s.clone()).collect();
    (pick(lo), pick(hi))
}

fn injective_mod(points: &[IntVec], w: &IntLattice) -> bool {
    points.iter().enumerate().all(|(i, a)| points[i + 1..].iter().all(|b| !w.contains(&sub(a, b))))
}

impl WitnessCertificate {
    /// Rechecks every defining property by direct arithmetic.
    pub fn verify(&self, support: &[IntVec], w: &IntLattice) -> bool {
        if self.u.iter().all(|&x| x == 0) || w.basis().iter().any(|g| dot(g, &self.u) != 0) {
            return false;
        }
        let (lo, hi) = faces(support, &self.u);
        lo == vec![self.p.clone()]
            && hi.contains(&self.p_prime)
            && injective_mod(&hi, w)
            && lo == self.min_face
            && hi == self.max_face
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p, "p_prime": self.p_prime, "u": self.u,
            "min_face": self.min_face, "max_face": self.max_face,
        })
    }
}

/// Searches a witness for `(p, p')`. The maximal face is shrunk to the set
/// of points that lie on it for every admissible `u`.
pub fn witness_for_pair(support: &[IntVec], p: &[i64], p_prime: &[i64], w: &IntLattice) -> Option<WitnessCertificate> {
    if p == p_prime {
        return None;
    }
    let r = w.dim();
    let mut base = orthogonal_to(w);
    base.extend(strict_min(support, p));
    base.extend(support.iter().map(|s| ge(sub(p_prime, s), 0)));
    lp_feasible(&base, r)?;
    let mut forced = Vec::new();
    for s in support {
        if s.as_slice() == p_prime {
            forced.push(s.clone());
            continue;
        }
        let mut cs = base.clone();
        cs.push(ge(sub(p_prime, s), 1));
        if lp_feasible(&cs, r).is_none() {
            forced.push(s.clone());
        }
    }
    if !injective_mod(&forced, w) {
        return None;
    }
    let mut cs = base;
    for s in support {
        if forced.contains(s) {
            cs.push(eq(sub(p_prime, s), 0));
        } else {
            cs.push(ge(sub(p_prime, s), 1));
        }
    }
    let u = to_integer(&lp_feasible(&cs, r).expect("relative interior of a feasible face"));
    let (min_face, max_face) = faces(support, &u);
    let cert = WitnessCertificate { p: p.to_vec(), p_prime: p_prime.to_vec(), u, min_face, max_face };
    assert!(cert.verify(support, w), "witness certificate failed its own check");
    Some(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleClass {
    /// Some ordered pair of corners is useful.
    InU(WitnessCertificate),
    /// A corner has a strict inner vector orthogonal to `W`, but no pair is useful.
    InOOnly {
        p: IntVec,
        u: IntVec,
    },
    Uncovered,
}

impl ModuleClass {
    pub fn label(&self) -> &'static str {
        match self {
            ModuleClass::InU(_) => "U",
            ModuleClass::InOOnly { .. } => "O\\U",
            ModuleClass::Uncovered => "uncovered",
        }
    }
}

/// Classifies the saturation of `w` against the support.
pub fn classify_module(support: &[IntVec], w: &IntLattice) -> ModuleClass {
    let w = w.saturation();
    let corners = corner_points(support);
    for p in &corners {
        for q in &corners {
            if let Some(c) = witness_for_pair(support, p, q, &w) {
                return ModuleClass::InU(c);
            }
        }
    }
    for p in &corners {
        if let Some(u) = inner_vector(support, p, &w) {
            return ModuleClass::InOOnly { p: p.clone(), u };
        }
    }
    ModuleClass::Uncovered
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceModules {
    pub modules: Vec<IntLattice>,
    /// Set when only edges were enumerated (`r > 3`).
    pub partial: bool,
}

/// Whether `p + span(dirs)` supports a face of the hull.
fn is_face(support: &[IntVec], p: &[i64], dirs: &[IntVec]) -> bool {
    let r = p.len();
    let mut cs: Vec<Constraint> = dirs.iter().map(|d| eq(d.clone(), 0)).collect();
    for s in support {
        let d = sub(s, p);
        let in_span = linalg::rank(&linalg::to_q(&[dirs.to_vec(), vec![d.clone()]].concat()), r) == dirs.len();
        if !in_span {
            cs.push(ge(d, 1));
        }
    }
    lp_feasible(&cs, r).is_some()
}

/// Modules parallel to the edges of the convex hull, and for `r = 3` to
/// its two-dimensional faces.
pub fn face_parallel_modules(support: &[IntVec]) -> FaceModules {
    let r = support.first().map_or(0, Vec::len);
    let corners = corner_points(support);
    let mut out: Vec<IntLattice> = Vec::new();
    let mut push = |l: IntLattice| {
        if !out.contains(&l) {
            out.push(l);
        }
    };
    for (i, p) in corners.iter().enumerate() {
        for q in &corners[i + 1..] {
            let d = sub(q, p);
            if is_face(support, p, std::slice::from_ref(&d)) {
                push(IntLattice::from_generators(&[d], r).saturation());
            }
        }
    }
    if r == 3 {
        for (i, p) in corners.iter().enumerate() {
            for (j, q) in corners.iter().enumerate().skip(i + 1) {
                for w in &corners[j + 1..] {
                    let dirs = vec![sub(q, p), sub(w, p)];
                    if linalg::rank(&linalg::to_q(&dirs), r) < 2 {
                        continue;
                    }
                    if is_face(support, p, &dirs) {
                        push(IntLattice::from_generators(&dirs, r).saturation());
                    }
                }
            }
        }
    }
    out.sort();
    FaceModules { modules: out, partial: r > 3 }
}
