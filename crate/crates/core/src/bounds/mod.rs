//! Denominator bounds with respect to modules of shift directions.

mod report;
mod strip;

pub use report::{BoundReport, ModuleReport, ReportError};
pub use strip::{strip_rewrite, Frac, StripResult};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::equation::Plde;
use crate::factored::FactoredPoly;
use crate::geometry::{self, classify_module, corner_points, witness_for_pair, ModuleClass, WitnessCertificate};
use crate::lattice::{IntLattice, IntVec};
use crate::polyring::{Poly, Vars};
use crate::spread::{self, disp_k, Dispersion};
use crate::transform::{build_normalizing_frame, normalize_first_shift, transform_equation, TransformError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("points {a:?} and {b:?} agree in the first {t} coordinates")]
    Hypothesis { a: IntVec, b: IntVec, t: usize },
    #[error("point {other:?} does not lie strictly beyond {p:?} along the first axis")]
    NotSingleton { p: IntVec, other: IntVec },
    #[error("point {0:?} is not in the support")]
    NotInSupport(IntVec),
    #[error("dispersion is infinite")]
    InfiniteDispersion,
    #[error("no useful pair exists for the module {0}")]
    NoUsefulPair(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundOptions {
    /// Return the plain product over the strip instead of the reduced
    /// common denominator.
    pub coarse: bool,
    /// Intersect the bounds obtained from every useful pair.
    pub refine: bool,
    /// Keep aperiodic factors when extracting the part periodic in `W`.
    pub keep_aperiodic: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { coarse: false, refine: true, keep_aperiodic: false }
    }
}

impl BoundOptions {
    fn drop_aperiodic(&self, w: &IntLattice) -> bool {
        !w.is_zero() && !self.keep_aperiodic
    }
}

/// Largest first-axis dispersion between the `W`-parts of the coefficients
/// on the two extreme first-coordinate layers of a normalized equation.
/// `t` is the number of leading coordinates orthogonal to `W`.
pub fn dispersion_bound(eq: &Plde, t: usize, drop_aperiodic: bool) -> Result<Dispersion, BoundError> {
    let r = eq.nvars();
    let gens: Vec<IntVec> = (t..r).map(|i| crate::lattice::unit(r, i)).collect();
    let w = IntLattice::from_generators(&gens, r);
    let support = eq.support();
    let lo = support.iter().map(|s| s[0]).min().expect("nonempty");
    let hi = support.iter().map(|s| s[0]).max().expect("nonempty");
    let layer = |v: i64| -> Vec<&IntVec> { support.iter().filter(|s| s[0] == v).collect() };
    let (a, b) = (layer(lo), layer(hi));
    for side in [&a, &b] {
        for (i, x) in side.iter().enumerate() {
            if let Some(y) = side[i + 1..].iter().find(|y| y[..t] == x[..t]) {
                return Err(BoundError::Hypothesis { a: (*x).clone(), b: (*y).clone(), t });
            }
        }
    }
    let mut back = vec![0; r];
    back[0] = lo - hi;
    let mut best = Dispersion::NegInfinity;
    for x in &a {
        let ax = eq.coefficient(x).expect("in support").w_part(&w, drop_aperiodic);
        for y in &b {
            let by = eq.coefficient(y).expect("in support").w_part(&w, drop_aperiodic).shift(&back);
            best = best.max(disp_k(&ax, &by, 0));
        }
    }
    if best == Dispersion::Infinity {
        return Err(BoundError::InfiniteDispersion);
    }
    Ok(best)
}

/// Result of one run of the per-module algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleBound {
    pub w: IntLattice,
    pub certificate: WitnessCertificate,
    pub s: Dispersion,
    pub d_w: FactoredPoly,
}

/// Denominator bound with respect to `w` from a single useful pair.
pub fn bound_for_module(
    eq: &Plde,
    w: &IntLattice,
    cert: &WitnessCertificate,
    opts: &BoundOptions,
) -> Result<ModuleBound, BoundError> {
    let w = w.saturation();
    let frame = build_normalizing_frame(&w, &cert.u)?;
    let (eq_n, _, c) = normalize_first_shift(&transform_equation(eq, &frame.m));
    let p: IntVec = frame.m.apply(&cert.p).iter().zip(&c).map(|(x, y)| x + y).collect();
    let drop = opts.drop_aperiodic(&w);
    let s = dispersion_bound(&eq_n, frame.t, drop)?;
    let vars = eq.vars();
    let d_w = if s == Dispersion::NegInfinity {
        FactoredPoly::one(vars)
    } else {
        let strip = strip_rewrite(&eq_n, &p, s)?;
        let minus_p: IntVec = p.iter().map(|x| -x).collect();
        let d_frame = if opts.coarse {
            let a_p = strip.a_p.w_part(&frame.transformed_module(), drop);
            let mut prod = FactoredPoly::one(vars);
            for i in &strip.rminus {
                let d: IntVec = i.iter().zip(&p).map(|(x, y)| x - 2 * y).collect();
                prod = prod.mul(&a_p.shift(&d));
            }
            prod
        } else {
            strip.d_actual.shift(&minus_p)
        };
        d_frame.linear_substitute(frame.m.rows()).w_part(&w, drop)
    };
    Ok(ModuleBound { w, certificate: cert.clone(), s, d_w })
}

/// Every ordered pair of corners that is useful for `w`.
pub fn useful_pairs(support: &[IntVec], w: &IntLattice) -> Vec<WitnessCertificate> {
    let w = w.saturation();
    let corners = corner_points(support);
    let mut out = Vec::new();
    for p in &corners {
        for q in &corners {
            if let Some(c) = witness_for_pair(support, p, q, &w) {
                out.push(c);
            }
        }
    }
    out
}

/// Bound for `w` from the first useful pair, or the gcd over all useful
/// pairs when refining. The returned record carries the first pair.
pub fn module_bound(eq: &Plde, w: &IntLattice, opts: &BoundOptions) -> Result<ModuleBound, BoundError> {
    let certs = useful_pairs(&eq.support(), w);
    let Some(first) = certs.first() else {
        return Err(BoundError::NoUsefulPair(w.to_string()));
    };
    let mut best = bound_for_module(eq, w, first, opts)?;
    if opts.refine {
        for c in &certs[1..] {
            let other = bound_for_module(eq, w, c, opts)?;
            best.d_w = best.d_w.gcd(&other.d_w);
        }
    }
    Ok(best)
}

/// Bound for the aperiodic part of the denominator (`W = {0}`).
pub fn aperiodic_bound(eq: &Plde, opts: &BoundOptions) -> Result<FactoredPoly, BoundError> {
    let r = eq.nvars();
    let support = eq.support();
    if support.len() == 1 {
        // y = N^{-p}(f / a_p)
        let p = &support[0];
        let minus: IntVec = p.iter().map(|x| -x).collect();
        let a = eq.coefficient(p).expect("in support");
        return Ok(a.w_part(&IntLattice::zero(r), false).shift(&minus));
    }
    let opts = BoundOptions { refine: true, ..*opts };
    Ok(module_bound(eq, &IntLattice::zero(r), &opts)?.d_w)
}

/// Least common multiple of bounds for several modules.
pub fn lcm_combine(vars: &Vars, bounds: &[FactoredPoly]) -> FactoredPoly {
    bounds.iter().fold(FactoredPoly::one(vars), |acc, d| acc.lcm(d))
}

/// `d * prod_{p in P, s in S'} (N^s p)^m`.
pub fn partial_multiple(d: &FactoredPoly, p: &[Poly], shifts: &[IntVec], m: u32) -> FactoredPoly {
    let mut out = d.clone();
    for q in p {
        for s in shifts {
            let f = FactoredPoly::from_poly(&q.shift(s)).expect("nonzero").pow(m);
            out = out.mul(&f);
        }
    }
    out
}

/// The combined algorithm: loop over the irreducible factors of the corner
/// coefficients, classify the spread of each, and collect bounds for the
/// useful modules and representatives of the merely opposite ones.
pub fn combined_bound(eq: &Plde, opts: &BoundOptions) -> Result<BoundReport, BoundError> {
    let vars = eq.vars().clone();
    let r = eq.nvars();
    let support = eq.support();
    let mut warnings = Vec::new();
    for (s, a) in eq.terms() {
        for u in a.unverified() {
            warnings.push(format!("factor {u} of the coefficient at {s:?} is not known to be irreducible"));
        }
    }
    let mut modules: BTreeMap<IntLattice, ModuleReport> = BTreeMap::new();
    let mut d = FactoredPoly::one(&vars);
    let mut p_set: Vec<Poly> = Vec::new();

    let zero = IntLattice::zero(r);
    let aperiodic = aperiodic_bound(eq, opts)?;
    d = d.lcm(&aperiodic);

    for q in corner_points(&support) {
        let a_q = eq.coefficient(&q).expect("in support");
        for f in a_q.factors() {
            let w = spread::invariance_lattice(&f.poly).expect("factors are non-constant");
            if !modules.contains_key(&w) {
                let class = classify_module(&support, &w);
                let mut entry = ModuleReport { w: w.clone(), class, s: None, d_w: None };
                if let ModuleClass::InU(_) = &entry.class {
                    if w == zero {
                        entry.d_w = Some(aperiodic.clone());
                    } else {
                        let mb = module_bound(eq, &w, opts)?;
                        entry.class = ModuleClass::InU(mb.certificate);
                        entry.s = Some(mb.s);
                        entry.d_w = Some(mb.d_w);
                    }
                }
                modules.insert(w.clone(), entry);
            }
            let entry = &modules[&w];
            match &entry.class {
                ModuleClass::InU(_) => d = d.lcm(entry.d_w.as_ref().expect("bound computed")),
                ModuleClass::InOOnly { .. } => {
                    if !p_set.iter().any(|x| !spread::shift_equiv(x, &f.poly).is_empty()) {
                        p_set.push(f.poly.clone());
                    }
                }
                ModuleClass::Uncovered => {}
            }
        }
    }
    p_set.sort();

    let faces = geometry::face_parallel_modules(&support);
    let mut uncovered = Vec::new();
    for w in &faces.modules {
        let in_u = match modules.get(w) {
            Some(m) => matches!(m.class, ModuleClass::InU(_)),
            None => matches!(classify_module(&support, w), ModuleClass::InU(_)),
        };
        if !in_u {
            uncovered.push(w.clone());
        }
    }
    if faces.partial {
        warnings.push("only hull edges were enumerated for the uncovered modules".to_string());
    }
    Ok(BoundReport { vars, d, p: p_set, modules: modules.into_values().collect(), uncovered, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::make_vars;

    fn data(name: &str) -> Plde {
        let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
        Plde::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn fp(s: &str) -> FactoredPoly {
        FactoredPoly::parse(s, &make_vars(&["n", "k"])).unwrap()
    }

    fn lat(g: &[i64]) -> IntLattice {
        IntLattice::from_generators(&[g.to_vec()], 2)
    }

    #[test]
    fn module_bounds_for_the_system() {
        let opts = BoundOptions::default();
        let sys1 = data("sys1");
        let b = module_bound(&sys1, &lat(&[1, -1]), &opts).unwrap();
        assert_eq!(b.s, Dispersion::Finite(2));
        assert_eq!(b.d_w, fp("(n+k+1)*(n+k+2)*(n+k+3)"));
        let b = module_bound(&sys1, &lat(&[2, -3]), &opts).unwrap();
        assert_eq!(b.s, Dispersion::Finite(0));
        assert_eq!(b.d_w, fp("3*n+2*k+1"));
        let sys2 = data("sys2");
        let b = module_bound(&sys2, &lat(&[0, 1]), &opts).unwrap();
        assert_eq!(b.s, Dispersion::Finite(1));
        assert_eq!(b.d_w, fp("(n^2+n+1)*(n^2+3*n+3)"));
        let b = module_bound(&sys2, &lat(&[2, -3]), &opts).unwrap();
        assert_eq!(b.d_w, fp("3*n+2*k+1"));
    }

    #[test]
    fn combined_reports() {
        let opts = BoundOptions::default();
        let r = combined_bound(&data("sys1"), &opts).unwrap();
        assert_eq!(r.d, fp("(n+k+1)*(n+k+2)*(n+k+3)*(3*n+2*k+1)"));
        assert!(r.p.is_empty());
        let mut want = vec![lat(&[1, 0]), lat(&[0, 1])];
        want.sort();
        assert_eq!(r.uncovered, want);
        let r = combined_bound(&data("sys2"), &opts).unwrap();
        assert_eq!(r.d, fp("(n^2+n+1)*(n^2+3*n+3)*(3*n+2*k+1)"));
        let r = combined_bound(&data("trace"), &opts).unwrap();
        assert!(r.d.is_one());
        assert_eq!(r.p.len(), 1);
        assert_eq!(r.p[0].to_string(), "n+k+1");
    }

    #[test]
    fn coarse_product_is_a_multiple() {
        let opts = BoundOptions { coarse: true, ..BoundOptions::default() };
        let b = module_bound(&data("sys1"), &lat(&[1, -1]), &opts).unwrap();
        assert!(fp("(n+k+1)*(n+k+2)*(n+k+3)").divides(&b.d_w));
    }

    #[test]
    fn helpers() {
        let v = make_vars(&["n", "k"]);
        assert!(lcm_combine(&v, &[]).is_one());
        assert_eq!(lcm_combine(&v, &[fp("n+1")]), fp("n+1"));
        let p = vec![crate::polyring::parse_poly("k+n+1", &v).unwrap()];
        assert_eq!(partial_multiple(&FactoredPoly::one(&v), &p, &[vec![0, 0]], 1), fp("k+n+1"));
        assert_eq!(
            partial_multiple(&FactoredPoly::one(&v), &p, &[vec![0, 0], vec![0, 1]], 2),
            fp("(k+n+1)^2*(k+n+2)^2")
        );
        assert_eq!(partial_multiple(&fp("n+1"), &[], &[vec![0, 0]], 3), fp("n+1"));
    }
}
