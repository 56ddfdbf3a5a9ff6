//! Independent checks on expanded polynomials, and a generator of
//! equations with known rational solutions.

use std::collections::BTreeMap;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::BoundReport;
use crate::equation::Plde;
use crate::factored::{FactoredPoly, Irreducibility};
use crate::geometry::{classify_module, ModuleClass};
use crate::lattice::IntVec;
use crate::polyring::{make_vars, parse_poly, Poly, Rational, RationalFunction, Vars};
use crate::spread;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCheck {
    pub residual: RationalFunction,
    pub ok: bool,
}

/// Substitutes `y` into the equation over a common denominator built from
/// plain products of the shifted denominators.
pub fn check_solution(eq: &Plde, y: &RationalFunction) -> SolutionCheck {
    let dens: BTreeMap<&IntVec, Poly> = eq.terms().keys().map(|s| (s, y.den().shift(s))).collect();
    let mut common = Poly::one(eq.vars());
    for d in dens.values() {
        common = common.mul(d);
    }
    let mut num = eq.rhs().neg().mul(&common);
    for (s, a) in eq.terms() {
        let mut t = a.expand().mul(&y.num().shift(s));
        for (s2, d) in &dens {
            if *s2 != s {
                t = t.mul(d);
            }
        }
        num = num.add(&t);
    }
    if num.is_zero() {
        return SolutionCheck { residual: RationalFunction::zero(eq.vars()), ok: true };
    }
    let residual = RationalFunction::new(num, common).expect("nonzero denominator");
    SolutionCheck { residual, ok: false }
}

/// Which clause of the output contract of the combined algorithm explains
/// a denominator factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverCase {
    /// Spread in `U` and `u^m | d`.
    Bounded,
    /// Spread in `O \ U` and a shift of `u` is in `P`.
    Residual,
    /// Spread outside `O`.
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorVerdict {
    pub factor: Poly,
    pub multiplicity: u32,
    pub class: ModuleClass,
    /// All clauses that hold; a sound report yields exactly one.
    pub cases: Vec<CoverCase>,
}

impl FactorVerdict {
    pub fn ok(&self) -> bool {
        self.cases.len() == 1
    }
}

/// Checks every irreducible factor of a solution denominator against the
/// three clauses, each evaluated independently.
pub fn check_bound_covers(eq: &Plde, den: &FactoredPoly, report: &BoundReport) -> Vec<FactorVerdict> {
    let support = eq.support();
    let d = report.d.expand();
    den.factors()
        .iter()
        .map(|f| {
            let w = spread::invariance_lattice(&f.poly).expect("non-constant factor");
            let class = classify_module(&support, &w);
            let mut cases = Vec::new();
            if matches!(class, ModuleClass::InU(_)) && d.try_div(&f.poly.pow(f.mult)).is_some() {
                cases.push(CoverCase::Bounded);
            }
            if matches!(class, ModuleClass::InOOnly { .. })
                && report.p.iter().any(|p| !spread::shift_equiv(p, &f.poly).is_empty())
            {
                cases.push(CoverCase::Residual);
            }
            if matches!(class, ModuleClass::Uncovered) {
                cases.push(CoverCase::Uncovered);
            }
            FactorVerdict { factor: f.poly.clone(), multiplicity: f.mult, class, cases }
        })
        .collect()
}

/// Builds `sum_s a_s N^s y = f` with `a_s = c_s N^s(den)` and
/// `f = sum_s c_s N^s(num)`, so that `y = num/den` is a solution.
/// `den` must be canonical and factored into irreducibles.
pub fn instance_from_solution(
    support: &[IntVec],
    num: &Poly,
    den: &FactoredPoly,
    multipliers: &[FactoredPoly],
) -> (Plde, RationalFunction) {
    assert_eq!(support.len(), multipliers.len());
    let vars = num.vars();
    let mut terms = BTreeMap::new();
    let mut f = Poly::zero(vars);
    for (s, c) in support.iter().zip(multipliers) {
        terms.insert(s.clone(), c.mul(&den.shift(s)));
        f = f.add(&c.expand().mul(&num.shift(s)));
    }
    let eq = Plde::new(vars, terms, f).expect("well-formed instance");
    let y = RationalFunction::new(num.clone(), den.expand()).expect("nonzero denominator");
    (eq, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceProfile {
    /// Support points are drawn from `[0, support_box]^2`.
    pub support_box: i64,
    pub max_points: usize,
    pub max_den_factors: usize,
}

impl Default for InstanceProfile {
    fn default() -> Self {
        InstanceProfile { support_box: 2, max_points: 4, max_den_factors: 2 }
    }
}

/// An instance in the variables `(n, k)`, its solution, and the factored
/// solution denominator.
#[derive(Clone, Debug)]
pub struct Instance {
    pub eq: Plde,
    pub y: RationalFunction,
    pub den: FactoredPoly,
}

fn random_factor(rng: &mut ChaCha8Rng, vars: &Vars) -> Poly {
    let c: i64 = rng.gen_range(1..=4);
    let text = match rng.gen_range(0..6) {
        0 => format!("n+k+{c}"),
        1 => format!("2*k+3*n+{c}"),
        2 => format!("n+{c}"),
        3 => format!("k+{c}"),
        4 => format!("n*k+{c}"),
        _ => format!("n^2+n+{c}"),
    };
    parse_poly(&text, vars).expect("valid factor")
}

/// A random equation with a certified solution.
pub fn random_instance(seed: u64, profile: &InstanceProfile) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = make_vars(&["n", "k"]);
    let mut grid: Vec<IntVec> =
        (0..=profile.support_box).flat_map(|i| (0..=profile.support_box).map(move |j| vec![i, j])).collect();
    grid.shuffle(&mut rng);
    let npts = rng.gen_range(2..=profile.max_points.max(2));
    let mut support: Vec<IntVec> = grid.into_iter().take(npts).collect();
    support.sort();
    let nfac = rng.gen_range(0..=profile.max_den_factors);
    let raw: Vec<(Poly, u32, Irreducibility)> = (0..nfac)
        .map(|_| (random_factor(&mut rng, &vars), rng.gen_range(1..=2), Irreducibility::DeclaredIrreducible))
        .collect();
    let den = FactoredPoly::with_tags(&vars, Rational::one(), raw).expect("nonzero factors");
    let num = if rng.gen_bool(0.5) { Poly::one(&vars) } else { random_factor(&mut rng, &vars) };
    let multipliers: Vec<FactoredPoly> = support
        .iter()
        .map(|_| {
            let sign: i64 = if rng.gen_bool(0.5) { -1 } else { 1 };
            let c = Rational::from_integer((sign * rng.gen_range(1..=3)).into());
            let extra = if rng.gen_bool(0.3) {
                vec![(random_factor(&mut rng, &vars), 1, Irreducibility::DeclaredIrreducible)]
            } else {
                vec![]
            };
            FactoredPoly::with_tags(&vars, c, extra).expect("nonzero")
        })
        .collect();
    let (eq, y) = instance_from_solution(&support, &num, &den, &multipliers);
    Instance { eq, y, den }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_rational_function;

    fn data(name: &str) -> Plde {
        let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
        Plde::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn golden_solutions() {
        let trace = data("trace");
        let y = parse_rational_function("(n^2+2*k^2)/(k+n+1)", trace.vars()).unwrap();
        assert!(check_solution(&trace, &y).ok);
        assert!(check_solution(&data("uncovered"), &y).ok);
        let normalized = data("normalized");
        let z = parse_rational_function("(3*k^2-4*n*k+2*n^2)/(n+1)", normalized.vars()).unwrap();
        assert!(check_solution(&normalized, &z).ok);
        let one = parse_rational_function("1", trace.vars()).unwrap();
        let c = check_solution(&trace, &one);
        assert!(!c.ok);
        let sum = trace.terms().values().fold(Poly::zero(trace.vars()), |acc, a| acc.add(&a.expand()));
        assert_eq!(c.residual, RationalFunction::from_poly(sum));
    }

    #[test]
    fn system_solution() {
        let sys = "1/((n+k+1)*(n+k+2)*(n+k+3)*(n^2+n+1)*(n^2+3*n+3)*(3*n+2*k+1))";
        for name in ["sys1", "sys2"] {
            let e = data(name);
            let y = parse_rational_function(sys, e.vars()).unwrap();
            assert!(check_solution(&e, &y).ok, "{name}");
        }
    }

    #[test]
    fn generated_instances_are_solutions() {
        for seed in 0..20 {
            let inst = random_instance(seed, &InstanceProfile::default());
            assert!(check_solution(&inst.eq, &inst.y).ok, "seed {seed}");
        }
    }

    #[test]
    fn prescribed_solutions() {
        let v = make_vars(&["n", "k"]);
        let square = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let consts: Vec<FactoredPoly> =
            [1, -2, 3, 1].iter().map(|&c| FactoredPoly::constant(&v, Rational::from_integer(c.into()))).collect();
        let den = FactoredPoly::parse("n+k+1", &v).unwrap();
        let (eq, y) = instance_from_solution(&square, &Poly::one(&v), &den, &consts);
        assert_eq!(eq.terms().len(), 4);
        assert!(check_solution(&eq, &y).ok);

        let num = parse_poly("n^2-k", &v).unwrap();
        let (eq, y) = instance_from_solution(&square, &num, &FactoredPoly::one(&v), &consts);
        assert!(y.den().is_one());
        assert!(eq.terms().values().all(FactoredPoly::is_constant));
        assert!(check_solution(&eq, &y).ok);

        let den = FactoredPoly::parse("n*k+1", &v).unwrap();
        let (eq, y) = instance_from_solution(&square[..3], &Poly::one(&v), &den, &consts[..3]);
        assert!(check_solution(&eq, &y).ok);
        let report = crate::bounds::combined_bound(&eq, &crate::bounds::BoundOptions::default()).unwrap();
        let verdicts = check_bound_covers(&eq, &den, &report);
        assert_eq!(verdicts[0].cases, vec![CoverCase::Bounded]);
    }
}
