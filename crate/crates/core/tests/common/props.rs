//! Property bodies and their input strategies, shared by the property test
//! targets and the acceptance suite.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use plde::bounds::{aperiodic_bound, combined_bound, lcm_combine, module_bound, strip_rewrite, BoundOptions};
use plde::equation::Plde;
use plde::factored::FactoredPoly;
use plde::geometry::{classify_module, ModuleClass};
use plde::lattice::{IntLattice, IntVec, ShiftCoset, UnimodularMatrix};
use plde::polyring::{gcd_poly, parse_poly, Poly, Rational, RationalFunction};
use plde::spread::{coset_box_points, invariance_lattice, shift_equiv, spread_box_oracle, spread_pair, Dispersion};
use plde::transform::{act_on_rational, transform_equation};
use plde::verify::{check_bound_covers, check_solution, instance_from_solution, random_instance, InstanceProfile};

use super::{first_axis_free, irreducible, shift2, unimodular, vars2};

type Outcome = Result<(), TestCaseError>;

fn int(c: i64) -> Rational {
    Rational::from_integer(c.into())
}

// ---- spreads ----

/// A partner for `p`: either a scaled shift of it or an unrelated polynomial.
pub fn partner() -> impl Strategy<Value = (Poly, Poly)> {
    (irreducible(), prop_oneof![shift2(3).prop_map(Some), Just(None)], irreducible(), prop_oneof![-3i64..=-1, 1i64..=3])
        .prop_map(|(p, t, other, c)| {
            let q = match t {
                Some(t) => p.shift(&t).scale(&int(c)),
                None => other,
            };
            (p, q)
        })
}

pub fn spread_matches_box_search((p, q): (Poly, Poly)) -> Outcome {
    let c = spread_pair(&p, &q);
    prop_assert_eq!(coset_box_points(&c, 2, 3), spread_box_oracle(&p, &q, 3));
    Ok(())
}

pub fn differences_lie_in_invariance_lattice((p, q): (Poly, Poly)) -> Outcome {
    let c = shift_equiv(&p, &q);
    if let ShiftCoset::Coset { base, lattice } = &c {
        let w = invariance_lattice(&q).unwrap();
        prop_assert_eq!(lattice, &w);
        prop_assert_eq!(&invariance_lattice(&p).unwrap(), &w);
        let pts: Vec<_> = coset_box_points(&c, 2, 2).into_iter().collect();
        for a in &pts {
            for b in &pts {
                let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                prop_assert!(w.contains(&d));
            }
        }
        let image = q.shift(base);
        let ratio = image.leading_coeff() / p.leading_coeff();
        prop_assert_eq!(image, p.scale(&ratio));
    }
    Ok(())
}

pub fn spread_symmetry((p, q): (Poly, Poly)) -> Outcome {
    prop_assert_eq!(shift_equiv(&q, &p), shift_equiv(&p, &q).negate());
    Ok(())
}

pub fn projection_case() -> impl Strategy<Value = (Poly, IntVec, Poly, bool)> {
    (first_axis_free(), shift2(4), first_axis_free(), any::<bool>())
}

/// With invariance lattices inside `{0} x Z`, all shifts relating `u` and
/// `v` share their first coordinate.
pub fn first_projection_is_unique((u, t, other, related): (Poly, IntVec, Poly, bool)) -> Outcome {
    let v = if related { u.shift(&t).scale(&int(-2)) } else { other };
    if let ShiftCoset::Coset { base, lattice } = shift_equiv(&u, &v) {
        prop_assert!(lattice.basis().iter().all(|g| g[0] == 0));
        if related {
            prop_assert_eq!(base[0], -t[0]);
        }
    }
    Ok(())
}

// ---- factored arithmetic and lattices ----

const POOL: [&str; 7] = ["n+k+1", "n+k+2", "3*n+2*k+1", "n^2+n+1", "n*k+1", "k+5", "n-k+3"];

pub fn factored() -> impl Strategy<Value = FactoredPoly> {
    let pick = (0..POOL.len(), 1u32..=2);
    (prop::collection::vec(pick, 0..=3), prop_oneof![-4i64..=-1, 1i64..=4]).prop_map(|(picks, unit)| {
        let v = vars2();
        let raw = picks.into_iter().map(|(i, m)| (parse_poly(POOL[i], &v).unwrap(), m)).collect();
        FactoredPoly::new(&v, int(unit), raw).unwrap()
    })
}

fn primitive(p: &Poly) -> Poly {
    p.normalize_primitive().unwrap().1
}

pub fn gcd_lcm_laws((a, b): (FactoredPoly, FactoredPoly)) -> Outcome {
    let g = a.gcd(&b);
    let l = a.lcm(&b);
    prop_assert!(g.divides(&a) && g.divides(&b));
    prop_assert!(a.divides(&l) && b.divides(&l));
    prop_assert_eq!(g.mul(&l).monic(), a.mul(&b).monic());
    prop_assert_eq!(primitive(&g.expand()), primitive(&gcd_poly(&a.expand(), &b.expand())));
    let c = a.mul(&b);
    prop_assert!(a.expand().divides(&c.expand()));
    prop_assert_eq!(c.remove(&b).monic(), a.monic());
    Ok(())
}

pub fn factored_shift_commutes_with_expansion((a, s): (FactoredPoly, IntVec)) -> Outcome {
    prop_assert_eq!(a.shift(&s).expand(), a.expand().shift(&s));
    Ok(())
}

pub fn lattice_case() -> impl Strategy<Value = (Vec<IntVec>, Vec<i64>, IntVec)> {
    (
        prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..=3),
        prop::collection::vec(-2i64..=2, 3),
        prop::collection::vec(-6i64..=6, 3),
    )
}

pub fn lattice_invariants((gens, mix, v): (Vec<IntVec>, Vec<i64>, IntVec)) -> Outcome {
    let l = IntLattice::from_generators(&gens, 3);
    for g in &gens {
        prop_assert!(l.contains(g));
    }
    // adding an integer combination does not change the canonical basis
    let mut more = gens.clone();
    if !gens.is_empty() {
        let combo: IntVec = (0..3).map(|j| gens.iter().zip(&mix).map(|(g, c)| c * g[j]).sum()).collect();
        more.push(combo);
        more.reverse();
    }
    prop_assert_eq!(&IntLattice::from_generators(&more, 3), &l);

    let sat = l.saturation();
    prop_assert!(sat.is_saturated());
    prop_assert_eq!(&sat.saturation(), &sat);
    prop_assert!(l.is_sublattice_of(&sat));
    prop_assert_eq!(sat.rank(), l.rank());

    let perp = l.orthogonal_complement();
    prop_assert_eq!(perp.rank() + l.rank(), 3);
    for a in perp.basis() {
        for b in l.basis() {
            prop_assert_eq!(plde::lattice::dot(a, b), 0);
        }
    }
    prop_assert_eq!(&perp.orthogonal_complement(), &sat);

    let red = l.reduce(&v);
    let diff: IntVec = v.iter().zip(&red).map(|(a, b)| a - b).collect();
    prop_assert!(l.contains(&diff));
    for g in l.basis() {
        let moved: IntVec = v.iter().zip(g).map(|(a, b)| a + 2 * b).collect();
        prop_assert_eq!(&l.reduce(&moved), &red);
    }
    Ok(())
}

pub fn completion_is_unimodular(row: IntVec) -> Outcome {
    let g = row.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g != 1 {
        prop_assert!(plde::lattice::unimodular_completion(&[row], 3).is_err());
        return Ok(());
    }
    let m = plde::lattice::unimodular_completion(std::slice::from_ref(&row), 3).unwrap();
    prop_assert_eq!(m.det().abs(), 1);
    prop_assert_eq!(&m.rows()[0], &row);
    prop_assert_eq!(m.compose(&m.inverse()), UnimodularMatrix::identity(3));
    Ok(())
}

// ---- changes of variables ----

pub fn conjugation_case() -> impl Strategy<Value = (UnimodularMatrix, u64, IntVec)> {
    (unimodular(2), any::<u64>(), shift2(3))
}

const LIGHT: InstanceProfile = InstanceProfile { support_box: 2, max_points: 3, max_den_factors: 1 };

/// `N^(M s)` after the substitution equals the substitution after `N^s`,
/// and solutions correspond under the transform.
pub fn shift_conjugation((a, seed, s): (UnimodularMatrix, u64, IntVec)) -> Outcome {
    let inst = random_instance(seed, &LIGHT);
    let m = a.inverse();
    let y = &inst.y;
    prop_assert_eq!(act_on_rational(&a, &y.shift(&s)), act_on_rational(&a, y).shift(&m.apply(&s)));

    let eq2 = transform_equation(&inst.eq, &m);
    prop_assert_eq!(&transform_equation(&eq2, &a), &inst.eq);
    prop_assert!(check_solution(&eq2, &act_on_rational(&a, y)).ok);
    let wrong = y.add(&RationalFunction::from_poly(Poly::one(y.vars())));
    prop_assert_eq!(check_solution(&eq2, &act_on_rational(&a, &wrong)).ok, check_solution(&inst.eq, &wrong).ok);
    Ok(())
}

// ---- strip rewriting ----

const FACTORS: [&str; 6] = ["n+k+1", "3*n+2*k+1", "n+2", "k+3", "n*k+2", "n^2+n+1"];

fn denominator() -> impl Strategy<Value = FactoredPoly> {
    prop::collection::vec((0..FACTORS.len(), 1u32..=2), 0..=2).prop_map(|picks| {
        let v = vars2();
        let raw = picks.into_iter().map(|(i, m)| (parse_poly(FACTORS[i], &v).unwrap(), m)).collect();
        FactoredPoly::new(&v, int(1), raw).unwrap()
    })
}

fn numerator() -> impl Strategy<Value = Poly> {
    prop::sample::select(vec!["1", "n+k", "k^2-3", "n*k+n"]).prop_map(|s| parse_poly(s, &vars2()).unwrap())
}

fn multipliers(len: usize) -> impl Strategy<Value = Vec<FactoredPoly>> {
    prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], len)
        .prop_map(|cs| cs.into_iter().map(|c| FactoredPoly::constant(&vars2(), int(c))).collect())
}

pub type StripCase = (Vec<IntVec>, Poly, FactoredPoly, Vec<FactoredPoly>, u64);

/// Supports with `(0,0)` as the only point of smallest first coordinate,
/// a prescribed solution and a strip width.
pub fn strip_case() -> impl Strategy<Value = StripCase> {
    prop::collection::btree_set((1i64..=2, -2i64..=2), 1..=3)
        .prop_map(|pts| {
            let mut s = vec![vec![0, 0]];
            s.extend(pts.into_iter().map(|(a, b)| vec![a, b]));
            s
        })
        .prop_flat_map(|s| {
            let len = s.len();
            (Just(s), numerator(), denominator(), multipliers(len), 0u64..=3)
        })
}

fn strip_of(case: &StripCase) -> (plde::bounds::StripResult, RationalFunction) {
    let (support, num, den, mults, s) = case;
    let (eq, y) = instance_from_solution(support, num, den, mults);
    assert!(check_solution(&eq, &y).ok);
    (strip_rewrite(&eq, &[0, 0], Dispersion::Finite(*s)).unwrap(), y)
}

/// The rewritten expression of `N^p y` holds for the known solution.
pub fn strip_identity(case: StripCase) -> Outcome {
    let (out, y) = strip_of(&case);
    prop_assert!(out.residual(&y).is_zero());
    Ok(())
}

pub fn strip_denominator_divides_product(case: StripCase) -> Outcome {
    let (out, _) = strip_of(&case);
    prop_assert!(out.d_actual.divides(&out.product_bound()));
    Ok(())
}

pub fn strip_gap(case: StripCase) -> Outcome {
    let s = case.4 as i64;
    let (out, _) = strip_of(&case);
    for q in &out.rplus {
        prop_assert!(q[0] > s);
    }
    for q in &out.rminus {
        prop_assert!(q[0] <= s);
    }
    Ok(())
}

// ---- bounds ----

const PERIODIC: [(&str, &str); 5] =
    [("n+k", "1,-1"), ("3*n+2*k", "2,-3"), ("n-k", "1,1"), ("n*k", "0"), ("n+2*k", "2,-1")];

pub type TwoModuleCase = (Vec<IntVec>, usize, usize, i64, i64, Vec<FactoredPoly>);

/// Two factors with different spreads, both in modules that admit a
/// useful pair for the support.
pub fn two_module_case() -> impl Strategy<Value = TwoModuleCase> {
    (
        prop::collection::btree_set((0i64..=2, 0i64..=2), 2..=4),
        (0..PERIODIC.len(), 0..PERIODIC.len()).prop_filter("distinct modules", |(a, b)| a != b),
        1i64..=4,
        1i64..=4,
    )
        .prop_filter("both modules useful", |(pts, (i, j), _, _)| {
            let support: Vec<IntVec> = pts.iter().map(|&(a, b)| vec![a, b]).collect();
            [*i, *j].iter().all(|&x| {
                let w = IntLattice::parse(PERIODIC[x].1, 2).unwrap();
                matches!(classify_module(&support, &w), ModuleClass::InU(_))
            })
        })
        .prop_flat_map(|(pts, (i, j), c1, c2)| {
            let support: Vec<IntVec> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
            let len = support.len();
            (Just(support), Just(i), Just(j), Just(c1), Just(c2), multipliers(len))
        })
}

fn module_bound_or_aperiodic(eq: &Plde, w: &IntLattice) -> FactoredPoly {
    if w.is_zero() {
        aperiodic_bound(eq, &BoundOptions::default()).unwrap()
    } else {
        module_bound(eq, w, &BoundOptions::default()).unwrap().d_w
    }
}

/// `1/(w1 w2)` is cleared by the lcm of the two module bounds.
pub fn lcm_of_module_bounds_is_sound((support, i, j, c1, c2, mults): TwoModuleCase) -> Outcome {
    let v = vars2();
    let w1 = parse_poly(&format!("{}+{c1}", PERIODIC[i].0), &v).unwrap();
    let w2 = parse_poly(&format!("{}+{c2}", PERIODIC[j].0), &v).unwrap();
    let l1 = invariance_lattice(&w1).unwrap();
    let l2 = invariance_lattice(&w2).unwrap();
    prop_assert_eq!(&l1, &IntLattice::parse(PERIODIC[i].1, 2).unwrap());
    prop_assert_eq!(&l2, &IntLattice::parse(PERIODIC[j].1, 2).unwrap());

    let den = FactoredPoly::new(&v, int(1), vec![(w1, 1), (w2, 1)]).unwrap();
    let (eq, y) = instance_from_solution(&support, &Poly::one(&v), &den, &mults);
    prop_assert!(check_solution(&eq, &y).ok);
    let d = lcm_combine(&v, &[module_bound_or_aperiodic(&eq, &l1), module_bound_or_aperiodic(&eq, &l2)]);
    prop_assert!(den.divides(&d), "{} does not divide {}", den, d);
    let report = combined_bound(&eq, &BoundOptions::default()).unwrap();
    prop_assert!(den.divides(&report.d));
    Ok(())
}

/// Every denominator factor of a generated solution satisfies exactly one
/// of the three output clauses of the combined bound.
pub fn every_factor_lands_in_exactly_one_case(seed: u64) -> Outcome {
    let inst = random_instance(seed, &InstanceProfile::default());
    prop_assert!(check_solution(&inst.eq, &inst.y).ok);
    let report = combined_bound(&inst.eq, &BoundOptions::default()).unwrap();
    for v in check_bound_covers(&inst.eq, &inst.den, &report) {
        prop_assert!(v.ok(), "{} ^ {}: {} {:?}", v.factor, v.multiplicity, v.class.label(), v.cases);
    }
    Ok(())
}
