#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub mod props;

use plde::equation::Plde;
use plde::lattice::{IntVec, UnimodularMatrix};
use plde::polyring::{make_vars, Poly, Vars};

pub fn config(seed: u64) -> Config {
    Config { cases: 256, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn vars2() -> Vars {
    make_vars(&["n", "k"])
}

pub fn data(name: &str) -> Plde {
    let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Plde::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn linear(v: &Vars, a: &[i64], c: i64) -> Poly {
    let mut p = Poly::from_int(v, c);
    for (i, &x) in a.iter().enumerate() {
        p = p.add(&Poly::var(v, i).mul(&Poly::from_int(v, x)));
    }
    p
}

fn form() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, -3i64..=3).prop_filter("nonzero form", |(a, b)| (*a, *b) != (0, 0))
}

fn independent_forms() -> impl Strategy<Value = ((i64, i64), (i64, i64))> {
    (form(), form()).prop_filter("independent", |((a, b), (c, d))| a * d - b * c != 0)
}

/// Irreducible polynomials in `n, k`: linear forms, `L1^2 + L2 + c` and
/// `L1 L2 + c` with `L1, L2` independent and `c != 0` in the last case.
pub fn irreducible() -> impl Strategy<Value = Poly> {
    prop_oneof![
        (form(), -5i64..=5).prop_map(|((a, b), c)| linear(&vars2(), &[a, b], c)),
        (independent_forms(), -5i64..=5).prop_map(|(((a, b), (c, d)), e)| {
            let v = vars2();
            linear(&v, &[a, b], 0).pow(2).add(&linear(&v, &[c, d], e))
        }),
        (independent_forms(), prop_oneof![-5i64..=-1, 1i64..=5]).prop_map(|(((a, b), (c, d)), e)| {
            let v = vars2();
            linear(&v, &[a, b], 0).mul(&linear(&v, &[c, d], 0)).add(&Poly::from_int(&v, e))
        }),
    ]
}

/// Irreducible polynomials whose invariance lattice lies in `{0} x Z`:
/// polynomials in `n` alone and aperiodic ones.
pub fn first_axis_free() -> impl Strategy<Value = Poly> {
    prop_oneof![
        (1i64..=3, -5i64..=5).prop_map(|(a, c)| linear(&vars2(), &[a, 0], c)),
        (-3i64..=3, 1i64..=6).prop_filter("no rational root", |(b, c)| b * b < 4 * c).prop_map(|(b, c)| {
            let v = vars2();
            Poly::var(&v, 0).pow(2).add(&linear(&v, &[b, 0], c))
        }),
        (independent_forms(), -5i64..=5).prop_map(|(((a, b), (c, d)), e)| {
            let v = vars2();
            linear(&v, &[a, b], 0).pow(2).add(&linear(&v, &[c, d], e))
        }),
    ]
}

pub fn shift2(radius: i64) -> impl Strategy<Value = IntVec> {
    prop::collection::vec(-radius..=radius, 2)
}

/// Unimodular matrices as products of elementary operations.
pub fn unimodular(dim: usize) -> impl Strategy<Value = UnimodularMatrix> {
    prop::collection::vec((0..dim, 0..dim, -2i64..=2, any::<bool>()), 1..6).prop_map(move |ops| {
        let mut m: Vec<IntVec> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, c, flip) in ops {
            if i != j {
                let row = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x += c * y;
                }
            }
            if flip {
                m.swap(0, dim - 1);
                m[0].iter_mut().for_each(|x| *x = -*x);
            }
        }
        UnimodularMatrix::new(m).expect("determinant +-1")
    })
}
