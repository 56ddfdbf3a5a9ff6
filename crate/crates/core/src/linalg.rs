//! Dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::polyring::Rational;

pub(crate) type QMatrix = Vec<Vec<Rational>>;

pub(crate) fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect()
}

/// Solves `a x = b`. Returns a particular solution and a basis of the kernel
/// of `a`, or `None` if the system is inconsistent. `ncols` is the number of
/// unknowns (needed when `a` has no rows).
pub(crate) fn solve_affine(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<(Vec<Rational>, QMatrix)> {
    let mut m: QMatrix = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let d = &m[row][j] * &f;
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -m[i][free].clone();
        }
        kernel.push(v);
    }
    Some((x, kernel))
}

pub(crate) fn rank(a: &[Vec<Rational>], ncols: usize) -> usize {
    let b = vec![Rational::zero(); a.len()];
    let (_, k) = solve_affine(a, &b, ncols).expect("homogeneous systems are consistent");
    ncols - k.len()
}

pub(crate) fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &m[col][col];
                for j in col..n {
                    let d = &m[col][j] * &f;
                    m[i][j] -= d;
                }
            }
        }
    }
    det
}

pub(crate) fn inverse(a: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = a.len();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        let (x, k) = solve_affine(a, &e, n)?;
        if !k.is_empty() {
            return None;
        }
        cols.push(x);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Scales a rational vector to a primitive integer vector (same direction).
pub(crate) fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    use num_integer::Integer;
    let mut den = num_bigint::BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            i64::try_from(y).expect("integer vector entry exceeds i64")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: &[Vec<i64>]) -> QMatrix {
        to_q(m)
    }

    #[test]
    fn solves_and_reports_kernel() {
        let a = q(&[vec![1, 1]]);
        let (x, k) = solve_affine(&a, &[Rational::from_integer((-2).into())], 2).unwrap();
        assert_eq!(x, vec![Rational::from_integer((-2).into()), Rational::zero()]);
        assert_eq!(k.len(), 1);
        assert!(solve_affine(&q(&[vec![1, 1], vec![2, 2]]), &[Rational::one(), Rational::zero()], 2).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let a = q(&[vec![0, 1], vec![1, -1]]);
        assert_eq!(determinant(&a), Rational::from_integer((-1).into()));
        assert_eq!(inverse(&a).unwrap(), q(&[vec![1, 1], vec![1, 0]]));
        assert!(inverse(&q(&[vec![1, 2], vec![2, 4]])).is_none());
        assert_eq!(rank(&q(&[vec![1, 2], vec![2, 4]]), 2), 1);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into())];
        assert_eq!(primitive_integer(&v), vec![2, -3]);
    }
}
