//! Submodules of `Z^r` in Hermite normal form, cosets of them, and
//! unimodular matrices.
//!
//! Integer vectors are `i64`; the workspace builds with overflow checks in
//! every profile so an overflow aborts instead of corrupting a result.

use std::fmt;

use thiserror::Error;

use crate::linalg;
use crate::polyring::Rational;

pub type IntVec = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rows do not span a saturated lattice")]
    NotSaturated,
    #[error("rows are linearly dependent")]
    Dependent,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("vector {0:?} is not orthogonal to the module")]
    NotOrthogonal(IntVec),
    #[error("vector {0:?} is not primitive in the complement lattice")]
    NotPrimitive(IntVec),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("cannot parse module '{0}'")]
    Parse(String),
}

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn axpy(y: &mut [i64], a: i64, x: &[i64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= a * xi;
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row Hermite normal form of the row span. Zero rows are dropped.
pub fn hnf_rows(rows: &[IntVec], dim: usize) -> Vec<IntVec> {
    let mut m: Vec<IntVec> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut r = 0;
    for col in 0..dim {
        if r >= m.len() {
            break;
        }
        while let Some(p) = (r..m.len()).filter(|&i| m[i][col] != 0).min_by_key(|&i| m[i][col].abs()) {
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col] / m[r][col];
                    let pivot = m[r].clone();
                    axpy(&mut m[i], q, &pivot);
                    if m[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][col] == 0 {
            continue;
        }
        if m[r][col] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        let pivot = m[r].clone();
        for i in 0..r {
            let q = floor_div(m[i][col], pivot[col]);
            axpy(&mut m[i], q, &pivot);
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|&x| x != 0));
    m
}

/// Column echelon form: returns `(h, u, rank)` with `a * u = h`, `u`
/// unimodular, and columns `rank..` of `h` zero.
fn column_echelon(a: &[IntVec], dim: usize) -> (Vec<IntVec>, Vec<IntVec>, usize) {
    let mut h: Vec<IntVec> = a.to_vec();
    let mut u: Vec<IntVec> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<IntVec>, j: usize, q: i64, p: usize| {
        for row in m.iter_mut() {
            row[j] -= q * row[p];
        }
    };
    let swap = |m: &mut Vec<IntVec>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut pc = 0;
    for i in 0..h.len() {
        if pc >= dim {
            break;
        }
        while let Some(p) = (pc..dim).filter(|&j| h[i][j] != 0).min_by_key(|&j| h[i][j].abs()) {
            swap(&mut h, pc, p);
            swap(&mut u, pc, p);
            let mut done = true;
            for j in pc + 1..dim {
                if h[i][j] != 0 {
                    let q = h[i][j] / h[i][pc];
                    col_op(&mut h, j, q, pc);
                    col_op(&mut u, j, q, pc);
                    if h[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[i][pc] != 0 {
            if h[i][pc] < 0 {
                for row in h.iter_mut() {
                    row[pc] = -row[pc];
                }
                for row in u.iter_mut() {
                    row[pc] = -row[pc];
                }
            }
            pc += 1;
        }
    }
    (h, u, pc)
}

/// Integer solutions of `a x = b`: one particular solution and the kernel
/// lattice, or `None` if there is no integer solution.
pub fn solve_integer(a: &[IntVec], b: &[i64], dim: usize) -> Option<(IntVec, IntLattice)> {
    let (h, u, rank) = column_echelon(a, dim);
    let mut y = vec![0i64; dim];
    let mut next = 0;
    for (i, row) in h.iter().enumerate() {
        let partial: i64 = (0..next).map(|j| row[j] * y[j]).sum();
        if next < rank && row[next] != 0 {
            let rest = b[i] - partial;
            if rest % row[next] != 0 {
                return None;
            }
            y[next] = rest / row[next];
            next += 1;
        } else if partial != b[i] {
            return None;
        }
    }
    let x: IntVec = (0..dim).map(|i| dot(&u[i], &y)).collect();
    let kernel: Vec<IntVec> = (rank..dim).map(|j| (0..dim).map(|i| u[i][j]).collect()).collect();
    Some((x, IntLattice::from_generators(&kernel, dim)))
}

/// A submodule of `Z^dim`, stored by its row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<IntVec>,
}

impl IntLattice {
    pub fn from_generators(rows: &[IntVec], dim: usize) -> IntLattice {
        for r in rows {
            assert_eq!(r.len(), dim, "generator length must equal the ambient dimension");
        }
        IntLattice { dim, basis: hnf_rows(rows, dim) }
    }

    pub fn zero(dim: usize) -> IntLattice {
        IntLattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> IntLattice {
        let rows: Vec<IntVec> = (0..dim).map(|i| unit(dim, i)).collect();
        IntLattice::from_generators(&rows, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            if v[..c].iter().any(|&x| x != 0) {
                return false;
            }
            if v[c] % row[c] != 0 {
                return false;
            }
            let q = v[c] / row[c];
            axpy(&mut v, q, row);
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        let rows: Vec<IntVec> = self.basis.iter().chain(&other.basis).cloned().collect();
        IntLattice::from_generators(&rows, self.dim)
    }

    /// `{u in Z^dim : u . w = 0 for all w}`; always saturated.
    pub fn orthogonal_complement(&self) -> IntLattice {
        if self.basis.is_empty() {
            return IntLattice::full(self.dim);
        }
        let zeros = vec![0; self.basis.len()];
        solve_integer(&self.basis, &zeros, self.dim).expect("homogeneous system").1
    }

    /// Smallest saturated lattice containing `self`, i.e. `L (x) Q  /\  Z^dim`.
    pub fn saturation(&self) -> IntLattice {
        self.orthogonal_complement().orthogonal_complement()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// Generators with the pivot in the last nonzero column, used to pick
    /// canonical coset representatives.
    fn reverse_echelon(&self) -> Vec<IntVec> {
        let rev: Vec<IntVec> = self.basis.iter().map(|r| r.iter().rev().copied().collect()).collect();
        hnf_rows(&rev, self.dim).into_iter().map(|r| r.into_iter().rev().collect()).collect()
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> IntVec {
        let mut v = v.to_vec();
        for row in self.reverse_echelon() {
            let c = row.iter().rposition(|&x| x != 0).expect("nonzero row");
            let q = floor_div(v[c], row[c]);
            axpy(&mut v, q, &row);
        }
        v
    }

    /// Parses `"1,-1"`, `"1,0;0,1"` or `"0"` (the zero module).
    pub fn parse(text: &str, dim: usize) -> Result<IntLattice, LatticeError> {
        let t = text.trim();
        let bad = || LatticeError::Parse(text.to_string());
        if t == "0" || t == "{0}" {
            return Ok(IntLattice::zero(dim));
        }
        let mut rows = Vec::new();
        for part in t.split(';') {
            let row: IntVec =
                part.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            if row.len() != dim {
                return Err(LatticeError::Dimension { expected: dim, got: row.len() });
            }
            rows.push(row);
        }
        Ok(IntLattice::from_generators(&rows, dim))
    }
}

impl IntLattice {
    /// Generators in parentheses, e.g. `(1,-1) (0,2)`; the zero module as `{0}`.
    pub fn generators_text(&self) -> String {
        if self.basis.is_empty() {
            return "{0}".to_string();
        }
        self.basis
            .iter()
            .map(|g| format!("({})", g.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for IntLattice {
    /// Generator syntax: rows separated by `;`, the zero module as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0");
        }
        let rows: Vec<String> =
            self.basis.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

pub fn unit(dim: usize, i: usize) -> IntVec {
    (0..dim).map(|j| i64::from(i == j)).collect()
}

/// `base + lattice`, or empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShiftCoset {
    Empty,
    Coset { base: IntVec, lattice: IntLattice },
}

impl ShiftCoset {
    pub fn new(base: IntVec, lattice: IntLattice) -> ShiftCoset {
        let base = lattice.reduce(&base);
        ShiftCoset::Coset { base, lattice }
    }

    pub fn normalize(self) -> ShiftCoset {
        match self {
            ShiftCoset::Empty => ShiftCoset::Empty,
            ShiftCoset::Coset { base, lattice } => ShiftCoset::new(base, lattice),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ShiftCoset::Empty)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        match self {
            ShiftCoset::Empty => false,
            ShiftCoset::Coset { base, lattice } => {
                let d: IntVec = v.iter().zip(base).map(|(a, b)| a - b).collect();
                lattice.contains(&d)
            }
        }
    }

    pub fn negate(&self) -> ShiftCoset {
        match self {
            ShiftCoset::Empty => ShiftCoset::Empty,
            ShiftCoset::Coset { base, lattice } => ShiftCoset::new(base.iter().map(|x| -x).collect(), lattice.clone()),
        }
    }

    pub fn translate(&self, t: &[i64]) -> ShiftCoset {
        match self {
            ShiftCoset::Empty => ShiftCoset::Empty,
            ShiftCoset::Coset { base, lattice } => {
                ShiftCoset::new(base.iter().zip(t).map(|(a, b)| a + b).collect(), lattice.clone())
            }
        }
    }

    pub fn base(&self) -> Option<&IntVec> {
        match self {
            ShiftCoset::Empty => None,
            ShiftCoset::Coset { base, .. } => Some(base),
        }
    }

    pub fn lattice(&self) -> Option<&IntLattice> {
        match self {
            ShiftCoset::Empty => None,
            ShiftCoset::Coset { lattice, .. } => Some(lattice),
        }
    }
}

impl fmt::Display for ShiftCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftCoset::Empty => write!(f, "empty"),
            ShiftCoset::Coset { base, lattice } => {
                let b: Vec<String> = base.iter().map(i64::to_string).collect();
                write!(f, "({}) + <{}>", b.join(","), lattice)
            }
        }
    }
}

/// Square integer matrix with determinant +-1, together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    m: Vec<IntVec>,
    inv: Vec<IntVec>,
}

impl UnimodularMatrix {
    pub fn new(m: Vec<IntVec>) -> Result<UnimodularMatrix, LatticeError> {
        let n = m.len();
        if let Some(r) = m.iter().find(|r| r.len() != n) {
            return Err(LatticeError::Dimension { expected: n, got: r.len() });
        }
        let q = linalg::to_q(&m);
        let det = linalg::determinant(&q);
        if det != Rational::from_integer(1.into()) && det != Rational::from_integer((-1).into()) {
            return Err(LatticeError::NotUnimodular(det.to_string()));
        }
        let inv = linalg::inverse(&q).expect("unimodular matrices are invertible");
        let inv = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x.to_integer()).expect("small entries")).collect())
            .collect();
        Ok(UnimodularMatrix { m, inv })
    }

    pub fn identity(n: usize) -> UnimodularMatrix {
        let m: Vec<IntVec> = (0..n).map(|i| unit(n, i)).collect();
        UnimodularMatrix { inv: m.clone(), m }
    }

    pub fn rows(&self) -> &[IntVec] {
        &self.m
    }

    pub fn inverse_rows(&self) -> &[IntVec] {
        &self.inv
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix { m: self.inv.clone(), inv: self.m.clone() }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn det(&self) -> i64 {
        let d = linalg::determinant(&linalg::to_q(&self.m));
        i64::try_from(d.to_integer()).expect("determinant is +-1")
    }

    pub fn apply(&self, v: &[i64]) -> IntVec {
        self.m.iter().map(|r| dot(r, v)).collect()
    }

    pub fn apply_inverse(&self, v: &[i64]) -> IntVec {
        self.inv.iter().map(|r| dot(r, v)).collect()
    }

    pub fn compose(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        let n = self.dim();
        let mul = |a: &[IntVec], b: &[IntVec]| -> Vec<IntVec> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
        };
        UnimodularMatrix { m: mul(&self.m, &other.m), inv: mul(&other.inv, &self.inv) }
    }

    /// Parses `"0,1;1,-1"`.
    pub fn parse(text: &str) -> Result<UnimodularMatrix, LatticeError> {
        let rows: Vec<IntVec> = text
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(|_| LatticeError::Parse(text.to_string()))?;
        UnimodularMatrix::new(rows)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.m.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Extends rows spanning a saturated lattice to a unimodular matrix whose
/// first rows are exactly the given ones.
pub fn unimodular_completion(rows: &[IntVec], dim: usize) -> Result<UnimodularMatrix, LatticeError> {
    let t = rows.len();
    if t > dim {
        return Err(LatticeError::Dependent);
    }
    let (h, u, rank) = column_echelon(rows, dim);
    if rank < t {
        return Err(LatticeError::Dependent);
    }
    // rows * u = [D | 0]; D lower triangular with nonnegative diagonal.
    if (0..t).any(|i| h[i][i] != 1) {
        return Err(LatticeError::NotSaturated);
    }
    let u_inv = UnimodularMatrix::new(u).expect("column operations are unimodular").inverse();
    let mut m: Vec<IntVec> = rows.to_vec();
    m.extend(u_inv.rows()[t..].iter().cloned());
    UnimodularMatrix::new(m)
}
