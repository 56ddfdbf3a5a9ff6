use std::cmp::Ordering;

/// Exponent vector of a monomial `n_1^e_1 * ... * n_r^e_r`.
///
/// Ordered graded-lexicographically: higher total degree is larger, ties are
/// broken lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a.checked_sub(b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    pub(crate) fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
