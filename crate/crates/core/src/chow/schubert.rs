//! Schubert calculus on the Grassmannian of lines `Gr(2, e)` by the Pieri
//! rule. This is kept independent of the presented Grassmann bundle ring and
//! serves as its oracle.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{rat_to_string, Int, Rat};

/// Partition `(a, b)` with `e - 2 >= a >= b >= 0`, indexing `sigma_{a,b}`.
pub type Partition = (usize, usize);

/// `sigma_1 * sum c_p sigma_p`.
pub fn pieri_sigma1<T: Clone + Zero + std::ops::AddAssign>(e: usize, x: &BTreeMap<Partition, T>) -> BTreeMap<Partition, T> {
    let top = e - 2;
    let mut out: BTreeMap<Partition, T> = BTreeMap::new();
    for (&(a, b), c) in x {
        if a < top {
            *out.entry((a + 1, b)).or_insert_with(T::zero) += c.clone();
        }
        if b < a {
            *out.entry((a, b + 1)).or_insert_with(T::zero) += c.clone();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `sigma_{1,1} * sum c_p sigma_p`.
pub fn pieri_sigma11<T: Clone + Zero + std::ops::AddAssign>(e: usize, x: &BTreeMap<Partition, T>) -> BTreeMap<Partition, T> {
    let top = e - 2;
    let mut out: BTreeMap<Partition, T> = BTreeMap::new();
    for (&(a, b), c) in x {
        if a < top {
            *out.entry((a + 1, b + 1)).or_insert_with(T::zero) += c.clone();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Schubert expansion of `sigma_1^a sigma_{1,1}^b` on `Gr(2, e)`.
pub fn monomial_expansion(e: usize, a: usize, b: usize) -> BTreeMap<Partition, Int> {
    assert!(e >= 2);
    let mut x: BTreeMap<Partition, Int> = BTreeMap::new();
    x.insert((0, 0), Int::from(1));
    for _ in 0..b {
        x = pieri_sigma11(e, &x);
    }
    for _ in 0..a {
        x = pieri_sigma1(e, &x);
    }
    x
}

/// `int_{Gr(2,e)} sigma_1^a sigma_{1,1}^b`; zero unless `a + 2b = 2(e-2)`.
pub fn integral(e: usize, a: usize, b: usize) -> Int {
    if a + 2 * b != 2 * (e - 2) {
        return Int::zero();
    }
    monomial_expansion(e, a, b)
        .get(&(e - 2, e - 2))
        .cloned()
        .unwrap_or_else(Int::zero)
}

/// Coordinates of a class on `Gr(2, e)` in the Schubert basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertExpansion {
    pub e: usize,
    pub coeffs: BTreeMap<Partition, Rat>,
}

impl SchubertExpansion {
    /// Expands `sum c_{a,b} sigma_1^a sigma_{1,1}^b`.
    pub fn from_monomials(e: usize, monomials: &[((usize, usize), Rat)]) -> SchubertExpansion {
        let mut coeffs: BTreeMap<Partition, Rat> = BTreeMap::new();
        for ((a, b), c) in monomials {
            if c.is_zero() {
                continue;
            }
            for (p, m) in monomial_expansion(e, *a, *b) {
                *coeffs.entry(p).or_insert_with(Rat::zero) += c * Rat::from_integer(m);
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        SchubertExpansion { e, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn coeff(&self, p: Partition) -> Rat {
        self.coeffs.get(&p).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree of the point-class coefficient, i.e. the integral.
    pub fn integral(&self) -> Rat {
        self.coeff((self.e - 2, self.e - 2))
    }
}

/// Serialized form: `sigma_{a,b}` labels with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchubertTerm {
    pub partition: [usize; 2],
    pub coeff: String,
}

impl SchubertExpansion {
    pub fn terms(&self) -> Vec<SchubertTerm> {
        self.coeffs
            .iter()
            .map(|(&(a, b), c)| SchubertTerm {
                partition: [a, b],
                coeff: rat_to_string(c),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn catalan(n: usize) -> Int {
        crate::arith::binomial(2 * n, n) / Int::from(n + 1)
    }

    #[test]
    fn classical_numbers() {
        // four general lines in P^3 meet two lines
        assert_eq!(integral(4, 4, 0), int(2));
        assert_eq!(integral(4, 2, 1), int(1));
        assert_eq!(integral(4, 0, 2), int(1));
        assert_eq!(integral(3, 0, 1), int(1));
        assert_eq!(integral(3, 1, 1), int(0));
        assert_eq!(integral(3, 2, 0), int(1));
        assert_eq!(integral(5, 6, 0), int(5));
        assert_eq!(integral(4, 3, 0), int(0));
        for e in 2..12 {
            assert_eq!(integral(e, 2 * (e - 2), 0), catalan(e - 2), "e = {e}");
        }
    }

    #[test]
    fn betti_numbers_of_gr25() {
        // number of partitions in each degree: 1,1,2,2,2,1,1
        let mut counts = [0usize; 7];
        for a in 0..=3usize {
            for b in 0..=a {
                counts[a + b] += 1;
            }
        }
        assert_eq!(counts, [1, 1, 2, 2, 2, 1, 1]);
        let x = monomial_expansion(5, 2, 0);
        assert_eq!(x.get(&(2, 0)), Some(&int(1)));
        assert_eq!(x.get(&(1, 1)), Some(&int(1)));
    }

    #[test]
    fn sym2_on_gr24() {
        // 2 sigma_1^2 + 4 sigma_11 = 2 sigma_2 + 6 sigma_11
        let x = SchubertExpansion::from_monomials(
            4,
            &[((2, 0), Rat::from_integer(int(2))), ((0, 1), Rat::from_integer(int(4)))],
        );
        assert_eq!(x.coeff((2, 0)), Rat::from_integer(int(2)));
        assert_eq!(x.coeff((1, 1)), Rat::from_integer(int(6)));
        assert!(x.is_nonnegative());
    }
}
