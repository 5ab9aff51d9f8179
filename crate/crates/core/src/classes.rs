//! Divisor classes (ray-indexed coefficients) and curve classes (ray-indexed
//! intersection numbers `D_rho . C`), and the pairing between them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{dot, Int, Rat};
use crate::error::FanError;
use crate::fan::{curve_lattice_basis, Fan};
use crate::linalg::solve_unique;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    coeffs: Vec<Int>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<Int>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        DivisorClass::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(n_rays: usize) -> Self {
        DivisorClass::new(vec![Int::zero(); n_rays])
    }

    /// The torus-invariant divisor `D_ray`.
    pub fn ray(n_rays: usize, ray: usize) -> Self {
        let mut c = vec![Int::zero(); n_rays];
        c[ray] = Int::one();
        DivisorClass::new(c)
    }

    /// `-K = sum of all torus-invariant divisors`.
    pub fn anticanonical(n_rays: usize) -> Self {
        DivisorClass::new(vec![Int::one(); n_rays])
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Pairing with a curve class of the same length (panics on mismatch;
    /// see [`intersect`] for the checked version).
    pub fn dot(&self, c: &CurveClass) -> Int {
        assert_eq!(self.coeffs.len(), c.entries.len(), "divisor/curve length mismatch");
        dot(&self.coeffs, &c.entries)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Int) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    /// Linear equivalence: the difference pairs to zero with the whole curve
    /// lattice (on a smooth complete fan the Picard group is torsion free).
    pub fn equivalent(&self, other: &DivisorClass, fan: &Fan) -> bool {
        let diff = self.sub(other);
        curve_lattice_basis(fan).iter().all(|c| diff.dot(c).is_zero())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A curve class stored as its intersection numbers with the invariant divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    entries: Vec<Int>,
}

impl CurveClass {
    pub fn new(entries: Vec<Int>) -> Self {
        CurveClass { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        CurveClass::new(entries.iter().map(|&c| Int::from(c)).collect())
    }

    /// Validates that `entries` is an integer relation among the rays.
    pub fn checked(entries: Vec<Int>, fan: &Fan) -> Result<Self, FanError> {
        if entries.len() != fan.n_rays() {
            return Err(FanError::LengthMismatch {
                expected: fan.n_rays(),
                found: entries.len(),
            });
        }
        if !fan.ray_matrix().mul_vec(&entries).iter().all(Zero::is_zero) {
            return Err(FanError::NotACurveClass);
        }
        Ok(CurveClass::new(entries))
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `-K . C`, the sum of the entries.
    pub fn anticanonical_degree(&self) -> Int {
        self.entries.iter().sum()
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Int) -> CurveClass {
        CurveClass::new(self.entries.iter().map(|a| a * k).collect())
    }

    pub fn positive_rays(&self) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i] > Int::zero())
            .collect()
    }

    pub fn negative_rays(&self) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i] < Int::zero())
            .collect()
    }

    /// Coordinates in a given lattice basis (rational in general).
    pub fn coordinates_in(&self, basis: &[CurveClass]) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| b.entries.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let target: Vec<Rat> = self.entries.iter().map(|x| Rat::from_integer(x.clone())).collect();
        solve_unique(&cols, &target)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `D . C`; fails on length mismatch.
pub fn intersect(divisor: &DivisorClass, curve: &CurveClass) -> Result<Int, FanError> {
    if divisor.len() != curve.len() {
        return Err(FanError::LengthMismatch {
            expected: curve.len(),
            found: divisor.len(),
        });
    }
    Ok(divisor.dot(curve))
}
