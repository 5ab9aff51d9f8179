//! Graded Chow rings with exact rational coefficients: toric rings of smooth
//! complete fans and line Grassmann bundles over them.
//!
//! Every [`ChowElement`] is stored in normal form, i.e. as coordinates over
//! a fixed basis of each graded piece of its ring, so equality of classes is
//! equality of coordinate vectors.

mod grassmann;
pub mod schubert;
mod toric;

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat_to_string, Rat};
use crate::error::ChowError;

pub use grassmann::{BasisMonomial, GrassmannBundleRing};
pub use toric::ToricChowRing;

/// Identity of a ring instance; elements of different rings never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RingId(u64);

impl RingId {
    pub(crate) fn fresh() -> RingId {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        RingId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

/// A class in a graded ring: `comps[k]` holds the coordinates of the
/// degree-`k` part over the ring's degree-`k` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    ring: RingId,
    comps: Vec<Vec<Rat>>,
}

impl ChowElement {
    pub(crate) fn from_parts(ring: RingId, comps: Vec<Vec<Rat>>) -> ChowElement {
        ChowElement { ring, comps }
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn components(&self) -> &[Vec<Rat>] {
        &self.comps
    }

    pub fn component(&self, k: usize) -> &[Rat] {
        &self.comps[k]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(Zero::is_zero))
    }

    /// Degrees carrying a nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        (0..self.comps.len())
            .filter(|&k| self.comps[k].iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.support().iter().all(|&d| d == k)
    }

    /// The degree-`k` part as an element.
    pub fn part(&self, k: usize) -> ChowElement {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(d, c)| {
                if d == k {
                    c.clone()
                } else {
                    vec![Rat::zero(); c.len()]
                }
            })
            .collect();
        ChowElement::from_parts(self.ring, comps)
    }

    fn check_same(&self, other: &ChowElement) -> Result<(), ChowError> {
        if self.ring != other.ring {
            return Err(ChowError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check_same(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(ChowElement::from_parts(self.ring, comps))
    }

    pub fn sub(&self, other: &ChowElement) -> Result<ChowElement, ChowError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChowElement {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> ChowElement {
        let comps = self
            .comps
            .iter()
            .map(|c| c.iter().map(|x| x * k).collect())
            .collect();
        ChowElement::from_parts(self.ring, comps)
    }

    /// Whether all coordinates are integers.
    pub fn is_integral(&self) -> bool {
        self.comps.iter().flatten().all(|x| x.is_integer())
    }
}

/// Serializable view of an element: nonzero coordinates over named basis
/// monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedTerm {
    pub degree: usize,
    pub monomial: String,
    pub coeff: String,
}

/// Operations shared by both ring types.
pub trait GradedRing {
    fn id(&self) -> RingId;

    /// Dimension of the underlying variety (top nonzero degree).
    fn top_degree(&self) -> usize;

    /// Size of the degree-`k` basis.
    fn rank_in_degree(&self, k: usize) -> usize;

    /// Human-readable names of the degree-`k` basis monomials.
    fn basis_names(&self, k: usize) -> Vec<String>;

    fn mul(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement, ChowError>;

    /// Integral of a top-degree element.
    fn degree(&self, x: &ChowElement) -> Result<Rat, ChowError>;

    fn zero(&self) -> ChowElement {
        let comps = (0..=self.top_degree())
            .map(|k| vec![Rat::zero(); self.rank_in_degree(k)])
            .collect();
        ChowElement::from_parts(self.id(), comps)
    }

    fn one(&self) -> ChowElement {
        let mut x = self.zero();
        x.comps[0][0] = Rat::one();
        x
    }

    /// The `i`-th basis element of degree `k`.
    fn basis_element(&self, k: usize, i: usize) -> ChowElement {
        let mut x = self.zero();
        x.comps[k][i] = Rat::one();
        x
    }

    /// Element with the given degree-`k` coordinates.
    fn homogeneous(&self, k: usize, coords: Vec<Rat>) -> ChowElement {
        assert_eq!(coords.len(), self.rank_in_degree(k));
        let mut x = self.zero();
        x.comps[k] = coords;
        x
    }

    fn pow(&self, x: &ChowElement, e: usize) -> Result<ChowElement, ChowError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    fn check(&self, x: &ChowElement) -> Result<(), ChowError> {
        if x.ring != self.id() {
            return Err(ChowError::RingMismatch);
        }
        Ok(())
    }

    fn named_terms(&self, x: &ChowElement) -> Vec<NamedTerm> {
        let mut out = Vec::new();
        for (k, c) in x.comps.iter().enumerate() {
            let names = self.basis_names(k);
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    out.push(NamedTerm {
                        degree: k,
                        monomial: names[i].clone(),
                        coeff: rat_to_string(v),
                    });
                }
            }
        }
        out
    }
}

/// Ensures `x` is homogeneous of the top degree and returns its top coordinates.
pub(crate) fn top_coords<'a, R: GradedRing + ?Sized>(ring: &R, x: &'a ChowElement) -> Result<&'a [Rat], ChowError> {
    ring.check(x)?;
    let top = ring.top_degree();
    if let Some(&k) = x.support().iter().find(|&&k| k != top) {
        return Err(ChowError::NotTopDegree { found: k, top });
    }
    Ok(&x.comps[top])
}
