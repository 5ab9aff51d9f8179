//! Chern classes of bundles on presented Chow rings: twists, direct sums,
//! the bundle `M = sum_i Sym^{d_i} S^* (x) p^* L_i` on the Grassmann bundle,
//! and its top Chern class.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{binomial, rat_to_string, Int, Rat};
use crate::chern::formal::{sym_power, Poly2};
use crate::chow::schubert::SchubertExpansion;
use crate::chow::{ChowElement, GradedRing, GrassmannBundleRing};
use crate::classes::DivisorClass;
use crate::contraction::RestrictionData;
use crate::error::{ChernError, ChowError};
use crate::fan::ToricVariety;

/// `c_0 = 1, c_1, .., c_rank` of a bundle, each in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernPolynomial {
    pub rank: usize,
    pub classes: Vec<ChowElement>,
}

impl ChernPolynomial {
    pub fn trivial<R: GradedRing + ?Sized>(ring: &R, rank: usize) -> ChernPolynomial {
        let mut classes = vec![ring.one()];
        classes.extend((0..rank).map(|_| ring.zero()));
        ChernPolynomial { rank, classes }
    }

    pub fn line_bundle<R: GradedRing + ?Sized>(ring: &R, c1: &ChowElement) -> Result<ChernPolynomial, ChernError> {
        ring.check(c1)?;
        if !c1.is_homogeneous_of(1) {
            return Err(ChernError::WrongDegree(1));
        }
        Ok(ChernPolynomial {
            rank: 1,
            classes: vec![ring.one(), c1.clone()],
        })
    }

    /// Substitutes classes for `c1, c2` in formal Chern polynomials.
    pub fn from_formal<R: GradedRing + ?Sized>(
        ring: &R,
        formal: &[Poly2],
        c1: &ChowElement,
        c2: &ChowElement,
    ) -> Result<ChernPolynomial, ChernError> {
        ring.check(c1)?;
        ring.check(c2)?;
        let top = ring.top_degree();
        let max_i = formal.iter().flat_map(|p| p.0.keys().map(|k| k.0)).max().unwrap_or(0);
        let max_j = formal.iter().flat_map(|p| p.0.keys().map(|k| k.1)).max().unwrap_or(0);
        let mut p1 = vec![ring.one()];
        for i in 1..=max_i.min(top + 1) {
            p1.push(ring.mul(&p1[i - 1], c1)?);
        }
        let mut p2 = vec![ring.one()];
        for j in 1..=max_j.min(top + 1) {
            p2.push(ring.mul(&p2[j - 1], c2)?);
        }
        let mut classes = Vec::with_capacity(formal.len());
        for p in formal {
            let mut acc = ring.zero();
            for (&(i, j), c) in &p.0 {
                if i + 2 * j > top {
                    continue;
                }
                let m = ring.mul(&p1[i], &p2[j])?;
                acc = acc.add(&m.scale(&Rat::from_integer(c.clone())))?;
            }
            classes.push(acc);
        }
        Ok(ChernPolynomial {
            rank: formal.len() - 1,
            classes,
        })
    }

    pub fn top(&self) -> &ChowElement {
        &self.classes[self.rank]
    }

    pub fn total<R: GradedRing + ?Sized>(&self, ring: &R) -> Result<ChowElement, ChernError> {
        let mut acc = ring.zero();
        for c in &self.classes {
            acc = acc.add(c)?;
        }
        Ok(acc)
    }
}

/// `c(F (x) L)` for a line bundle `L` with first Chern class `line`:
/// `c_j = sum_{m <= j} binom(rank - m, j - m) c_m(F) c_1(L)^{j-m}`.
pub fn twist<R: GradedRing + ?Sized>(ring: &R, cp: &ChernPolynomial, line: &ChowElement) -> Result<ChernPolynomial, ChernError> {
    ring.check(line)?;
    for c in &cp.classes {
        ring.check(c)?;
    }
    if !line.is_homogeneous_of(1) {
        return Err(ChernError::WrongDegree(1));
    }
    let r = cp.rank;
    let mut lp = vec![ring.one()];
    for k in 1..=r {
        lp.push(ring.mul(&lp[k - 1], line)?);
    }
    let mut classes = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let mut acc = ring.zero();
        for m in 0..=j {
            let b = binomial(r - m, j - m);
            if b.is_zero() {
                continue;
            }
            let t = ring.mul(&cp.classes[m], &lp[j - m])?;
            acc = acc.add(&t.scale(&Rat::from_integer(b)))?;
        }
        classes.push(acc);
    }
    Ok(ChernPolynomial { rank: r, classes })
}

/// Whitney sum formula.
pub fn direct_sum<R: GradedRing + ?Sized>(ring: &R, a: &ChernPolynomial, b: &ChernPolynomial) -> Result<ChernPolynomial, ChernError> {
    let rank = a.rank + b.rank;
    let mut classes = Vec::with_capacity(rank + 1);
    for k in 0..=rank {
        let mut acc = ring.zero();
        for i in 0..=k.min(a.rank) {
            if k - i > b.rank {
                continue;
            }
            acc = acc.add(&ring.mul(&a.classes[i], &b.classes[k - i])?)?;
        }
        classes.push(acc);
    }
    Ok(ChernPolynomial { rank, classes })
}

/// `Sym^d S^*` on a Grassmann bundle, from `c(S^*) = 1 + s1 + s2`.
pub fn sym_power_of_dual_sub(ring: &GrassmannBundleRing, d: usize) -> Result<ChernPolynomial, ChernError> {
    ChernPolynomial::from_formal(ring, &sym_power(d), &ring.s1(), &ring.s2())
}

/// `M = sum_i Sym^{d_i} S^* (x) p^* L_i`, of rank `sum (d_i + 1)`.
pub fn assemble_m(ring: &GrassmannBundleRing, data: &RestrictionData) -> Result<ChernPolynomial, ChernError> {
    let mut acc = ChernPolynomial::trivial(ring, 0);
    for (d, ell) in data.degrees.iter().zip(&data.ell) {
        let d = usize::try_from(d.clone()).map_err(|_| ChernError::NotAmple)?;
        let sym = sym_power_of_dual_sub(ring, d)?;
        let twisted = twist(ring, &sym, &ring.pullback(ell)?)?;
        acc = direct_sum(ring, &acc, &twisted)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ChernVerdict {
    /// Rank equals dimension and the integral is nonzero.
    Count { value: String },
    /// Rank below dimension and the top class is nonzero.
    PositiveDimensional,
    /// Rank above dimension: no certificate.
    RankOverflow,
    Zero,
}

impl ChernVerdict {
    pub fn is_nonzero(&self) -> bool {
        matches!(self, ChernVerdict::Count { .. } | ChernVerdict::PositiveDimensional)
    }
}

#[derive(Clone, Debug)]
pub struct TopChern {
    pub verdict: ChernVerdict,
    pub rank: usize,
    pub dim: usize,
    pub top_class: ChowElement,
    /// Exact integral when rank equals dimension.
    pub integral: Option<Int>,
    /// Schubert coordinates of the restriction to a fiber `Gr(2, e)`.
    pub fiber_expansion: SchubertExpansion,
}

/// Decides `c_rank(M) != 0` by normal form.
pub fn top_chern_nonzero(ring: &GrassmannBundleRing, cp: &ChernPolynomial) -> Result<TopChern, ChernError> {
    let dim = ring.top_degree();
    let top_class = cp.top().clone();
    let fiber_expansion = ring.schubert_expand_fiber(&top_class)?;
    if cp.rank > dim {
        return Ok(TopChern {
            verdict: ChernVerdict::RankOverflow,
            rank: cp.rank,
            dim,
            top_class,
            integral: None,
            fiber_expansion,
        });
    }
    let (verdict, integral) = if cp.rank == dim {
        let v = ring.degree(&top_class)?;
        if !v.is_integer() {
            return Err(ChowError::NotFree {
                degree: dim,
                detail: format!("non-integral top Chern number {v}"),
            }
            .into());
        }
        let v = v.to_integer();
        if v.is_zero() {
            (ChernVerdict::Zero, Some(v))
        } else {
            (ChernVerdict::Count { value: v.to_string() }, Some(v))
        }
    } else if top_class.is_zero() {
        (ChernVerdict::Zero, None)
    } else {
        (ChernVerdict::PositiveDimensional, None)
    };
    Ok(TopChern {
        verdict,
        rank: cp.rank,
        dim,
        top_class,
        integral,
        fiber_expansion,
    })
}

/// One term `(-1)^j c_1(p^* A)^j c_{r-j}(M)` of the expansion of
/// `c_r(M (x) p^* A^{-epsilon})` in powers of `epsilon`.
#[derive(Clone, Debug)]
pub struct PerturbationTerm {
    pub j: usize,
    pub sign: i8,
    pub class: ChowElement,
    pub nonzero: bool,
    /// Integral when the term has top degree.
    pub integral: Option<Rat>,
}

/// All terms for `j = 0 ..= min(r, dim B)`; `ample_on_base` must be ample
/// on the base fan.
pub fn perturbation_terms(
    ring: &GrassmannBundleRing,
    cp: &ChernPolynomial,
    ample_on_base: &DivisorClass,
) -> Result<Vec<PerturbationTerm>, ChernError> {
    let base = ring.base();
    let base_dim = base.dim();
    let a = if base_dim == 0 {
        base.zero()
    } else {
        let v = ToricVariety::new(base.fan().clone())?;
        if !v.is_ample(ample_on_base) {
            return Err(ChernError::NotAmple);
        }
        base.divisor(ample_on_base)?
    };
    let pa = ring.pullback(&a)?;
    let r = cp.rank;
    let top = ring.top_degree();
    let mut out = Vec::new();
    let mut power = ring.one();
    for j in 0..=r.min(base_dim) {
        let class = ring.mul(&power, &cp.classes[r - j])?;
        let integral = if r == top { Some(ring.degree(&class)?) } else { None };
        out.push(PerturbationTerm {
            j,
            sign: if j % 2 == 0 { 1 } else { -1 },
            nonzero: !class.is_zero(),
            class,
            integral,
        });
        power = ring.mul(&power, &pa)?;
    }
    Ok(out)
}

/// Chern classes of `sum_i Sym^{d_i} S^*` on `Gr(2, e)` with their Schubert
/// expansions, `j = 0 ..= rank`.
pub fn fiber_sym_expansions(e: usize, degrees: &[usize]) -> Result<Vec<SchubertExpansion>, ChernError> {
    let g = GrassmannBundleRing::over_point(e)?;
    let mut acc = ChernPolynomial::trivial(&g, 0);
    for &d in degrees {
        acc = direct_sum(&g, &acc, &sym_power_of_dual_sub(&g, d)?)?;
    }
    acc.classes
        .iter()
        .map(|c| g.schubert_expand(c).map_err(ChernError::from))
        .collect()
}

/// Serializable summary of a Schubert expansion.
pub fn expansion_summary(x: &SchubertExpansion) -> Vec<(String, String)> {
    x.coeffs
        .iter()
        .map(|(&(a, b), c)| (format!("sigma_{a},{b}"), rat_to_string(c)))
        .collect()
}

/// `int c_n(O(H_1) + .. + O(H_n))` on a toric `n`-fold, i.e. `H_1 ... H_n`.
pub fn split_bundle_top_integral(
    ring: &crate::chow::ToricChowRing,
    divisors: &[DivisorClass],
) -> Result<Rat, ChernError> {
    let mut cp = ChernPolynomial::trivial(ring, 0);
    for d in divisors {
        let l = ChernPolynomial::line_bundle(ring, &ring.divisor(d)?)?;
        cp = direct_sum(ring, &cp, &l)?;
    }
    if cp.rank != ring.top_degree() {
        return Err(ChernError::WrongDegree(ring.top_degree()));
    }
    Ok(ring.degree(cp.top())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::chow::ToricChowRing;
    use crate::corpus;
    use std::sync::Arc;

    #[test]
    fn twist_identities() {
        let r = ToricChowRing::new(&corpus::projective_space(3)).unwrap();
        let h = r.ray_class(0);
        let cp = ChernPolynomial::from_formal(&r, &sym_power(2), &h, &r.mul(&h, &h).unwrap()).unwrap();
        assert_eq!(twist(&r, &cp, &r.zero()).unwrap(), cp);
        let l = ChernPolynomial::line_bundle(&r, &h).unwrap();
        let t = twist(&r, &l, &h).unwrap();
        assert_eq!(t.classes[1], h.scale(&rat(2)));
        assert_eq!(twist(&r, &cp, &r.one()), Err(ChernError::WrongDegree(1)));
    }

    #[test]
    fn whitney_is_additive_on_line_bundles() {
        let r = ToricChowRing::new(&corpus::projective_space(2)).unwrap();
        let h = r.ray_class(0);
        let a = ChernPolynomial::line_bundle(&r, &h).unwrap();
        let b = ChernPolynomial::line_bundle(&r, &h.scale(&rat(2))).unwrap();
        let s = direct_sum(&r, &a, &b).unwrap();
        assert_eq!(s.classes[1], h.scale(&rat(3)));
        assert_eq!(r.degree(&s.classes[2]).unwrap(), rat(2));
        // total classes multiply
        let prod = r.mul(&a.total(&r).unwrap(), &b.total(&r).unwrap()).unwrap();
        assert_eq!(s.total(&r).unwrap(), prod);
    }

    #[test]
    fn conic_bundle_twist_over_p1() {
        // rank-3 Sym^2 S^* (x) p^*O(3) over P^1 with e = 3: c_3 integrates to 18
        let base = Arc::new(ToricChowRing::new(&corpus::projective_space(1)).unwrap());
        let g = GrassmannBundleRing::new(base.clone(), 3, vec![base.zero(), base.zero(), base.zero()]).unwrap();
        let sym = sym_power_of_dual_sub(&g, 2).unwrap();
        let t = g.pullback(&base.ray_class(0).scale(&rat(3))).unwrap();
        let m = twist(&g, &sym, &t).unwrap();
        assert_eq!(m.rank, 3);
        assert_eq!(g.degree(m.top()).unwrap(), rat(18));
        let tc = top_chern_nonzero(&g, &m).unwrap();
        assert_eq!(tc.verdict, ChernVerdict::Count { value: "18".into() });
        // perturbation: j = 1 term is a multiple of the fiber class, nonzero
        let a = DivisorClass::from_i64(&[1, 0]);
        let terms = perturbation_terms(&g, &m, &a).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(terms[1].nonzero);
        assert_eq!(terms[1].integral, Some(rat(6)));
        assert_eq!(perturbation_terms(&g, &m, &DivisorClass::from_i64(&[0, 0])).err(), Some(ChernError::NotAmple));
    }

    #[test]
    fn rank_zero_and_point_base_perturbations() {
        let g = GrassmannBundleRing::over_point(4).unwrap();
        let m = ChernPolynomial::trivial(&g, 0);
        let terms = perturbation_terms(&g, &m, &DivisorClass::new(vec![])).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].class, g.one());
        let sym = sym_power_of_dual_sub(&g, 3).unwrap();
        let terms = perturbation_terms(&g, &sym, &DivisorClass::new(vec![])).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].integral, Some(rat(27)));
    }

    #[test]
    fn quintic_threefold() {
        let g = GrassmannBundleRing::over_point(5).unwrap();
        let m = sym_power_of_dual_sub(&g, 5).unwrap();
        let tc = top_chern_nonzero(&g, &m).unwrap();
        assert_eq!(tc.integral, Some(int(2875)));
        assert_eq!(tc.fiber_expansion.integral(), rat(2875));
    }

    #[test]
    fn schubert_positivity_of_sym_sums() {
        let xs = fiber_sym_expansions(4, &[2]).unwrap();
        assert_eq!(xs[1].coeff((1, 0)), rat(3));
        assert_eq!(xs[2].coeff((2, 0)), rat(2));
        assert_eq!(xs[2].coeff((1, 1)), rat(6));
        for e in 3..=6 {
            for ds in [vec![1], vec![2], vec![3], vec![1, 2], vec![2, 2]] {
                let xs = fiber_sym_expansions(e, &ds).unwrap();
                let rank: usize = ds.iter().map(|d| d + 1).sum();
                for (j, x) in xs.iter().enumerate() {
                    assert!(x.is_nonnegative(), "e={e} ds={ds:?} j={j}");
                    if j <= rank.min(2 * (e - 2)) {
                        assert!(!x.is_zero(), "e={e} ds={ds:?} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn ample_split_bundles_have_positive_top_chern() {
        for entry in corpus::entries() {
            let v = ToricVariety::new(entry.fan.clone()).unwrap();
            let r = ToricChowRing::new(&entry.fan).unwrap();
            let k = v.anticanonical();
            let ds: Vec<DivisorClass> = (0..r.dim()).map(|i| k.scale(&Int::from(i + 1))).collect();
            assert!(split_bundle_top_integral(&r, &ds).unwrap() > rat(0), "{}", entry.name);
        }
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r1 = ToricChowRing::new(&corpus::projective_space(2)).unwrap();
        let r2 = ToricChowRing::new(&corpus::projective_space(2)).unwrap();
        let cp = ChernPolynomial::trivial(&r1, 2);
        assert!(matches!(twist(&r1, &cp, &r2.ray_class(0)), Err(ChernError::Chow(ChowError::RingMismatch))));
    }
}
