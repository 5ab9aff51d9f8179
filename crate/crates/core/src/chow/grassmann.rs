use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{Int, Rat};
use crate::chow::schubert::{self, SchubertExpansion};
use crate::chow::{top_coords, ChowElement, GradedRing, RingId, ToricChowRing};
use crate::error::ChowError;
use crate::fan::Fan;
use crate::linalg::{rref, Rref};

/// `s1^a * s2^b * beta` with `beta` the `base_index`-th basis element of
/// degree `base_degree` of the base ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMonomial {
    pub a: usize,
    pub b: usize,
    pub base_degree: usize,
    pub base_index: usize,
}

impl BasisMonomial {
    fn degree(&self) -> usize {
        self.a + 2 * self.b + self.base_degree
    }
}

#[derive(Clone, Debug)]
struct Piece {
    spanning: Vec<BasisMonomial>,
    index: HashMap<BasisMonomial, usize>,
    // spanning[..n_reducible] are eliminated; the rest is the basis
    n_reducible: usize,
    reduction: Rref,
}

/// Chow ring of the Grassmann bundle of lines `Gr(2, V) -> B` for a rank-`e`
/// bundle `V` given by its Chern classes on a toric base `B`.
///
/// Presented as `A(B)[s1, s2] / (q_{e-1}, q_e)` where `s1, s2` are the Chern
/// classes of the dual tautological subbundle and `q = c(V) / (1 - s1 + s2)`
/// is the Chern class of the universal quotient. The ring is free over
/// `A(B)` with basis `s1^a s2^b`, `a + b <= e - 2`; construction fails with
/// [`ChowError::NotFree`] if the relations do not eliminate exactly the other
/// monomials.
#[derive(Clone, Debug)]
pub struct GrassmannBundleRing {
    id: RingId,
    base: Arc<ToricChowRing>,
    e: usize,
    chern: Vec<ChowElement>,
    pieces: Vec<Piece>,
}

/// Complete homogeneous polynomials `h_0..=h_max` in the roots of the
/// tautological subbundle, as integer polynomials in `s1, s2`.
fn complete_homogeneous(max: usize) -> Vec<BTreeMap<(usize, usize), Int>> {
    let mut h: Vec<BTreeMap<(usize, usize), Int>> = Vec::with_capacity(max + 1);
    for l in 0..=max {
        let mut p = BTreeMap::new();
        if l == 0 {
            p.insert((0, 0), Int::one());
        } else {
            for (&(a, b), c) in &h[l - 1] {
                *p.entry((a + 1, b)).or_insert_with(Int::zero) += c;
            }
            if l >= 2 {
                for (&(a, b), c) in &h[l - 2] {
                    *p.entry((a, b + 1)).or_insert_with(Int::zero) -= c;
                }
            }
            p.retain(|_, c: &mut Int| !c.is_zero());
        }
        h.push(p);
    }
    h
}

impl GrassmannBundleRing {
    /// `chern_of_v` lists `c_1(V), .., c_e(V)` in the base ring.
    pub fn new(base: Arc<ToricChowRing>, e: usize, chern_of_v: Vec<ChowElement>) -> Result<GrassmannBundleRing, ChowError> {
        if e < 2 {
            return Err(ChowError::RankTooSmall(e));
        }
        if chern_of_v.len() != e {
            return Err(ChowError::ChernCount {
                expected: e,
                found: chern_of_v.len(),
            });
        }
        for (i, c) in chern_of_v.iter().enumerate() {
            base.check(c)?;
            if !c.is_homogeneous_of(i + 1) {
                return Err(ChowError::ChernDegree { index: i + 1 });
            }
        }
        let dim_b = base.dim();
        let top = dim_b + 2 * (e - 2);
        let mut chern = vec![base.one()];
        chern.extend(chern_of_v);

        let h = complete_homogeneous(e);
        // q_j = sum_i c_i h_{j-i}, stored as (a, b) -> base element
        let q = |j: usize| -> Vec<((usize, usize), &ChowElement, Int)> {
            let mut out = Vec::new();
            for (i, ci) in chern.iter().enumerate().take(j + 1) {
                for (&(a, b), c) in &h[j - i] {
                    out.push(((a, b), ci, c.clone()));
                }
            }
            out
        };

        let mut pieces = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut reducible = Vec::new();
            let mut kept = Vec::new();
            for j in 0..=dim_b.min(k) {
                for b in 0..=(k - j) / 2 {
                    let a = k - j - 2 * b;
                    for bi in 0..base.rank_in_degree(j) {
                        let m = BasisMonomial {
                            a,
                            b,
                            base_degree: j,
                            base_index: bi,
                        };
                        if a + b > e - 2 {
                            reducible.push(m);
                        } else {
                            kept.push(m);
                        }
                    }
                }
            }
            let n_reducible = reducible.len();
            let mut spanning = reducible;
            spanning.extend(kept);
            let index: HashMap<BasisMonomial, usize> = spanning.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let width = spanning.len();

            let mut rows = Vec::new();
            for jr in [e - 1, e] {
                if jr > k {
                    continue;
                }
                let qj = q(jr);
                let rest = k - jr;
                for j in 0..=dim_b.min(rest) {
                    for b in 0..=(rest - j) / 2 {
                        let a = rest - j - 2 * b;
                        for bi in 0..base.rank_in_degree(j) {
                            let beta = base.basis_element(j, bi);
                            let mut row = vec![Rat::zero(); width];
                            for ((qa, qb), ci, c) in &qj {
                                let prod = base.mul(&beta, ci)?;
                                for (d, comp) in prod.components().iter().enumerate() {
                                    for (t, v) in comp.iter().enumerate() {
                                        if v.is_zero() {
                                            continue;
                                        }
                                        let m = BasisMonomial {
                                            a: a + qa,
                                            b: b + qb,
                                            base_degree: d,
                                            base_index: t,
                                        };
                                        debug_assert_eq!(m.degree(), k);
                                        let idx = index[&m];
                                        row[idx] += v * Rat::from_integer(c.clone());
                                    }
                                }
                            }
                            rows.push(row);
                        }
                    }
                }
            }
            let reduction = rref(rows, width);
            if reduction.pivots != (0..n_reducible).collect::<Vec<_>>() {
                return Err(ChowError::NotFree {
                    degree: k,
                    detail: format!(
                        "{} relations of rank {} against {} monomials outside the basis",
                        reduction.rows.len(),
                        reduction.rank(),
                        n_reducible
                    ),
                });
            }
            pieces.push(Piece {
                spanning,
                index,
                n_reducible,
                reduction,
            });
        }
        Ok(GrassmannBundleRing {
            id: RingId::fresh(),
            base,
            e,
            chern,
            pieces,
        })
    }

    /// `Gr(2, e)` itself.
    pub fn over_point(e: usize) -> Result<GrassmannBundleRing, ChowError> {
        let base = Arc::new(ToricChowRing::new(&Fan::point())?);
        let chern = (1..=e).map(|_| base.zero()).collect();
        GrassmannBundleRing::new(base, e, chern)
    }

    /// The same bundle over a point: the ring of one fiber.
    pub fn fiber_ring(&self) -> Result<GrassmannBundleRing, ChowError> {
        GrassmannBundleRing::over_point(self.e)
    }

    pub fn base(&self) -> &Arc<ToricChowRing> {
        &self.base
    }

    pub fn rank_of_v(&self) -> usize {
        self.e
    }

    /// `c_0(V) = 1, c_1(V), .., c_e(V)`.
    pub fn chern_of_v(&self) -> &[ChowElement] {
        &self.chern
    }

    pub fn basis(&self, k: usize) -> &[BasisMonomial] {
        let p = &self.pieces[k];
        &p.spanning[p.n_reducible..]
    }

    /// Normal form of a spanning-set vector of degree `k`.
    fn normalize(&self, k: usize, mut v: Vec<Rat>) -> Vec<Rat> {
        let p = &self.pieces[k];
        p.reduction.reduce(&mut v);
        v.split_off(p.n_reducible)
    }

    /// `s1^a s2^b * pullback(beta)`.
    pub fn monomial(&self, a: usize, b: usize, beta: &ChowElement) -> Result<ChowElement, ChowError> {
        self.base.check(beta)?;
        let mut out = self.zero();
        for (j, comp) in beta.components().iter().enumerate() {
            let k = a + 2 * b + j;
            if k > self.top_degree() || comp.iter().all(Zero::is_zero) {
                continue;
            }
            let p = &self.pieces[k];
            let mut v = vec![Rat::zero(); p.spanning.len()];
            for (t, c) in comp.iter().enumerate() {
                let m = BasisMonomial {
                    a,
                    b,
                    base_degree: j,
                    base_index: t,
                };
                v[p.index[&m]] += c;
            }
            out.comps[k] = self.normalize(k, v);
        }
        Ok(out)
    }

    pub fn s1(&self) -> ChowElement {
        self.monomial(1, 0, &self.base.one()).expect("own base")
    }

    pub fn s2(&self) -> ChowElement {
        self.monomial(0, 1, &self.base.one()).expect("own base")
    }

    pub fn pullback(&self, beta: &ChowElement) -> Result<ChowElement, ChowError> {
        self.monomial(0, 0, beta)
    }

    /// Pushforward to the base: only `s2^{e-2}` survives, with fiber degree
    /// taken from the Pieri table.
    pub fn fiber_integrate(&self, x: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(x)?;
        let fiber = 2 * (self.e - 2);
        let mut out = self.base.zero();
        for (k, comp) in x.comps.iter().enumerate() {
            for (m, c) in self.basis(k).iter().zip(comp) {
                if c.is_zero() || m.a + 2 * m.b != fiber {
                    continue;
                }
                let w = schubert::integral(self.e, m.a, m.b);
                out.comps[m.base_degree][m.base_index] += c * Rat::from_integer(w);
            }
        }
        Ok(out)
    }

    /// Restriction to one fiber `Gr(2, e)`: the terms with base degree 0, as
    /// coefficients of `s1^a s2^b`.
    pub fn fiber_restriction(&self, x: &ChowElement) -> Result<Vec<((usize, usize), Rat)>, ChowError> {
        self.check(x)?;
        let mut out = Vec::new();
        for (k, comp) in x.comps.iter().enumerate() {
            for (m, c) in self.basis(k).iter().zip(comp) {
                if m.base_degree == 0 && !c.is_zero() {
                    out.push(((m.a, m.b), c.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Schubert expansion of the fiber restriction.
    pub fn schubert_expand_fiber(&self, x: &ChowElement) -> Result<SchubertExpansion, ChowError> {
        Ok(SchubertExpansion::from_monomials(self.e, &self.fiber_restriction(x)?))
    }

    /// Schubert expansion of a class on `Gr(2, e)`; needs a point base.
    pub fn schubert_expand(&self, x: &ChowElement) -> Result<SchubertExpansion, ChowError> {
        if self.base.dim() != 0 {
            return Err(ChowError::BaseNotPoint);
        }
        self.schubert_expand_fiber(x)
    }

    /// Chern class of the universal quotient bundle, `c(V) / (1 - s1 + s2)`.
    pub fn chern_of_quotient(&self) -> Result<ChowElement, ChowError> {
        let h = complete_homogeneous(self.top_degree());
        let mut out = self.zero();
        for (i, ci) in self.chern.iter().enumerate() {
            for (l, hl) in h.iter().enumerate() {
                if i + l > self.top_degree() {
                    break;
                }
                for (&(a, b), c) in hl {
                    let t = self.monomial(a, b, ci)?.scale(&Rat::from_integer(c.clone()));
                    out = out.add(&t)?;
                }
            }
        }
        Ok(out)
    }
}

impl GradedRing for GrassmannBundleRing {
    fn id(&self) -> RingId {
        self.id
    }

    fn top_degree(&self) -> usize {
        self.base.dim() + 2 * (self.e - 2)
    }

    fn rank_in_degree(&self, k: usize) -> usize {
        self.pieces
            .get(k)
            .map_or(0, |p| p.spanning.len() - p.n_reducible)
    }

    fn basis_names(&self, k: usize) -> Vec<String> {
        let base_names: Vec<Vec<String>> = (0..=self.base.dim()).map(|j| self.base.basis_names(j)).collect();
        self.basis(k)
            .iter()
            .map(|m| {
                let mut parts = Vec::new();
                match m.a {
                    0 => {}
                    1 => parts.push("s1".to_string()),
                    a => parts.push(format!("s1^{a}")),
                }
                match m.b {
                    0 => {}
                    1 => parts.push("s2".to_string()),
                    b => parts.push(format!("s2^{b}")),
                }
                if m.base_degree > 0 {
                    parts.push(format!("[{}]", base_names[m.base_degree][m.base_index]));
                }
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            })
            .collect()
    }

    fn mul(&self, x: &ChowElement, y: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(x)?;
        self.check(y)?;
        let top = self.top_degree();
        let mut out = self.zero();
        for kk in 0..=top {
            let p = &self.pieces[kk];
            let mut v = vec![Rat::zero(); p.spanning.len()];
            let mut any = false;
            for k1 in 0..=kk {
                let k2 = kk - k1;
                for (m1, c1) in self.basis(k1).iter().zip(&x.comps[k1]) {
                    if c1.is_zero() {
                        continue;
                    }
                    for (m2, c2) in self.basis(k2).iter().zip(&y.comps[k2]) {
                        if c2.is_zero() {
                            continue;
                        }
                        let j = m1.base_degree + m2.base_degree;
                        if j > self.base.dim() {
                            continue;
                        }
                        let Some(prod) = self
                            .base
                            .basis_product(m1.base_degree, m1.base_index, m2.base_degree, m2.base_index)
                        else {
                            continue;
                        };
                        let c = c1 * c2;
                        for (t, w) in prod.iter().enumerate() {
                            if w.is_zero() {
                                continue;
                            }
                            let m = BasisMonomial {
                                a: m1.a + m2.a,
                                b: m1.b + m2.b,
                                base_degree: j,
                                base_index: t,
                            };
                            v[p.index[&m]] += &c * w;
                            any = true;
                        }
                    }
                }
            }
            if any {
                out.comps[kk] = self.normalize(kk, v);
            }
        }
        Ok(out)
    }

    fn degree(&self, x: &ChowElement) -> Result<Rat, ChowError> {
        top_coords(self, x)?;
        let pushed = self.fiber_integrate(x)?;
        self.base.degree(&pushed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::corpus;

    fn catalan(n: usize) -> Rat {
        Rat::from_integer(crate::arith::binomial(2 * n, n) / Int::from(n + 1))
    }

    #[test]
    fn grassmannian_of_lines_in_p4() {
        let g = GrassmannBundleRing::over_point(5).unwrap();
        let ranks: Vec<usize> = (0..=6).map(|k| g.rank_in_degree(k)).collect();
        assert_eq!(ranks, vec![1, 1, 2, 2, 2, 1, 1]);
        assert_eq!(ranks.iter().sum::<usize>(), 10);
        let s1 = g.s1();
        assert_eq!(g.degree(&g.pow(&s1, 6).unwrap()).unwrap(), rat(5));
    }

    #[test]
    fn catalan_degrees_and_fiber_integrals() {
        for e in 2..=7 {
            let g = GrassmannBundleRing::over_point(e).unwrap();
            let top = g.pow(&g.s1(), 2 * (e - 2)).unwrap();
            assert_eq!(g.degree(&top).unwrap(), catalan(e - 2), "e = {e}");
        }
        let g3 = GrassmannBundleRing::over_point(3).unwrap();
        let s1s2 = g3.mul(&g3.s1(), &g3.s2()).unwrap();
        // s1 s2 is degree 3 > dim 2, hence zero; s2 is the point class
        assert!(s1s2.is_zero());
        assert_eq!(g3.degree(&g3.s2()).unwrap(), rat(1));
        let pushed = g3.fiber_integrate(&g3.one()).unwrap();
        assert!(pushed.is_zero());
        let g4 = GrassmannBundleRing::over_point(4).unwrap();
        let s14 = g4.pow(&g4.s1(), 4).unwrap();
        assert_eq!(g4.fiber_integrate(&s14).unwrap(), g4.base().one().scale(&rat(2)));
    }

    #[test]
    fn rank_and_schubert_structure_over_point() {
        for e in 2..=6 {
            let g = GrassmannBundleRing::over_point(e).unwrap();
            let total: usize = (0..=g.top_degree()).map(|k| g.rank_in_degree(k)).sum();
            assert_eq!(total, e * (e - 1) / 2);
        }
        let g = GrassmannBundleRing::over_point(4).unwrap();
        let x = g.schubert_expand(&g.s1()).unwrap();
        assert_eq!(x.coeff((1, 0)), rat(1));
        let x = g.schubert_expand(&g.s2()).unwrap();
        assert_eq!(x.coeff((1, 1)), rat(1));
    }

    #[test]
    fn bundle_over_p2_with_twisted_summand() {
        // V = O + O + O(1) on P^2
        let base = Arc::new(ToricChowRing::new(&corpus::projective_space(2)).unwrap());
        let h = base.ray_class(2);
        let g = GrassmannBundleRing::new(base.clone(), 3, vec![h.clone(), base.zero(), base.zero()]).unwrap();
        assert_eq!(g.top_degree(), 4);
        let total: usize = (0..=4).map(|k| g.rank_in_degree(k)).sum();
        assert_eq!(total, 3 * 3);
        // Whitney: (1 - s1 + s2) c(Q) = c(V)
        let cq = g.chern_of_quotient().unwrap();
        let cs = g.one().sub(&g.s1()).unwrap().add(&g.s2()).unwrap();
        let cv = g.one().add(&g.pullback(&h).unwrap()).unwrap();
        assert_eq!(g.mul(&cs, &cq).unwrap(), cv);
        // rank-1 quotient: c_2(Q) and higher vanish
        assert!(cq.part(2).is_zero() && cq.part(3).is_zero());
    }

    #[test]
    fn projection_formula() {
        let base = Arc::new(ToricChowRing::new(&corpus::projective_space(2)).unwrap());
        let h = base.ray_class(0);
        let g = GrassmannBundleRing::new(base.clone(), 4, vec![h.scale(&rat(2)), base.mul(&h, &h).unwrap(), base.zero(), base.zero()]).unwrap();
        let xs = [g.s1(), g.s2(), g.mul(&g.s1(), &g.s2()).unwrap(), g.pow(&g.s1(), 4).unwrap(), g.pow(&g.s2(), 2).unwrap()];
        for x in &xs {
            for beta in [base.one(), h.clone(), base.mul(&h, &h).unwrap()] {
                let lhs = g.fiber_integrate(&g.mul(&g.pullback(&beta).unwrap(), x).unwrap()).unwrap();
                let rhs = base.mul(&beta, &g.fiber_integrate(x).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn input_checks() {
        let base = Arc::new(ToricChowRing::new(&corpus::projective_space(1)).unwrap());
        assert_eq!(GrassmannBundleRing::new(base.clone(), 1, vec![base.zero()]).err(), Some(ChowError::RankTooSmall(1)));
        assert!(matches!(
            GrassmannBundleRing::new(base.clone(), 3, vec![base.zero()]),
            Err(ChowError::ChernCount { expected: 3, found: 1 })
        ));
        assert!(matches!(
            GrassmannBundleRing::new(base.clone(), 2, vec![base.one(), base.zero()]),
            Err(ChowError::ChernDegree { index: 1 })
        ));
        let g = GrassmannBundleRing::new(base.clone(), 3, vec![base.zero(), base.zero(), base.zero()]).unwrap();
        assert_eq!(g.schubert_expand(&g.s1()).err(), Some(ChowError::BaseNotPoint));
    }
}
