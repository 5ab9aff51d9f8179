//! Contractible curve classes and the projective-bundle data of their
//! contractions: the exceptional locus `E = P(V)`, the base `B`, the
//! relative hyperplane class and the Chern classes of `V`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{dot, Int, Rat};
use crate::chow::{ChowElement, GradedRing, ToricChowRing};
use crate::classes::{CurveClass, DivisorClass};
use crate::error::{ContractionError, FanError};
use crate::fan::{validate_fan, Fan, LatticeVector, ToricVariety};
use crate::lattice::{quotient_map, IntMatrix};
use crate::linalg::solve_unique;
use crate::lp::max_min_slack;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateStatus {
    VerifiedContractible,
    ExtremalContractible,
    CandidateOnly,
}

/// A wall class `x_1 + .. + x_e - a_1 y_1 - .. - a_r y_r` whose positive
/// coefficients are all 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractibleCandidate {
    pub curve_class: CurveClass,
    pub positive_rays: Vec<usize>,
    /// `(ray, a_i)` with `a_i >= 1`.
    pub negative_rays: Vec<(usize, Int)>,
    pub e: usize,
    pub r: usize,
    /// Spans an extremal ray of the cone of curves.
    pub extremal: bool,
    /// The bundle structure was constructed and checked.
    pub verified: bool,
}

impl ContractibleCandidate {
    /// Splits a curve class into its positive and negative parts; `None` if a
    /// positive coefficient differs from 1.
    pub fn from_class(curve_class: CurveClass) -> Option<ContractibleCandidate> {
        let mut positive_rays = Vec::new();
        let mut negative_rays = Vec::new();
        for (i, c) in curve_class.entries().iter().enumerate() {
            if c.is_positive() {
                if !c.is_one() {
                    return None;
                }
                positive_rays.push(i);
            } else if c.is_negative() {
                negative_rays.push((i, -c.clone()));
            }
        }
        Some(ContractibleCandidate {
            e: positive_rays.len(),
            r: negative_rays.len(),
            curve_class,
            positive_rays,
            negative_rays,
            extremal: false,
            verified: false,
        })
    }

    pub fn status(&self) -> CandidateStatus {
        if self.verified {
            CandidateStatus::VerifiedContractible
        } else if self.extremal {
            CandidateStatus::ExtremalContractible
        } else {
            CandidateStatus::CandidateOnly
        }
    }

    pub fn sum_of_multiplicities(&self) -> Int {
        self.negative_rays.iter().map(|(_, a)| a).sum()
    }

    pub fn negative_ray_indices(&self) -> Vec<usize> {
        self.negative_rays.iter().map(|(i, _)| *i).collect()
    }
}

/// Whether `gamma` spans an extremal ray of the cone generated by `classes`:
/// some divisor vanishes on `gamma` and is positive on every other class.
pub fn is_extremal(gamma: &CurveClass, classes: &[CurveClass]) -> bool {
    let to_row = |c: &CurveClass| -> Vec<Rat> { c.entries().iter().map(|x| Rat::from_integer(x.clone())).collect() };
    let others: Vec<Vec<Rat>> = classes.iter().filter(|c| *c != gamma).map(to_row).collect();
    if others.is_empty() {
        return true;
    }
    let (t, _) = max_min_slack(&others, &[to_row(gamma)], gamma.len());
    t.is_positive()
}

/// All wall classes with unit positive coefficients, with extremality and
/// constructive verification filled in.
pub fn enumerate_candidates(variety: &ToricVariety) -> Result<Vec<ContractibleCandidate>, ContractionError> {
    if !variety.is_projective() {
        return Err(FanError::NotProjective.into());
    }
    let classes = variety.wall_classes();
    let mut out = Vec::new();
    for c in classes {
        let Some(mut cand) = ContractibleCandidate::from_class(c.clone()) else {
            continue;
        };
        cand.extremal = is_extremal(c, classes);
        cand.verified = build_contraction(variety, &cand).is_ok();
        out.push(cand);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionKind {
    FiberType,
    Birational,
}

/// Bundle data `E = P(V) -> B` of a contractible class.
#[derive(Clone, Debug)]
pub struct ContractionStructure {
    pub candidate: ContractibleCandidate,
    pub kind: ContractionKind,
    /// Fan of `E`; the whole fan for fiber type, the star of the negative
    /// cone otherwise.
    pub exc_fan: Fan,
    /// Ray `i` of `E` is the image of ray `exc_rays[i]` of `Y`.
    pub exc_rays: Vec<usize>,
    /// Rows define `N -> N(E)` (identity for fiber type).
    pub exc_lattice_map: IntMatrix,
    pub base_fan: Fan,
    /// Ray `b` of `B` is the image of ray `base_lift[b]` of `E`.
    pub base_lift: Vec<usize>,
    /// Rows define `N(E) -> N(B)`.
    pub projection: IntMatrix,
    /// The `e` rays of `E` spanning the fibers.
    pub fiber_rays: Vec<usize>,
    /// Ray of `Y` whose divisor restricts to the relative hyperplane class.
    pub zeta_ray: usize,
    pub exc_ring: Arc<ToricChowRing>,
    pub base_ring: Arc<ToricChowRing>,
    pub zeta: ChowElement,
    /// `c_1(V), .., c_e(V)` on `B`, normalized by the relation
    /// `zeta^e + c_1 zeta^{e-1} + .. + c_e = 0`.
    pub chern_of_v: Vec<ChowElement>,
}

impl ContractionStructure {
    pub fn e(&self) -> usize {
        self.candidate.e
    }

    pub fn fiber_dim(&self) -> usize {
        self.candidate.e - 1
    }

    /// `(dim E, dim B)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.exc_fan.dim(), self.base_fan.dim())
    }

    /// `pi^*` on classes of `B`.
    pub fn pullback(&self, beta: &ChowElement) -> Result<ChowElement, ContractionError> {
        self.base_ring.check(beta)?;
        let mut out = self.exc_ring.zero();
        for (k, comp) in beta.components().iter().enumerate() {
            let cones = self.base_ring.basis_cones(k);
            for (c, tau) in comp.iter().zip(&cones) {
                if c.is_zero() {
                    continue;
                }
                let lifted: Vec<usize> = tau.iter().map(|&b| self.base_lift[b]).collect();
                let x = self.exc_ring.cone_class(&lifted).scale(c);
                out = out.add(&x)?;
            }
        }
        Ok(out)
    }

    /// Restriction of a divisor of `Y` to `E`, as a divisor on the fan of `E`.
    pub fn restrict_divisor(&self, y_fan: &Fan, h: &DivisorClass) -> Result<DivisorClass, ContractionError> {
        if h.len() != y_fan.n_rays() {
            return Err(FanError::LengthMismatch {
                expected: y_fan.n_rays(),
                found: h.len(),
            }
            .into());
        }
        let sigma = self.candidate.negative_ray_indices();
        let mut coeffs: Vec<Int> = h.coeffs().to_vec();
        if !sigma.is_empty() {
            // move h off the rays of sigma by a principal divisor
            let s = y_fan.max_cone_containing(&sigma).expect("sigma is a cone");
            let dual = y_fan.dual_basis(s).expect("smooth");
            let cone = &y_fan.max_cones()[s];
            let mut m = vec![Int::zero(); y_fan.dim()];
            for (pos, r) in cone.iter().enumerate() {
                if sigma.contains(r) {
                    for (mi, d) in m.iter_mut().zip(&dual[pos]) {
                        *mi += &h.coeffs()[*r] * d;
                    }
                }
            }
            for (rho, c) in coeffs.iter_mut().enumerate() {
                *c -= dot(&m, y_fan.ray(rho).coords());
            }
            debug_assert!(sigma.iter().all(|&y| coeffs[y].is_zero()));
        }
        Ok(DivisorClass::new(self.exc_rays.iter().map(|&y| coeffs[y].clone()).collect()))
    }

    /// Writes a divisor `D` of `E` with `D . (fiber line) = 0` as a pullback
    /// from `B`.
    fn descend(&self, d: &DivisorClass) -> Result<DivisorClass, ContractionError> {
        let e_fan = &self.exc_fan;
        let c0 = 0;
        let cone = &e_fan.max_cones()[c0];
        let dual = e_fan.dual_basis(c0).expect("smooth");
        let mut m = vec![Int::zero(); e_fan.dim()];
        for (pos, r) in cone.iter().enumerate() {
            if self.fiber_rays.contains(r) {
                for (mi, v) in m.iter_mut().zip(&dual[pos]) {
                    *mi += &d.coeffs()[*r] * v;
                }
            }
        }
        let shifted: Vec<Int> = (0..e_fan.n_rays())
            .map(|rho| &d.coeffs()[rho] - dot(&m, e_fan.ray(rho).coords()))
            .collect();
        if let Some(&bad) = self.fiber_rays.iter().find(|&&x| !shifted[x].is_zero()) {
            return Err(ContractionError::InconsistentRestriction(format!(
                "nonzero degree {} on the fiber line",
                shifted[bad]
            )));
        }
        Ok(DivisorClass::new(self.base_lift.iter().map(|&r| shifted[r].clone()).collect()))
    }
}

/// Relative degrees and base twists: `O(H_i)|_E = d_i zeta + pi^* ell_i`.
#[derive(Clone, Debug)]
pub struct RestrictionData {
    pub degrees: Vec<Int>,
    pub ell: Vec<ChowElement>,
    pub ell_divisors: Vec<DivisorClass>,
}

fn bundle_error(msg: impl Into<String>) -> ContractionError {
    ContractionError::NotABundle(msg.into())
}

/// Builds the contraction data using the lowest-index positive ray for the
/// relative hyperplane class.
pub fn build_contraction(variety: &ToricVariety, candidate: &ContractibleCandidate) -> Result<ContractionStructure, ContractionError> {
    let x1 = *candidate.positive_rays.first().ok_or_else(|| bundle_error("no positive rays"))?;
    build_contraction_with_zeta(variety, candidate, x1)
}

/// As [`build_contraction`], with `zeta` the restriction of `D_{zeta_ray}`
/// for any positive ray `zeta_ray`.
pub fn build_contraction_with_zeta(
    variety: &ToricVariety,
    candidate: &ContractibleCandidate,
    zeta_ray: usize,
) -> Result<ContractionStructure, ContractionError> {
    let fan = variety.fan();
    let n = fan.dim();
    let gamma = &candidate.curve_class;
    if gamma.len() != fan.n_rays() {
        return Err(FanError::LengthMismatch {
            expected: fan.n_rays(),
            found: gamma.len(),
        }
        .into());
    }
    if gamma.entries().iter().any(|c| c.is_positive() && !c.is_one()) {
        return Err(ContractionError::NotUnitPositive);
    }
    if !candidate.positive_rays.contains(&zeta_ray) {
        return Err(bundle_error("zeta ray is not a positive ray of the class"));
    }
    let e = candidate.e;
    let sigma = candidate.negative_ray_indices();

    // E: the whole fan, or the star of sigma in the quotient lattice
    let (kind, exc_rays, w, exc_fan) = if sigma.is_empty() {
        let w = IntMatrix::identity(n);
        (ContractionKind::FiberType, (0..fan.n_rays()).collect::<Vec<_>>(), w, fan.clone())
    } else {
        if !fan.is_cone(&sigma) {
            return Err(bundle_error("negative rays do not span a cone"));
        }
        let gens: Vec<Vec<Int>> = sigma.iter().map(|&y| fan.ray(y).coords().to_vec()).collect();
        let w = quotient_map(&gens, n);
        let mut star: BTreeMap<usize, ()> = BTreeMap::new();
        let mut cones = Vec::new();
        for c in fan.max_cones() {
            if sigma.iter().all(|y| c.binary_search(y).is_ok()) {
                let rest: Vec<usize> = c.iter().copied().filter(|r| !sigma.contains(r)).collect();
                for &r in &rest {
                    star.insert(r, ());
                }
                cones.push(rest);
            }
        }
        let exc_rays: Vec<usize> = star.keys().copied().collect();
        let pos: BTreeMap<usize, usize> = exc_rays.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let rays: Vec<LatticeVector> = exc_rays
            .iter()
            .map(|&r| LatticeVector(w.mul_vec(fan.ray(r).coords())))
            .collect();
        let cones: Vec<Vec<usize>> = cones.into_iter().map(|c| c.iter().map(|r| pos[r]).collect()).collect();
        let exc_fan = Fan::new(n - sigma.len(), rays, cones)?;
        (ContractionKind::Birational, exc_rays, w, exc_fan)
    };
    let m = exc_fan.dim();
    let fiber_rays: Vec<usize> = candidate
        .positive_rays
        .iter()
        .map(|x| exc_rays.iter().position(|r| r == x))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bundle_error("a positive ray does not meet the exceptional locus"))?;
    if e == 0 || m + 1 < e {
        return Err(bundle_error("fiber dimension exceeds the exceptional locus"));
    }

    // every maximal cone of E omits exactly one fiber ray, and the cones over
    // a fixed base cone are exactly the e choices of omitted ray
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for c in exc_fan.max_cones() {
        let fib: Vec<usize> = c.iter().copied().filter(|r| fiber_rays.contains(r)).collect();
        if fib.len() != e - 1 {
            return Err(bundle_error("a maximal cone of E does not contain e-1 fiber rays"));
        }
        let omitted = *fiber_rays.iter().find(|x| !fib.contains(x)).expect("one omitted ray");
        let rest: Vec<usize> = c.iter().copied().filter(|r| !fiber_rays.contains(r)).collect();
        groups.entry(rest).or_default().push(omitted);
    }
    for omitted in groups.values() {
        let mut o = omitted.clone();
        o.sort_unstable();
        let mut all = fiber_rays.clone();
        all.sort_unstable();
        if o != all {
            return Err(bundle_error("a base cone does not lift to one cone per omitted fiber ray"));
        }
    }

    // base lattice: quotient by the fiber rays of one maximal cone
    let c0 = &exc_fan.max_cones()[0];
    let fib_gens: Vec<Vec<Int>> = c0
        .iter()
        .filter(|r| fiber_rays.contains(r))
        .map(|&r| exc_fan.ray(r).coords().to_vec())
        .collect();
    let projection = quotient_map(&fib_gens, m);
    for &x in &fiber_rays {
        if !projection.mul_vec(exc_fan.ray(x).coords()).iter().all(Zero::is_zero) {
            return Err(bundle_error("fiber rays do not span a common sublattice"));
        }
    }
    let non_fiber: Vec<usize> = (0..exc_fan.n_rays()).filter(|r| !fiber_rays.contains(r)).collect();
    let base_rays: Vec<LatticeVector> = non_fiber
        .iter()
        .map(|&r| LatticeVector(projection.mul_vec(exc_fan.ray(r).coords())))
        .collect();
    let base_pos: BTreeMap<usize, usize> = non_fiber.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let base_cones: Vec<Vec<usize>> = groups
        .keys()
        .map(|rest| rest.iter().map(|r| base_pos[r]).collect())
        .collect();
    let dim_b = m + 1 - e;
    let base_fan = if dim_b == 0 {
        if !non_fiber.is_empty() {
            return Err(bundle_error("rays off the fiber over a point base"));
        }
        Fan::point()
    } else {
        Fan::new(dim_b, base_rays, base_cones).map_err(|err| bundle_error(format!("base fan: {err}")))?
    };
    if !validate_fan(&base_fan).is_valid() {
        return Err(bundle_error("base fan is not smooth, complete and projective"));
    }
    if !validate_fan(&exc_fan).is_valid() {
        return Err(bundle_error("exceptional fan is not smooth, complete and projective"));
    }
    if kind == ContractionKind::Birational {
        let r = candidate.r;
        if m != n - r || dim_b + e + r != n + 1 {
            return Err(bundle_error("dimensions disagree with the structure of the contraction"));
        }
    } else if dim_b + e != n + 1 {
        return Err(bundle_error("dimensions disagree with the structure of the contraction"));
    }

    let exc_ring = Arc::new(ToricChowRing::new(&exc_fan)?);
    let base_ring = Arc::new(ToricChowRing::new(&base_fan)?);
    let zeta_e = exc_rays.iter().position(|&r| r == zeta_ray).expect("zeta ray in E");
    let zeta = exc_ring.ray_class(zeta_e);

    let mut structure = ContractionStructure {
        candidate: candidate.clone(),
        kind,
        exc_fan,
        exc_rays,
        exc_lattice_map: w,
        base_fan,
        base_lift: non_fiber,
        projection,
        fiber_rays,
        zeta_ray,
        exc_ring,
        base_ring,
        zeta,
        chern_of_v: Vec::new(),
    };
    structure.chern_of_v = grothendieck_chern(&structure)?;
    Ok(structure)
}

/// Solves `zeta^e + sum_j pi^*(c_j) zeta^{e-j} = 0` for `c_1..c_e`.
fn grothendieck_chern(s: &ContractionStructure) -> Result<Vec<ChowElement>, ContractionError> {
    let e = s.e();
    let ring = &s.exc_ring;
    let base = &s.base_ring;
    let dim_b = base.dim();
    let mut chern: Vec<ChowElement> = (0..e).map(|_| base.zero()).collect();
    if e > ring.top_degree() {
        return Ok(chern);
    }
    let zeta_pows: Vec<ChowElement> = (0..=e)
        .map(|i| ring.pow(&s.zeta, i))
        .collect::<Result<_, _>>()?;
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for j in 1..=e.min(dim_b) {
        for t in 0..base.rank_in_degree(j) {
            let beta = s.pullback(&base.basis_element(j, t))?;
            let col = ring.mul(&beta, &zeta_pows[e - j])?;
            cols.push(col.component(e).to_vec());
            labels.push((j, t));
        }
    }
    let target: Vec<Rat> = zeta_pows[e].component(e).iter().map(|x| -x).collect();
    if cols.is_empty() {
        if target.iter().all(Zero::is_zero) {
            return Ok(chern);
        }
        return Err(bundle_error("zeta^e does not vanish over a point base"));
    }
    let x = solve_unique(&cols, &target).ok_or_else(|| bundle_error("Grothendieck relation has no unique solution"))?;
    for ((j, t), v) in labels.into_iter().zip(x) {
        let mut comps = chern[j - 1].clone();
        let unit = base.basis_element(j, t).scale(&v);
        comps = comps.add(&unit)?;
        chern[j - 1] = comps;
    }
    Ok(chern)
}

/// Relative degrees `d_i = H_i . gamma` and twists `ell_i` on the base,
/// checked against `H_i|_E = d_i zeta + pi^* ell_i` in the Chow ring of `E`.
pub fn restriction_data(
    variety: &ToricVariety,
    structure: &ContractionStructure,
    hypersurfaces: &[DivisorClass],
) -> Result<RestrictionData, ContractionError> {
    let gamma = &structure.candidate.curve_class;
    let zeta_e = structure
        .exc_rays
        .iter()
        .position(|&r| r == structure.zeta_ray)
        .expect("zeta ray in E");
    let mut degrees = Vec::new();
    let mut ell = Vec::new();
    let mut ell_divisors = Vec::new();
    for h in hypersurfaces {
        let d = crate::classes::intersect(h, gamma)?;
        let restricted = structure.restrict_divisor(variety.fan(), h)?;
        let mut shifted = restricted.coeffs().to_vec();
        shifted[zeta_e] -= &d;
        let ell_div = structure.descend(&DivisorClass::new(shifted))?;
        let ell_class = if structure.base_fan.dim() == 0 {
            structure.base_ring.zero()
        } else {
            structure.base_ring.divisor(&ell_div)?
        };
        let lhs = structure.exc_ring.divisor(&restricted)?;
        let rhs = structure
            .zeta
            .scale(&Rat::from_integer(d.clone()))
            .add(&structure.pullback(&ell_class)?)?;
        if lhs != rhs {
            return Err(ContractionError::InconsistentRestriction(
                "restricted class differs from d*zeta + pullback".into(),
            ));
        }
        degrees.push(d);
        ell.push(ell_class);
        ell_divisors.push(ell_div);
    }
    Ok(RestrictionData {
        degrees,
        ell,
        ell_divisors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::corpus;

    fn variety(name: &str) -> ToricVariety {
        ToricVariety::new(corpus::lookup(name).unwrap().fan).unwrap()
    }

    fn candidate_for(v: &ToricVariety, class: &CurveClass) -> ContractibleCandidate {
        enumerate_candidates(v)
            .unwrap()
            .into_iter()
            .find(|c| &c.curve_class == class)
            .expect("class among candidates")
    }

    #[test]
    fn projective_space_has_one_fiber_type_class() {
        let v = variety("P3");
        let cands = enumerate_candidates(&v).unwrap();
        assert_eq!(cands.len(), 1);
        let c = &cands[0];
        assert_eq!((c.e, c.r), (4, 0));
        assert_eq!(c.status(), CandidateStatus::VerifiedContractible);
        let s = build_contraction(&v, c).unwrap();
        assert_eq!(s.kind, ContractionKind::FiberType);
        assert_eq!(s.dims(), (3, 0));
        assert!(s.chern_of_v.iter().all(ChowElement::is_zero));
    }

    #[test]
    fn blowup_of_p4_classes() {
        let v = variety("BlP4_line");
        let all = enumerate_candidates(&v).unwrap();
        let cands: Vec<_> = all.iter().filter(|c| c.status() != CandidateStatus::CandidateOnly).collect();
        assert_eq!(cands.len(), 2);
        assert!(cands.iter().all(|c| c.extremal && c.verified));
        // the line class h = e + (h - e) is a wall class but not contractible
        let h = all.iter().find(|c| c.status() == CandidateStatus::CandidateOnly).unwrap();
        assert_eq!(h.curve_class, CurveClass::from_i64(&[1, 1, 1, 1, 1, 0]));
        assert!(!h.extremal);
        let classes: Vec<_> = cands.iter().map(|c| c.curve_class.clone()).collect();
        assert!(classes.contains(&corpus::blowup_p4_line_class_e()));
        assert!(classes.contains(&corpus::blowup_p4_line_class_h_minus_e()));
    }

    #[test]
    fn exceptional_divisor_over_p1() {
        let v = variety("BlP4_line");
        let c = candidate_for(&v, &corpus::blowup_p4_line_class_e());
        assert_eq!((c.e, c.r), (3, 1));
        let s = build_contraction(&v, &c).unwrap();
        assert_eq!(s.kind, ContractionKind::Birational);
        assert_eq!(s.dims(), (3, 1));
        // E = P^2 x P^1 = P(O^3): trivial Chern classes
        assert!(s.chern_of_v.iter().all(ChowElement::is_zero));
        let x = corpus::lookup("BlP4_line").unwrap().parse_divisor("5H-2E").unwrap();
        let data = restriction_data(&v, &s, &[x]).unwrap();
        assert_eq!(data.degrees, vec![int(2)]);
        assert_eq!(s.base_ring.degree(&data.ell[0]).unwrap(), rat(3));
    }

    #[test]
    fn projection_from_the_line() {
        let v = variety("BlP4_line");
        let c = candidate_for(&v, &corpus::blowup_p4_line_class_h_minus_e());
        assert_eq!((c.e, c.r), (3, 0));
        let s = build_contraction(&v, &c).unwrap();
        assert_eq!(s.kind, ContractionKind::FiberType);
        assert_eq!(s.dims(), (4, 2));
        let b = &s.base_ring;
        let h = b.ray_class(0);
        // zeta = D_{e4} = H; the bundle has c(V) = 1 - h in this normalization
        assert_eq!(s.chern_of_v[0], h.neg());
        assert!(s.chern_of_v[1].is_zero() && s.chern_of_v[2].is_zero());
        let x = corpus::lookup("BlP4_line").unwrap().parse_divisor("5H-2E").unwrap();
        let data = restriction_data(&v, &s, &[x]).unwrap();
        assert_eq!(data.degrees, vec![int(3)]);
        assert_eq!(data.ell[0], h.scale(&rat(2)));
        // zeta through the exceptional ray instead: c(V) = (1 + h)^2
        let s2 = build_contraction_with_zeta(&v, &c, 5).unwrap();
        let b2 = &s2.base_ring;
        let h2 = b2.ray_class(0);
        assert_eq!(s2.chern_of_v[0], h2.scale(&rat(2)));
        assert_eq!(s2.chern_of_v[1], b2.mul(&h2, &h2).unwrap());
    }

    #[test]
    fn zeta_has_degree_one_on_fiber_lines() {
        for entry in corpus::entries() {
            let v = ToricVariety::new(entry.fan.clone()).unwrap();
            for c in enumerate_candidates(&v).unwrap().into_iter().filter(|c| c.verified) {
                let s = build_contraction(&v, &c).unwrap();
                assert_eq!(c.curve_class.entries()[s.zeta_ray], int(1));
                let (de, db) = s.dims();
                assert_eq!(de - db, c.e - 1, "{}", entry.name);
                // zeta^{e-1} . pi^*(point of B) = 1
                let pt = s.base_ring.cone_class(&s.base_fan.max_cones()[0]);
                let fib = s.exc_ring.mul(&s.pullback(&pt).unwrap(), &s.exc_ring.pow(&s.zeta, c.e - 1).unwrap()).unwrap();
                assert_eq!(s.exc_ring.degree(&fib).unwrap(), rat(1), "{}", entry.name);
            }
        }
    }

    #[test]
    fn blowup_of_p6_has_two_verified_classes() {
        let v = variety("BlP6_P3");
        let cands: Vec<_> = enumerate_candidates(&v).unwrap().into_iter().filter(|c| c.verified).collect();
        assert_eq!(cands.len(), 2);
        let x = corpus::lookup("BlP6_P3").unwrap().parse_divisor("8H-2E").unwrap();
        let mut degs: Vec<Int> = cands
            .iter()
            .map(|c| {
                let s = build_contraction(&v, c).unwrap();
                restriction_data(&v, &s, &[x.clone()]).unwrap().degrees[0].clone()
            })
            .collect();
        degs.sort();
        assert_eq!(degs, vec![int(2), int(6)]);
    }
}
