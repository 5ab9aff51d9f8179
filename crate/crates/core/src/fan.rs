//! Smooth complete fans: structure, validation, walls and wall relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_of, Int, Rat};
use crate::classes::{CurveClass, DivisorClass};
use crate::error::FanError;
use crate::lattice::{integer_kernel, IntMatrix};
use crate::lp::max_min_slack;

/// A vector of the lattice `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        gcd_of(&self.0).is_one()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A simplicial fan given by primitive rays and maximal cones.
///
/// Maximal cones are stored as sorted ray-index lists of length `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Structural construction. Any dimension is accepted here (points and
    /// curves show up as bases of contractions); user-facing input goes
    /// through [`Fan::from_json`], which rejects dimension below 2.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(FanError::RayDimension {
                    index: i,
                    expected: dim,
                    found: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(FanError::ZeroRay(i));
            }
            if !r.is_primitive() {
                return Err(FanError::NonPrimitiveRay(i));
            }
        }
        let mut seen: BTreeMap<&LatticeVector, usize> = BTreeMap::new();
        for (i, r) in rays.iter().enumerate() {
            if let Some(&j) = seen.get(r) {
                return Err(FanError::DuplicateRay(j, i));
            }
            seen.insert(r, i);
        }
        if max_cones.is_empty() {
            return Err(FanError::NoCones);
        }
        let mut used = vec![false; rays.len()];
        let mut cones = Vec::with_capacity(max_cones.len());
        for (ci, cone) in max_cones.into_iter().enumerate() {
            if cone.len() != dim {
                return Err(FanError::ConeSize {
                    cone: ci,
                    expected: dim,
                    found: cone.len(),
                });
            }
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() {
                return Err(FanError::RepeatedRayInCone(ci));
            }
            for &r in &sorted {
                if r >= rays.len() {
                    return Err(FanError::RayIndexOutOfRange {
                        cone: ci,
                        ray: r,
                        nrays: rays.len(),
                    });
                }
                used[r] = true;
            }
            cones.push(sorted);
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay(unused));
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan, FanError> {
        Fan::new(
            dim,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// The fan of a point: lattice of rank zero, a single empty cone.
    pub fn point() -> Fan {
        Fan {
            dim: 0,
            rays: Vec::new(),
            max_cones: vec![Vec::new()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// `dim x n_rays` matrix whose columns are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = self.rays.iter().map(|r| r.0.clone()).collect();
        IntMatrix::from_columns(&cols, self.dim)
    }

    /// Square matrix whose rows are the generators of maximal cone `i`.
    pub fn cone_matrix(&self, i: usize) -> IntMatrix {
        let rows = self.max_cones[i].iter().map(|&r| self.rays[r].0.clone()).collect();
        IntMatrix::from_rows(rows, self.dim)
    }

    /// Dual basis of a smooth maximal cone: entry `j` pairs to 1 with the
    /// `j`-th ray of the cone and to 0 with the others.
    pub fn dual_basis(&self, i: usize) -> Option<Vec<Vec<Int>>> {
        let inv = self.cone_matrix(i).unimodular_inverse()?;
        Some((0..self.dim).map(|j| inv.column(j)).collect())
    }

    /// Whether the (sorted or unsorted) index set spans a cone of the fan.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| rays.iter().all(|r| c.binary_search(r).is_ok()))
    }

    /// Index of the first maximal cone containing the given rays.
    pub fn max_cone_containing(&self, rays: &[usize]) -> Option<usize> {
        self.max_cones
            .iter()
            .position(|c| rays.iter().all(|r| c.binary_search(r).is_ok()))
    }

    /// All cones with `k` rays, as sorted index lists in lexicographic order.
    pub fn cones_of_dim(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.max_cones {
            for subset in subsets_of_size(c, k) {
                out.insert(subset);
            }
        }
        out.into_iter().collect()
    }

    /// Codimension-one faces mapped to the maximal cones containing them,
    /// with the ray each cone adds to the face.
    fn facet_incidence(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            for (p, &omitted) in c.iter().enumerate() {
                let mut facet = c.clone();
                facet.remove(p);
                map.entry(facet).or_default().push((ci, omitted));
            }
        }
        map
    }

    /// Parses the JSON fan format `{"rays": [[..]], "max_cones": [[..]]}`.
    /// Coordinates must be JSON integers (arbitrary size); floats are rejected.
    pub fn from_json(text: &str) -> Result<Fan, FanError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| FanError::Parse(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| FanError::Parse("top level must be an object".into()))?;
        for key in obj.keys() {
            if key != "rays" && key != "max_cones" {
                return Err(FanError::Parse(format!("unknown field `{key}`")));
            }
        }
        let rays_v = obj
            .get("rays")
            .and_then(|v| v.as_array())
            .ok_or_else(|| FanError::Parse("missing array `rays`".into()))?;
        let cones_v = obj
            .get("max_cones")
            .and_then(|v| v.as_array())
            .ok_or_else(|| FanError::Parse("missing array `max_cones`".into()))?;
        let mut rays = Vec::with_capacity(rays_v.len());
        for r in rays_v {
            let arr = r
                .as_array()
                .ok_or_else(|| FanError::Parse("each ray must be an array".into()))?;
            let coords = arr.iter().map(json_integer).collect::<Result<Vec<_>, _>>()?;
            rays.push(LatticeVector(coords));
        }
        let mut cones = Vec::with_capacity(cones_v.len());
        for c in cones_v {
            let arr = c
                .as_array()
                .ok_or_else(|| FanError::Parse("each cone must be an array".into()))?;
            let idx = arr
                .iter()
                .map(|x| {
                    let v = json_integer(x)?;
                    usize::try_from(v).map_err(|_| FanError::Parse("cone index must be a nonnegative integer".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cones.push(idx);
        }
        let dim = rays
            .first()
            .map(LatticeVector::dim)
            .ok_or_else(|| FanError::Parse("fan has no rays".into()))?;
        if dim < 2 {
            return Err(FanError::DegenerateDimension(dim));
        }
        Fan::new(dim, rays, cones)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rays": self.rays.iter().map(|r| r.0.iter().map(|c| serde_json::Value::Number(
                c.to_string().parse().expect("integer literal"))).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "max_cones": self.max_cones,
        })
    }
}

fn json_integer(v: &serde_json::Value) -> Result<Int, FanError> {
    match v {
        serde_json::Value::Number(n) => {
            let text = n.to_string();
            text.parse::<Int>()
                .map_err(|_| FanError::Parse(format!("`{text}` is not an integer")))
        }
        other => Err(FanError::Parse(format!("expected an integer, found {other}"))),
    }
}

pub(crate) fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// A codimension-one cone shared by two maximal cones, with its relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub cone_a: usize,
    pub cone_b: usize,
    pub shared: Vec<usize>,
    pub relation: CurveClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub smooth: bool,
    pub complete: bool,
    pub projective: bool,
    /// Maximal cones whose generators do not form a lattice basis.
    pub singular_cones: Vec<usize>,
    /// Codimension-one faces lying in a number of maximal cones other than two.
    pub defective_walls: Vec<Vec<usize>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.complete && self.projective
    }
}

/// Smoothness, completeness (every wall in exactly two maximal cones) and
/// projectivity (a strictly convex support function exists).
pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let singular_cones: Vec<usize> = (0..fan.max_cones().len())
        .filter(|&i| !fan.cone_matrix(i).determinant().abs().is_one())
        .collect();
    let smooth = singular_cones.is_empty();
    let defective_walls: Vec<Vec<usize>> = fan
        .facet_incidence()
        .into_iter()
        .filter(|(_, cones)| cones.len() != 2)
        .map(|(facet, _)| facet)
        .collect();
    // a point is complete with no walls
    let complete = defective_walls.is_empty();
    let projective = smooth
        && complete
        && match walls_and_relations(fan) {
            Ok(walls) => {
                let classes = distinct_relations(&walls);
                fan.dim() == 0 || has_strictly_convex_support(&classes, fan.n_rays())
            }
            Err(_) => false,
        };
    ValidationReport {
        smooth,
        complete,
        projective,
        singular_cones,
        defective_walls,
    }
}

fn has_strictly_convex_support(relations: &[CurveClass], n_rays: usize) -> bool {
    let rows: Vec<Vec<Rat>> = relations
        .iter()
        .map(|c| c.entries().iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let (t, _) = max_min_slack(&rows, &[], n_rays);
    t.is_positive()
}

/// One [`Wall`] per codimension-one cone, with the relation normalized to
/// coefficient `+1` on the two non-shared rays.
pub fn walls_and_relations(fan: &Fan) -> Result<Vec<Wall>, FanError> {
    let n = fan.dim();
    let mut duals: Vec<Option<Vec<Vec<Int>>>> = vec![None; fan.max_cones().len()];
    let mut walls = Vec::new();
    for (facet, cones) in fan.facet_incidence() {
        if cones.len() != 2 {
            return Err(FanError::NotComplete { count: cones.len() });
        }
        let (ca, ra) = cones[0];
        let (cb, rb) = cones[1];
        if duals[ca].is_none() {
            duals[ca] = Some(fan.dual_basis(ca).ok_or(FanError::NotSmooth(ca))?);
        }
        let dual = duals[ca].as_ref().expect("dual basis");
        // u_b = sum_j lambda_j u_{cone_a[j]}
        let ub = fan.ray(rb).coords();
        let lambda: Vec<Int> = (0..n)
            .map(|j| dual[j].iter().zip(ub).map(|(x, y)| x * y).sum())
            .collect();
        let pos_a = fan.max_cones()[ca]
            .iter()
            .position(|&r| r == ra)
            .expect("omitted ray in cone");
        if lambda[pos_a] != Int::from(-1) {
            if lambda[pos_a].is_negative() {
                return Err(FanError::NotSmooth(cb));
            }
            return Err(FanError::OverlappingCones(ca, cb));
        }
        let mut entries = vec![Int::zero(); fan.n_rays()];
        entries[ra] = Int::one();
        entries[rb] = Int::one();
        for (j, &r) in fan.max_cones()[ca].iter().enumerate() {
            if r != ra {
                entries[r] = -lambda[j].clone();
            }
        }
        walls.push(Wall {
            cone_a: ca,
            cone_b: cb,
            shared: facet,
            relation: CurveClass::new(entries),
        });
    }
    Ok(walls)
}

/// Distinct wall relations in first-occurrence order.
pub fn distinct_relations(walls: &[Wall]) -> Vec<CurveClass> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in walls {
        if seen.insert(w.relation.clone()) {
            out.push(w.relation.clone());
        }
    }
    out
}

/// Saturated basis of the curve lattice (integer relations among the rays).
pub fn curve_lattice_basis(fan: &Fan) -> Vec<CurveClass> {
    integer_kernel(&fan.ray_matrix())
        .into_iter()
        .map(CurveClass::new)
        .collect()
}

/// A fan checked to be smooth and complete, with its walls computed once.
#[derive(Clone, Debug)]
pub struct ToricVariety {
    fan: Fan,
    walls: Vec<Wall>,
    wall_classes: Vec<CurveClass>,
    projective: bool,
}

impl ToricVariety {
    pub fn new(fan: Fan) -> Result<ToricVariety, FanError> {
        let report = validate_fan(&fan);
        if let Some(&c) = report.singular_cones.first() {
            return Err(FanError::NotSmooth(c));
        }
        if !report.complete {
            return Err(FanError::NotComplete { count: 1 });
        }
        let walls = walls_and_relations(&fan)?;
        let wall_classes = distinct_relations(&walls);
        Ok(ToricVariety {
            fan,
            walls,
            wall_classes,
            projective: report.projective,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    /// Distinct wall relation classes; they span the cone of curves.
    pub fn wall_classes(&self) -> &[CurveClass] {
        &self.wall_classes
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn picard_rank(&self) -> usize {
        self.fan.n_rays() - self.fan.dim()
    }

    pub fn anticanonical(&self) -> DivisorClass {
        DivisorClass::anticanonical(self.fan.n_rays())
    }

    pub fn is_nef(&self, d: &DivisorClass) -> bool {
        self.wall_classes
            .iter()
            .all(|c| !d.dot(c).is_negative())
    }

    pub fn is_ample(&self, d: &DivisorClass) -> bool {
        self.wall_classes.iter().all(|c| d.dot(c).is_positive())
    }

    /// An integral ample divisor: `-K` when it is ample, otherwise the
    /// cleared-denominator optimum of the projectivity LP.
    pub fn ample_divisor(&self) -> Option<DivisorClass> {
        let k = self.anticanonical();
        if self.is_ample(&k) {
            return Some(k);
        }
        let rows: Vec<Vec<Rat>> = self
            .wall_classes
            .iter()
            .map(|c| c.entries().iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let (t, v) = max_min_slack(&rows, &[], self.fan.n_rays());
        if !t.is_positive() {
            return None;
        }
        let denom = v.iter().fold(Int::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let d = DivisorClass::new(v.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect());
        debug_assert!(self.is_ample(&d));
        Some(d)
    }

    /// Wall classes on which `d` is negative.
    pub fn negative_classes(&self, d: &DivisorClass) -> Vec<CurveClass> {
        self.wall_classes
            .iter()
            .filter(|c| d.dot(c).is_negative())
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::corpus;

    fn p2_minus_cone() -> Fan {
        Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap()
    }

    #[test]
    fn projective_spaces_validate() {
        for n in 2..=6 {
            let r = validate_fan(&corpus::projective_space(n));
            assert!(r.is_valid(), "P^{n}: {r:?}");
        }
        let r = validate_fan(&corpus::projective_space(1));
        assert!(r.is_valid());
        assert!(validate_fan(&Fan::point()).is_valid());
    }

    #[test]
    fn missing_cone_is_not_complete() {
        let r = validate_fan(&p2_minus_cone());
        assert!(r.smooth);
        assert!(!r.complete);
        assert!(!r.projective);
        assert!(walls_and_relations(&p2_minus_cone()).is_err());
    }

    #[test]
    fn singular_cone_detected() {
        // weighted projective plane P(1,1,2): rays (1,0),(0,1),(-1,-2)
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let r = validate_fan(&f);
        assert!(!r.smooth);
        assert_eq!(r.singular_cones, vec![2]);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            Fan::from_i64(2, &[&[2, 0], &[0, 1]], &[&[0, 1]]).unwrap_err(),
            FanError::NonPrimitiveRay(0)
        );
        assert!(matches!(
            Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 5]]).unwrap_err(),
            FanError::RayIndexOutOfRange { .. }
        ));
        assert_eq!(
            Fan::from_i64(2, &[&[1, 0], &[1, 0]], &[&[0, 1]]).unwrap_err(),
            FanError::DuplicateRay(0, 1)
        );
        assert_eq!(
            Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1]]).unwrap_err(),
            FanError::UnusedRay(2)
        );
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let f = corpus::projective_space(2);
        let text = f.to_json().to_string();
        assert_eq!(Fan::from_json(&text).unwrap(), f);
        assert!(matches!(
            Fan::from_json(r#"{"rays": [[1.0, 0], [0, 1], [-1, -1]], "max_cones": [[0,1],[1,2],[0,2]]}"#),
            Err(FanError::Parse(_))
        ));
        assert!(matches!(
            Fan::from_json(r#"{"rays": [[1], [-1]], "max_cones": [[0],[1]]}"#),
            Err(FanError::DegenerateDimension(1))
        ));
        assert!(matches!(Fan::from_json("{"), Err(FanError::Parse(_))));
        // big coordinates survive
        let big = r#"{"rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0,1],[1,2],[0,2]]}"#;
        assert!(Fan::from_json(big).is_ok());
    }

    #[test]
    fn p2_wall_relations_are_all_ones() {
        let walls = walls_and_relations(&corpus::projective_space(2)).unwrap();
        assert_eq!(walls.len(), 3);
        for w in walls {
            assert_eq!(w.relation.entries(), &[int(1), int(1), int(1)]);
        }
    }

    #[test]
    fn p1xp1_has_two_relation_classes() {
        let f = corpus::p1_times_p1();
        let walls = walls_and_relations(&f).unwrap();
        let classes = distinct_relations(&walls);
        assert_eq!(classes.len(), 2);
        // rays (1,0),(-1,0),(0,1),(0,-1): relations pair opposite rays
        let mut sorted: Vec<Vec<Int>> = classes.iter().map(|c| c.entries().to_vec()).collect();
        sorted.sort();
        assert_eq!(
            sorted,
            vec![vec![int(0), int(0), int(1), int(1)], vec![int(1), int(1), int(0), int(0)]]
        );
    }

    #[test]
    fn wall_invariants_on_corpus() {
        for entry in corpus::entries() {
            let fan = &entry.fan;
            let ray_m = fan.ray_matrix();
            let walls = walls_and_relations(fan).unwrap();
            let k = DivisorClass::anticanonical(fan.n_rays());
            for w in &walls {
                let e = w.relation.entries();
                assert!(ray_m.mul_vec(e).iter().all(Zero::is_zero), "{}", entry.name);
                let sum: Int = e.iter().sum();
                assert_eq!(k.dot(&w.relation), sum);
                let nonshared: Vec<usize> = (0..fan.n_rays())
                    .filter(|r| {
                        (fan.max_cones()[w.cone_a].contains(r) || fan.max_cones()[w.cone_b].contains(r))
                            && !w.shared.contains(r)
                    })
                    .collect();
                assert_eq!(nonshared.len(), 2);
                for r in nonshared {
                    assert_eq!(e[r], int(1));
                }
                for (r, c) in e.iter().enumerate() {
                    if !c.is_zero() {
                        assert!(fan.max_cones()[w.cone_a].contains(&r) || fan.max_cones()[w.cone_b].contains(&r));
                    }
                }
            }
            assert_eq!(curve_lattice_basis(fan).len(), fan.n_rays() - fan.dim());
        }
    }

    #[test]
    fn blowup_of_p4_along_line_is_valid() {
        let f = corpus::blowup_p4_line();
        assert!(validate_fan(&f).is_valid());
        let classes = distinct_relations(&walls_and_relations(&f).unwrap());
        // every relation is a nonnegative combination of e and h - e
        let v = ToricVariety::new(f).unwrap();
        assert_eq!(v.picard_rank(), 2);
        let e = corpus::blowup_p4_line_class_e();
        let he = corpus::blowup_p4_line_class_h_minus_e();
        for c in classes {
            let mut found = false;
            for a in 0..4i64 {
                for b in 0..4i64 {
                    let comb: Vec<Int> = e
                        .entries()
                        .iter()
                        .zip(he.entries())
                        .map(|(x, y)| x * int(a) + y * int(b))
                        .collect();
                    if comb == c.entries() {
                        found = true;
                    }
                }
            }
            assert!(found, "relation {c:?} outside the cone of e and h-e");
        }
    }
}
