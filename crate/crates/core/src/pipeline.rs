//! End-to-end verification: hypotheses on `(Y, H_1..H_k)`, per-class
//! containment of lines via top Chern classes, integer generation of the
//! curve lattice, and decompositions of effective classes.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{rat_to_string, Int, Rat};
use crate::chern::bundle::{assemble_m, perturbation_terms, top_chern_nonzero, ChernVerdict};
use crate::chow::schubert::SchubertTerm;
use crate::chow::{GradedRing, GrassmannBundleRing, NamedTerm};
use crate::classes::{intersect, CurveClass, DivisorClass};
use crate::contraction::{
    build_contraction_with_zeta, enumerate_candidates, restriction_data, CandidateStatus, ContractibleCandidate,
    ContractionKind,
};
use crate::error::{FanError, PipelineError};
use crate::fan::{validate_fan, Fan, ToricVariety};
use crate::json;
use crate::lattice::IntMatrix;
use crate::lp::{max_min_slack, maximize, LpOutcome};

pub const SCHEMA_VERSION: u32 = 1;

/// Slack added to the search bound of [`decompose_effective`].
pub const DECOMPOSITION_SLACK: i64 = 16;

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub smooth: bool,
    pub complete: bool,
    pub projective: bool,
    pub fan_valid: bool,
    pub ample: Vec<bool>,
    pub all_ample: bool,
    pub dim_y: usize,
    /// `dim Y - k`; negative when there are more hypersurfaces than dimensions.
    pub dim_x: i64,
    pub dim_at_least_3: bool,
    /// `-K_Y - sum H_i`, whose restriction is `-K_X`.
    #[serde(serialize_with = "json::divisor")]
    pub minus_kx: DivisorClass,
    pub minus_kx_nef: bool,
    /// Wall classes on which `-K_Y - sum H_i` is negative.
    #[serde(serialize_with = "json::curves")]
    pub nef_witnesses: Vec<CurveClass>,
}

impl HypothesisReport {
    /// All hypotheses of the theorem, with nefness checked on `Y`.
    pub fn passes(&self) -> bool {
        self.fan_valid && self.all_ample && self.dim_at_least_3 && self.minus_kx_nef
    }
}

/// Flags for the theorem's hypotheses; failures are report entries.
pub fn check_hypotheses(fan: &Fan, hypersurfaces: &[DivisorClass]) -> Result<HypothesisReport, PipelineError> {
    for h in hypersurfaces {
        if h.len() != fan.n_rays() {
            return Err(FanError::LengthMismatch {
                expected: fan.n_rays(),
                found: h.len(),
            }
            .into());
        }
    }
    let v = validate_fan(fan);
    let fan_valid = v.is_valid();
    let mut minus_kx = DivisorClass::anticanonical(fan.n_rays());
    for h in hypersurfaces {
        minus_kx = minus_kx.sub(h);
    }
    let (ample, nef_witnesses) = if fan_valid {
        let y = ToricVariety::new(fan.clone())?;
        (
            hypersurfaces.iter().map(|h| y.is_ample(h)).collect::<Vec<_>>(),
            y.negative_classes(&minus_kx),
        )
    } else {
        (vec![false; hypersurfaces.len()], Vec::new())
    };
    let dim_x = fan.dim() as i64 - hypersurfaces.len() as i64;
    Ok(HypothesisReport {
        smooth: v.smooth,
        complete: v.complete,
        projective: v.projective,
        fan_valid,
        all_ample: ample.iter().all(|&a| a),
        ample,
        dim_y: fan.dim(),
        dim_x,
        dim_at_least_3: dim_x >= 3,
        minus_kx,
        minus_kx_nef: fan_valid && nef_witnesses.is_empty(),
        nef_witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureSummary {
    pub kind: ContractionKind,
    pub dim_e: usize,
    pub dim_b: usize,
    pub zeta_ray: usize,
    /// `c_1(V), .., c_e(V)` on the base.
    pub chern_of_v: Vec<Vec<NamedTerm>>,
    /// Twists `ell_i` with `H_i|_E = d_i zeta + pi^* ell_i`.
    pub ell: Vec<Vec<NamedTerm>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationSummary {
    pub j: usize,
    pub sign: i8,
    pub nonzero: bool,
    pub integral: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernSummary {
    pub verdict: ChernVerdict,
    pub rank: usize,
    pub dim: usize,
    #[serde(serialize_with = "json::opt_int")]
    pub integral: Option<Int>,
    /// `c_r(M)` restricted to a fiber `Gr(2, e)`, in the Schubert basis.
    pub fiber_schubert: Vec<SchubertTerm>,
    pub fiber_nonnegative: bool,
    pub perturbation: Vec<PerturbationSummary>,
    /// First `j` whose perturbation term is nonzero.
    pub discriminating_term: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    /// `dim F + dim E`, with `F` a fiber of `E -> B`.
    pub lhs: i64,
    /// `dim Y + sum d_i - 1`.
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    #[serde(serialize_with = "json::curve")]
    pub curve_class: CurveClass,
    pub status: CandidateStatus,
    pub e: usize,
    pub r: usize,
    #[serde(serialize_with = "json::ints")]
    pub multiplicities: Vec<Int>,
    pub structure: Option<StructureSummary>,
    #[serde(serialize_with = "json::ints")]
    pub degrees: Vec<Int>,
    /// `-K_Y . gamma`, the sum of all relation coefficients.
    #[serde(serialize_with = "json::int")]
    pub minus_ky_degree: Int,
    #[serde(serialize_with = "json::int")]
    pub minus_kx_degree: Int,
    pub inequality: Option<InequalityCheck>,
    /// Relation sum minus `sum d_i` equals `-K_X . gamma`, with the right side
    /// computed in the Chow ring of `E`.
    pub adjunction_holds: Option<bool>,
    pub expected_fano_dim: Option<i64>,
    pub chern: Option<ChernSummary>,
    pub contained: bool,
    /// Contained and `-K_X . gamma >= 0`.
    pub certified: bool,
    pub note: Option<String>,
}

impl ClassReport {
    pub fn count(&self) -> Option<&Int> {
        self.chern.as_ref().and_then(|c| c.integral.as_ref())
    }

    pub fn verdict(&self) -> Option<&ChernVerdict> {
        self.chern.as_ref().map(|c| &c.verdict)
    }
}

/// Runs contraction, restriction, the Grassmann bundle and the top Chern
/// class for one candidate; candidates without a bundle structure pass
/// through with only fan-side data.
pub fn verify_class(
    variety: &ToricVariety,
    hypersurfaces: &[DivisorClass],
    candidate: &ContractibleCandidate,
) -> Result<ClassReport, PipelineError> {
    verify_class_with_zeta(variety, hypersurfaces, candidate, None)
}

/// As [`verify_class`] with an explicit positive ray for the relative
/// hyperplane class.
pub fn verify_class_with_zeta(
    variety: &ToricVariety,
    hypersurfaces: &[DivisorClass],
    candidate: &ContractibleCandidate,
    zeta_ray: Option<usize>,
) -> Result<ClassReport, PipelineError> {
    let gamma = &candidate.curve_class;
    let degrees: Vec<Int> = hypersurfaces.iter().map(|h| intersect(h, gamma)).collect::<Result<_, _>>()?;
    let minus_ky_degree = gamma.anticanonical_degree();
    let minus_kx_degree = &minus_ky_degree - degrees.iter().sum::<Int>();
    let mut report = ClassReport {
        curve_class: gamma.clone(),
        status: candidate.status(),
        e: candidate.e,
        r: candidate.r,
        multiplicities: candidate.negative_rays.iter().map(|(_, a)| a.clone()).collect(),
        structure: None,
        degrees: degrees.clone(),
        minus_ky_degree: minus_ky_degree.clone(),
        minus_kx_degree: minus_kx_degree.clone(),
        inequality: None,
        adjunction_holds: None,
        expected_fano_dim: None,
        chern: None,
        contained: false,
        certified: false,
        note: None,
    };
    if !candidate.verified {
        report.note = Some("no bundle structure: candidate only".into());
        return Ok(report);
    }
    let zeta_ray = zeta_ray.unwrap_or(candidate.positive_rays[0]);
    let s = build_contraction_with_zeta(variety, candidate, zeta_ray)?;
    let data = restriction_data(variety, &s, hypersurfaces)?;
    let (dim_e, dim_b) = s.dims();
    let e = s.e();

    // fan-side degrees against the Chow ring of E, on a line in a fiber
    let pt = s.base_ring.cone_class(&s.base_fan.max_cones()[0]);
    let line = s.exc_ring.mul(&s.pullback(&pt)?, &s.exc_ring.pow(&s.zeta, e - 2)?)?;
    let line_degree = |d: &DivisorClass| -> Result<Rat, PipelineError> {
        let restricted = s.restrict_divisor(variety.fan(), d)?;
        let x = s.exc_ring.mul(&s.exc_ring.divisor(&restricted)?, &line)?;
        Ok(s.exc_ring.degree(&x)?)
    };
    for (h, d) in hypersurfaces.iter().zip(&degrees) {
        if line_degree(h)? != Rat::from_integer(d.clone()) {
            return Err(PipelineError::Inconsistent(format!(
                "degree of {h} on the fiber line differs from H . gamma = {d}"
            )));
        }
    }
    let chow_minus_kx = line_degree(&variety.anticanonical().sub(&hypersurfaces.iter().fold(
        DivisorClass::zero(variety.fan().n_rays()),
        |acc, h| acc.add(h),
    )))?;
    let relation_sum: Int = gamma.entries().iter().sum();
    report.adjunction_holds =
        Some(Rat::from_integer(relation_sum - degrees.iter().sum::<Int>()) == chow_minus_kx);

    let sum_d: Int = degrees.iter().sum();
    let lhs = (e - 1 + dim_e) as i64;
    let rhs = dim_y_i64(variety) + sum_d.to_i64().unwrap_or(i64::MAX / 2) - 1;
    report.inequality = Some(InequalityCheck { lhs, rhs, holds: lhs >= rhs });
    report.structure = Some(StructureSummary {
        kind: s.kind,
        dim_e,
        dim_b,
        zeta_ray: s.zeta_ray,
        chern_of_v: s.chern_of_v.iter().map(|c| s.base_ring.named_terms(c)).collect(),
        ell: data.ell.iter().map(|c| s.base_ring.named_terms(c)).collect(),
    });

    let rank: Int = degrees.iter().map(|d| d + Int::from(1)).sum();
    let dim_g = (dim_b + 2 * (e - 2)) as i64;
    report.expected_fano_dim = Some(dim_g - rank.to_i64().unwrap_or(i64::MAX / 2));
    if degrees.iter().any(Signed::is_negative) {
        report.note = Some("negative relative degree: no Chern certificate".into());
        return Ok(report);
    }

    let g = GrassmannBundleRing::new(s.base_ring.clone(), e, s.chern_of_v.clone())?;
    let m = assemble_m(&g, &data)?;
    let top = top_chern_nonzero(&g, &m)?;
    let ample = if dim_b == 0 {
        Some(DivisorClass::new(Vec::new()))
    } else {
        ToricVariety::new(s.base_fan.clone())?.ample_divisor()
    };
    let perturbation: Vec<PerturbationSummary> = match (&ample, m.rank <= g.top_degree()) {
        (Some(a), true) => perturbation_terms(&g, &m, a)?
            .into_iter()
            .map(|t| PerturbationSummary {
                j: t.j,
                sign: t.sign,
                nonzero: t.nonzero,
                integral: t.integral.as_ref().map(rat_to_string),
            })
            .collect(),
        _ => Vec::new(),
    };
    let contained = top.verdict.is_nonzero();
    report.chern = Some(ChernSummary {
        discriminating_term: perturbation.iter().find(|p| p.nonzero).map(|p| p.j),
        verdict: top.verdict,
        rank: top.rank,
        dim: top.dim,
        integral: top.integral,
        fiber_nonnegative: top.fiber_expansion.is_nonnegative(),
        fiber_schubert: top.fiber_expansion.terms(),
        perturbation,
    });
    report.contained = contained;
    report.certified = contained && !minus_kx_degree.is_negative();
    Ok(report)
}

fn dim_y_i64(v: &ToricVariety) -> i64 {
    v.dim() as i64
}

/// Outcome of the bounded search in [`decompose_effective`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum DecompositionOutcome {
    Found { terms: Vec<DecompositionTerm> },
    /// Nothing within the search bound; not a claim of nonexistence.
    NotFound { bound: String },
    NotEffective,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionTerm {
    #[serde(serialize_with = "json::curve")]
    pub class: CurveClass,
    #[serde(serialize_with = "json::int")]
    pub multiplicity: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "json::curve")]
    pub target: CurveClass,
    #[serde(flatten)]
    pub outcome: DecompositionOutcome,
}

impl Decomposition {
    pub fn terms(&self) -> Option<&[DecompositionTerm]> {
        match &self.outcome {
            DecompositionOutcome::Found { terms } => Some(terms),
            _ => None,
        }
    }
}

fn to_rat_row(c: &CurveClass) -> Vec<Rat> {
    c.entries().iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Whether `target` is a nonnegative rational combination of `classes`.
///
/// Rows are sign-flipped so that `target >= 0`; then `W l <= target` with
/// the sum of rows maximized reaches `sum target` exactly on membership.
pub fn in_cone(target: &CurveClass, classes: &[CurveClass]) -> bool {
    let n = target.len();
    let t: Vec<Rat> = to_rat_row(target);
    let signs: Vec<Rat> = t.iter().map(|x| if x.is_negative() { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) }).collect();
    let cols: Vec<Vec<Rat>> = classes.iter().map(to_rat_row).collect();
    let a: Vec<Vec<Rat>> = (0..n)
        .map(|j| cols.iter().map(|c| &c[j] * &signs[j]).collect())
        .collect();
    let b: Vec<Rat> = (0..n).map(|j| &t[j] * &signs[j]).collect();
    let c: Vec<Rat> = (0..cols.len()).map(|i| (0..n).map(|j| &a[j][i]).sum()).collect();
    let goal: Rat = b.iter().sum();
    if cols.is_empty() {
        return goal.is_zero();
    }
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => value == goal,
        LpOutcome::Unbounded => false,
    }
}

/// Nonnegative integer decomposition `target = sum m_i g_i` by bounded
/// depth-first search; the bound on each `m_i` is the sup norm of `target`
/// in generator coordinates (or of `target` itself when the generators are
/// not a basis) plus [`DECOMPOSITION_SLACK`].
pub fn decompose_effective(
    variety: &ToricVariety,
    target: &CurveClass,
    generators: &[CurveClass],
) -> Result<Decomposition, PipelineError> {
    let target = CurveClass::checked(target.entries().to_vec(), variety.fan())?;
    let outcome = if !in_cone(&target, variety.wall_classes()) {
        DecompositionOutcome::NotEffective
    } else {
        search(&target, generators)
    };
    Ok(Decomposition { target, outcome })
}

fn search(target: &CurveClass, generators: &[CurveClass]) -> DecompositionOutcome {
    let gens: Vec<&CurveClass> = generators.iter().filter(|g| g.entries().iter().any(|x| !x.is_zero())).collect();
    let sup = |v: &[Rat]| -> Int { v.iter().map(|x| x.abs().ceil().to_integer()).max().unwrap_or_default() };
    let owned: Vec<CurveClass> = gens.iter().map(|g| (*g).clone()).collect();
    let base = match target.coordinates_in(&owned) {
        Some(c) if IntMatrix::from_rows(owned.iter().map(|g| g.entries().to_vec()).collect(), target.len()).rank() == owned.len() => sup(&c),
        _ => sup(&to_rat_row(target)),
    };
    let bound = base + Int::from(DECOMPOSITION_SLACK);
    if target.entries().iter().all(Zero::is_zero) {
        return DecompositionOutcome::Found { terms: Vec::new() };
    }
    if gens.is_empty() {
        return DecompositionOutcome::NotFound { bound: bound.to_string() };
    }
    // a weight strictly positive on every generator caps each multiplicity
    let rows: Vec<Vec<Rat>> = gens.iter().map(|g| to_rat_row(g)).collect();
    let (t, w) = max_min_slack(&rows, &[], target.len());
    let weight = |v: &[Int]| -> Rat { v.iter().zip(&w).map(|(x, y)| Rat::from_integer(x.clone()) * y).sum() };
    let weights: Option<Vec<Rat>> = t.is_positive().then(|| gens.iter().map(|g| weight(g.entries())).collect());

    fn dfs(
        i: usize,
        residual: &[Int],
        gens: &[&CurveClass],
        bound: &Int,
        weights: &Option<Vec<Rat>>,
        weight: &dyn Fn(&[Int]) -> Rat,
        chosen: &mut Vec<Int>,
    ) -> bool {
        if i == gens.len() {
            return residual.iter().all(Zero::is_zero);
        }
        let mut cap = bound.clone();
        if let Some(ws) = weights {
            let wr = weight(residual);
            if wr.is_negative() {
                return false;
            }
            cap = cap.min((wr / &ws[i]).floor().to_integer());
        }
        let g = gens[i].entries();
        let mut k = Int::zero();
        let mut r: Vec<Int> = residual.to_vec();
        while k <= cap {
            chosen.push(k.clone());
            if dfs(i + 1, &r, gens, bound, weights, weight, chosen) {
                return true;
            }
            chosen.pop();
            for (x, y) in r.iter_mut().zip(g) {
                *x -= y;
            }
            k += 1;
        }
        false
    }

    let mut chosen = Vec::new();
    if dfs(0, target.entries(), &gens, &bound, &weights, &weight, &mut chosen) {
        let terms = gens
            .iter()
            .zip(chosen)
            .filter(|(_, m)| !m.is_zero())
            .map(|(g, m)| DecompositionTerm {
                class: (*g).clone(),
                multiplicity: m,
            })
            .collect();
        DecompositionOutcome::Found { terms }
    } else {
        DecompositionOutcome::NotFound { bound: bound.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeCheck {
    /// Rank of the curve lattice, `#rays - dim`.
    pub lattice_rank: usize,
    /// Smith invariant factors of the certified classes.
    #[serde(serialize_with = "json::ints")]
    pub smith_invariants: Vec<Int>,
    pub generates: bool,
}

/// Whether `classes` generate the full curve lattice over the integers.
pub fn generates_curve_lattice(fan: &Fan, classes: &[CurveClass]) -> LatticeCheck {
    let lattice_rank = fan.n_rays() - fan.dim();
    let m = IntMatrix::from_rows(classes.iter().map(|c| c.entries().to_vec()).collect(), fan.n_rays());
    let smith_invariants = m.smith_invariants();
    let generates = smith_invariants.len() == lattice_rank && smith_invariants.iter().all(|x| x == &Int::from(1));
    LatticeCheck {
        lattice_rank,
        smith_invariants,
        generates,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GenerationVerdict {
    GeneratedByRationalCurves,
    Inconclusive {
        reasons: Vec<String>,
        #[serde(serialize_with = "json::curves")]
        uncertified_classes: Vec<CurveClass>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SemigroupReport {
    /// Every wall class decomposes into certified classes.
    pub generated: bool,
    pub decompositions: Vec<Decomposition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IHCReport {
    pub schema: u32,
    #[serde(serialize_with = "json::divisors")]
    pub hypersurfaces: Vec<DivisorClass>,
    pub hypotheses: HypothesisReport,
    pub classes: Vec<ClassReport>,
    pub lattice: Option<LatticeCheck>,
    pub verdict: GenerationVerdict,
    pub semigroup: Option<SemigroupReport>,
    pub decompositions: Vec<Decomposition>,
}

impl IHCReport {
    pub fn is_generated(&self) -> bool {
        self.verdict == GenerationVerdict::GeneratedByRationalCurves
    }

    pub fn certified_classes(&self) -> Vec<CurveClass> {
        self.classes.iter().filter(|c| c.certified).map(|c| c.curve_class.clone()).collect()
    }
}

/// Hypotheses, every contractible class (in parallel, reported in
/// enumeration order), the integer generation check and decompositions of
/// `targets` into certified classes.
///
/// The verdict uses the per-class condition `-K_X . gamma >= 0` rather than
/// nefness of `-K_X`; nefness is still reported.
pub fn ihc_verdict(fan: &Fan, hypersurfaces: &[DivisorClass], targets: &[CurveClass]) -> Result<IHCReport, PipelineError> {
    let hypotheses = check_hypotheses(fan, hypersurfaces)?;
    let mut reasons = Vec::new();
    if !hypotheses.fan_valid {
        reasons.push("fan is not smooth, complete and projective".to_string());
        return Ok(IHCReport {
            schema: SCHEMA_VERSION,
            hypersurfaces: hypersurfaces.to_vec(),
            hypotheses,
            classes: Vec::new(),
            lattice: None,
            verdict: GenerationVerdict::Inconclusive {
                reasons,
                uncertified_classes: Vec::new(),
            },
            semigroup: None,
            decompositions: Vec::new(),
        });
    }
    let variety = ToricVariety::new(fan.clone())?;
    let candidates = enumerate_candidates(&variety)?;
    let classes: Vec<ClassReport> = candidates
        .par_iter()
        .map(|c| verify_class(&variety, hypersurfaces, c))
        .collect::<Result<_, _>>()?;
    let certified: Vec<CurveClass> = classes.iter().filter(|c| c.certified).map(|c| c.curve_class.clone()).collect();
    let lattice = generates_curve_lattice(fan, &certified);

    for (i, ok) in hypotheses.ample.iter().enumerate() {
        if !ok {
            reasons.push(format!("hypersurface {i} is not ample"));
        }
    }
    if !hypotheses.dim_at_least_3 {
        reasons.push(format!("dim X = {} is less than 3", hypotheses.dim_x));
    }
    if !lattice.generates {
        reasons.push("certified classes do not generate the curve lattice".to_string());
    }
    let uncertified: Vec<CurveClass> = classes.iter().filter(|c| !c.certified).map(|c| c.curve_class.clone()).collect();
    let verdict = if reasons.is_empty() {
        GenerationVerdict::GeneratedByRationalCurves
    } else {
        GenerationVerdict::Inconclusive {
            reasons,
            uncertified_classes: uncertified,
        }
    };
    let semigroup = if verdict == GenerationVerdict::GeneratedByRationalCurves {
        let decompositions: Vec<Decomposition> = variety
            .wall_classes()
            .iter()
            .map(|w| decompose_effective(&variety, w, &certified))
            .collect::<Result<_, _>>()?;
        Some(SemigroupReport {
            generated: decompositions.iter().all(|d| d.terms().is_some()),
            decompositions,
        })
    } else {
        None
    };
    let decompositions = targets
        .iter()
        .map(|t| decompose_effective(&variety, t, &certified))
        .collect::<Result<_, _>>()?;
    Ok(IHCReport {
        schema: SCHEMA_VERSION,
        hypersurfaces: hypersurfaces.to_vec(),
        hypotheses,
        classes,
        lattice: Some(lattice),
        verdict,
        semigroup,
        decompositions,
    })
}
