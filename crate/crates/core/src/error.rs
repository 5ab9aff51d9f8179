use thiserror::Error;

/// Structural and geometric failures on fans and their classes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("fan has dimension {0}; at least 2 is required")]
    DegenerateDimension(usize),
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} refers to ray {ray}, but there are only {nrays} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, nrays: usize },
    #[error("cone {cone} has {found} rays, expected {expected}")]
    ConeSize { cone: usize, expected: usize, found: usize },
    #[error("cone {0} repeats a ray")]
    RepeatedRayInCone(usize),
    #[error("ray {0} lies in no maximal cone")]
    UnusedRay(usize),
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("fan is not smooth (cone {0} has determinant other than +-1)")]
    NotSmooth(usize),
    #[error("fan is not complete (a wall lies in {count} maximal cones)")]
    NotComplete { count: usize },
    #[error("fan is not projective")]
    NotProjective,
    #[error("adjacent cones {0} and {1} lie on the same side of their common wall")]
    OverlappingCones(usize, usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vector is not a curve class (not in the relation lattice)")]
    NotACurveClass,
    #[error("fan description: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("element of degree {found} is not of top degree {top}")]
    NotTopDegree { found: usize, top: usize },
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("rank {0} is too small for a Grassmannian of lines (need at least 2)")]
    RankTooSmall(usize),
    #[error("expected {expected} Chern classes, found {found}")]
    ChernCount { expected: usize, found: usize },
    #[error("class c_{index} is not homogeneous of degree {index}")]
    ChernDegree { index: usize },
    #[error("monomial basis is not a free basis in degree {degree}: {detail}")]
    NotFree { degree: usize, detail: String },
    #[error("Schubert expansion needs a point base")]
    BaseNotPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("bundle structure check failed: {0}")]
    NotABundle(String),
    #[error("positive coefficients of the relation are not all 1")]
    NotUnitPositive,
    #[error("restriction of a hypersurface is inconsistent with the bundle: {0}")]
    InconsistentRestriction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("class is not ample on the base")]
    NotAmple,
    #[error("class must be homogeneous of degree {0}")]
    WrongDegree(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
