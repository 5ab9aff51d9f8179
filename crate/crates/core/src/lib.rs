//! Exact toric intersection theory for certifying that curve classes on
//! complete intersections in smooth projective toric varieties are
//! generated by rational curves.

pub mod arith;
pub mod chern;
pub mod chow;
pub mod classes;
pub mod contraction;
pub mod corpus;
pub mod error;
pub mod fan;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod pipeline;

pub use classes::{intersect, CurveClass, DivisorClass};
pub use error::{ChernError, ChowError, ContractionError, FanError, PipelineError};
pub use fan::{validate_fan, walls_and_relations, Fan, LatticeVector, ToricVariety, ValidationReport, Wall};
pub use pipeline::{check_hypotheses, decompose_effective, ihc_verdict, verify_class, ClassReport, HypothesisReport, IHCReport};
