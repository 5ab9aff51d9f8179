//! Chern class calculus: formal symmetric powers and bundles on presented rings.

pub mod bundle;
pub mod formal;

pub use bundle::{
    assemble_m, direct_sum, perturbation_terms, top_chern_nonzero, twist, ChernPolynomial, ChernVerdict,
    PerturbationTerm, TopChern,
};
pub use formal::{sym_power, FormalChern, Poly2};
