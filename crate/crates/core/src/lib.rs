//! Exact rational operator theory on finite-dimensional matrices.
//!
//! Drazin and pseudo inverses, weak commutant sets, invariant-subspace
//! lattices and exact spectra, plus a seeded harness that turns
//! perturbation theorems for weakly commuting operators into executable
//! properties over generated instance families.

pub mod commutant;
pub mod error;
pub mod harness;
pub mod inverse;
pub mod lattice;
pub mod linalg;
pub mod spectra;
pub mod subspace;

pub use commutant::CommutationProfile;
pub use error::{Error, Result};
pub use harness::{
    generate_instance, question_probe, run_campaign, verify, CampaignConfig, CampaignReport, Instance,
    TheoremId, Verdict, VerificationReport,
};
pub use inverse::DrazinResult;
pub use linalg::{Rational, RationalMatrix, RationalPoly};
pub use spectra::RootSet;
pub use subspace::{RedPair, Subspace};
