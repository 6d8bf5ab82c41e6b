//! Theorems as executable properties.
//!
//! Each [`TheoremId`] names one conditional statement about weakly
//! commuting operators. [`generate_instance`] builds matrices meant to
//! satisfy its hypotheses, [`verify`] re-checks the hypotheses and then the
//! conclusion exactly, and [`run_campaign`] sweeps seeds and dimensions.
//! Instances that miss the hypotheses get their own verdict and never count
//! as passes.

mod campaign;
mod fixtures;
mod generate;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

pub use campaign::{
    question_probe, run_campaign, trial_seed, CampaignConfig, CampaignOutcome, CampaignReport, Failure,
    ProbeSummary, TheoremSummary,
};
pub use fixtures::{fixture_corpus, Fixture};
pub use generate::{generate_instance, generate_instance_with, Generated, DEFAULT_ENTRY_BOUND, MAX_DIM};
pub use verify::{hypotheses_hold, verify};

macro_rules! theorem_ids {
    ($($id:ident => $what:literal),* $(,)?) => {
        #[allow(non_camel_case_types)]
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum TheoremId {
            $(#[doc = $what] $id,)*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$id,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(TheoremId::$id => stringify!($id),)*
                }
            }

            pub fn describe(self) -> &'static str {
                match self {
                    $(TheoremId::$id => $what,)*
                }
            }
        }

        impl FromStr for TheoremId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $(stringify!($id) => Ok(TheoremId::$id),)*
                    other => Err(Error::UnknownTheorem(other.to_string())),
                }
            }
        }
    };
}

theorem_ids! {
    P2_2 => "a pseudo inverse inherits one-sided weak commutation with b",
    C2_3 => "the Drazin inverse inherits one-sided weak commutation with b",
    L2_4 => "products of pseudo inverses of weakly commuting a, b commute with a or b",
    P2_5 => "(ab)^D = a^D b^D (or b^D a^D) for weakly commuting a, b",
    P2_6 => "bab = b, b a^{n+1} = a^n and a in comm(ab) and comm(ba) force b = a^D",
    L3_1 => "hyperrange and hyperkernel of T are invariant under S when ST or TS commutes with T",
    C3_2 => "the same invariance for the power subspaces of a pseudo inverse of T",
    P3_3 => "every pseudo inverse is (T_M)^{-1} + 0_N for a hyperinvariant reducing pair",
    C3_4 => "hyperinvariance tested against comm(T) agrees with the weak quantifier",
    T3_6 => "a weakly commuting nilpotent keeps hyperkernel and hyperrange",
    T3_9iii => "a one-sided weakly commuting nilpotent keeps the spectrum",
    C3_10_smoke => "T + N is algebraic for weakly commuting nilpotent N",
    T3_11ii => "semi-regularity survives a nilpotent Q with T in comm(TQ) and comm(QT)",
    L4_1 => "kernel and range quotients of T and T + S are bounded by rank S^m",
    T4_2_smoke => "ascent, descent and essential counterparts stay finite under weak perturbation",
    T4_3_smoke => "Drazin and B-Fredholm properties survive weak perturbation",
    Q_probe => "search for one-sided nilpotent perturbations that move the spectrum",
    T4_9_smoke => "Drazin spectrum identity with accumulation points, all sets empty",
}

impl TheoremId {
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).expect("listed")
    }

    /// Theorems whose hypotheses involve two operators that may fail to
    /// commute, and so carry a quota of strictly non-commuting instances.
    /// Excluded: single-operator statements, `P2_6` (its hypotheses force
    /// commutation) and `T3_11ii` (an invertible `T` with
    /// `T ∈ comm(TQ)` already commutes with `Q`).
    pub fn carries_quota(self) -> bool {
        !matches!(
            self,
            TheoremId::P2_6 | TheoremId::P3_3 | TheoremId::C3_4 | TheoremId::T3_11ii | TheoremId::T4_9_smoke
        )
    }

    /// The two instance matrices whose commutator decides `noncommuting`.
    pub(crate) fn pair_names(self) -> Option<(&'static str, &'static str)> {
        use TheoremId::*;
        match self {
            P2_2 | C2_3 | L2_4 | P2_5 | P2_6 => Some(("a", "b")),
            L3_1 | C3_2 => Some(("T", "S")),
            T3_6 | C3_10_smoke => Some(("T", "N")),
            T3_9iii | T3_11ii | Q_probe => Some(("T", "Q")),
            L4_1 => Some(("T", "S")),
            T4_2_smoke | T4_3_smoke => Some(("T", "F")),
            P3_3 | C3_4 | T4_9_smoke => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TheoremId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: RationalMatrix,
}

impl NamedMatrix {
    pub fn new(name: impl Into<String>, matrix: RationalMatrix) -> Self {
        Self {
            name: name.into(),
            matrix,
        }
    }
}

/// Matrices a theorem is checked on, with the seed they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub seed: u64,
    pub dim: usize,
    pub matrices: Vec<NamedMatrix>,
}

impl Instance {
    pub fn new(seed: u64, dim: usize, matrices: Vec<(&str, RationalMatrix)>) -> Self {
        Self {
            seed,
            dim,
            matrices: matrices
                .into_iter()
                .map(|(n, m)| NamedMatrix::new(n, m))
                .collect(),
        }
    }

    /// The matrix called `name`, which must be `dim × dim`.
    pub fn get(&self, name: &str) -> Result<&RationalMatrix> {
        let m = self
            .matrices
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.matrix)
            .ok_or_else(|| Error::MalformedInstance(format!("missing matrix `{name}`")))?;
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::MalformedInstance(format!(
                "`{name}` is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.dim,
                self.dim
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesesUnmet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub seed: u64,
    pub instance: Instance,
    pub verdict: Verdict,
    /// Whether the theorem's operator pair fails to commute.
    pub noncommuting: bool,
    /// Labels of the conclusion checks that failed.
    pub failed_checks: Vec<String>,
    /// Residual matrices and subspace bases behind each failed check.
    pub witness: Vec<NamedMatrix>,
    /// Per-instance tallies (samples drawn, candidates examined, proof
    /// byproducts checked, ...), summed by the campaign.
    pub counters: std::collections::BTreeMap<String, u64>,
}
