//! Checked-in witness pairs.
//!
//! Each file holds a profile summary line followed by two matrices `a` and
//! `b` in the matrix text format. The pairs were found by exhaustive search
//! over entries in {-1, 0, 1}, ordered by support size, and are re-verified
//! by the test suite. Campaigns embed them in larger instances when the
//! live sampler produces too few non-commuting pairs.

use crate::commutant::profile;
use crate::error::{Error, Result};
use crate::linalg::{read_matrix, RationalMatrix};

use super::TheoremId;

const SOURCES: &[(&str, &str)] = &[
    ("weak_nilpotent4", include_str!("../../fixtures/weak_nilpotent4.txt")),
    ("left_nilpotent4", include_str!("../../fixtures/left_nilpotent4.txt")),
    ("right_nilpotent4", include_str!("../../fixtures/right_nilpotent4.txt")),
    ("range_commuting2", include_str!("../../fixtures/range_commuting2.txt")),
    ("near_miss2", include_str!("../../fixtures/near_miss2.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: String,
    pub a: RationalMatrix,
    pub b: RationalMatrix,
}

impl Fixture {
    pub fn parse(name: &'static str, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let summary = lines
            .next()
            .and_then(|l| l.strip_prefix("profile "))
            .ok_or_else(|| Error::Parse(format!("fixture {name}: missing profile line")))?
            .trim()
            .to_string();
        let a = read_matrix(&mut lines)?;
        let b = read_matrix(&mut lines)?;
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("fixture {name}: trailing `{extra}`")));
        }
        Ok(Self { name, summary, a, b })
    }

    /// Whether the recorded summary matches a fresh profile of the pair.
    pub fn summary_matches(&self) -> Result<bool> {
        Ok(profile(&self.a, &self.b)?.summary() == self.summary)
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

pub fn fixture_corpus() -> Vec<Fixture> {
    SOURCES
        .iter()
        .map(|(name, text)| Fixture::parse(name, text).expect("checked-in fixture parses"))
        .collect()
}

pub(crate) fn fixture(name: &str) -> Fixture {
    fixture_corpus()
        .into_iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("no fixture named {name}"))
}

/// Fixtures that can seed non-commuting instances of `theorem`.
pub(crate) fn fixtures_for(theorem: TheoremId) -> &'static [&'static str] {
    use TheoremId::*;
    match theorem {
        P2_2 | C2_3 | L2_4 | P2_5 | L4_1 | T4_2_smoke | T4_3_smoke => &["weak_nilpotent4"],
        T3_6 | T3_9iii | Q_probe | C3_10_smoke => &["left_nilpotent4", "right_nilpotent4"],
        L3_1 | C3_2 => &["range_commuting2"],
        P2_6 | P3_3 | C3_4 | T3_11ii | T4_9_smoke => &[],
    }
}
