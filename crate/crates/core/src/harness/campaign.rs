//! Seeded campaigns over theorems and dimensions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

use super::fixtures::{fixture, fixtures_for};
use super::generate::{fixture_instance, generate_instance_with, Generated, DEFAULT_ENTRY_BOUND, MAX_DIM};
use super::verify::verify;
use super::{Instance, TheoremId, VerificationReport, Verdict};

/// Near-miss witnesses kept by [`question_probe`].
const PROBE_WITNESSES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub theorems: Vec<TheoremId>,
    pub dimensions: Vec<usize>,
    /// Trials for each theorem at each dimension.
    pub trials_per_theorem: usize,
    pub seed: u64,
    /// Base entries of generated matrices lie in `[-entry_bound, entry_bound]`.
    pub entry_bound: i64,
    /// Strictly non-commuting passes required per theorem, where the
    /// theorem has a pair that may fail to commute.
    pub min_noncommuting: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            theorems: TheoremId::ALL.to_vec(),
            dimensions: (2..=6).collect(),
            trials_per_theorem: 20,
            seed: 0,
            entry_bound: DEFAULT_ENTRY_BOUND,
            min_noncommuting: 5,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_theorem > 0 && self.trials_per_theorem < self.min_noncommuting {
            return Err(Error::InvalidConfig(format!(
                "{} trials cannot hold a quota of {} non-commuting instances",
                self.trials_per_theorem, self.min_noncommuting
            )));
        }
        if let Some(d) = self.dimensions.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return Err(Error::InvalidConfig(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        if self.entry_bound < 1 {
            return Err(Error::InvalidConfig(format!("entry bound {} < 1", self.entry_bound)));
        }
        Ok(())
    }
}

/// Seed of one trial, mixed from the campaign seed and the trial
/// coordinates.
pub fn trial_seed(seed: u64, theorem: TheoremId, dim: usize, trial: usize) -> u64 {
    [theorem.index() as u64, dim as u64, trial as u64]
        .into_iter()
        .fold(splitmix64(seed), |acc, v| splitmix64(acc ^ v))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub theorem: TheoremId,
    pub trials: usize,
    pub pass: usize,
    pub fail: usize,
    pub hypotheses_unmet: usize,
    pub starved: usize,
    pub noncommuting_pass: usize,
    /// Passing instances built from the fixture corpus to meet the quota.
    pub fixture_topups: usize,
    /// `None` when the theorem carries no quota.
    pub quota_met: Option<bool>,
    pub counters: BTreeMap<String, u64>,
}

impl TheoremSummary {
    fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            trials: 0,
            pass: 0,
            fail: 0,
            hypotheses_unmet: 0,
            starved: 0,
            noncommuting_pass: 0,
            fixture_topups: 0,
            quota_met: None,
            counters: BTreeMap::new(),
        }
    }

    fn record(&mut self, r: &VerificationReport) {
        match r.verdict {
            Verdict::Pass => {
                self.pass += 1;
                if r.noncommuting {
                    self.noncommuting_pass += 1;
                }
            }
            Verdict::Fail => self.fail += 1,
            Verdict::HypothesesUnmet => self.hypotheses_unmet += 1,
        }
        for (k, v) in &r.counters {
            *self.counters.entry(k.clone()).or_default() += v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub report: VerificationReport,
    /// A failing instance of smaller dimension or entry bound, if found.
    pub shrunk: Option<VerificationReport>,
}

/// The JSON document written per campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub summaries: Vec<TheoremSummary>,
    pub failures: Vec<Failure>,
    /// Set when a failure stopped the campaign early.
    pub aborted: bool,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignOutcome {
    /// Every verification report in (theorem, dimension, trial) order,
    /// fixture top-ups last within each theorem.
    pub reports: Vec<VerificationReport>,
    pub report: CampaignReport,
}

enum Trial {
    Report(VerificationReport),
    Starved,
}

fn error_report(theorem: TheoremId, inst: Instance, e: Error) -> VerificationReport {
    VerificationReport {
        theorem,
        seed: inst.seed,
        instance: inst,
        verdict: Verdict::Fail,
        noncommuting: false,
        failed_checks: vec![format!("error: {e}")],
        witness: Vec::new(),
        counters: BTreeMap::new(),
    }
}

fn check(theorem: TheoremId, inst: Instance) -> VerificationReport {
    match verify(theorem, &inst) {
        Ok(r) => r,
        Err(e) => error_report(theorem, inst, e),
    }
}

fn run_trial(theorem: TheoremId, dim: usize, seed: u64, bound: i64) -> Trial {
    match generate_instance_with(theorem, dim, seed, bound) {
        Ok(Generated::Ready(inst)) => Trial::Report(check(theorem, inst)),
        Ok(Generated::Starved) => Trial::Starved,
        Err(e) => Trial::Report(error_report(theorem, Instance::new(seed, dim, Vec::new()), e)),
    }
}

/// Smallest failing instance from the same seed, trying smaller dimensions
/// first and then smaller entry bounds.
fn shrink(failure: &VerificationReport, bound: i64) -> Option<VerificationReport> {
    let dim = failure.instance.dim;
    for d in 1..=dim {
        for b in 1..=bound {
            if d == dim && b == bound {
                return None;
            }
            if let Trial::Report(r) = run_trial(failure.theorem, d, failure.seed, b) {
                if r.verdict == Verdict::Fail {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Fixture-based instances verified until the quota is met or the corpus
/// runs out of placements.
fn top_up(config: &CampaignConfig, theorem: TheoremId, missing: usize) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let mut found = 0;
    let names = fixtures_for(theorem);
    if names.is_empty() || missing == 0 {
        return out;
    }
    let budget = 4 * missing + 4;
    let mut j = 0;
    while found < missing && j < budget {
        let fx = fixture(names[j % names.len()]);
        let fitting: Vec<usize> = config.dimensions.iter().copied().filter(|&d| d >= fx.dim()).collect();
        let dim = if fitting.is_empty() { fx.dim() } else { fitting[(j / names.len()) % fitting.len()] };
        let seed = trial_seed(config.seed, theorem, dim, config.trials_per_theorem + j);
        j += 1;
        match fixture_instance(theorem, &fx, dim, seed, config.entry_bound) {
            Ok(Some(inst)) => {
                let r = check(theorem, inst);
                if r.verdict == Verdict::Pass && r.noncommuting {
                    found += 1;
                }
                let failed = r.verdict == Verdict::Fail;
                out.push(r);
                if failed {
                    break;
                }
            }
            Ok(None) => {}
            Err(e) => {
                out.push(error_report(theorem, Instance::new(seed, dim, Vec::new()), e));
                break;
            }
        }
    }
    out
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    config.validate()?;
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    for &theorem in &config.theorems {
        let jobs: Vec<(usize, usize)> = config
            .dimensions
            .iter()
            .flat_map(|&d| (0..config.trials_per_theorem).map(move |i| (d, i)))
            .collect();
        let trials: Vec<Trial> = jobs
            .par_iter()
            .map(|&(dim, i)| run_trial(theorem, dim, trial_seed(config.seed, theorem, dim, i), config.entry_bound))
            .collect();
        let mut summary = TheoremSummary::new(theorem);
        let mut theorem_reports = Vec::new();
        for t in trials {
            summary.trials += 1;
            match t {
                Trial::Starved => summary.starved += 1,
                Trial::Report(r) => {
                    summary.record(&r);
                    theorem_reports.push(r);
                }
            }
        }
        if summary.fail == 0 && theorem.carries_quota() && config.trials_per_theorem > 0 {
            let missing = config.min_noncommuting.saturating_sub(summary.noncommuting_pass);
            for r in top_up(config, theorem, missing) {
                summary.record(&r);
                if r.verdict == Verdict::Pass {
                    summary.fixture_topups += 1;
                }
                theorem_reports.push(r);
            }
        }
        if theorem.carries_quota() && config.trials_per_theorem > 0 {
            summary.quota_met = Some(summary.noncommuting_pass >= config.min_noncommuting);
        }
        let first_fail = theorem_reports.iter().find(|r| r.verdict == Verdict::Fail).cloned();
        reports.extend(theorem_reports);
        summaries.push(summary);
        if let Some(report) = first_fail {
            let shrunk = shrink(&report, config.entry_bound);
            failures.push(Failure { report, shrunk });
            break;
        }
    }
    let aborted = !failures.is_empty();
    Ok(CampaignOutcome {
        reports,
        report: CampaignReport {
            config: config.clone(),
            summaries,
            failures,
            aborted,
        },
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSummary {
    /// Instances meeting the one-sided hypotheses, all checked for equal
    /// spectra.
    pub one_sided_checked: usize,
    pub counterexamples: Vec<VerificationReport>,
    /// Nilpotent perturbations without the side conditions.
    pub near_miss_checked: usize,
    pub near_miss_spectra_differ: usize,
    pub starved: usize,
    /// The first near misses whose spectra differ.
    pub witnesses: Vec<Instance>,
}

/// `e12 ⊕ 0` and `e21 ⊕ 0`: nilpotent, no side condition, spectra differ.
fn padded_near_miss(dim: usize, seed: u64) -> Option<Instance> {
    let fx = fixture("near_miss2");
    let k = fx.dim();
    if dim < k {
        return None;
    }
    let pad = RationalMatrix::zeros(dim - k, dim - k);
    Some(Instance::new(
        seed,
        dim,
        vec![("T", fx.a.direct_sum(&pad)), ("Q", fx.b.direct_sum(&pad))],
    ))
}

/// Looks for nilpotent `Q` meeting only the one-sided conditions that
/// moves the spectrum of `T`, and logs near misses without them.
pub fn question_probe(config: &CampaignConfig) -> Result<ProbeSummary> {
    config.validate()?;
    let theorem = TheoremId::Q_probe;
    let jobs: Vec<(usize, usize)> = config
        .dimensions
        .iter()
        .flat_map(|&d| (0..config.trials_per_theorem).map(move |i| (d, i)))
        .collect();
    let mut trials: Vec<Trial> = jobs
        .par_iter()
        .map(|&(dim, i)| run_trial(theorem, dim, trial_seed(config.seed, theorem, dim, i), config.entry_bound))
        .collect();
    if config.trials_per_theorem > 0 {
        for &dim in &config.dimensions {
            if let Some(inst) = padded_near_miss(dim, config.seed) {
                trials.push(Trial::Report(check(theorem, inst)));
            }
        }
    }
    let mut summary = ProbeSummary::default();
    for t in trials {
        let r = match t {
            Trial::Starved => {
                summary.starved += 1;
                continue;
            }
            Trial::Report(r) => r,
        };
        match r.verdict {
            Verdict::Pass => summary.one_sided_checked += 1,
            Verdict::Fail => {
                summary.one_sided_checked += 1;
                summary.counterexamples.push(r);
            }
            Verdict::HypothesesUnmet => {
                summary.near_miss_checked += 1;
                if r.counters.get("spectra_differ").copied().unwrap_or(0) > 0 {
                    summary.near_miss_spectra_differ += 1;
                    if summary.witnesses.len() < PROBE_WITNESSES {
                        summary.witnesses.push(r.instance);
                    }
                }
            }
        }
    }
    Ok(summary)
}
