//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one `PASS`/`FAIL` line; exits nonzero if any
//! criterion fails.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;
use weakcomm::commutant::{in_comm_l, in_comm_r, in_comm_w};
use weakcomm::harness::{question_probe, run_campaign, CampaignConfig, CampaignOutcome, TheoremId};
use weakcomm::inverse::{drazin, satisfies_drazin_axioms};
use weakcomm::linalg::rat;
use weakcomm::spectra::degenerate_spectra_report;
use weakcomm::{Instance, RationalMatrix, RationalPoly, Verdict};

const NONCOMMUTING: usize = 30;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { ok: true, detail },
        Some(f) => Outcome {
            ok: false,
            detail: format!("{detail}; {} problem(s), first: {f}", failures.len()),
        },
    }
}

/// Instances gathered from criteria 1-7 for the degeneracy sweep.
#[derive(Default)]
struct Pool {
    matrices: Vec<RationalMatrix>,
}

impl Pool {
    fn add_instance(&mut self, inst: &Instance, pair: Option<(&str, &str)>) {
        for m in &inst.matrices {
            self.matrices.push(m.matrix.clone());
        }
        if let Some((x, y)) = pair {
            self.matrices.push(inst.get(x).unwrap() + inst.get(y).unwrap());
        }
    }
}

fn campaign(theorem: TheoremId, dims: std::ops::RangeInclusive<usize>, trials: usize, seed: u64) -> CampaignOutcome {
    let config = CampaignConfig {
        theorems: vec![theorem],
        dimensions: dims.collect(),
        trials_per_theorem: trials,
        seed,
        min_noncommuting: if theorem.carries_quota() { NONCOMMUTING.min(trials) } else { 0 },
        ..CampaignConfig::default()
    };
    run_campaign(&config).expect("valid campaign")
}

fn passes(out: &CampaignOutcome) -> impl Iterator<Item = &weakcomm::VerificationReport> {
    out.reports.iter().filter(|r| r.verdict == Verdict::Pass)
}

fn campaign_failures(out: &CampaignOutcome) -> Vec<String> {
    out.report
        .failures
        .iter()
        .map(|f| format!("{} seed {}: {}", f.report.theorem, f.report.seed, f.report.failed_checks.join("; ")))
        .collect()
}

fn mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    a * b
}

fn stack_rows(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    a.vstack(b)
}

fn stack_cols(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    a.hstack(b)
}

/// `N(a) = N(b)`, decided by ranks only.
fn same_kernel(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let r = oracle_rank(a);
    r == oracle_rank(b) && r == oracle_rank(&stack_rows(a, b))
}

/// `R(a) = R(b)`, decided by ranks only.
fn same_range(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let r = oracle_rank(a);
    r == oracle_rank(b) && r == oracle_rank(&stack_cols(a, b))
}

fn criterion_1(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut count = 0;
    let mut singular = 0;
    let start = Instant::now();
    for n in 2..=6 {
        for i in 0..120 {
            // Every other matrix is sparse so that singular and nilpotent
            // parts are well represented.
            let data = (0..n * n)
                .map(|_| if i % 2 == 1 && rng.gen_bool(0.6) { rat(0) } else { rat(rng.gen_range(-3..=3)) })
                .collect();
            let a = RationalMatrix::from_vec(n, n, data).unwrap();
            let d = drazin(&a).unwrap();
            let oracle = drazin_oracle(&a);
            let k = (0..=n).find(|&k| oracle_rank(&a.pow(k)) == oracle_rank(&a.pow(k + 1))).unwrap();
            if k > 0 {
                singular += 1;
            }
            if !satisfies_drazin_axioms(&a, &d.inverse, d.index) {
                failures.push(format!("axioms fail for\n{a}"));
            }
            if !satisfies_drazin_axioms(&a, &oracle, k) {
                failures.push(format!("independent candidate fails the axioms for\n{a}"));
            }
            if d.index != k || d.inverse != oracle {
                failures.push(format!("independent candidate differs for\n{a}"));
            }
            pool.matrices.push(a);
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}"));
    }
    if count < 500 {
        failures.push(format!("only {count} matrices"));
    }
    outcome(
        &failures,
        format!("{count} matrices ({singular} singular), exact agreement with Cline's formula in {elapsed:.1?}"),
    )
}

fn criterion_2(pool: &mut Pool) -> Outcome {
    let out = campaign(TheoremId::P2_5, 2..=6, 80, 11);
    let mut failures = campaign_failures(&out);
    let (mut weak, mut noncommuting) = (0, 0);
    for r in passes(&out) {
        pool.add_instance(&r.instance, Some(("a", "b")));
        let (a, b) = (r.instance.get("a").unwrap(), r.instance.get("b").unwrap());
        if !in_comm_w(b, a) {
            continue;
        }
        weak += 1;
        if !a.commutes_with(b) {
            noncommuting += 1;
        }
        let (ad, bd) = (drazin_oracle(a), drazin_oracle(b));
        if drazin_oracle(&mul(a, b)) != mul(&ad, &bd) {
            failures.push(format!("(ab)^D != a^D b^D at seed {}", r.seed));
        }
        if !ad.commutes_with(&bd) {
            failures.push(format!("a^D and b^D do not commute at seed {}", r.seed));
        }
    }
    if weak < 200 {
        failures.push(format!("only {weak} weakly commuting instances"));
    }
    if noncommuting < NONCOMMUTING {
        failures.push(format!("only {noncommuting} non-commuting instances"));
    }
    outcome(
        &failures,
        format!("{weak} weakly commuting instances, {noncommuting} non-commuting, product rule checked against Cline's formula"),
    )
}

fn criterion_3(pool: &mut Pool) -> Outcome {
    let out = campaign(TheoremId::L4_1, 3..=6, 60, 12);
    let mut failures = campaign_failures(&out);
    let (mut count, mut noncommuting, mut inequalities) = (0, 0, 0);
    for r in passes(&out) {
        pool.add_instance(&r.instance, Some(("T", "S")));
        let (t, s) = (r.instance.get("T").unwrap(), r.instance.get("S").unwrap());
        count += 1;
        if !t.commutes_with(s) {
            noncommuting += 1;
        }
        let dim = t.rows();
        let u = t + s;
        for n in 3..=dim.max(3) {
            for m in 1..=dim {
                let k = n + m - 1;
                let bound = oracle_rank(&s.pow(m));
                let (tn, tk, un, uk) = (t.pow(n), t.pow(k), u.pow(n), u.pow(k));
                // dim A / (A ∩ B) through ranks of stacked powers.
                let quotients = [
                    oracle_rank(&stack_rows(&uk, &tn)) - oracle_rank(&tn),
                    oracle_rank(&stack_rows(&tk, &un)) - oracle_rank(&un),
                    oracle_rank(&stack_cols(&un, &tk)) - oracle_rank(&un),
                    oracle_rank(&stack_cols(&tn, &uk)) - oracle_rank(&tn),
                ];
                for (i, q) in quotients.iter().enumerate() {
                    inequalities += 1;
                    if *q > bound {
                        failures.push(format!("quotient {i} = {q} > {bound} at n={n} m={m}, seed {}", r.seed));
                    }
                }
            }
        }
    }
    if count < 200 {
        failures.push(format!("only {count} instances"));
    }
    if noncommuting < NONCOMMUTING {
        failures.push(format!("only {noncommuting} non-commuting instances"));
    }
    let harness_checks = out.report.summaries[0].counters.get("quotient_checks").copied().unwrap_or(0);
    outcome(
        &failures,
        format!(
            "{count} instances, {noncommuting} non-commuting, {inequalities} quotient bounds recomputed from ranks ({harness_checks} in the harness)"
        ),
    )
}

/// Both perturbation equalities, decided by ranks only.
fn power_subspaces_agree(t: &RationalMatrix, nil: &RationalMatrix) -> bool {
    let dim = t.rows();
    let (tp, up) = (t.pow(dim), (t + nil).pow(dim));
    same_kernel(&tp, &up) && same_range(&tp, &up)
}

fn criterion_4(pool: &mut Pool) -> Outcome {
    let out = campaign(TheoremId::T3_6, 2..=6, 30, 13);
    let mut failures = campaign_failures(&out);
    let (mut count, mut left_only, mut right_only, mut noncommuting) = (0, 0, 0, 0);
    for r in passes(&out) {
        pool.add_instance(&r.instance, Some(("T", "N")));
        let (t, nil) = (r.instance.get("T").unwrap(), r.instance.get("N").unwrap());
        count += 1;
        let left = in_comm_l(t, nil) && t.commutes_with(&mul(nil, t));
        let right = in_comm_r(t, nil) && t.commutes_with(&mul(t, nil));
        left_only += usize::from(left && !right);
        right_only += usize::from(right && !left);
        if !t.commutes_with(nil) {
            noncommuting += 1;
        }
        if !power_subspaces_agree(t, nil) {
            failures.push(format!("power subspaces differ at seed {}", r.seed));
        }
        // Transposition exchanges the left and mirrored hypotheses.
        let (tt, nt) = (t.transpose(), nil.transpose());
        let mirror = Instance::new(r.seed, r.instance.dim, vec![("T", tt.clone()), ("N", nt.clone())]);
        match weakcomm::verify(TheoremId::T3_6, &mirror) {
            Ok(m) if m.verdict == Verdict::Pass => {}
            Ok(m) => failures.push(format!("mirrored instance at seed {}: {:?} {:?}", r.seed, m.verdict, m.failed_checks)),
            Err(e) => failures.push(format!("mirrored instance at seed {}: {e}", r.seed)),
        }
        if !power_subspaces_agree(&tt, &nt) {
            failures.push(format!("mirrored power subspaces differ at seed {}", r.seed));
        }
    }
    if count < 100 {
        failures.push(format!("only {count} instances"));
    }
    if noncommuting < NONCOMMUTING {
        failures.push(format!("only {noncommuting} non-commuting instances"));
    }
    outcome(
        &failures,
        format!(
            "{count} instances and {count} transposed mirrors ({left_only} left-only, {right_only} right-only), {noncommuting} non-commuting, hyperkernel and hyperrange equal by rank test"
        ),
    )
}

/// Same root set over the algebraic closure: each characteristic
/// polynomial divides the `n`-th power of the other.
fn same_roots(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let n = a.rows();
    let p = RationalPoly::new(charpoly_oracle(a));
    let q = RationalPoly::new(charpoly_oracle(b));
    p.pow(n).div_rem(&q).unwrap().1.is_zero() && q.pow(n).div_rem(&p).unwrap().1.is_zero()
}

fn criterion_5(pool: &mut Pool) -> Outcome {
    let out = campaign(TheoremId::T3_9iii, 2..=6, 50, 14);
    let mut failures = campaign_failures(&out);
    let (mut count, mut noncommuting) = (0, 0);
    for r in passes(&out) {
        pool.add_instance(&r.instance, Some(("T", "Q")));
        let (t, q) = (r.instance.get("T").unwrap(), r.instance.get("Q").unwrap());
        count += 1;
        if !t.commutes_with(q) {
            noncommuting += 1;
        }
        if !same_roots(t, &(t + q)) {
            failures.push(format!("spectra differ at seed {}", r.seed));
        }
    }
    let probe = question_probe(&CampaignConfig {
        theorems: vec![TheoremId::Q_probe],
        dimensions: (2..=6).collect(),
        trials_per_theorem: 40,
        seed: 15,
        min_noncommuting: 0,
        ..CampaignConfig::default()
    })
    .expect("valid probe");
    for w in &probe.witnesses {
        let (t, q) = (w.get("T").unwrap(), w.get("Q").unwrap());
        if same_roots(t, &(t + q)) {
            failures.push(format!("logged witness at seed {} has equal spectra", w.seed));
        }
    }
    if count < 200 {
        failures.push(format!("only {count} instances"));
    }
    if !probe.counterexamples.is_empty() {
        failures.push(format!("{} one-sided counterexamples", probe.counterexamples.len()));
    }
    if probe.witnesses.len() < 5 {
        failures.push(format!("only {} near-miss witnesses", probe.witnesses.len()));
    }
    outcome(
        &failures,
        format!(
            "{count} instances ({noncommuting} non-commuting) plus {} probe instances with equal spectra; {} of {} near misses move the spectrum, {} witnesses logged",
            probe.one_sided_checked,
            probe.near_miss_spectra_differ,
            probe.near_miss_checked,
            probe.witnesses.len()
        ),
    )
}

fn criterion_6(pool: &mut Pool) -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (theorem, seed) in [(TheoremId::L3_1, 16), (TheoremId::C3_2, 17), (TheoremId::P3_3, 18), (TheoremId::C3_4, 19)] {
        let out = campaign(theorem, 2..=6, 40, seed);
        failures.extend(campaign_failures(&out));
        let mut count = 0;
        for r in passes(&out) {
            count += 1;
            let pair = match theorem {
                TheoremId::L3_1 | TheoremId::C3_2 => Some(("T", "S")),
                _ => None,
            };
            pool.add_instance(&r.instance, pair);
            if theorem == TheoremId::L3_1 {
                let (t, s) = (r.instance.get("T").unwrap(), r.instance.get("S").unwrap());
                let tp = t.pow(t.rows());
                let t2 = mul(t, t);
                if mul(s, &t2) == mul(&mul(t, s), t) && oracle_rank(&stack_cols(&tp, &mul(s, &tp))) != oracle_rank(&tp) {
                    failures.push(format!("hyperrange not invariant at seed {}", r.seed));
                }
                if mul(&t2, s) == mul(&mul(t, s), t) && oracle_rank(&stack_rows(&tp, &mul(&tp, s))) != oracle_rank(&tp) {
                    failures.push(format!("hyperkernel not invariant at seed {}", r.seed));
                }
            }
        }
        if count < 200 {
            failures.push(format!("{theorem}: only {count} instances"));
        }
        let counters = &out.report.summaries[0].counters;
        let get = |k: &str| counters.get(k).copied().unwrap_or(0);
        match theorem {
            TheoremId::P3_3 => parts.push(format!(
                "{theorem} {count} ({} pseudo inverses round-tripped, {} non-IRed pairs rejected)",
                get("pseudo_inverses"),
                get("non_ired_pairs")
            )),
            TheoremId::C3_4 => {
                if get("weak_samples") < 1000 {
                    failures.push(format!("only {} weak-quantifier samples", get("weak_samples")));
                }
                parts.push(format!("{theorem} {count} ({} weak samples, no violation)", get("weak_samples")));
            }
            _ => parts.push(format!("{theorem} {count}")),
        }
    }
    outcome(&failures, parts.join(", "))
}

fn criterion_7(pool: &mut Pool) -> Outcome {
    let out = campaign(TheoremId::T3_11ii, 2..=6, 24, 20);
    let mut failures = campaign_failures(&out);
    let mut count = 0;
    for r in passes(&out) {
        pool.add_instance(&r.instance, Some(("T", "Q")));
        let (t, q) = (r.instance.get("T").unwrap(), r.instance.get("Q").unwrap());
        count += 1;
        if det(&(t + q)) == rat(0) {
            failures.push(format!("T + Q singular at seed {}", r.seed));
        }
    }
    if count < 100 {
        failures.push(format!("only {count} instances"));
    }
    outcome(&failures, format!("{count} instances, T + Q invertible (hence semi-regular) on all"))
}

fn criterion_8(pool: &mut Pool) -> Outcome {
    let mut failures = Vec::new();
    let mut smoke = Vec::new();
    for (theorem, seed) in [
        (TheoremId::C3_10_smoke, 21),
        (TheoremId::T4_2_smoke, 22),
        (TheoremId::T4_3_smoke, 23),
        (TheoremId::T4_9_smoke, 24),
    ] {
        let out = campaign(theorem, 2..=6, 20, seed);
        failures.extend(campaign_failures(&out));
        smoke.push(format!("{theorem} {}", passes(&out).count()));
        let pair = theorem.carries_quota().then(|| if theorem == TheoremId::C3_10_smoke { ("T", "N") } else { ("T", "F") });
        for r in passes(&out) {
            pool.add_instance(&r.instance, pair);
        }
    }
    for m in &pool.matrices {
        match degenerate_spectra_report(m) {
            Ok(r) if r.essential_ascent == 0 && r.essential_descent == 0 && r.essential_degree == 0 => {}
            Ok(r) => failures.push(format!(
                "essential data ({}, {}, {}) for\n{m}",
                r.essential_ascent, r.essential_descent, r.essential_degree
            )),
            Err(e) => failures.push(format!("{e}")),
        }
    }
    outcome(
        &failures,
        format!("{} matrices from criteria 1-7 degenerate, essential ascent/descent/degree 0; smoke {}", pool.matrices.len(), smoke.join(", ")),
    )
}

fn criterion_9() -> Outcome {
    let config = CampaignConfig::default();
    let first = run_campaign(&config).unwrap().report;
    let second = run_campaign(&config).unwrap().report;
    let (a, b) = (first.to_json(), second.to_json());
    let mut failures = Vec::new();
    if a != b {
        failures.push("reports differ".into());
    }
    if !first.passed() {
        failures.push("default campaign recorded a failure".into());
    }
    outcome(&failures, format!("default campaign JSON identical across runs ({} bytes)", a.len()))
}

type Criterion = Box<dyn FnOnce(&mut Pool) -> Outcome>;

fn main() -> ExitCode {
    let mut pool = Pool::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 Drazin oracle equivalence", Box::new(criterion_1)),
        ("2 product Drazin inverse under weak commutation", Box::new(criterion_2)),
        ("3 power quotient bounds", Box::new(criterion_3)),
        ("4 hyperkernel and hyperrange under nilpotent perturbation", Box::new(criterion_4)),
        ("5 one-sided nilpotent perturbation keeps the spectrum", Box::new(criterion_5)),
        ("6 invariance, pseudo inverse parametrisation, quantifier agreement", Box::new(criterion_6)),
        ("7 semi-regularity under nilpotent perturbation", Box::new(criterion_7)),
        ("8 degeneracy of generalized spectra", Box::new(criterion_8)),
        ("9 deterministic campaign reports", Box::new(|_: &mut Pool| criterion_9())),
    ];
    let mut all_ok = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run(&mut pool);
        all_ok &= o.ok;
        println!(
            "criterion {name}: {} [{:.1?}] {}",
            if o.ok { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
