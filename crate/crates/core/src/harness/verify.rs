//! Hypothesis predicates and exact conclusion checks, one per theorem.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commutant::{comm_basis, in_comm_l, in_comm_r, in_comm_w};
use crate::error::Result;
use crate::inverse::{
    drazin, drazin_index, induced_pair, ired_weak_check_given, is_ired_pair_given, phi_map,
    pseudo_inverse_family, satisfies_drazin_axioms, spectral_pairs, weak_commuting_basis,
};
use crate::lattice::{
    analytic_core, ascent, descent, hyperkernel, hyperrange, is_invariant, quasinilpotent_part,
};
use crate::linalg::{charpoly, colspace, nullspace, nullspace_vectors, rank, rat, rational_roots, RationalMatrix};
use crate::spectra::{degenerate_spectra_report, is_semiregular, spectrum, DEGENERATE_SPECTRA};
use crate::subspace::{RedPair, Subspace};

use super::{Instance, NamedMatrix, TheoremId, VerificationReport, Verdict};

/// Weak-quantifier samples per reducing pair.
const WEAK_SAMPLES: usize = 12;
/// Random one-entry perturbations of each pseudo inverse.
const PERTURBATIONS: usize = 2;

/// `tx ∈ comm(t)`.
fn tx_commutes(t: &RationalMatrix, x: &RationalMatrix) -> bool {
    (t * x).commutes_with(t)
}

/// `xt ∈ comm(t)`.
fn xt_commutes(t: &RationalMatrix, x: &RationalMatrix) -> bool {
    (x * t).commutes_with(t)
}

fn is_pseudo_inverse_given(a: &RationalMatrix, c: &RationalMatrix, comm: &[RationalMatrix]) -> bool {
    comm.iter().all(|u| u.commutes_with(c)) && &(c * c) * a == *c
}

fn is_pseudo_inverse(a: &RationalMatrix, c: &RationalMatrix) -> bool {
    is_pseudo_inverse_given(a, c, &comm_basis(a))
}

/// One-sided weak pattern shared by the nilpotent perturbation statements:
/// `x ∈ comm_l(t)` with `t ∈ comm(tx)`, or `x ∈ comm_r(t)` with
/// `t ∈ comm(xt)`.
fn one_sided_pattern(t: &RationalMatrix, x: &RationalMatrix) -> bool {
    (in_comm_l(t, x) && tx_commutes(t, x)) || (in_comm_r(t, x) && xt_commutes(t, x))
}

pub fn hypotheses_hold(theorem: TheoremId, inst: &Instance) -> Result<bool> {
    use TheoremId::*;
    let ok = match theorem {
        P2_2 => {
            let (a, b, c) = (inst.get("a")?, inst.get("b")?, inst.get("c")?);
            is_pseudo_inverse(a, c) && (xt_commutes(a, b) || tx_commutes(a, b))
        }
        C2_3 => {
            let (a, b) = (inst.get("a")?, inst.get("b")?);
            xt_commutes(a, b) || tx_commutes(a, b)
        }
        L2_4 => {
            let (a, b, c, d) = (inst.get("a")?, inst.get("b")?, inst.get("c")?, inst.get("d")?);
            is_pseudo_inverse(a, c) && is_pseudo_inverse(b, d) && (in_comm_l(a, b) || in_comm_r(a, b))
        }
        P2_5 => {
            let (a, b) = (inst.get("a")?, inst.get("b")?);
            in_comm_l(a, b) || (in_comm_r(a, b) && tx_commutes(a, b))
        }
        P2_6 => {
            let (a, b) = (inst.get("a")?, inst.get("b")?);
            let ab = a * b;
            let ba = b * a;
            ab.commutes_with(a)
                && ba.commutes_with(a)
                && &ba * b == *b
                && (0..=inst.dim + 1).any(|n| b * &a.pow(n + 1) == a.pow(n))
        }
        L3_1 => {
            let (t, s) = (inst.get("T")?, inst.get("S")?);
            xt_commutes(t, s) || tx_commutes(t, s)
        }
        C3_2 => {
            let (t, s, l) = (inst.get("T")?, inst.get("S")?, inst.get("L")?);
            is_pseudo_inverse(t, l) && (xt_commutes(t, s) || tx_commutes(t, s))
        }
        P3_3 | C3_4 | T4_9_smoke => {
            inst.get("T")?;
            true
        }
        T3_6 => {
            let (t, n) = (inst.get("T")?, inst.get("N")?);
            n.is_nilpotent()
                && ((in_comm_l(t, n) && xt_commutes(t, n)) || (in_comm_r(t, n) && tx_commutes(t, n)))
        }
        T3_9iii | Q_probe => {
            let (t, q) = (inst.get("T")?, inst.get("Q")?);
            q.is_nilpotent() && one_sided_pattern(t, q)
        }
        C3_10_smoke => {
            let (t, n) = (inst.get("T")?, inst.get("N")?);
            n.is_nilpotent() && one_sided_pattern(t, n)
        }
        T3_11ii => {
            let (t, q) = (inst.get("T")?, inst.get("Q")?);
            is_semiregular(t) && q.is_nilpotent() && tx_commutes(t, q) && xt_commutes(t, q)
        }
        L4_1 => in_comm_w(inst.get("T")?, inst.get("S")?),
        T4_2_smoke | T4_3_smoke => in_comm_w(inst.get("T")?, inst.get("F")?),
    };
    Ok(ok)
}

/// Collects failed conclusion checks with their residual witnesses.
#[derive(Default)]
struct Checker {
    failed: Vec<String>,
    witness: Vec<NamedMatrix>,
    counters: BTreeMap<String, u64>,
}

impl Checker {
    fn fail(&mut self, label: impl Into<String>) {
        self.failed.push(label.into());
    }

    fn holds(&mut self, label: &str, ok: bool) {
        if !ok {
            self.fail(label);
        }
    }

    fn same(&mut self, label: &str, lhs: &RationalMatrix, rhs: &RationalMatrix) {
        if lhs != rhs {
            self.fail(label);
            self.witness.push(NamedMatrix::new(format!("{label}: lhs - rhs"), lhs - rhs));
        }
    }

    fn commutes(&mut self, label: &str, x: &RationalMatrix, y: &RationalMatrix) {
        self.same(label, &(x * y), &(y * x));
    }

    fn same_subspace(&mut self, label: &str, lhs: &Subspace, rhs: &Subspace) {
        if lhs != rhs {
            self.fail(label);
            self.witness.push(NamedMatrix::new(format!("{label}: lhs basis"), lhs.basis().clone()));
            self.witness.push(NamedMatrix::new(format!("{label}: rhs basis"), rhs.basis().clone()));
        }
    }

    fn invariant(&mut self, label: &str, s: &RationalMatrix, v: &Subspace) {
        if !is_invariant(s, v) {
            self.fail(label);
            self.witness.push(NamedMatrix::new(format!("{label}: subspace basis"), v.basis().clone()));
            self.witness.push(NamedMatrix::new(format!("{label}: image"), s * v.basis()));
        }
    }

    fn at_most(&mut self, label: &str, value: usize, bound: usize) {
        if value > bound {
            self.fail(format!("{label}: {value} > {bound}"));
        }
    }

    fn count(&mut self, key: &str, k: u64) {
        *self.counters.entry(key.to_string()).or_default() += k;
    }

    /// `y ∈ comm_l(x)`: `x²y = xyx` and `y²x = yxy`.
    fn comm_l(&mut self, label: &str, x: &RationalMatrix, y: &RationalMatrix) {
        self.same(&format!("{label}: x²y = xyx"), &(&(x * x) * y), &(&(x * y) * x));
        self.same(&format!("{label}: y²x = yxy"), &(&(y * y) * x), &(&(y * x) * y));
    }

    /// `y ∈ comm_r(x)`: `xy² = yxy` and `yx² = xyx`.
    fn comm_r(&mut self, label: &str, x: &RationalMatrix, y: &RationalMatrix) {
        self.same(&format!("{label}: xy² = yxy"), &(&(x * y) * y), &(&(y * x) * y));
        self.same(&format!("{label}: yx² = xyx"), &(&(y * x) * x), &(&(x * y) * x));
    }

    fn degeneracy(&mut self, name: &str, m: &RationalMatrix) {
        self.count("degeneracy_reports", 1);
        match degenerate_spectra_report(m) {
            Ok(r) => {
                let ok = r.essential_ascent == 0
                    && r.essential_descent == 0
                    && r.essential_degree == 0
                    && r.empty_spectra.len() == DEGENERATE_SPECTRA.len()
                    && r.accumulation_points_empty;
                self.holds(&format!("degeneracy of {name}"), ok);
            }
            Err(e) => self.fail(format!("degeneracy of {name}: {e}")),
        }
    }
}

pub fn verify(theorem: TheoremId, inst: &Instance) -> Result<VerificationReport> {
    for m in &inst.matrices {
        inst.get(&m.name)?;
    }
    let met = hypotheses_hold(theorem, inst)?;
    let noncommuting = match theorem.pair_names() {
        Some((x, y)) => !inst.get(x)?.commutes_with(inst.get(y)?),
        None => false,
    };
    let mut ch = Checker::default();
    let verdict = if met {
        conclude(theorem, inst, &mut ch)?;
        for m in &inst.matrices {
            ch.degeneracy(&m.name, &m.matrix);
        }
        if let Some((x, y)) = theorem.pair_names() {
            let sum = inst.get(x)? + inst.get(y)?;
            ch.degeneracy(&format!("{x} + {y}"), &sum);
        }
        if ch.failed.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else {
        if theorem == TheoremId::Q_probe {
            let (t, q) = (inst.get("T")?, inst.get("Q")?);
            if q.is_nilpotent() && spectrum(t) != spectrum(&(t + q)) {
                ch.count("spectra_differ", 1);
            }
        }
        Verdict::HypothesesUnmet
    };
    Ok(VerificationReport {
        theorem,
        seed: inst.seed,
        instance: inst.clone(),
        verdict,
        noncommuting,
        failed_checks: ch.failed,
        witness: ch.witness,
        counters: ch.counters,
    })
}

fn conclude(theorem: TheoremId, inst: &Instance, ch: &mut Checker) -> Result<()> {
    use TheoremId::*;
    match theorem {
        P2_2 => pseudo_inverse_transfer(ch, inst.get("a")?, inst.get("b")?, inst.get("c")?),
        C2_3 => {
            let a = inst.get("a")?;
            let d = drazin(a)?.inverse;
            pseudo_inverse_transfer(ch, a, inst.get("b")?, &d)
        }
        L2_4 => pseudo_inverse_products(ch, inst.get("a")?, inst.get("b")?, inst.get("c")?, inst.get("d")?),
        P2_5 => product_drazin(ch, inst.get("a")?, inst.get("b")?)?,
        P2_6 => {
            let (a, b) = (inst.get("a")?, inst.get("b")?);
            ch.same("b = a^D", b, &drazin(a)?.inverse);
        }
        L3_1 => {
            let (t, s) = (inst.get("T")?, inst.get("S")?);
            power_subspace_invariance(ch, t, s, t);
        }
        C3_2 => {
            let (t, s, l) = (inst.get("T")?, inst.get("S")?, inst.get("L")?);
            power_subspace_invariance(ch, t, s, l);
        }
        P3_3 => pseudo_inverse_parametrisation(ch, inst.get("T")?, inst.seed),
        C3_4 => weak_quantifier_agreement(ch, inst.get("T")?, inst.seed),
        T3_6 => {
            let (t, n) = (inst.get("T")?, inst.get("N")?);
            let sum = t + n;
            ch.same_subspace("N(T^∞) = N((T+N)^∞)", &hyperkernel(t), &hyperkernel(&sum));
            ch.same_subspace("R(T^∞) = R((T+N)^∞)", &hyperrange(t), &hyperrange(&sum));
        }
        T3_9iii | Q_probe => {
            let (t, q) = (inst.get("T")?, inst.get("Q")?);
            let (s1, s2) = (spectrum(t), spectrum(&(t + q)));
            if s1 != s2 {
                ch.fail("σ(T) = σ(T+Q)");
                for (name, s) in [("root set of T", &s1), ("root set of T+Q", &s2)] {
                    let coeffs = s.poly().coeffs().to_vec();
                    let row = RationalMatrix::from_vec(1, coeffs.len(), coeffs)?;
                    ch.witness.push(NamedMatrix::new(name, row));
                }
            }
        }
        C3_10_smoke => {
            let (t, n) = (inst.get("T")?, inst.get("N")?);
            for (name, m) in [("T", t.clone()), ("T+N", t + n)] {
                let p = charpoly(&m)?;
                let zero = RationalMatrix::zeros(m.rows(), m.cols());
                ch.same(&format!("charpoly({name}) annihilates {name}"), &p.eval_matrix(&m), &zero);
            }
        }
        T3_11ii => {
            let (t, q) = (inst.get("T")?, inst.get("Q")?);
            ch.holds("T + Q semi-regular", is_semiregular(&(t + q)));
            if t.commutes_with(q) {
                ch.count("commuting_forced", 1);
            }
        }
        L4_1 => quotient_bounds(ch, inst.get("T")?, inst.get("S")?)?,
        T4_2_smoke => {
            let (t, f) = (inst.get("T")?, inst.get("F")?);
            let sum = t + f;
            let n = inst.dim;
            for (name, m) in [("T", t), ("T+F", &sum)] {
                let (p, q) = (ascent(m), descent(m));
                ch.holds(&format!("ascent of {name} finite"), p <= n);
                ch.holds(&format!("descent of {name} finite"), q <= n);
                ch.holds(&format!("ascent = descent for {name}"), p == q);
            }
            ch.comm_l("-F ∈ comm_l(T+F)", &sum, &f.scale(&rat(-1)));
            ch.comm_r("-F ∈ comm_r(T+F)", &sum, &f.scale(&rat(-1)));
        }
        T4_3_smoke => {
            let (t, f) = (inst.get("T")?, inst.get("F")?);
            for (name, m) in [("T", t.clone()), ("T+F", t + f)] {
                let d = drazin(&m)?;
                ch.holds(
                    &format!("Drazin axioms for {name}"),
                    satisfies_drazin_axioms(&m, &d.inverse, d.index),
                );
                ch.holds(&format!("index of {name} at most n"), d.index <= inst.dim);
                let kernel = nullspace(&m).dim();
                let cokernel = inst.dim - rank(&m);
                ch.holds(&format!("index zero for {name}"), kernel == cokernel);
            }
        }
        T4_9_smoke => {
            let t = inst.get("T")?;
            for lambda in rational_roots(&charpoly(t)?)? {
                ch.degeneracy(&format!("T - ({lambda})"), &t.shift(&lambda));
            }
        }
    }
    Ok(())
}

/// Pseudo inverse `c` of `a` against a partner `b`: `ba ∈ comm(a)` gives
/// `bc ∈ comm(c)` (and `c ∈ comm_r(b)` under `a ∈ comm_r(b)`),
/// `ab ∈ comm(a)` gives `cb ∈ comm(c)` (and `c ∈ comm_l(b)` under
/// `a ∈ comm_l(b)`), and `a ∈ comm_w(b)` gives `c ∈ comm_w(b)`.
fn pseudo_inverse_transfer(ch: &mut Checker, a: &RationalMatrix, b: &RationalMatrix, c: &RationalMatrix) {
    if xt_commutes(a, b) {
        ch.commutes("bc ∈ comm(c)", &(b * c), c);
        if in_comm_r(a, b) {
            ch.comm_r("c ∈ comm_r(b)", b, c);
        }
    }
    if tx_commutes(a, b) {
        ch.commutes("cb ∈ comm(c)", &(c * b), c);
        if in_comm_l(a, b) {
            ch.comm_l("c ∈ comm_l(b)", b, c);
        }
    }
    if in_comm_w(a, b) {
        ch.comm_l("c ∈ comm_w(b)", b, c);
        ch.comm_r("c ∈ comm_w(b)", b, c);
    }
}

fn pseudo_inverse_products(
    ch: &mut Checker,
    a: &RationalMatrix,
    b: &RationalMatrix,
    c: &RationalMatrix,
    d: &RationalMatrix,
) {
    let products = [("cb", c * b), ("ad", a * d), ("cd", c * d)];
    if in_comm_r(a, b) {
        ch.comm_r("c ∈ comm_r(b)", b, c);
        for (name, p) in &products {
            ch.commutes(&format!("{name} ∈ comm(b)"), p, b);
        }
    }
    if in_comm_l(a, b) {
        ch.comm_l("c ∈ comm_l(b)", b, c);
        for (name, p) in &products {
            ch.commutes(&format!("{name} ∈ comm(a)"), p, a);
        }
    }
}

fn product_drazin(ch: &mut Checker, a: &RationalMatrix, b: &RationalMatrix) -> Result<()> {
    let (ad, bd) = (drazin(a)?, drazin(b)?);
    let ab = a * b;
    let abd = drazin(&ab)?.inverse;
    let k = ad.index.max(bd.index);
    let (ad, bd) = (ad.inverse, bd.inverse);
    let left = &ad * &bd;
    let right = &bd * &ad;
    if in_comm_l(a, b) {
        ch.same("(ab)^D = a^D b^D", &abd, &left);
        ch.count("independent_axiom_checks", 1);
        ch.holds("a^D b^D satisfies the Drazin axioms for ab", satisfies_drazin_axioms(&ab, &left, k));
    }
    if in_comm_r(a, b) && tx_commutes(a, b) {
        ch.same("(ab)^D = b^D a^D", &abd, &right);
        ch.count("independent_axiom_checks", 1);
        ch.holds("b^D a^D satisfies the Drazin axioms for ab", satisfies_drazin_axioms(&ab, &right, k));
        // identity obtained along the way in the proof of this case
        ch.same("(b^D a^D)(ab) = (ba)(a^D b^D)", &(&right * &ab), &(&(b * a) * &left));
        ch.count("byproduct_checks", 1);
    }
    if in_comm_w(a, b) {
        ch.commutes("a^D ∈ comm(b^D)", &ad, &bd);
        ch.holds("index of ab at most max index", drazin_index(&ab) <= k);
    }
    Ok(())
}

/// Under `ST ∈ comm(T)` the hyperrange and analytic core of `l` are
/// `S`-invariant; under `TS ∈ comm(T)` the hyperkernel and quasi-nilpotent
/// part. `l` is `T` itself or one of its pseudo inverses.
fn power_subspace_invariance(ch: &mut Checker, t: &RationalMatrix, s: &RationalMatrix, l: &RationalMatrix) {
    if xt_commutes(t, s) {
        ch.invariant("S R(L^∞) ⊂ R(L^∞)", s, &hyperrange(l));
        ch.invariant("S K(L) ⊂ K(L)", s, &analytic_core(l));
    }
    if tx_commutes(t, s) {
        ch.invariant("S N(L^∞) ⊂ N(L^∞)", s, &hyperkernel(l));
        ch.invariant("S H0(L) ⊂ H0(L)", s, &quasinilpotent_part(l));
    }
}

/// Reducing pairs that split the eigenspace of a repeated semisimple
/// eigenvalue. They reduce `t` with invertible first part but are not
/// hyperinvariant.
fn eigenspace_splits(t: &RationalMatrix) -> Vec<RedPair> {
    let Ok(roots) = charpoly(t).and_then(|p| rational_roots(&p)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for lambda in roots {
        if num_traits::Zero::is_zero(&lambda) {
            continue;
        }
        let s = t.shift(&lambda);
        let eigen = nullspace_vectors(&s);
        if eigen.len() < 2 || hyperkernel(&s).dim() != eigen.len() {
            continue;
        }
        let m = Subspace::span(t.rows(), &eigen[..1]);
        let rest = Subspace::span(t.rows(), &eigen[1..]);
        let n = rest.sum(&hyperrange(&s)).expect("same ambient");
        if let Ok(pair) = RedPair::new(m, n) {
            out.push(pair);
        }
    }
    out
}

/// Every pseudo inverse found (the spectral family and any one-entry
/// perturbation that happens to qualify) equals `Φ` of its induced pair,
/// which lies in `IRed`; and for the non-hyperinvariant eigenspace splits,
/// `Φ` is a pseudo inverse exactly when the pair is in `IRed`.
fn pseudo_inverse_parametrisation(ch: &mut Checker, t: &RationalMatrix, seed: u64) {
    let n = t.rows();
    let comm = comm_basis(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = pseudo_inverse_family(t);
    let mut candidates: Vec<RationalMatrix> = Vec::new();
    for c in &family {
        candidates.push(c.clone());
        for _ in 0..PERTURBATIONS {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            candidates.push(c + &RationalMatrix::unit(n, i, j).scale(&rat(s)));
        }
    }
    for (idx, c) in candidates.iter().enumerate() {
        let from_family = idx % (PERTURBATIONS + 1) == 0;
        let detected = is_pseudo_inverse_given(t, c, &comm);
        ch.count("candidates", 1);
        if from_family {
            ch.holds("family member is a pseudo inverse", detected);
        }
        if !detected {
            continue;
        }
        ch.count("pseudo_inverses", 1);
        let pair = match induced_pair(t, c) {
            Ok(p) => p,
            Err(e) => {
                ch.fail(format!("induced pair of a pseudo inverse: {e}"));
                continue;
            }
        };
        ch.holds("induced pair in IRed(T)", is_ired_pair_given(t, &pair, &comm));
        match phi_map(t, &pair) {
            Ok(phi) => ch.same("Φ(R(Tc), N(Tc)) = c", &phi, c),
            Err(e) => ch.fail(format!("Φ of an induced pair: {e}")),
        }
    }
    for pair in eigenspace_splits(t) {
        ch.count("non_ired_pairs", 1);
        let ired = is_ired_pair_given(t, &pair, &comm);
        match phi_map(t, &pair) {
            Ok(phi) => ch.holds(
                "Φ(M, N) is a pseudo inverse iff (M, N) ∈ IRed(T)",
                is_pseudo_inverse_given(t, &phi, &comm) == ired,
            ),
            Err(e) => ch.fail(format!("Φ of an eigenspace split: {e}")),
        }
    }
}

/// `IRed` tested against a basis of `comm(t)` agrees with the reduction
/// test against sampled `U` with `t ∈ comm(tU) ∩ comm(Ut)`.
fn weak_quantifier_agreement(ch: &mut Checker, t: &RationalMatrix, seed: u64) {
    let comm = comm_basis(t);
    let weak = weak_commuting_basis(t);
    let mut pairs = spectral_pairs(t);
    pairs.extend(eigenspace_splits(t));
    for (i, pair) in pairs.iter().enumerate() {
        let strict = is_ired_pair_given(t, pair, &comm);
        let sampled = ired_weak_check_given(t, pair, &weak, seed.wrapping_add(i as u64), WEAK_SAMPLES);
        ch.count("pairs", 1);
        ch.count("weak_samples", sampled.samples_checked as u64);
        if strict {
            ch.count("ired_pairs", 1);
        }
        ch.holds("comm(T) and weak quantifiers agree on IRed", strict == sampled.holds());
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// The four kernel and range quotients bounded by `rank S^m`, for
/// `n ∈ 3..=max(3, dim)` and `m ∈ 1..=dim`, together with the identities
/// behind them: the binomial expansion of `(T+S)^k` for `k ≥ 3`,
/// `(T+S)^{n+m-1} = S^m A` on `N(T^n)`, and `-S ∈ comm_w(T+S)`.
fn quotient_bounds(ch: &mut Checker, t: &RationalMatrix, s: &RationalMatrix) -> Result<()> {
    let dim = t.rows();
    let sum = t + s;
    let top = dim.max(3) + dim;
    let tp = t.powers(top);
    let sp = s.powers(top);
    let up = sum.powers(top);
    let kernel = |m: &RationalMatrix| nullspace(m);
    let range = |m: &RationalMatrix| colspace(m);
    for n in 3..=dim.max(3) {
        let k_t_n = kernel(&tp[n]);
        let k_u_n = kernel(&up[n]);
        let r_t_n = range(&tp[n]);
        let r_u_n = range(&up[n]);
        for m in 1..=dim {
            let k = n + m - 1;
            let bound = rank(&sp[m]);
            let k_u_k = kernel(&up[k]);
            let k_t_k = kernel(&tp[k]);
            let r_t_k = range(&tp[k]);
            let r_u_k = range(&up[k]);
            let q1 = Subspace::quotient_dim(&k_t_n, &k_u_k.intersect(&k_t_n)?)?;
            let q2 = Subspace::quotient_dim(&k_u_n, &k_t_k.intersect(&k_u_n)?)?;
            let q3 = Subspace::quotient_dim(&r_t_k, &r_u_n.intersect(&r_t_k)?)?;
            let q4 = Subspace::quotient_dim(&r_u_k, &r_t_n.intersect(&r_u_k)?)?;
            ch.at_most(&format!("dim N(T^{n}) / N((T+S)^{k}) ∩ N(T^{n}) ≤ rank S^{m}"), q1, bound);
            ch.at_most(&format!("dim N((T+S)^{n}) / N(T^{k}) ∩ N((T+S)^{n}) ≤ rank S^{m}"), q2, bound);
            ch.at_most(&format!("dim R(T^{k}) / R((T+S)^{n}) ∩ R(T^{k}) ≤ rank S^{m}"), q3, bound);
            ch.at_most(&format!("dim R((T+S)^{k}) / R(T^{n}) ∩ R((T+S)^{k}) ≤ rank S^{m}"), q4, bound);
            ch.count("quotient_checks", 4);

            let expansion = (0..=k).fold(RationalMatrix::zeros(dim, dim), |acc, i| {
                &acc + &(&tp[k - i] * &sp[i]).scale(&rat(binomial(k, i)))
            });
            ch.same(&format!("(T+S)^{k} binomial expansion"), &up[k], &expansion);
            let a = (0..n).fold(RationalMatrix::zeros(dim, dim), |acc, i| {
                &acc + &(&sp[i] * &tp[n - i - 1]).scale(&rat(binomial(k, i + m)))
            });
            let basis = k_t_n.basis();
            ch.same(
                &format!("(T+S)^{k} = S^{m} A on N(T^{n})"),
                &(&up[k] * basis),
                &(&(&sp[m] * &a) * basis),
            );
            ch.commutes(&format!("T^{n} commutes with (T+S)^{k}"), &tp[n], &up[k]);
        }
    }
    let minus = s.scale(&rat(-1));
    ch.comm_l("-S ∈ comm_l(T+S)", &sum, &minus);
    ch.comm_r("-S ∈ comm_r(T+S)", &sum, &minus);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn jordan0(k: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(k, k);
        for i in 0..k.saturating_sub(1) {
            m.set(i, i + 1, rat(1));
        }
        m
    }

    #[test]
    fn commuting_nilpotent_keeps_spectrum() {
        let t = jordan0(2);
        let inst = Instance::new(0, 2, vec![("T", t.clone()), ("Q", t.scale(&rat(-1)))]);
        let r = verify(TheoremId::T3_9iii, &inst).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.noncommuting);
    }

    #[test]
    fn zero_perturbation_meets_quotient_bounds() {
        let t = RationalMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 0, 1], &[0, 0, 0]]);
        let inst = Instance::new(0, 3, vec![("T", t), ("S", RationalMatrix::zeros(3, 3))]);
        let r = verify(TheoremId::L4_1, &inst).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.failed_checks);
        assert_eq!(r.counters["quotient_checks"], 4 * 3);
    }

    #[test]
    fn near_miss_is_hypotheses_unmet() {
        let inst = Instance::new(
            0,
            2,
            vec![("T", RationalMatrix::unit(2, 0, 1)), ("Q", RationalMatrix::unit(2, 1, 0))],
        );
        let r = verify(TheoremId::Q_probe, &inst).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesesUnmet);
        assert!(r.noncommuting);
        assert_eq!(r.counters["spectra_differ"], 1);
    }

    #[test]
    fn wrong_drazin_candidate_fails_with_witness() {
        let a = RationalMatrix::diag_i64(&[2, 0]);
        let b = RationalMatrix::diag_i64(&[1, 0]);
        // b satisfies none of the hypotheses beyond commuting, so it is unmet
        let inst = Instance::new(0, 2, vec![("a", a.clone()), ("b", b)]);
        assert_eq!(verify(TheoremId::P2_6, &inst).unwrap().verdict, Verdict::HypothesesUnmet);
        let mut ch = Checker::default();
        ch.same("b = a^D", &RationalMatrix::diag_i64(&[1, 0]), &drazin(&a).unwrap().inverse);
        assert_eq!(ch.failed.len(), 1);
        assert_eq!(ch.witness.len(), 1);
    }

    #[test]
    fn malformed_instance_rejected() {
        let inst = Instance::new(0, 2, vec![("T", RationalMatrix::identity(3))]);
        assert!(matches!(verify(TheoremId::P3_3, &inst), Err(Error::MalformedInstance(_))));
        let inst = Instance::new(0, 2, vec![("T", RationalMatrix::identity(2))]);
        assert!(matches!(verify(TheoremId::L4_1, &inst), Err(Error::MalformedInstance(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(11, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }
}
