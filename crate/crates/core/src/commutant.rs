//! Commutants and weak commutants.
//!
//! For a square matrix `a`:
//!
//! * `comm(a)`: all `b` with `ab = ba`;
//! * `comm_l(a)`: all `b` with `ab ∈ comm(a)` and `ba ∈ comm(b)`,
//!   i.e. `a²b = aba` and `b²a = bab`;
//! * `comm_r(a)`: all `b` with `ab ∈ comm(b)` and `ba ∈ comm(a)`,
//!   i.e. `ab² = bab` and `ba² = aba`;
//! * `comm_w(a) = comm_l(a) ∩ comm_r(a)`.
//!
//! `comm(a)` is a linear space and is computed exactly as the kernel of
//! `X ↦ aX − Xa`. The weak sets are quadratic varieties; the samplers solve
//! their linear layer exactly and filter the quadratic layer, so they return
//! valid members but never a complete parametrisation.

use std::collections::HashSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace_vectors, rat, Rational, RationalMatrix};

/// Membership of `b` in the commutant sets of `a`, with the four defining
/// residuals `(ab·a − a·ab, ba·b − b·ba, ab·b − b·ab, ba·a − a·ba)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationProfile {
    pub in_comm: bool,
    pub in_comm_l: bool,
    pub in_comm_r: bool,
    pub in_comm_w: bool,
    pub residuals: [RationalMatrix; 4],
}

impl CommutationProfile {
    /// One-line summary, e.g. `comm=0 comm_l=1 comm_r=1 comm_w=1`.
    pub fn summary(&self) -> String {
        format!(
            "comm={} comm_l={} comm_r={} comm_w={}",
            self.in_comm as u8, self.in_comm_l as u8, self.in_comm_r as u8, self.in_comm_w as u8
        )
    }
}

fn check_pair(a: &RationalMatrix, b: &RationalMatrix) -> Result<usize> {
    let n = a.ensure_square()?;
    b.ensure_square()?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n}x{n} and {}x{} matrices",
            b.rows(),
            b.cols()
        )));
    }
    Ok(n)
}

pub fn profile(a: &RationalMatrix, b: &RationalMatrix) -> Result<CommutationProfile> {
    check_pair(a, b)?;
    let ab = a * b;
    let ba = b * a;
    let residuals = [
        ab.commutator(a),
        ba.commutator(b),
        ab.commutator(b),
        ba.commutator(a),
    ];
    let in_comm = ab == ba;
    let in_comm_l = residuals[0].is_zero() && residuals[1].is_zero();
    let in_comm_r = residuals[2].is_zero() && residuals[3].is_zero();
    Ok(CommutationProfile {
        in_comm,
        in_comm_l,
        in_comm_r,
        in_comm_w: in_comm_l && in_comm_r,
        residuals,
    })
}

pub fn in_comm_l(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let ab = a * b;
    let ba = b * a;
    ab.commutes_with(a) && ba.commutes_with(b)
}

pub fn in_comm_r(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let ab = a * b;
    let ba = b * a;
    ab.commutes_with(b) && ba.commutes_with(a)
}

pub fn in_comm_w(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    in_comm_l(a, b) && in_comm_r(a, b)
}

/// Basis of the solution space of a system of linear matrix equations
/// `map_i(X) = 0`, with `X` restricted to the entries listed in `support`
/// (all `n²` entries when `None`).
pub fn linear_solution_space(
    n: usize,
    maps: &[&dyn Fn(&RationalMatrix) -> RationalMatrix],
    support: Option<&[(usize, usize)]>,
) -> Vec<RationalMatrix> {
    let all: Vec<(usize, usize)>;
    let vars = match support {
        Some(s) => s,
        None => {
            all = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            &all
        }
    };
    if vars.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Rational>> = vars
        .iter()
        .map(|&(i, j)| {
            let unit = RationalMatrix::unit(n, i, j);
            maps.iter()
                .flat_map(|f| f(&unit).entries().to_vec())
                .collect()
        })
        .collect();
    let system = if maps.is_empty() {
        RationalMatrix::zeros(0, vars.len())
    } else {
        RationalMatrix::from_columns(images[0].len(), &images)
    };
    nullspace_vectors(&system)
        .into_iter()
        .map(|coeffs| {
            let mut x = RationalMatrix::zeros(n, n);
            for (&(i, j), c) in vars.iter().zip(coeffs) {
                x.set(i, j, c);
            }
            x
        })
        .collect()
}

/// Basis of `comm(a)`, the kernel of `X ↦ aX − Xa`.
pub fn comm_basis(a: &RationalMatrix) -> Vec<RationalMatrix> {
    let n = a.rows();
    assert!(a.is_square(), "comm_basis of a non-square matrix");
    linear_solution_space(n, &[&|x: &RationalMatrix| a.commutator(x)], None)
}

/// `c ∈ comm(comm(a))`. By linearity it suffices to test a basis of `comm(a)`.
pub fn in_comm2(a: &RationalMatrix, c: &RationalMatrix) -> Result<bool> {
    check_pair(a, c)?;
    Ok(comm_basis(a).iter().all(|u| u.commutes_with(c)))
}

/// A sampled weak-commutant member, tagged with whether it actually
/// commutes with the base matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub matrix: RationalMatrix,
    pub commutes: bool,
}

/// Deterministic candidate enumeration over a linear solution space, with
/// rank-one recipes aligned to the kernel and left kernel of `a` tried
/// first. Every candidate is passed through `accept`, which must check the
/// full defining conditions.
pub(crate) fn search(
    a: &RationalMatrix,
    basis: &[RationalMatrix],
    accept: &dyn Fn(&RationalMatrix) -> bool,
    seed: u64,
    attempts: usize,
) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<RationalMatrix> = HashSet::new();
    let mut out = Vec::new();
    let mut consider = |b: RationalMatrix, out: &mut Vec<Sample>| {
        if b.is_zero() || seen.contains(&b) {
            return;
        }
        seen.insert(b.clone());
        if accept(&b) {
            let commutes = a.commutes_with(&b);
            out.push(Sample { matrix: b, commutes });
        }
    };

    for b in rank_one_recipes(a, &mut rng, attempts) {
        consider(b, &mut out);
    }
    for b in basis {
        consider(b.clone(), &mut out);
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(&mut rng);
    for &(i, j) in pairs.iter().take(attempts) {
        consider(&basis[i] + &basis[j], &mut out);
        consider(&basis[i] - &basis[j], &mut out);
    }
    if !basis.is_empty() {
        for _ in 0..attempts {
            let mut b = RationalMatrix::zeros(a.rows(), a.cols());
            for v in basis {
                if rng.gen_bool(0.5) {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 {
                        b = &b + &v.scale(&rat(c));
                    }
                }
            }
            consider(b, &mut out);
        }
    }
    out
}

/// Rank-one `u vᵀ` candidates with `a u = 0`, `vᵀ a² = 0`, `vᵀ u = 0`, and
/// the transposed recipe. Such matrices satisfy all four weak identities
/// while `ba = u (vᵀ a)` can be nonzero.
fn rank_one_recipes(a: &RationalMatrix, rng: &mut ChaCha8Rng, budget: usize) -> Vec<RationalMatrix> {
    let a2 = a * a;
    let at = a.transpose();
    let kernel = nullspace_vectors(a);
    let left_sq = nullspace_vectors(&a2.transpose());
    let left = nullspace_vectors(&at);
    let kernel_sq = nullspace_vectors(&a2);
    let mut out = Vec::new();
    let mut push_pairs = |us: &[Vec<Rational>], vs: &[Vec<Rational>], out: &mut Vec<RationalMatrix>| {
        let us = small_combinations(us, rng, budget);
        let vs = small_combinations(vs, rng, budget);
        for u in &us {
            for v in &vs {
                let dot = u.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
                if dot.is_zero() {
                    out.push(outer(u, v));
                }
            }
        }
    };
    push_pairs(&kernel, &left_sq, &mut out);
    push_pairs(&kernel_sq, &left, &mut out);
    out.truncate(4 * budget.max(1));
    out
}

fn small_combinations(vs: &[Vec<Rational>], rng: &mut ChaCha8Rng, budget: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vs.to_vec();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            out.push(vs[i].iter().zip(&vs[j]).map(|(x, y)| x + y).collect());
        }
    }
    out.shuffle(rng);
    out.truncate(budget.clamp(1, 8));
    out
}

fn outer(u: &[Rational], v: &[Rational]) -> RationalMatrix {
    let n = u.len();
    let mut m = RationalMatrix::zeros(n, v.len());
    for (i, x) in u.iter().enumerate() {
        for (j, y) in v.iter().enumerate() {
            m.set(i, j, x * y);
        }
    }
    m
}

/// Members of `comm_l(a)`: the linear layer `a²b = aba` is solved exactly,
/// then candidates are filtered by `b²a = bab`. Deterministic per seed; an
/// empty result is legal.
pub fn sample_comm_l(a: &RationalMatrix, seed: u64, attempts: usize) -> Vec<Sample> {
    let n = a.rows();
    let a2 = a * a;
    let basis = linear_solution_space(n, &[&|b: &RationalMatrix| &(&a2 * b) - &(&(a * b) * a)], None);
    search(a, &basis, &|b| in_comm_l(a, b), seed, attempts)
}

/// Members of `comm_r(a)`: linear layer `ba² = aba`, quadratic `ab² = bab`.
pub fn sample_comm_r(a: &RationalMatrix, seed: u64, attempts: usize) -> Vec<Sample> {
    let n = a.rows();
    let a2 = a * a;
    let basis = linear_solution_space(n, &[&|b: &RationalMatrix| &(b * &a2) - &(&(a * b) * a)], None);
    search(a, &basis, &|b| in_comm_r(a, b), seed, attempts)
}

/// Members of `comm_w(a)`: both linear layers, then both quadratic filters.
pub fn sample_comm_w(a: &RationalMatrix, seed: u64, attempts: usize) -> Vec<Sample> {
    let n = a.rows();
    let a2 = a * a;
    let basis = linear_solution_space(
        n,
        &[
            &|b: &RationalMatrix| &(&a2 * b) - &(&(a * b) * a),
            &|b: &RationalMatrix| &(b * &a2) - &(&(a * b) * a),
        ],
        None,
    );
    search(a, &basis, &|b| in_comm_w(a, b), seed, attempts)
}
