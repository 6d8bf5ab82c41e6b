//! Drazin and pseudo inverses, the `Φ` map from reducing pairs to pseudo
//! inverses, and the hyperinvariance test for reducing pairs.
//!
//! In finite dimension the spectrum is finite, so 0 is never an
//! accumulation point and the generalized Drazin inverse is the ordinary
//! Drazin inverse. Nothing here distinguishes the two.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commutant::{comm_basis, in_comm2, linear_solution_space};
use crate::error::{Error, Result};
use crate::lattice::{hyperkernel, hyperrange, is_red_pair, restriction};
use crate::linalg::{charpoly, colspace, nullspace, rank, rat, rational_roots, read_matrix, RationalMatrix};
use crate::subspace::{RedPair, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrazinResult {
    pub inverse: RationalMatrix,
    pub index: usize,
    pub core_range: Subspace,
    pub core_kernel: Subspace,
}

impl DrazinResult {
    pub fn red_pair(&self) -> RedPair {
        RedPair::new(self.core_range.clone(), self.core_kernel.clone())
            .expect("core range and kernel are complementary")
    }

    /// ```text
    /// index K
    /// inverse
    /// <matrix>
    /// core_range
    /// <matrix>
    /// core_kernel
    /// <matrix>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "index {}", self.index).unwrap();
        out.push_str("inverse\n");
        out.push_str(&self.inverse.to_text());
        out.push_str("core_range\n");
        out.push_str(&self.core_range.to_text());
        out.push_str("core_kernel\n");
        out.push_str(&self.core_kernel.to_text());
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let index = labelled(&mut lines, "index")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad index: {e}")))?;
        labelled(&mut lines, "inverse")?;
        let inverse = read_matrix(&mut lines)?;
        labelled(&mut lines, "core_range")?;
        let core_range = Subspace::from_generators(&read_matrix(&mut lines)?);
        labelled(&mut lines, "core_kernel")?;
        let core_kernel = Subspace::from_generators(&read_matrix(&mut lines)?);
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("trailing content `{extra}`")));
        }
        Ok(Self {
            inverse,
            index,
            core_range,
            core_kernel,
        })
    }
}

/// Next nonblank line, which must start with `label`; returns the rest.
fn labelled<'a>(lines: &mut impl Iterator<Item = &'a str>, label: &str) -> Result<&'a str> {
    let line = lines
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Parse(format!("missing `{label}`")))?
        .trim();
    line.strip_prefix(label)
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("expected `{label}`, found `{line}`")))
}

/// Smallest `k` with `rank(a^k) = rank(a^{k+1})`.
pub fn drazin_index(a: &RationalMatrix) -> usize {
    assert!(a.is_square(), "drazin_index of a non-square matrix");
    let ranks: Vec<usize> = a.powers(a.rows() + 1).iter().map(rank).collect();
    let k = ranks
        .windows(2)
        .position(|w| w[0] == w[1])
        .expect("rank chain stabilises");
    debug_assert_eq!(k, crate::lattice::ascent(a));
    k
}

/// `(t|_M)⁻¹ ⊕ 0_N` in standard coordinates, without any checks on the
/// pair beyond invariance of `M`.
fn inverse_on_first(t: &RationalMatrix, pair: &RedPair) -> Result<RationalMatrix> {
    let n = pair.ambient();
    let m = pair.m_part();
    if m.is_zero() {
        return Ok(RationalMatrix::zeros(n, n));
    }
    let inv = restriction(t, m)?
        .inverse()
        .map_err(|_| Error::SingularRestriction)?;
    let block = inv.direct_sum(&RationalMatrix::zeros(n - m.dim(), n - m.dim()));
    let b = pair.change_of_basis();
    let b_inv = b.inverse().expect("direct-sum basis is invertible");
    Ok(&(&b * &block) * &b_inv)
}

/// Drazin axioms: `xa = ax`, `xax = x`, `a^{k+1}x = a^k`.
pub fn satisfies_drazin_axioms(a: &RationalMatrix, x: &RationalMatrix, k: usize) -> bool {
    let ak = a.pow(k);
    x.commutes_with(a) && &(x * a) * x == *x && &(&ak * a) * x == ak
}

/// Core-nilpotent construction of `a^D`. The three axioms are checked before
/// returning.
pub fn drazin(a: &RationalMatrix) -> Result<DrazinResult> {
    a.ensure_square()?;
    let k = drazin_index(a);
    let ak = a.pow(k);
    let core_range = colspace(&ak);
    let core_kernel = nullspace(&ak);
    let pair = RedPair::new(core_range.clone(), core_kernel.clone())?;
    let inverse = inverse_on_first(a, &pair)?;
    if !satisfies_drazin_axioms(a, &inverse, k) {
        return Err(Error::InvariantViolation(format!(
            "Drazin axioms fail for\n{a}"
        )));
    }
    Ok(DrazinResult {
        inverse,
        index: k,
        core_range,
        core_kernel,
    })
}

/// `c = c²a` and `c ∈ comm²(a)`.
pub fn is_pseudo_inverse(a: &RationalMatrix, c: &RationalMatrix) -> Result<bool> {
    if !in_comm2(a, c)? {
        return Ok(false);
    }
    Ok(&(c * c) * a == *c)
}

pub fn phi_map(t: &RationalMatrix, pair: &RedPair) -> Result<RationalMatrix> {
    t.ensure_square()?;
    if t.rows() != pair.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator and a pair in Q^{}",
            t.rows(),
            t.cols(),
            pair.ambient()
        )));
    }
    if !is_red_pair(t, pair) {
        return Err(Error::NotReducing);
    }
    inverse_on_first(t, pair)
}

fn reduces(u: &RationalMatrix, pair: &RedPair) -> bool {
    is_red_pair(u, pair)
}

fn restriction_invertible(t: &RationalMatrix, pair: &RedPair) -> bool {
    match restriction(t, pair.m_part()) {
        Ok(r) => r.is_invertible(),
        Err(_) => false,
    }
}

/// `(M, N) ∈ IRed(t)`: `t_M` invertible and the pair reduces every element of
/// `comm(t)`. By linearity the basis of `comm(t)` is a complete test, and
/// `t` itself is one of its elements.
pub fn is_ired_pair(t: &RationalMatrix, pair: &RedPair) -> bool {
    is_ired_pair_given(t, pair, &comm_basis(t))
}

/// [`is_ired_pair`] against a precomputed basis of `comm(t)`.
pub fn is_ired_pair_given(t: &RationalMatrix, pair: &RedPair, comm: &[RationalMatrix]) -> bool {
    t.rows() == pair.ambient()
        && is_red_pair(t, pair)
        && restriction_invertible(t, pair)
        && comm.iter().all(|u| reduces(u, pair))
}

/// Basis of `{U : t ∈ comm(tU) ∩ comm(Ut)}`, i.e. `t²U = tUt = Ut²`.
pub fn weak_commuting_basis(t: &RationalMatrix) -> Vec<RationalMatrix> {
    let t2 = t * t;
    linear_solution_space(
        t.rows(),
        &[
            &|u: &RationalMatrix| &(&t2 * u) - &(&(t * u) * t),
            &|u: &RationalMatrix| &(u * &t2) - &(&(t * u) * t),
        ],
        None,
    )
}

/// Outcome of the sampled weak-quantifier test: evidence, never a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakIRedCheck {
    pub restriction_invertible: bool,
    pub samples_checked: usize,
    pub violations: usize,
}

impl WeakIRedCheck {
    pub fn holds(&self) -> bool {
        self.restriction_invertible && self.violations == 0
    }
}

/// Reduction test against `samples` operators `U` with
/// `t ∈ comm(tU) ∩ comm(Ut)`: basis elements first, then seeded integer
/// combinations of them.
pub fn ired_weak_check(t: &RationalMatrix, pair: &RedPair, seed: u64, samples: usize) -> WeakIRedCheck {
    ired_weak_check_given(t, pair, &weak_commuting_basis(t), seed, samples)
}

/// [`ired_weak_check`] against a precomputed [`weak_commuting_basis`].
pub fn ired_weak_check_given(
    t: &RationalMatrix,
    pair: &RedPair,
    basis: &[RationalMatrix],
    seed: u64,
    samples: usize,
) -> WeakIRedCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut violations = 0;
    let mut check = |u: &RationalMatrix| {
        checked += 1;
        if !reduces(u, pair) {
            violations += 1;
        }
    };
    for u in basis.iter().take(samples) {
        check(u);
    }
    for _ in basis.len().min(samples)..samples {
        if basis.is_empty() {
            break;
        }
        let mut u = RationalMatrix::zeros(t.rows(), t.cols());
        for v in basis {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                u = &u + &v.scale(&rat(c));
            }
        }
        check(&u);
    }
    WeakIRedCheck {
        restriction_invertible: restriction_invertible(t, pair),
        samples_checked: checked,
        violations,
    }
}

/// `(R(tc), N(tc))`, the pair a pseudo inverse `c` is built from.
pub fn induced_pair(t: &RationalMatrix, c: &RationalMatrix) -> Result<RedPair> {
    let p = t * c;
    RedPair::new(colspace(&p), nullspace(&p))
}

/// Spectral reducing pairs: for each set `Λ` of nonzero rational eigenvalues,
/// `N` collects the generalized eigenspaces of 0 and of `Λ`, and `M` the
/// rest. All of them lie in `IRed(t)`. The empty `Λ` gives the
/// core-nilpotent pair and comes first.
pub fn spectral_pairs(t: &RationalMatrix) -> Vec<RedPair> {
    let n = t.rows();
    let roots: Vec<_> = rational_roots(&charpoly(t).expect("square"))
        .expect("charpoly is nonzero")
        .into_iter()
        .filter(|r| !num_traits::Zero::is_zero(r))
        .collect();
    let pieces: Vec<(Subspace, Subspace)> = roots
        .iter()
        .map(|r| {
            let s = t.shift(r);
            (hyperrange(&s), hyperkernel(&s))
        })
        .collect();
    let base = (hyperrange(t), hyperkernel(t));
    let mut out = Vec::with_capacity(1 << roots.len());
    for mask in 0u32..(1 << roots.len()) {
        let mut m = base.0.clone();
        let mut k = base.1.clone();
        for (i, (range, kernel)) in pieces.iter().enumerate() {
            if mask & (1 << i) != 0 {
                m = m.intersect(range).expect("same ambient");
                k = k.sum(kernel).expect("same ambient");
            }
        }
        debug_assert_eq!(m.dim() + k.dim(), n);
        out.push(RedPair::new(m, k).expect("spectral split is a direct sum"));
    }
    out
}

/// Pseudo inverses `Φ(M, N)` over the spectral pairs; the Drazin inverse
/// is first and, when every nonzero eigenvalue is rational, the zero
/// matrix is last.
pub fn pseudo_inverse_family(t: &RationalMatrix) -> Vec<RationalMatrix> {
    let mut seen = HashSet::new();
    spectral_pairs(t)
        .iter()
        .map(|p| phi_map(t, p).expect("spectral pairs reduce t with invertible core"))
        .filter(|c| seen.insert(c.clone()))
        .collect()
}
