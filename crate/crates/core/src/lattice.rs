//! Invariant-subspace calculus of a single operator: power ranges and
//! kernels, ascent and descent, invariance, reducing pairs and restrictions.
//!
//! In finite dimension the analytic core `K(T)` coincides with the
//! hyperrange and the quasi-nilpotent part `H0(T)` with the hyperkernel
//! (the generalized 0-eigenspace). Both are computed here by a second,
//! spectral route and cross-checked against the power chains.

use crate::error::{Error, Result};
use crate::linalg::{charpoly, colspace, nullspace, RationalMatrix, RationalPoly};
use crate::subspace::{RedPair, Subspace};

fn size(t: &RationalMatrix) -> usize {
    assert!(t.is_square(), "operator must be square, got {}x{}", t.rows(), t.cols());
    t.rows()
}

/// `R(t^∞)`, as `R(t^n)` with `n` the ambient dimension. Panics if `t`
/// is not square.
pub fn hyperrange(t: &RationalMatrix) -> Subspace {
    let n = size(t);
    let tn = t.pow(n);
    let r = colspace(&tn);
    assert_eq!(r, colspace(&(&tn * t)), "range chain did not stabilise by n");
    r
}

/// `N(t^∞)`, as `N(t^n)`. Panics if `t` is not square.
pub fn hyperkernel(t: &RationalMatrix) -> Subspace {
    let n = size(t);
    let tn = t.pow(n);
    let k = nullspace(&tn);
    assert_eq!(k, nullspace(&(&tn * t)), "kernel chain did not stabilise by n");
    k
}

/// Splits the characteristic polynomial as `x^m g(x)` with `g(0) != 0`.
fn split_at_zero(t: &RationalMatrix) -> (usize, RationalPoly) {
    let p = charpoly(t).expect("square");
    let m = p.coeffs().iter().take_while(|c| num_traits::Zero::is_zero(*c)).count();
    (m, RationalPoly::new(p.coeffs()[m..].to_vec()))
}

/// Analytic core `K(t)`: the sum of generalized eigenspaces for nonzero
/// eigenvalues, `N(g(t))` where `charpoly = x^m g`.
pub fn analytic_core(t: &RationalMatrix) -> Subspace {
    let (_, g) = split_at_zero(t);
    let k = nullspace(&g.eval_matrix(t));
    assert_eq!(k, hyperrange(t), "analytic core differs from hyperrange");
    k
}

/// Quasi-nilpotent part `H0(t)`: `N(t^m)` with `m` the algebraic
/// multiplicity of 0.
pub fn quasinilpotent_part(t: &RationalMatrix) -> Subspace {
    let (m, _) = split_at_zero(t);
    let h = nullspace(&t.pow(m));
    assert_eq!(h, hyperkernel(t), "quasi-nilpotent part differs from hyperkernel");
    h
}

fn first_repeat(chain: &[Subspace]) -> usize {
    chain
        .windows(2)
        .position(|w| w[0] == w[1])
        .expect("chain stabilises within the ambient dimension")
}

/// Smallest `k` with `N(t^k) = N(t^{k+1})`; the whole chain up to `n + 1`
/// is always computed.
pub fn ascent(t: &RationalMatrix) -> usize {
    let n = size(t);
    let chain: Vec<Subspace> = t.powers(n + 1).iter().map(nullspace).collect();
    first_repeat(&chain)
}

/// Smallest `k` with `R(t^k) = R(t^{k+1})`.
pub fn descent(t: &RationalMatrix) -> usize {
    let n = size(t);
    let chain: Vec<Subspace> = t.powers(n + 1).iter().map(colspace).collect();
    let q = first_repeat(&chain);
    debug_assert_eq!(q, ascent(t));
    q
}

pub fn is_invariant(t: &RationalMatrix, v: &Subspace) -> bool {
    size(t) == v.ambient() && v.contains(&v.image(t))
}

pub fn is_red_pair(t: &RationalMatrix, p: &RedPair) -> bool {
    is_invariant(t, p.m_part()) && is_invariant(t, p.n_part())
}

/// Matrix of `t|_v` in the canonical basis of `v`, so that
/// `basis * result = t * basis`.
pub fn restriction(t: &RationalMatrix, v: &Subspace) -> Result<RationalMatrix> {
    if size(t) != v.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a subspace of Q^{}",
            t.rows(),
            t.cols(),
            v.ambient()
        )));
    }
    let images = t * v.basis();
    let columns = images
        .columns()
        .iter()
        .map(|col| v.coordinates(col).ok_or(Error::NotInvariant))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_columns(v.dim(), &columns))
}

/// Core-nilpotent pair `(R(t^∞), N(t^∞))`.
pub fn core_nilpotent_pair(t: &RationalMatrix) -> RedPair {
    RedPair::new(hyperrange(t), hyperkernel(t)).expect("core and nilpotent parts are complementary")
}
