//! Exact dense linear algebra over the rationals.
//!
//! Every rank, kernel and spectrum decision in the crate flows through the
//! Gauss-Jordan elimination in this module; there is no floating point
//! anywhere on those paths.

mod matrix;
mod poly;

pub use matrix::{frac, parse_entry, rat, read_matrix, Rational, RationalMatrix};
pub use poly::{charpoly, poly_squarefree, rational_roots, RationalPoly};

use num_traits::{One, Zero};

use crate::subspace::Subspace;

/// Reduced row-echelon form, pivot columns and rank.
///
/// The reduced form is unique, so two matrices with the same row space
/// produce identical output.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>, usize) {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        if !inv.is_one() {
            for v in a[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = a.into_iter().flatten().collect();
    let reduced = RationalMatrix::from_vec(rows, cols, data).expect("shape preserved");
    let rank = pivots.len();
    (reduced, pivots, rank)
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).2
}

/// Basis vectors of `{x : m x = 0}` read off the reduced form, one per free
/// column.
pub fn nullspace_vectors(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (reduced, pivots, _) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(i, f).clone();
            }
            v
        })
        .collect()
}

pub fn nullspace(m: &RationalMatrix) -> Subspace {
    let basis = nullspace_vectors(m);
    Subspace::span(m.cols(), &basis)
}

pub fn colspace(m: &RationalMatrix) -> Subspace {
    Subspace::from_generators(m)
}
