//! Independent reference computations for the integration tests. Nothing
//! here calls the crate's elimination, polynomial or inverse code; matrices
//! are only converted to and from plain rows.

#![allow(dead_code)]

use num_traits::{One, Zero};
use proptest::prelude::*;
use weakcomm::linalg::rat;
use weakcomm::{Rational, RationalMatrix};

pub type Rows = Vec<Vec<Rational>>;

pub fn to_rows(m: &RationalMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn from_rows(rows: &Rows, cols: usize) -> RationalMatrix {
    let data = rows.iter().flatten().cloned().collect();
    RationalMatrix::from_vec(rows.len(), cols, data).unwrap()
}

fn mul(a: &Rows, b: &Rows, inner: usize, cols: usize) -> Rows {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn transpose(a: &Rows, cols: usize) -> Rows {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row reduction with partial search for a nonzero pivot; returns the
/// reduced rows and pivot columns.
fn reduce(mut a: Rows, cols: usize) -> (Rows, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (a, pivots)
}

pub fn oracle_rank(m: &RationalMatrix) -> usize {
    reduce(to_rows(m), m.cols()).1.len()
}

pub fn det(m: &RationalMatrix) -> Rational {
    let n = m.rows();
    let mut a = to_rows(m);
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            let f = &row[c] / &pivot[c];
            for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= &f * p;
            }
        }
    }
    d
}

/// Inverse through reduction of `[m | I]`.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.rows();
    let aug: Rows = to_rows(m)
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, pivots) = reduce(aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let rows: Rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(from_rows(&rows, n))
}

/// Moore-Penrose inverse from a full-rank factorization `m = F H`, which is
/// in particular a `{1}`-inverse: `m G m = m`.
pub fn one_inverse(m: &RationalMatrix) -> RationalMatrix {
    let (rows_n, cols_n) = (m.rows(), m.cols());
    let (red, pivots) = reduce(to_rows(m), cols_n);
    let r = pivots.len();
    if r == 0 {
        return RationalMatrix::zeros(cols_n, rows_n);
    }
    let rows = to_rows(m);
    let f: Rows = rows.iter().map(|row| pivots.iter().map(|&c| row[c].clone()).collect()).collect();
    let h: Rows = red[..r].to_vec();
    let ft = transpose(&f, r);
    let ht = transpose(&h, cols_n);
    let ftf = from_rows(&mul(&ft, &f, rows_n, r), r);
    let hht = from_rows(&mul(&h, &ht, cols_n, r), r);
    let ftf_inv = to_rows(&inverse(&ftf).unwrap());
    let hht_inv = to_rows(&inverse(&hht).unwrap());
    let left = mul(&ht, &hht_inv, r, r);
    let right = mul(&ftf_inv, &ft, r, rows_n);
    from_rows(&mul(&left, &right, r, rows_n), rows_n)
}

/// Drazin inverse by Cline's formula `a^k (a^{2k+1})^(1) a^k`, valid for
/// any `k` at least the index; `k = n` is used.
pub fn drazin_oracle(a: &RationalMatrix) -> RationalMatrix {
    let n = a.rows();
    let mut ak = RationalMatrix::identity(n);
    for _ in 0..n {
        ak = from_rows(&mul(&to_rows(&ak), &to_rows(a), n, n), n);
    }
    let a2k1 = from_rows(&mul(&mul(&to_rows(&ak), &to_rows(&ak), n, n), &to_rows(a), n, n), n);
    let g = one_inverse(&a2k1);
    from_rows(&mul(&mul(&to_rows(&ak), &to_rows(&g), n, n), &to_rows(&ak), n, n), n)
}

/// Coefficients (constant term first) of `det(xI - a)`, interpolated from
/// its values at `x = 0..=n`.
pub fn charpoly_oracle(a: &RationalMatrix) -> Vec<Rational> {
    let n = a.rows();
    let mut system: Rows = Vec::new();
    for x in 0..=n as i64 {
        let shifted = &RationalMatrix::scalar(n, &rat(x)) - a;
        let mut row: Vec<Rational> = (0..=n as u32).map(|k| rat(x.pow(k))).collect();
        row.push(det(&shifted));
        system.push(row);
    }
    let (red, _) = reduce(system, n + 2);
    red.into_iter().map(|r| r[n + 1].clone()).collect()
}

pub fn int_matrix_of(n: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
        RationalMatrix::from_vec(n, n, v.into_iter().map(rat).collect()).unwrap()
    })
}

/// Square integer matrices of size `dims` with entries in `[-bound, bound]`.
pub fn int_matrix(dims: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    dims.prop_flat_map(move |n| int_matrix_of(n, bound))
}

pub fn int_pair(dims: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = (RationalMatrix, RationalMatrix)> {
    dims.prop_flat_map(move |n| (int_matrix_of(n, bound), int_matrix_of(n, bound)))
}

/// Sparse integer matrices, which have nontrivial kernels and nilpotent
/// parts far more often than dense ones.
pub fn sparse_matrix(dims: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    dims.prop_flat_map(move |n| {
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -bound..=bound], n * n).prop_map(move |v| {
            RationalMatrix::from_vec(n, n, v.into_iter().map(rat).collect()).unwrap()
        })
    })
}

/// Unimodular matrix built from a product of elementary row additions.
pub fn unimodular(n: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec((0..n, 0..n, prop_oneof![Just(-1i64), Just(1i64)]), 0..2 * n + 1).prop_map(
        move |ops| {
            let mut p = RationalMatrix::identity(n);
            for (i, j, s) in ops {
                if i != j {
                    let mut e = RationalMatrix::identity(n);
                    e.set(i, j, rat(s));
                    p = &e * &p;
                }
            }
            p
        },
    )
}
