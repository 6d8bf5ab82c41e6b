mod support;

use proptest::prelude::*;
use support::*;
use weakcomm::linalg::{charpoly, colspace, nullspace, nullspace_vectors, poly_squarefree, rank, rat, rational_roots, rref};
use weakcomm::{RationalMatrix, RationalPoly, Subspace};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity(m in sparse_matrix(1..=6, 3)) {
        let n = m.cols();
        prop_assert_eq!(rank(&m), oracle_rank(&m));
        prop_assert_eq!(rank(&m) + nullspace(&m).dim(), n);
        for v in nullspace_vectors(&m) {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn rref_is_idempotent(m in sparse_matrix(1..=6, 4)) {
        let (r, pivots, k) = rref(&m);
        prop_assert_eq!(pivots.len(), k);
        let (r2, pivots2, k2) = rref(&r);
        prop_assert_eq!(&r, &r2);
        prop_assert_eq!(pivots, pivots2);
        prop_assert_eq!(k, k2);
        prop_assert_eq!(colspace(&m.transpose()), colspace(&r.transpose()));
    }

    #[test]
    fn charpoly_matches_determinant_interpolation(m in int_matrix(1..=5, 3)) {
        let p = charpoly(&m).unwrap();
        let expected = charpoly_oracle(&m);
        prop_assert_eq!(p.coeffs(), expected.as_slice());
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), Some(m.rows()));
    }

    #[test]
    fn cayley_hamilton(m in int_matrix(1..=6, 3)) {
        prop_assert!(charpoly(&m).unwrap().eval_matrix(&m).is_zero());
    }

    #[test]
    fn charpoly_is_similarity_invariant((m, p) in (1usize..=5).prop_flat_map(|n| (int_matrix_of(n, 3), unimodular(n)))) {
        let pinv = inverse(&p).unwrap();
        let conj = &(&p * &m) * &pinv;
        prop_assert_eq!(charpoly(&m).unwrap(), charpoly(&conj).unwrap());
    }

    #[test]
    fn squarefree_part_has_the_same_roots(roots in proptest::collection::vec(-4i64..=4, 1..=6)) {
        let p = roots.iter().fold(RationalPoly::one(), |acc, &r| acc.mul(&RationalPoly::linear(&rat(r))));
        let sq = poly_squarefree(&p).unwrap();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(sq.degree(), Some(distinct.len()));
        prop_assert!(sq.is_monic());
        let found = rational_roots(&sq).unwrap();
        prop_assert_eq!(found, distinct.into_iter().map(rat).collect::<Vec<_>>());
        let (_, r) = p.div_rem(&sq).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn grassmann_formula((a, b) in int_pair(1..=6, 2)) {
        let n = a.rows();
        let u = Subspace::from_generators(&a.column_block(0, n / 2 + 1));
        let v = Subspace::from_generators(&b.column_block(0, n / 2 + 1));
        let sum = u.sum(&v).unwrap();
        let meet = u.intersect(&v).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        prop_assert!(sum.contains(&u) && sum.contains(&v));
        prop_assert!(u.contains(&meet) && v.contains(&meet));
    }

    #[test]
    fn subspace_is_canonical((m, p) in (1usize..=5).prop_flat_map(|n| (int_matrix_of(n, 3), unimodular(n)))) {
        // Column operations do not change the span.
        prop_assert_eq!(Subspace::from_generators(&m), Subspace::from_generators(&(&m * &p)));
    }
}

#[test]
fn inverse_agrees_with_oracle() {
    let m = RationalMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
    assert_eq!(m.inverse().unwrap(), inverse(&m).unwrap());
    assert!(RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_err());
}

#[test]
fn text_round_trip() {
    let m = RationalMatrix::from_i64_rows(&[&[1, -2], &[0, 7]]).scale(&weakcomm::linalg::frac(1, 3));
    assert_eq!(RationalMatrix::from_text(&m.to_text()).unwrap(), m);
    assert!(RationalMatrix::from_text("2 2\n1 2\n3\n").is_err());
    assert!(RationalMatrix::from_text("1 1\n1/0\n").is_err());
}
