mod support;

use proptest::prelude::*;
use support::*;
use weakcomm::lattice::{
    analytic_core, ascent, core_nilpotent_pair, descent, hyperkernel, hyperrange, is_invariant, is_red_pair,
    quasinilpotent_part, restriction,
};
use weakcomm::linalg::{nullspace, rat};
use weakcomm::spectra::{is_semiregular, local_data, spectra_equal, spectrum};
use weakcomm::RationalMatrix;

fn commuting_pair() -> impl Strategy<Value = (RationalMatrix, RationalMatrix)> {
    // A polynomial in `t` commutes with `t`.
    (sparse_matrix(2..=6, 2), proptest::collection::vec(-2i64..=2, 3)).prop_map(|(t, c)| {
        let n = t.rows();
        let s = &(&RationalMatrix::scalar(n, &rat(c[0])) + &t.scale(&rat(c[1]))) + &t.pow(2).scale(&rat(c[2]));
        (t, s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ascent_equals_descent(t in sparse_matrix(1..=6, 2)) {
        let p = ascent(&t);
        prop_assert_eq!(p, descent(&t));
        prop_assert!(p <= t.rows());
        prop_assert_eq!(oracle_rank(&t.pow(p)), oracle_rank(&t.pow(p + 1)));
        if p > 0 {
            prop_assert!(oracle_rank(&t.pow(p - 1)) > oracle_rank(&t.pow(p)));
        }
    }

    #[test]
    fn core_nilpotent_pair_reduces(t in sparse_matrix(1..=6, 2)) {
        let pair = core_nilpotent_pair(&t);
        prop_assert!(is_red_pair(&t, &pair));
        prop_assert_eq!(pair.m_part(), &hyperrange(&t));
        prop_assert_eq!(pair.n_part(), &hyperkernel(&t));
        prop_assert_eq!(&analytic_core(&t), pair.m_part());
        prop_assert_eq!(&quasinilpotent_part(&t), pair.n_part());
        let core = restriction(&t, pair.m_part()).unwrap();
        prop_assert!(core.rows() == 0 || inverse(&core).is_some());
        let nil = restriction(&t, pair.n_part()).unwrap();
        prop_assert!(nil.pow(nil.rows()).is_zero());
    }

    #[test]
    fn commuting_maps_leave_power_subspaces_invariant((t, s) in commuting_pair()) {
        for k in 0..=t.rows() {
            let tk = t.pow(k);
            prop_assert!(is_invariant(&s, &nullspace(&tk)));
            prop_assert!(is_invariant(&s, &weakcomm::linalg::colspace(&tk)));
        }
        prop_assert!(is_invariant(&s, &hyperrange(&t)));
        prop_assert!(is_invariant(&s, &hyperkernel(&t)));
    }

    #[test]
    fn spectrum_is_similarity_invariant((t, p) in (1usize..=5).prop_flat_map(|n| (int_matrix_of(n, 3), unimodular(n)))) {
        let conj = &(&p * &t) * &inverse(&p).unwrap();
        prop_assert!(spectra_equal(&t, &conj));
        for lambda in spectrum(&t).rational_points() {
            prop_assert_eq!(local_data(&t, &lambda), local_data(&conj, &lambda));
            prop_assert_eq!(oracle_rank(&t.shift(&lambda)) < t.rows(), true);
        }
    }

    #[test]
    fn semiregular_means_invertible(t in sparse_matrix(1..=5, 2)) {
        prop_assert_eq!(is_semiregular(&t), inverse(&t).is_some());
    }
}

#[test]
fn jordan_block_lattice() {
    let j = RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    assert_eq!(ascent(&j), 3);
    assert!(hyperrange(&j).is_zero());
    assert!(hyperkernel(&j).is_full());
    let mixed = RationalMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
    assert_eq!(hyperrange(&mixed).dim(), 1);
    assert_eq!(hyperkernel(&mixed).dim(), 2);
}
