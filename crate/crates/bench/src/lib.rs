//! Deterministic inputs for the kernel benchmarks in `benches/`.

use weakcomm::linalg::rat;
use weakcomm::RationalMatrix;

/// Dense `n × n` integer matrix with entries in `[-3, 3]`, fixed by `salt`.
pub fn dense(n: usize, salt: u64) -> RationalMatrix {
    let mut state = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let data = (0..n * n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            rat((state % 7) as i64 - 3)
        })
        .collect();
    RationalMatrix::from_vec(n, n, data).expect("n*n entries")
}

/// An invertible block next to a nilpotent Jordan chain, conjugated by a
/// unimodular matrix so that every entry is generally nonzero.
pub fn core_nilpotent(n: usize) -> RationalMatrix {
    let core = n / 2;
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..core {
        m.set(i, i, rat(i as i64 + 2));
        if i + 1 < core {
            m.set(i, i + 1, rat(1));
        }
    }
    for i in core..n.saturating_sub(1) {
        m.set(i, i + 1, rat(1));
    }
    let mut p = RationalMatrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        p.set(i, i + 1, rat(1));
    }
    let lower = p.transpose();
    let conj = &lower * &p;
    &(&conj * &m) * &conj.inverse().expect("unimodular")
}

/// Rank-two nilpotent with a large weak commutant.
pub fn sparse_nilpotent(n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in (0..n.saturating_sub(1)).step_by(2) {
        m.set(i, i + 1, rat(1));
    }
    m
}
