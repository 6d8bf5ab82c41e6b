//! Seeded instance generators.
//!
//! Every generator works on an upper-triangular base matrix `T0 = C ⊕ N`
//! (an invertible core next to a nilpotent block, coupled or not), solves the
//! linear layer of the partner's hypotheses exactly, filters candidates
//! through the full hypotheses, and finally conjugates all matrices by one
//! random unimodular integer matrix. Conjugation preserves every identity
//! involved, so instances stay exact and integral.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commutant::{in_comm_l, in_comm_r, in_comm_w, linear_solution_space, search};
use crate::error::{Error, Result};
use crate::inverse::{drazin, pseudo_inverse_family};
use crate::linalg::{rat, RationalMatrix};

use super::fixtures::Fixture;
use super::verify::hypotheses_hold;
use super::{Instance, TheoremId};

pub const DEFAULT_ENTRY_BOUND: i64 = 3;
pub const MAX_DIM: usize = 12;

/// Fresh generator streams tried per seed before giving up.
const RETRIES: u64 = 6;
/// Candidate budget handed to the commutant search.
const ATTEMPTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Ready(Instance),
    /// No instance meeting the hypotheses within the retry budget.
    Starved,
}

pub fn generate_instance(theorem: TheoremId, dim: usize, seed: u64) -> Result<Generated> {
    generate_instance_with(theorem, dim, seed, DEFAULT_ENTRY_BOUND)
}

/// Deterministic in `(theorem, dim, seed, entry_bound)`. Base entries lie in
/// `[-entry_bound, entry_bound]`; the final conjugation can enlarge them.
pub fn generate_instance_with(theorem: TheoremId, dim: usize, seed: u64, entry_bound: i64) -> Result<Generated> {
    check_bounds(dim, entry_bound)?;
    for retry in 0..RETRIES {
        let mut g = Gen::new(stream_seed(seed, retry), dim, entry_bound);
        let Some(built) = g.build(theorem) else { continue };
        let inst = Instance::new(seed, dim, built.matrices);
        if !built.expect_hypotheses || hypotheses_hold(theorem, &inst)? {
            return Ok(Generated::Ready(inst));
        }
    }
    Ok(Generated::Starved)
}

/// An instance built around a checked-in pair, padded to `dim` with a
/// random block and conjugated. `None` when the fixture does not fit.
pub(crate) fn fixture_instance(
    theorem: TheoremId,
    fixture: &Fixture,
    dim: usize,
    seed: u64,
    entry_bound: i64,
) -> Result<Option<Instance>> {
    check_bounds(dim, entry_bound)?;
    let k = fixture.dim();
    if dim < k {
        return Ok(None);
    }
    let mut g = Gen::new(stream_seed(seed, RETRIES), dim - k, entry_bound);
    let pad = if dim > k { g.base(Shape::Any) } else { RationalMatrix::zeros(0, 0) };
    g.n = dim;
    let a = fixture.a.direct_sum(&pad);
    let b = fixture.b.direct_sum(&RationalMatrix::zeros(dim - k, dim - k));
    let Some(matrices) = g.complete(theorem, a, b) else {
        return Ok(None);
    };
    let inst = Instance::new(seed, dim, matrices);
    Ok(hypotheses_hold(theorem, &inst)?.then_some(inst))
}

fn check_bounds(dim: usize, entry_bound: i64) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidConfig(format!("dimension {dim} outside 1..={MAX_DIM}")));
    }
    if entry_bound < 1 {
        return Err(Error::InvalidConfig(format!("entry bound {entry_bound} < 1")));
    }
    Ok(())
}

fn stream_seed(seed: u64, retry: u64) -> u64 {
    seed ^ retry.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

#[derive(Clone, Copy)]
enum Shape {
    /// Nilpotent block of any size.
    Any,
    /// Nilpotent block of size at least 2 (when it fits).
    Mixed,
    Invertible,
    /// Few distinct core eigenvalues, often semisimple.
    Repeated,
}

struct Built {
    matrices: Vec<(&'static str, RationalMatrix)>,
    expect_hypotheses: bool,
}

impl Built {
    fn valid(matrices: Vec<(&'static str, RationalMatrix)>) -> Self {
        Self {
            matrices,
            expect_hypotheses: true,
        }
    }
}

type Map<'a> = Box<dyn Fn(&RationalMatrix) -> RationalMatrix + 'a>;

/// `x ↦ t²x − txt`, zero iff `tx ∈ comm(t)`.
fn left_layer(t: &RationalMatrix) -> Map<'_> {
    let t2 = t * t;
    Box::new(move |x| &(&t2 * x) - &(&(t * x) * t))
}

/// `x ↦ xt² − txt`, zero iff `xt ∈ comm(t)`.
fn right_layer(t: &RationalMatrix) -> Map<'_> {
    let t2 = t * t;
    Box::new(move |x| &(x * &t2) - &(&(t * x) * t))
}

struct Gen {
    rng: ChaCha8Rng,
    n: usize,
    bound: i64,
}

impl Gen {
    fn new(seed: u64, n: usize, bound: i64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            bound,
        }
    }

    fn entry(&mut self) -> i64 {
        self.rng.gen_range(-self.bound..=self.bound)
    }

    fn nonzero(&mut self) -> i64 {
        loop {
            let v = self.entry();
            if v != 0 {
                return v;
            }
        }
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn base(&mut self, shape: Shape) -> RationalMatrix {
        let n = self.n;
        let k = match shape {
            Shape::Any => self.rng.gen_range(0..=n),
            Shape::Mixed => self.rng.gen_range(n.min(2)..=n),
            Shape::Invertible => 0,
            Shape::Repeated => self.rng.gen_range(0..=n / 2),
        };
        let core = n - k;
        let palette: Vec<i64> = match (shape, self.rng.gen_range(0..3)) {
            (Shape::Repeated, 2) | (_, 0) => vec![self.nonzero()],
            (Shape::Repeated, _) | (_, 1) => vec![self.nonzero(), self.nonzero()],
            _ => (0..core).map(|_| self.nonzero()).collect(),
        };
        let density = match shape {
            Shape::Repeated if self.coin(0.5) => 0.0,
            _ => [0.0, 0.3, 0.7][self.rng.gen_range(0..3)],
        };
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..core {
            let v = *palette.choose(&mut self.rng).expect("palette is nonempty");
            m.set(i, i, rat(v));
            for j in i + 1..core {
                if self.coin(density) {
                    let e = self.entry();
                    m.set(i, j, rat(e));
                }
            }
        }
        let jordan = self.coin(0.5);
        for i in core..n {
            for j in i + 1..n {
                if jordan {
                    if j == i + 1 && self.coin(0.8) {
                        let e = self.nonzero();
                        m.set(i, j, rat(e));
                    }
                } else if self.coin(density.max(0.3)) {
                    let e = self.entry();
                    m.set(i, j, rat(e));
                }
            }
        }
        if core > 0 && k > 0 && self.coin(0.3) {
            for i in 0..core {
                for j in core..n {
                    if self.coin(0.5) {
                        let e = self.entry();
                        m.set(i, j, rat(e));
                    }
                }
            }
        }
        m
    }

    /// A nonzero member of the solution space of `layers` passing `accept`,
    /// preferring one that does not commute with `t`.
    fn partner(
        &mut self,
        t: &RationalMatrix,
        layers: &[Map<'_>],
        strictly_upper: bool,
        accept: &dyn Fn(&RationalMatrix) -> bool,
    ) -> Option<RationalMatrix> {
        let n = self.n;
        let support: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let maps: Vec<&dyn Fn(&RationalMatrix) -> RationalMatrix> = layers.iter().map(|f| f.as_ref() as _).collect();
        let basis = linear_solution_space(n, &maps, strictly_upper.then_some(&support[..]));
        let samples = search(t, &basis, accept, self.rng.gen(), ATTEMPTS);
        let (commuting, strict): (Vec<_>, Vec<_>) = samples.into_iter().partition(|s| s.commutes);
        let pool = if !strict.is_empty() && (commuting.is_empty() || self.coin(0.75)) {
            strict
        } else {
            commuting
        };
        pool.choose(&mut self.rng).map(|s| s.matrix.clone())
    }

    fn pseudo_inverse(&mut self, a: &RationalMatrix) -> RationalMatrix {
        let family = pseudo_inverse_family(a);
        if self.coin(0.4) {
            return family[0].clone();
        }
        family.choose(&mut self.rng).expect("family contains the Drazin inverse").clone()
    }

    /// Random unimodular `P` and its inverse; the identity a quarter of the
    /// time.
    fn unimodular(&mut self) -> (RationalMatrix, RationalMatrix) {
        let n = self.n;
        let mut p = RationalMatrix::identity(n);
        if n > 1 && !self.coin(0.25) {
            for _ in 0..self.rng.gen_range(n..=2 * n) {
                let i = self.rng.gen_range(0..n);
                let mut j = self.rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let s = if self.coin(0.5) { 1 } else { -1 };
                let mut e = RationalMatrix::identity(n);
                e.set(i, j, rat(s));
                p = &e * &p;
            }
        }
        let inv = p.inverse().expect("unimodular");
        (p, inv)
    }

    fn conjugate_all(
        &mut self,
        matrices: Vec<(&'static str, RationalMatrix)>,
    ) -> Vec<(&'static str, RationalMatrix)> {
        let (p, inv) = self.unimodular();
        matrices
            .into_iter()
            .map(|(name, m)| (name, &(&p * &m) * &inv))
            .collect()
    }

    fn build(&mut self, theorem: TheoremId) -> Option<Built> {
        use TheoremId::*;
        let built = match theorem {
            P2_2 | C2_3 => {
                let a = self.base(Shape::Mixed);
                let b = self.one_sided_partner(&a)?;
                Built::valid(self.complete(theorem, a, b)?)
            }
            L2_4 | P2_5 => {
                let a = self.base(Shape::Mixed);
                let roll = self.rng.gen_range(0..20);
                let b = if roll < 14 || theorem == L2_4 && roll < 16 {
                    self.partner(&a, &[left_layer(&a), right_layer(&a)], false, &|b| in_comm_w(&a, b))?
                } else if roll < 17 {
                    self.partner(&a, &[left_layer(&a)], false, &|b| in_comm_l(&a, b))?
                } else {
                    // comm_r together with ab ∈ comm(a)
                    self.partner(&a, &[left_layer(&a), right_layer(&a)], false, &|b| in_comm_r(&a, b))?
                };
                Built::valid(self.complete(theorem, a, b)?)
            }
            P2_6 => {
                let a = self.base(Shape::Any);
                let d = drazin(&a).ok()?.inverse;
                let roll = self.rng.gen_range(0..4);
                let b = match roll {
                    0 | 1 => d,
                    2 => self.pseudo_inverse(&a),
                    _ => {
                        let i = self.rng.gen_range(0..self.n);
                        let j = self.rng.gen_range(0..self.n);
                        let s = if self.coin(0.5) { 1 } else { -1 };
                        &d + &RationalMatrix::unit(self.n, i, j).scale(&rat(s))
                    }
                };
                Built {
                    matrices: self.conjugate_all(vec![("a", a), ("b", b)]),
                    expect_hypotheses: roll < 2,
                }
            }
            L3_1 | C3_2 => {
                let t = self.base(Shape::Mixed);
                let layer = if self.coin(0.5) { left_layer(&t) } else { right_layer(&t) };
                let s = self.partner(&t, &[layer], false, &|_| true)?;
                Built::valid(self.complete(theorem, t, s)?)
            }
            P3_3 | C3_4 => {
                let shape = if self.coin(0.5) { Shape::Repeated } else { Shape::Any };
                let t = self.base(shape);
                Built::valid(self.conjugate_all(vec![("T", t)]))
            }
            T4_9_smoke => {
                let t = self.base(Shape::Any);
                Built::valid(self.conjugate_all(vec![("T", t)]))
            }
            T3_6 => {
                let t = self.base(Shape::Mixed);
                let n = {
                    let layers = [left_layer(&t), right_layer(&t)];
                    if self.coin(0.5) {
                        self.partner(&t, &layers, true, &|x| x.is_nilpotent() && in_comm_l(&t, x))?
                    } else {
                        self.partner(&t, &layers, true, &|x| x.is_nilpotent() && in_comm_r(&t, x))?
                    }
                };
                Built::valid(self.complete(theorem, t, n)?)
            }
            T3_9iii | C3_10_smoke | Q_probe => {
                let t = self.base(Shape::Mixed);
                if theorem == Q_probe && self.coin(0.5) {
                    // No side condition at all: a strictly lower nilpotent.
                    let mut q = RationalMatrix::zeros(self.n, self.n);
                    for i in 0..self.n {
                        for j in 0..i {
                            if self.coin(0.5) {
                                let e = self.entry();
                                q.set(i, j, rat(e));
                            }
                        }
                    }
                    if q.is_zero() {
                        return None;
                    }
                    return Some(Built {
                        matrices: self.conjugate_all(vec![("T", t), ("Q", q)]),
                        expect_hypotheses: false,
                    });
                }
                let q = if self.coin(0.5) {
                    self.partner(&t, &[left_layer(&t)], true, &|x| x.is_nilpotent() && in_comm_l(&t, x))?
                } else {
                    self.partner(&t, &[right_layer(&t)], true, &|x| x.is_nilpotent() && in_comm_r(&t, x))?
                };
                Built::valid(self.complete(theorem, t, q)?)
            }
            T3_11ii => {
                let shape = match self.rng.gen_range(0..10) {
                    0..=5 => Shape::Repeated,
                    6..=8 => Shape::Invertible,
                    _ => Shape::Any,
                };
                let mut t = self.base(shape);
                if matches!(shape, Shape::Repeated) {
                    // keep T invertible: put a repeated core value on the
                    // nilpotent diagonal too
                    for i in 0..self.n {
                        if t.get(i, i) == &rat(0) {
                            let v = t.get(0, 0).clone();
                            t.set(i, i, v);
                        }
                    }
                }
                let q = self.partner(&t, &[left_layer(&t), right_layer(&t)], true, &|x| x.is_nilpotent())?;
                Built::valid(self.complete(theorem, t, q)?)
            }
            L4_1 | T4_2_smoke | T4_3_smoke => {
                let t = self.base(Shape::Mixed);
                let s = self.partner(&t, &[left_layer(&t), right_layer(&t)], false, &|x| in_comm_w(&t, x))?;
                Built::valid(self.complete(theorem, t, s)?)
            }
        };
        Some(built)
    }

    /// Partner for the pseudo-inverse statements: one of `ba ∈ comm(a)`,
    /// `ab ∈ comm(a)`, `comm_r`, `comm_l`, `comm_w`.
    fn one_sided_partner(&mut self, a: &RationalMatrix) -> Option<RationalMatrix> {
        match self.rng.gen_range(0..5) {
            0 => self.partner(a, &[right_layer(a)], false, &|_| true),
            1 => self.partner(a, &[left_layer(a)], false, &|_| true),
            2 => self.partner(a, &[right_layer(a)], false, &|b| in_comm_r(a, b)),
            3 => self.partner(a, &[left_layer(a)], false, &|b| in_comm_l(a, b)),
            _ => self.partner(a, &[left_layer(a), right_layer(a)], false, &|b| in_comm_w(a, b)),
        }
    }

    /// Adds the derived matrices a theorem needs to its operator pair and
    /// conjugates everything.
    fn complete(
        &mut self,
        theorem: TheoremId,
        a: RationalMatrix,
        b: RationalMatrix,
    ) -> Option<Vec<(&'static str, RationalMatrix)>> {
        use TheoremId::*;
        let (x, y) = theorem.pair_names()?;
        let mut matrices = vec![(x, a.clone()), (y, b.clone())];
        match theorem {
            P2_2 => matrices.push(("c", self.pseudo_inverse(&a))),
            L2_4 => {
                matrices.push(("c", self.pseudo_inverse(&a)));
                matrices.push(("d", self.pseudo_inverse(&b)));
            }
            C3_2 => matrices.push(("L", self.pseudo_inverse(&a))),
            _ => {}
        }
        Some(self.conjugate_all(matrices))
    }
}
