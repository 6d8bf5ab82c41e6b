//! Linear subspaces of `Q^n` in a canonical basis, and reducing pairs.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{nullspace_vectors, rref, Rational, RationalMatrix};

/// A subspace of `Q^ambient`.
///
/// The basis columns are the nonzero rows of the reduced row-echelon form of
/// any spanning set (transposed), so two equal subspaces always carry
/// identical bases and equality is plain matrix equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RationalMatrix,
    // Row index of the leading 1 of each basis column.
    pivots: Vec<usize>,
}

impl Subspace {
    /// Column space of `generators`.
    pub fn from_generators(generators: &RationalMatrix) -> Self {
        let ambient = generators.rows();
        let (reduced, pivots, rank) = rref(&generators.transpose());
        let basis = reduced.row_block(0, rank).transpose();
        Self {
            ambient,
            basis: if rank == 0 {
                RationalMatrix::zeros(ambient, 0)
            } else {
                basis
            },
            pivots,
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        Self::from_generators(&RationalMatrix::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: RationalMatrix::zeros(ambient, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: RationalMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<Rational>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Self::span(ambient, &vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` lies
    /// outside the subspace. Each basis column has a 1 at its pivot row and
    /// zeros at every other pivot row, so the coordinates are just the pivot
    /// entries of `v`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.basis.mul_vec(&coords) == v).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && other.dim() <= self.dim()
            && other
                .basis_vectors()
                .iter()
                .all(|v| self.contains_vector(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::from_generators(&self.basis.hstack(&other.basis)))
    }

    /// Intersection, from the kernel of `[A | -B]`: a vector `(y, z)` in it
    /// gives the common element `A y = B z`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let joint = self.basis.hstack(&(-&other.basis));
        let k = self.dim();
        let vectors: Vec<Vec<Rational>> = nullspace_vectors(&joint)
            .into_iter()
            .map(|yz| self.basis.mul_vec(&yz[..k]))
            .collect();
        Ok(Self::span(self.ambient, &vectors))
    }

    /// `dim(outer / inner)`; refuses pairs that are not nested.
    pub fn quotient_dim(outer: &Subspace, inner: &Subspace) -> Result<usize> {
        outer.check_ambient(inner)?;
        if !outer.contains(inner) {
            return Err(Error::NotNested {
                outer: outer.dim(),
                inner: inner.dim(),
            });
        }
        Ok(outer.dim() - inner.dim())
    }

    /// `t(self)`.
    pub fn image(&self, t: &RationalMatrix) -> Subspace {
        Self::from_generators(&(t * &self.basis))
    }

    /// Canonical basis matrix in the matrix text format; the zero subspace
    /// of `Q^n` is `n 0`.
    pub fn to_text(&self) -> String {
        self.basis.to_text()
    }

    /// Parses a basis (or any spanning) matrix and canonicalises it.
    pub fn from_text(text: &str) -> Result<Subspace> {
        Ok(Self::from_generators(&RationalMatrix::from_text(text)?))
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}, basis {:?})",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::from_text(&s).map_err(serde::de::Error::custom)
    }
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn quotient_dim(outer: &Subspace, inner: &Subspace) -> Result<usize> {
    Subspace::quotient_dim(outer, inner)
}

/// Two complementary subspaces: `m_part ⊕ n_part` is the whole space.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RedPair {
    m_part: Subspace,
    n_part: Subspace,
}

impl RedPair {
    pub fn new(m_part: Subspace, n_part: Subspace) -> Result<Self> {
        m_part.check_ambient(&n_part)?;
        let whole = m_part.dim() + n_part.dim() == m_part.ambient();
        if !whole || !m_part.intersect(&n_part)?.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "subspaces of dims {} and {} do not decompose Q^{}",
                m_part.dim(),
                n_part.dim(),
                m_part.ambient()
            )));
        }
        Ok(Self { m_part, n_part })
    }

    pub fn m_part(&self) -> &Subspace {
        &self.m_part
    }

    pub fn n_part(&self) -> &Subspace {
        &self.n_part
    }

    pub fn ambient(&self) -> usize {
        self.m_part.ambient()
    }

    /// `[basis(M) | basis(N)]`, invertible by construction.
    pub fn change_of_basis(&self) -> RationalMatrix {
        self.m_part.basis().hstack(self.n_part.basis())
    }
}
