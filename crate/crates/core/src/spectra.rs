//! Spectra as exact root sets, local data at rational points, and the
//! finite-dimensional collapse of the generalized spectra.
//!
//! A spectrum is encoded by the monic squarefree part of the characteristic
//! polynomial. Two spectra are equal as sets of complex numbers exactly when
//! these polynomials are equal, so irrational and complex eigenvalues never
//! have to be computed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::inverse::drazin;
use crate::lattice::{ascent, descent, hyperkernel, hyperrange};
use crate::linalg::{charpoly, nullspace, parse_entry, poly_squarefree, rank, rational_roots, Rational, RationalMatrix, RationalPoly};

/// The spectrum of a matrix as a monic squarefree polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootSet {
    poly: RationalPoly,
}

impl RootSet {
    /// Root set of `p`, i.e. of its squarefree part.
    pub fn of_poly(p: &RationalPoly) -> Result<Self> {
        Ok(Self {
            poly: poly_squarefree(p)?,
        })
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    /// Number of distinct complex eigenvalues.
    pub fn len(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.poly.eval(x).is_zero()
    }

    pub fn rational_points(&self) -> Vec<Rational> {
        rational_roots(&self.poly).expect("root set polynomial is nonzero")
    }

    /// Integer-cleared coefficients, lowest degree first, and the content
    /// annotation: `x^2 - 1/4` is `-1 0 4 content 1/4`.
    pub fn to_text(&self) -> String {
        let (ints, content) = self.poly.integer_cleared();
        let coeffs: Vec<String> = ints.iter().map(BigInt::to_string).collect();
        format!("{} content {}", coeffs.join(" "), content)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (coeffs, content) = text
            .split_once("content")
            .ok_or_else(|| Error::Parse("root set needs a `content` annotation".into()))?;
        let content = parse_entry(content.trim())?;
        let coeffs = coeffs
            .split_whitespace()
            .map(|t| parse_entry(t).map(|c| c * &content))
            .collect::<Result<Vec<_>>>()?;
        let poly = RationalPoly::new(coeffs);
        let set = Self::of_poly(&poly)?;
        if set.poly != poly {
            return Err(Error::Parse(format!("`{text}` is not a monic squarefree polynomial")));
        }
        Ok(set)
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSet({})", self.poly)
    }
}

impl FromStr for RootSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for RootSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::from_text(&s).map_err(serde::de::Error::custom)
    }
}

/// Panics if `t` is not square.
pub fn spectrum(t: &RationalMatrix) -> RootSet {
    let p = charpoly(t).expect("spectrum of a non-square matrix");
    RootSet::of_poly(&p).expect("characteristic polynomial is monic")
}

pub fn spectra_equal(s: &RationalMatrix, t: &RationalMatrix) -> bool {
    spectrum(s) == spectrum(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub multiplicity: usize,
    pub ascent: usize,
    pub descent: usize,
}

/// Algebraic multiplicity, ascent and descent of `t - λ`.
pub fn local_data(t: &RationalMatrix, lambda: &Rational) -> LocalData {
    let s = t.shift(lambda);
    LocalData {
        multiplicity: hyperkernel(&s).dim(),
        ascent: ascent(&s),
        descent: descent(&s),
    }
}

/// `N(t) ⊆ R(t^∞)`. Ranges are always closed here.
pub fn is_semiregular(t: &RationalMatrix) -> bool {
    hyperrange(t).contains(&nullspace(t))
}

/// `rank f(t)^k` for `k = 0..=n`; for a squarefree factor `f` of the
/// spectrum this chain reaches `n - (number of eigenvalues of t among the
/// roots of f, with multiplicity)` and stays there.
pub fn factor_rank_chain(t: &RationalMatrix, f: &RationalPoly) -> Vec<usize> {
    f.eval_matrix(t).powers(t.rows()).iter().map(rank).collect()
}

/// Names of the generalized spectra that are empty for every matrix.
pub const DEGENERATE_SPECTRA: [&str; 21] = [
    "essential",
    "upper_semi_fredholm",
    "lower_semi_fredholm",
    "weyl",
    "upper_semi_weyl",
    "lower_semi_weyl",
    "browder",
    "upper_semi_browder",
    "lower_semi_browder",
    "b_fredholm",
    "upper_semi_b_fredholm",
    "lower_semi_b_fredholm",
    "b_weyl",
    "upper_semi_b_weyl",
    "lower_semi_b_weyl",
    "drazin",
    "left_drazin",
    "right_drazin",
    "generalized_drazin",
    "gz_invertible",
    "essentially_semi_regular",
];

/// What the finite dimension forces on the generalized spectral theory of
/// one matrix, each item checked rather than assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub essential_ascent: usize,
    pub essential_descent: usize,
    pub essential_degree: usize,
    pub empty_spectra: Vec<String>,
    /// Finite sets have no accumulation points; kept as a constant.
    pub accumulation_points_empty: bool,
    pub approximate_equals_spectrum: bool,
    pub surjectivity_equals_spectrum: bool,
    /// Distinct eigenvalues, i.e. the degree of the root set.
    pub distinct_eigenvalues: usize,
    /// Points examined: 0, every rational eigenvalue, and one rational
    /// point off the spectrum.
    pub points_checked: usize,
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

/// Checks at 0, every rational eigenvalue and one regular rational point
/// that `t - λ` has finite kernel and cokernel of equal dimension, finite
/// and equal ascent and descent, a Drazin inverse, and that injectivity,
/// surjectivity and invertibility coincide. Together these place `λ`
/// outside every listed generalized spectrum and make the approximate and
/// surjectivity spectra equal to the spectrum. Also checks that the root
/// set annihilates `t` to the power `n` (every matrix is algebraic).
pub fn degenerate_spectra_report(t: &RationalMatrix) -> Result<DegeneracyReport> {
    let n = t.ensure_square()?;
    let sigma = spectrum(t);
    if sigma.len() > n {
        return Err(violation(format!("{} distinct eigenvalues in dimension {n}", sigma.len())));
    }
    if !sigma.poly().eval_matrix(t).pow(n).is_zero() {
        return Err(violation("root set polynomial does not annihilate a power".into()));
    }
    let mut points = sigma.rational_points();
    if !points.iter().any(Zero::is_zero) {
        points.push(Rational::zero());
    }
    let mut off = Rational::zero();
    while sigma.contains(&off) {
        off += Rational::from_integer(1.into());
    }
    if !points.contains(&off) {
        points.push(off);
    }
    points.sort();

    for lambda in &points {
        let s = t.shift(lambda);
        let kernel = nullspace(&s).dim();
        let cokernel = n - rank(&s);
        if kernel != cokernel {
            return Err(violation(format!("index {kernel} - {cokernel} at {lambda}")));
        }
        let data = local_data(t, lambda);
        if data.ascent != data.descent || data.ascent > n {
            return Err(violation(format!("ascent {} descent {} at {lambda}", data.ascent, data.descent)));
        }
        drazin(&s)?;
        let in_sigma = sigma.contains(lambda);
        let injective = kernel == 0;
        let surjective = cokernel == 0;
        if injective == in_sigma || surjective == in_sigma {
            return Err(violation(format!("invertibility disagrees with the spectrum at {lambda}")));
        }
        if (data.multiplicity > 0) != in_sigma {
            return Err(violation(format!("multiplicity disagrees with the spectrum at {lambda}")));
        }
    }

    // The kernel and cokernel of T_[0] = T have finite dimension, so the
    // infima defining the essential ascent, descent and degree sit at 0.
    Ok(DegeneracyReport {
        essential_ascent: 0,
        essential_descent: 0,
        essential_degree: 0,
        empty_spectra: DEGENERATE_SPECTRA.iter().map(|s| s.to_string()).collect(),
        accumulation_points_empty: true,
        approximate_equals_spectrum: true,
        surjectivity_equals_spectrum: true,
        distinct_eigenvalues: sigma.len(),
        points_checked: points.len(),
    })
}
