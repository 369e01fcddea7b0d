//   Copyright 2026 toric-mmp developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Points of the dual lattices `M` and `N`, and the small amount of exact
//! arithmetic built on top of them.
//!
//! Both lattices share one representation, [`Point`], tagged with a zero-sized
//! side marker. The pairing is only defined between an [`NSide`] point and an
//! [`MSide`] point, so swapping the arguments does not compile.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("the zero vector has no primitive generator")]
    ZeroVector,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("expected {expected} generators, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("point lies outside the span of the generators")]
    OutsideSpan,
}

/// Tag for the lattice `N` where fans live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NSide {}

/// Tag for the dual lattice `M` where polytopes live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MSide {}

/// Scalar types a [`Point`] may carry.
pub trait Coord:
    Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Zero + One + Signed
{
    fn to_rational(&self) -> Rational;
}

impl Coord for Integer {
    fn to_rational(&self) -> Rational {
        Rational::from_integer(self.clone())
    }
}

impl Coord for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<S, T> {
    coords: Vec<T>,
    side: PhantomData<S>,
}

/// A lattice point of `N`: ray generators, wall relations, subdivision points.
pub type NPoint = Point<NSide, Integer>;
/// A lattice point of `M`: facet normals of cones, characters.
pub type MPoint = Point<MSide, Integer>;
/// A point of `N ⊗ Q`.
pub type NRational = Point<NSide, Rational>;
/// A point of `M ⊗ Q`: polytope vertices and linear parts of support functions.
pub type MRational = Point<MSide, Rational>;

impl<S, T: Coord> Point<S, T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point { coords, side: PhantomData }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut coords = vec![T::zero(); dim];
        coords[i] = T::one();
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Point<S, Rational> {
        Point::new(self.coords.iter().map(Coord::to_rational).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "adding points of different dimension");
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "subtracting points of different dimension");
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coords.iter().map(|a| a.clone() * k.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a.clone()).collect())
    }
}

impl<S> Point<S, Integer> {
    pub fn from_i64(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| Integer::from(c)).collect())
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> Integer {
        self.coords.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }
}

impl<S> Point<S, Rational> {
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self::new(coords.iter().map(|&(n, d)| Rational::new(n.into(), d.into())).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }

    /// The integral point if every coordinate is an integer.
    pub fn to_integral(&self) -> Option<Point<S, Integer>> {
        self.is_integral()
            .then(|| Point::new(self.coords.iter().map(|c| c.to_integer()).collect()))
    }
}

impl<S, T> Index<usize> for Point<S, T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<S, T: fmt::Display> fmt::Display for Point<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<S, T: fmt::Display> fmt::Debug for Point<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<A: Coord> Point<NSide, A> {
    /// The canonical pairing with an `M`-side point.
    ///
    /// Panics on a dimension mismatch; use [`pairing`] for a checked version.
    pub fn pair<B: Coord>(&self, m: &Point<MSide, B>) -> Rational {
        pairing(self, m).expect("pairing of points with different dimensions")
    }
}

/// Exact value of `(p, m)`.
pub fn pairing<A: Coord, B: Coord>(
    p: &Point<NSide, A>,
    m: &Point<MSide, B>,
) -> Result<Rational, LatticeError> {
    if p.dim() != m.dim() {
        return Err(LatticeError::DimensionMismatch { left: p.dim(), right: m.dim() });
    }
    Ok(p.coords
        .iter()
        .zip(&m.coords)
        .fold(Rational::zero(), |acc, (a, b)| acc + a.to_rational() * b.to_rational()))
}

/// Integer-valued pairing of two lattice points.
pub fn pairing_int(p: &NPoint, m: &MPoint) -> Integer {
    assert_eq!(p.dim(), m.dim(), "pairing of points with different dimensions");
    p.coords.iter().zip(&m.coords).map(|(a, b)| a * b).sum()
}

/// Divide out the gcd of the coordinates.
pub fn primitivize<S>(v: &Point<S, Integer>) -> Result<Point<S, Integer>, LatticeError> {
    let g = v.content();
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(Point::new(v.coords.iter().map(|c| c / &g).collect()))
}

/// The primitive lattice point on the ray through a nonzero rational point.
pub fn primitive_on_ray<S>(v: &Point<S, Rational>) -> Result<Point<S, Integer>, LatticeError> {
    let denom = v.coords.iter().fold(Integer::one(), |l, c| l.lcm(c.denom()));
    let scaled = Point::new(v.coords.iter().map(|c| (c * Rational::from_integer(denom.clone())).to_integer()).collect());
    primitivize(&scaled)
}

/// Coefficients `a_i` with `u = Σ a_i · generators[i]`.
pub fn simplicial_coordinates<T: Coord>(
    u: &Point<NSide, T>,
    generators: &[NPoint],
) -> Result<Vec<Rational>, LatticeError> {
    for g in generators {
        if g.dim() != u.dim() {
            return Err(LatticeError::DimensionMismatch { left: u.dim(), right: g.dim() });
        }
    }
    let gens: Vec<Vec<Rational>> = generators.iter().map(|g| g.to_rational().into_coords()).collect();
    if linalg::rank(&gens) < gens.len() {
        return Err(LatticeError::DependentGenerators);
    }
    let target: Vec<Rational> = u.to_rational().into_coords();
    linalg::express_in_span(&gens, &target).ok_or(LatticeError::OutsideSpan)
}

/// `|det|` of `n` generators in dimension `n`; 1 exactly when they form a basis of `N`.
pub fn cone_multiplicity(generators: &[NPoint]) -> Result<Integer, LatticeError> {
    let n = generators.first().map_or(0, Point::dim);
    if generators.len() != n {
        return Err(LatticeError::WrongCount { expected: n, found: generators.len() });
    }
    if let Some(g) = generators.iter().find(|g| g.dim() != n) {
        return Err(LatticeError::DimensionMismatch { left: n, right: g.dim() });
    }
    let rows: Vec<Vec<Integer>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    let det = linalg::determinant(&rows);
    if det.is_zero() {
        return Err(LatticeError::DependentGenerators);
    }
    Ok(det.abs())
}
