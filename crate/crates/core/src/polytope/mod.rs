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


//! Polytopes in `M_R` cut out by finitely many half-spaces.

pub mod dd;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{Integer, MPoint, MRational, NPoint, Rational};
use crate::linalg::{affine_rank, rank};

pub use dd::{cone_from_inequalities, ConeGenerators};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("no half-spaces given")]
    NoHalfspaces,
    #[error("half-space normals have mixed dimensions")]
    DimensionMismatch,
    #[error("zero normal vector")]
    ZeroNormal,
    #[error("intersection is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    LowerDimensional,
}

/// `{m : (normal, m) ≥ level}` with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    normal: NPoint,
    level: Rational,
}

impl Halfspace {
    /// Normalizes a non-primitive normal by rescaling the level.
    pub fn new(normal: NPoint, level: Rational) -> Result<Self, PolytopeError> {
        if normal.is_zero() {
            return Err(PolytopeError::ZeroNormal);
        }
        let c = normal.content();
        if c.is_one() {
            return Ok(Halfspace { normal, level });
        }
        let coords = normal.coords().iter().map(|x| x / &c).collect();
        Ok(Halfspace { normal: NPoint::new(coords), level: level / Rational::from_integer(c) })
    }

    pub fn normal(&self) -> &NPoint {
        &self.normal
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn value(&self, m: &MRational) -> Rational {
        self.normal.pair(m)
    }

    pub fn holds(&self, m: &MRational) -> bool {
        self.value(m) >= self.level
    }

    pub fn is_tight(&self, m: &MRational) -> bool {
        self.value(m) == self.level
    }

    /// Same inequality with the level moved by `delta` (negative relaxes).
    pub fn shifted(&self, delta: &Rational) -> Halfspace {
        Halfspace { normal: self.normal.clone(), level: &self.level + delta }
    }

    fn homogenized(&self) -> Vec<Integer> {
        let den = self.level.denom();
        let mut row: Vec<Integer> = self.normal.coords().iter().map(|x| x * den).collect();
        row.push(-self.level.numer().clone());
        row
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, m) >= {}", self.normal, self.level)
    }
}

/// Generators of a possibly unbounded polyhedron.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub vertices: Vec<MRational>,
    pub rays: Vec<MPoint>,
    pub lineality: Vec<MPoint>,
}

impl Polyhedron {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether every point satisfies `h`.
    pub fn implies(&self, h: &Halfspace) -> bool {
        self.vertices.iter().all(|v| h.holds(v))
            && self.rays.iter().all(|r| !h.normal.pair(r).is_negative())
            && self.lineality.iter().all(|l| h.normal.pair(l).is_zero())
    }
}

/// Vertices, recession rays and lineality of an intersection of half-spaces.
pub fn polyhedron(dim: usize, halfspaces: &[Halfspace]) -> Result<Polyhedron, PolytopeError> {
    if halfspaces.iter().any(|h| h.dim() != dim) {
        return Err(PolytopeError::DimensionMismatch);
    }
    let mut rows: Vec<Vec<Integer>> = halfspaces.iter().map(Halfspace::homogenized).collect();
    let mut t_row = vec![Integer::zero(); dim + 1];
    t_row[dim] = Integer::one();
    rows.push(t_row);
    let g = cone_from_inequalities(dim + 1, &rows);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in &g.rays {
        let t = &r[dim];
        if t.is_zero() {
            rays.push(MPoint::new(r[..dim].to_vec()));
        } else {
            let tq = Rational::from_integer(t.clone());
            vertices.push(MRational::new(
                r[..dim].iter().map(|x| Rational::from_integer(x.clone()) / &tq).collect(),
            ));
        }
    }
    vertices.sort();
    let lineality = g.lineality.iter().map(|l| MPoint::new(l[..dim].to_vec())).collect();
    Ok(Polyhedron { vertices, rays, lineality })
}

/// A bounded intersection of half-spaces with its vertices computed.
#[derive(Clone, Debug)]
pub struct Polytope {
    ambient: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<MRational>,
    dim: isize,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// Intersect half-spaces; empty results are allowed, unbounded ones are not.
pub fn intersect(halfspaces: &[Halfspace]) -> Result<Polytope, PolytopeError> {
    let first = halfspaces.first().ok_or(PolytopeError::NoHalfspaces)?;
    Polytope::with_dim(first.dim(), halfspaces)
}

impl Polytope {
    pub fn with_dim(ambient: usize, halfspaces: &[Halfspace]) -> Result<Self, PolytopeError> {
        let ph = polyhedron(ambient, halfspaces)?;
        if ph.is_empty() {
            return Ok(Polytope { ambient, halfspaces: halfspaces.to_vec(), vertices: vec![], dim: -1 });
        }
        if !ph.rays.is_empty() || !ph.lineality.is_empty() {
            return Err(PolytopeError::Unbounded);
        }
        let coords: Vec<Vec<Rational>> = ph.vertices.iter().map(|v| v.coords().to_vec()).collect();
        let dim = affine_rank(&coords);
        Ok(Polytope { ambient, halfspaces: halfspaces.to_vec(), vertices: ph.vertices, dim })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[MRational] {
        &self.vertices
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, m: &MRational) -> bool {
        self.halfspaces.iter().all(|h| h.holds(m))
    }

    /// `min (p, m)` over the polytope.
    pub fn support_value(&self, p: &NPoint) -> Result<Rational, PolytopeError> {
        self.vertices.iter().map(|v| p.pair(v)).min().ok_or(PolytopeError::Empty)
    }

    /// Vertices attaining the support value of `p`.
    pub fn minimizing_vertices(&self, p: &NPoint) -> Vec<&MRational> {
        let Ok(min) = self.support_value(p) else {
            return vec![];
        };
        self.vertices.iter().filter(|v| p.pair(*v) == min).collect()
    }

    /// Dimension of the face on which `p` attains its minimum.
    pub fn face_dimension(&self, p: &NPoint) -> isize {
        let face: Vec<Vec<Rational>> =
            self.minimizing_vertices(p).iter().map(|v| v.coords().to_vec()).collect();
        affine_rank(&face)
    }

    /// Whether the boundary hyperplane of `h` meets the polytope.
    pub fn contributes(&self, h: &Halfspace) -> bool {
        matches!(self.support_value(&h.normal), Ok(v) if v == h.level)
    }

    /// Whether dropping half-space `index` changes the polytope.
    pub fn contributes_properly(&self, index: usize) -> bool {
        let others: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, h)| h.clone())
            .collect();
        contributes_properly(&self.halfspaces[index], &others, self.ambient)
    }

    /// Indices of half-spaces tight at `v`.
    pub fn tight_at(&self, v: &MRational) -> Vec<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.halfspaces[i].is_tight(v)).collect()
    }

    /// Every vertex lies on exactly `n` distinct boundary hyperplanes with
    /// independent normals.
    pub fn is_simple(&self) -> Result<bool, PolytopeError> {
        if self.dim != self.ambient as isize {
            return Err(PolytopeError::LowerDimensional);
        }
        for v in &self.vertices {
            let planes: BTreeSet<&Halfspace> =
                self.halfspaces.iter().filter(|h| h.is_tight(v)).collect();
            if planes.len() != self.ambient {
                return Ok(false);
            }
            let normals: Vec<Vec<Rational>> =
                planes.iter().map(|h| h.normal.to_rational().into_coords()).collect();
            if rank(&normals) != self.ambient {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of half-spaces whose boundary meets the polytope in a facet;
    /// one representative per facet.
    pub fn facet_indices(&self) -> Vec<usize> {
        let target = self.dim - 1;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, h) in self.halfspaces.iter().enumerate() {
            if self.contributes(h) && self.face_dimension(&h.normal) == target && seen.insert(h) {
                out.push(i);
            }
        }
        out
    }

    /// Vertex/half-space incidences: for each vertex, the sorted indices of
    /// the half-spaces tight there.
    pub fn combinatorial_type(&self) -> Vec<Vec<usize>> {
        let mut t: Vec<Vec<usize>> = self.vertices.iter().map(|v| self.tight_at(v)).collect();
        t.sort();
        t
    }

    /// `m · P`.
    pub fn scale(&self, m: u64) -> Polytope {
        let k = Rational::from_integer(m.into());
        Polytope {
            ambient: self.ambient,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace { normal: h.normal.clone(), level: &h.level * &k })
                .collect(),
            vertices: self.vertices.iter().map(|v| v.scale(&k)).collect(),
            dim: if m == 0 && self.dim >= 0 { 0 } else { self.dim },
        }
    }

    /// Integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<MPoint> {
        if self.is_empty() {
            return vec![];
        }
        let lo: Vec<Integer> = (0..self.ambient)
            .map(|i| self.vertices.iter().map(|v| v[i].ceil().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<Integer> = (0..self.ambient)
            .map(|i| self.vertices.iter().map(|v| v[i].floor().to_integer()).max().unwrap())
            .collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return vec![];
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let m = MPoint::new(cur.clone());
            if self.contains(&m.to_rational()) {
                out.push(m);
            }
            let mut i = self.ambient;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i].clone();
            }
        }
    }

    pub fn count_lattice_points(&self) -> usize {
        self.lattice_points().len()
    }

    /// Smallest positive `k` with `k · vertex` integral for every vertex.
    pub fn clearing_multiple(&self) -> Integer {
        self.vertices
            .iter()
            .flat_map(|v| v.coords().iter())
            .fold(Integer::one(), |l, c| l.lcm(c.denom()))
    }
}

/// Whether `h` cuts the intersection of `others` (in ambient dimension `dim`).
pub fn contributes_properly(h: &Halfspace, others: &[Halfspace], dim: usize) -> bool {
    match polyhedron(dim, others) {
        Ok(ph) if ph.is_empty() => false,
        Ok(ph) => !ph.implies(h),
        Err(_) => false,
    }
}
