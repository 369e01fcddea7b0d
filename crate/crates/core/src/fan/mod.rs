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


//! Fans in `N_R`, stored by their maximal cones.
//!
//! Rays are kept in lexicographic order and cones as sorted index lists, so
//! two fans with the same cones compare equal regardless of how they were
//! built. Cone geometry is computed lazily and cached.

mod cone;
mod subdivision;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_traits::One;
use thiserror::Error;

use crate::lattice::{cone_multiplicity, primitivize, Integer, LatticeError, NPoint};
use crate::polytope::{Polytope, PolytopeError};

pub use cone::{rank_of, Cone};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("ray dimensions do not match the fan dimension")]
    DimensionMismatch,
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("cone generators are not its extreme rays")]
    NotExtreme,
    #[error("cone {index} is invalid: {source}")]
    InvalidCone { index: usize, source: Box<FanError> },
    #[error("ray index {0} out of range")]
    RayIndex(usize),
    #[error("fan has no cones")]
    NoCones,
    #[error("cones {0} and {1} overlap in their interiors")]
    Overlap(usize, usize),
    #[error("intersection of cones {0} and {1} is not a face of both")]
    NotAFace(usize, usize),
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
    #[error("polytope is not full-dimensional")]
    LowerDimensional,
}

/// Codimension-one cone shared by two maximal cones of a simplicial fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Ray indices of the wall, sorted.
    pub rays: Vec<usize>,
    /// The two maximal cones through the wall.
    pub cones: (usize, usize),
    /// The ray of each cone not on the wall.
    pub opposite: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<NPoint>,
    cones: Vec<Vec<usize>>,
    geometry: OnceLock<Vec<Cone>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.cones == other.cones
    }
}

impl Eq for Fan {}

impl Fan {
    /// Validate cones given by ray indices. Rays are primitivized; cones that
    /// are faces of other cones are dropped.
    pub fn new(dim: usize, rays: &[NPoint], cones: &[Vec<usize>]) -> Result<Fan, FanError> {
        let mut point_cones = Vec::with_capacity(cones.len());
        for c in cones {
            let mut pts = Vec::with_capacity(c.len());
            for &i in c {
                pts.push(rays.get(i).ok_or(FanError::RayIndex(i))?.clone());
            }
            point_cones.push(pts);
        }
        Fan::from_cones(dim, point_cones)
    }

    /// Validate cones given by their generators.
    pub fn from_cones(dim: usize, cones: Vec<Vec<NPoint>>) -> Result<Fan, FanError> {
        if cones.is_empty() {
            return Err(FanError::NoCones);
        }
        let mut geo = Vec::with_capacity(cones.len());
        for (index, c) in cones.into_iter().enumerate() {
            let wrap = |e: FanError| FanError::InvalidCone { index, source: Box::new(e) };
            let mut prim = Vec::with_capacity(c.len());
            for r in c {
                if r.dim() != dim {
                    return Err(wrap(FanError::DimensionMismatch));
                }
                prim.push(primitivize(&r).map_err(|e| wrap(e.into()))?);
            }
            prim.sort();
            prim.dedup();
            geo.push(Cone::new(prim, dim).map_err(wrap)?);
        }
        for i in 0..geo.len() {
            for j in i + 1..geo.len() {
                check_pair(&geo[i], &geo[j], i, j, dim)?;
            }
        }
        let sets: Vec<BTreeSet<&NPoint>> = geo.iter().map(|c| c.rays().iter().collect()).collect();
        let keep: Vec<Vec<NPoint>> = (0..geo.len())
            .filter(|&i| {
                !(0..geo.len()).any(|j| {
                    j != i
                        && sets[i].is_subset(&sets[j])
                        && (sets[i].len() < sets[j].len() || j < i)
                })
            })
            .map(|i| geo[i].rays().to_vec())
            .collect();
        Ok(Fan::assemble(dim, keep))
    }

    /// Canonical form from cones known to satisfy the fan axioms.
    pub(crate) fn assemble(dim: usize, cones: Vec<Vec<NPoint>>) -> Fan {
        let rays: Vec<NPoint> = cones
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<&NPoint, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let cones: BTreeSet<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = c.iter().map(|r| index[r]).collect();
                idx.sort();
                idx.dedup();
                idx
            })
            .collect();
        Fan { dim, rays, cones: cones.into_iter().collect(), geometry: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Δ[1]`, in lexicographic order.
    pub fn rays(&self) -> &[NPoint] {
        &self.rays
    }

    /// Maximal cones as sorted ray indices.
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, r: &NPoint) -> Option<usize> {
        self.rays.binary_search(r).ok()
    }

    pub fn cone_rays(&self, i: usize) -> Vec<NPoint> {
        self.cones[i].iter().map(|&j| self.rays[j].clone()).collect()
    }

    /// Cached geometry of every maximal cone.
    pub fn geometry(&self) -> &[Cone] {
        self.geometry.get_or_init(|| {
            (0..self.cones.len()).map(|i| Cone::trusted(self.cone_rays(i), self.dim)).collect()
        })
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.geometry()[i]
    }

    pub fn cone_multiplicity(&self, i: usize) -> Integer {
        cone_multiplicity(&self.cone_rays(i)).unwrap_or_else(|_| Integer::from(0))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.dim) && self.geometry().iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && (0..self.cones.len()).all(|i| self.cone_multiplicity(i).is_one())
    }

    /// Facet ray sets of full-dimensional cones, each with the cones sharing it.
    fn facet_incidence(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.geometry().iter().enumerate() {
            for local in c.facet_ray_sets() {
                let global: Vec<usize> = local.iter().map(|&k| self.cones[ci][k]).collect();
                map.entry(global).or_default().push(ci);
            }
        }
        map
    }

    pub fn is_complete(&self) -> bool {
        if self.geometry().iter().any(|c| c.dim() != self.dim) {
            return false;
        }
        if !self.facet_incidence().values().all(|v| v.len() == 2) {
            return false;
        }
        let generic = generic_point(self.dim);
        self.geometry().iter().any(|c| c.contains(&generic))
    }

    /// Walls of a complete simplicial fan.
    pub fn walls(&self) -> Vec<Wall> {
        self.facet_incidence()
            .into_iter()
            .filter(|(_, cs)| cs.len() == 2)
            .map(|(rays, cs)| {
                let other = |c: usize| *self.cones[c].iter().find(|r| !rays.contains(r)).unwrap();
                Wall { opposite: (other(cs[0]), other(cs[1])), cones: (cs[0], cs[1]), rays }
            })
            .collect()
    }

    /// Maximal cones containing `x`.
    pub fn cones_containing(&self, x: &NPoint) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cone(i).contains(x)).collect()
    }

    /// Some maximal cone containing a rational vector.
    pub fn cone_containing_rational(&self, x: &crate::lattice::NRational) -> Option<usize> {
        (0..self.cones.len()).find(|&i| self.cone(i).contains(x))
    }

    /// Whether every cone of `self` lies in some cone of `coarser`.
    pub fn refines(&self, coarser: &Fan) -> bool {
        self.dim == coarser.dim
            && self.geometry().iter().all(|c| {
            coarser.geometry().iter().any(|d| c.rays().iter().all(|r| d.contains(r)))
        })
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan in dimension {} with {} rays and {} cones", self.dim, self.rays.len(), self.cones.len())
    }
}

fn check_pair(a: &Cone, b: &Cone, i: usize, j: usize, dim: usize) -> Result<(), FanError> {
    let common: Vec<&NPoint> = a.rays().iter().filter(|r| b.rays().contains(r)).collect();
    let inter = a.intersection_rays(b);
    if inter.iter().all(|r| common.contains(&r)) {
        let in_a: Vec<usize> = (0..a.rays().len()).filter(|&k| common.contains(&&a.rays()[k])).collect();
        let in_b: Vec<usize> = (0..b.rays().len()).filter(|&k| common.contains(&&b.rays()[k])).collect();
        if a.face_closure(&in_a) == in_a && b.face_closure(&in_b) == in_b {
            return Ok(());
        }
        // common rays span no common face: the interiors meet
    }
    if rank_of(&inter) == dim {
        Err(FanError::Overlap(i, j))
    } else {
        Err(FanError::NotAFace(i, j))
    }
}

/// A vector off every hyperplane spanned by small lattice points.
pub fn generic_point(dim: usize) -> NPoint {
    const P: [i64; 8] = [1009, 2003, 3001, 4001, 5003, 6007, 7001, 8009];
    NPoint::new((0..dim).map(|i| Integer::from(P[i % 8] + 9973 * (i / 8) as i64)).collect())
}

/// Normal fan of a full-dimensional polytope: one cone per vertex, spanned by
/// the normals of the facets through it.
pub fn dual_fan(p: &Polytope) -> Result<Fan, FanError> {
    let n = p.ambient_dim();
    if p.dim() != n as isize {
        return Err(FanError::LowerDimensional);
    }
    let facets: Vec<usize> = p.facet_indices();
    let cones = p
        .vertices()
        .iter()
        .map(|v| {
            facets
                .iter()
                .filter(|&&i| p.halfspaces()[i].is_tight(v))
                .map(|&i| p.halfspaces()[i].normal().clone())
                .collect()
        })
        .collect();
    Ok(Fan::assemble(n, cones))
}

/// Octant fan: all sign patterns of the coordinate vectors.
pub fn coordinate_fan(dim: usize) -> Fan {
    let cones = (0..1u32 << dim)
        .map(|mask| {
            (0..dim)
                .map(|i| {
                    let s = if mask >> i & 1 == 1 { -1 } else { 1 };
                    let mut v = vec![0i64; dim];
                    v[i] = s;
                    NPoint::from_i64(&v)
                })
                .collect()
        })
        .collect();
    Fan::assemble(dim, cones)
}
