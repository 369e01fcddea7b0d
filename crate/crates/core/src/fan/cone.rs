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


use num_traits::{Signed, Zero};

use crate::lattice::{Coord, Integer, MPoint, NPoint, Point, NSide, Rational};
use crate::linalg::{rank, rank_int};
use crate::polytope::cone_from_inequalities;

use super::FanError;

/// A strongly convex rational polyhedral cone, stored with its inequality
/// description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    rays: Vec<NPoint>,
    facets: Vec<MPoint>,
    equations: Vec<MPoint>,
}

impl Cone {
    /// Rays must be primitive, pairwise distinct and extreme.
    pub fn new(rays: Vec<NPoint>, dim: usize) -> Result<Cone, FanError> {
        if rays.iter().any(|r| r.dim() != dim) {
            return Err(FanError::DimensionMismatch);
        }
        let rows: Vec<Vec<Integer>> = rays.iter().map(|r| r.coords().to_vec()).collect();
        let dual = cone_from_inequalities(dim, &rows);
        let cone = Cone {
            rays,
            facets: dual.rays.into_iter().map(MPoint::new).collect(),
            equations: dual.lineality.into_iter().map(MPoint::new).collect(),
        };
        let primal = cone_from_inequalities(dim, &cone.inequality_rows());
        if !primal.lineality.is_empty() {
            return Err(FanError::NotStronglyConvex);
        }
        let mut given: Vec<Vec<Integer>> = rows;
        given.sort();
        given.dedup();
        if given.len() != cone.rays.len() || given != primal.rays {
            return Err(FanError::NotExtreme);
        }
        Ok(cone)
    }

    /// Trusted constructor for cones produced by the fan algorithms.
    pub(crate) fn trusted(rays: Vec<NPoint>, dim: usize) -> Cone {
        let rows: Vec<Vec<Integer>> = rays.iter().map(|r| r.coords().to_vec()).collect();
        let dual = cone_from_inequalities(dim, &rows);
        Cone {
            rays,
            facets: dual.rays.into_iter().map(MPoint::new).collect(),
            equations: dual.lineality.into_iter().map(MPoint::new).collect(),
        }
    }

    pub fn rays(&self) -> &[NPoint] {
        &self.rays
    }

    /// Inward facet normals.
    pub fn facet_normals(&self) -> &[MPoint] {
        &self.facets
    }

    /// Linear forms vanishing on the span.
    pub fn equations(&self) -> &[MPoint] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        let rows: Vec<Vec<Integer>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        rank_int(&rows)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.rays.len()
    }

    pub fn contains<T: Coord>(&self, x: &Point<NSide, T>) -> bool {
        self.facets.iter().all(|f| !x.pair(f).is_negative())
            && self.equations.iter().all(|e| x.pair(e).is_zero())
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_relint<T: Coord>(&self, x: &Point<NSide, T>) -> bool {
        self.facets.iter().all(|f| x.pair(f).is_positive())
            && self.equations.iter().all(|e| x.pair(e).is_zero())
    }

    pub(crate) fn inequality_rows(&self) -> Vec<Vec<Integer>> {
        let mut rows: Vec<Vec<Integer>> = self.facets.iter().map(|f| f.coords().to_vec()).collect();
        for e in &self.equations {
            rows.push(e.coords().to_vec());
            rows.push(e.neg().coords().to_vec());
        }
        rows
    }

    /// Extreme rays of `self ∩ other`.
    pub fn intersection_rays(&self, other: &Cone) -> Vec<NPoint> {
        let dim = self.rays.first().map_or(0, |r| r.dim());
        let mut rows = self.inequality_rows();
        rows.extend(other.inequality_rows());
        let g = cone_from_inequalities(dim, &rows);
        debug_assert!(g.lineality.is_empty());
        g.rays.into_iter().map(NPoint::new).collect()
    }

    /// Indices of rays in the smallest face containing the given rays.
    pub fn face_closure(&self, subset: &[usize]) -> Vec<usize> {
        let vanishing: Vec<&MPoint> = self
            .facets
            .iter()
            .filter(|f| subset.iter().all(|&i| self.rays[i].pair(*f).is_zero()))
            .collect();
        (0..self.rays.len())
            .filter(|&i| vanishing.iter().all(|f| self.rays[i].pair(*f).is_zero()))
            .collect()
    }

    /// Ray index sets of the facets.
    pub fn facet_ray_sets(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|f| (0..self.rays.len()).filter(|&i| self.rays[i].pair(f).is_zero()).collect())
            .collect()
    }
}

/// Rank of a set of integer points.
pub fn rank_of(points: &[NPoint]) -> usize {
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| p.to_rational().into_coords()).collect();
    rank(&rows)
}
