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


use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::lattice::{primitivize, Integer, NPoint, Rational};
use crate::linalg::solve_square;

use super::{Fan, FanError};

impl Fan {
    /// Star subdivision at `u`: each cone containing `u` is replaced by the
    /// joins of `u` with its facets not containing `u`.
    pub fn star_subdivide(&self, u: &NPoint) -> Result<Fan, FanError> {
        if u.dim() != self.dim {
            return Err(FanError::DimensionMismatch);
        }
        let u = primitivize(u)?;
        let hit = self.cones_containing(&u);
        if hit.is_empty() {
            return Err(FanError::OutsideSupport);
        }
        let mut cones: Vec<Vec<NPoint>> = Vec::with_capacity(self.cones().len() + 2 * hit.len());
        for i in 0..self.cones().len() {
            if !hit.contains(&i) {
                cones.push(self.cone_rays(i));
                continue;
            }
            let c = self.cone(i);
            for f in c.facet_normals() {
                if u.pair(f).is_positive() {
                    let mut rays: Vec<NPoint> =
                        c.rays().iter().filter(|r| r.pair(f).is_zero()).cloned().collect();
                    rays.push(u.clone());
                    cones.push(rays);
                }
            }
            if c.facet_normals().is_empty() {
                // a ray cone containing u is u itself
                cones.push(vec![u.clone()]);
            }
        }
        Ok(Fan::assemble(self.dim, cones))
    }

    /// A smooth fan refining `self`.
    ///
    /// Non-simplicial cones are pulled at their lexicographically smallest
    /// unpulled ray; then the cone of largest multiplicity is subdivided at
    /// the parallelepiped point of smallest coefficient sum until all cones
    /// are unimodular.
    pub fn desingularize(&self) -> Fan {
        let mut fan = self.clone();
        let mut pulled: BTreeSet<NPoint> = BTreeSet::new();
        while let Some(ci) = (0..fan.cones().len()).find(|&i| !fan.cone(i).is_simplicial()) {
            let Some(r) = fan.cone_rays(ci).into_iter().find(|r| !pulled.contains(r)) else {
                unreachable!("a cone pulled at every ray is simplicial");
            };
            pulled.insert(r.clone());
            fan = fan.star_subdivide(&r).expect("a ray lies in the support");
        }
        loop {
            let worst = (0..fan.cones().len())
                .map(|i| (fan.cone_multiplicity(i), i))
                .filter(|(m, _)| *m > Integer::one())
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            let Some((_, ci)) = worst else {
                break;
            };
            let u = smallest_parallelepiped_point(&fan.cone_rays(ci))
                .expect("a cone of multiplicity > 1 has an interior lattice point");
            fan = fan.star_subdivide(&u).expect("the point lies in the cone");
        }
        fan
    }

    /// Cones of all full-dimensional pairwise intersections.
    pub fn common_refinement(&self, other: &Fan) -> Fan {
        let mut cones = Vec::new();
        for a in self.geometry() {
            for b in other.geometry() {
                let rays = a.intersection_rays(b);
                if rays.len() >= self.dim && super::rank_of(&rays) == self.dim {
                    cones.push(rays);
                }
            }
        }
        Fan::assemble(self.dim, cones)
    }
}

/// Nonzero lattice points `Σ λ_i r_i` with `0 ≤ λ_i < 1`, sorted by
/// `(Σ λ_i, λ)`.
pub fn parallelepiped_points(rays: &[NPoint]) -> Vec<(NPoint, Vec<Rational>)> {
    let n = rays.len();
    let dim = rays.first().map_or(0, NPoint::dim);
    if n != dim {
        return vec![];
    }
    // columns are rays: row j of G is the j-th coordinate of every ray
    let g: Vec<Vec<Rational>> = (0..dim)
        .map(|j| rays.iter().map(|r| Rational::from_integer(r[j].clone())).collect())
        .collect();
    let lo: Vec<Integer> = (0..dim)
        .map(|j| rays.iter().map(|r| r[j].clone()).filter(|x| x.is_negative()).sum())
        .collect();
    let hi: Vec<Integer> = (0..dim)
        .map(|j| rays.iter().map(|r| r[j].clone()).filter(|x| x.is_positive()).sum())
        .collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if cur.iter().any(|x| !x.is_zero()) {
            let target: Vec<Rational> = cur.iter().map(|x| Rational::from_integer(x.clone())).collect();
            if let Some(lambda) = solve_square(&g, &target) {
                if lambda.iter().all(|l| !l.is_negative() && *l < Rational::one()) {
                    out.push((NPoint::new(cur.clone()), lambda));
                }
            }
        }
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort_by(|a, b| {
                    let sa: Rational = a.1.iter().sum();
                    let sb: Rational = b.1.iter().sum();
                    sa.cmp(&sb).then_with(|| a.1.cmp(&b.1))
                });
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

fn smallest_parallelepiped_point(rays: &[NPoint]) -> Option<NPoint> {
    parallelepiped_points(rays).into_iter().next().map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::super::coordinate_fan;
    use super::*;

    fn n(v: &[i64]) -> NPoint {
        NPoint::from_i64(v)
    }

    fn projective_plane() -> Fan {
        Fan::from_cones(
            2,
            vec![
                vec![n(&[1, 0]), n(&[0, 1])],
                vec![n(&[0, 1]), n(&[-1, -1])],
                vec![n(&[-1, -1]), n(&[1, 0])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn star_at_diagonal_of_octant() {
        let f = coordinate_fan(3).star_subdivide(&n(&[1, 1, 1])).unwrap();
        assert_eq!(f.cones().len(), 10);
        assert_eq!(f.rays().len(), 7);
        assert!(f.is_complete() && f.is_smooth());
        assert!(f.refines(&coordinate_fan(3)));
    }

    #[test]
    fn star_at_existing_ray_is_identity() {
        let f = coordinate_fan(3);
        assert_eq!(f.star_subdivide(&n(&[0, 2, 0])).unwrap(), f);
    }

    #[test]
    fn blow_up_of_plane() {
        let f = projective_plane().star_subdivide(&n(&[1, 1])).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones().len(), 4);
        assert!(f.is_smooth() && f.is_complete());
    }

    #[test]
    fn subdivision_errors() {
        let f = Fan::from_cones(2, vec![vec![n(&[1, 0]), n(&[0, 1])]]).unwrap();
        assert!(matches!(f.star_subdivide(&n(&[0, 0])), Err(FanError::Lattice(_))));
        assert_eq!(f.star_subdivide(&n(&[-1, 0])), Err(FanError::OutsideSupport));
    }

    #[test]
    fn desingularize_multiplicity_two() {
        let f = Fan::from_cones(2, vec![vec![n(&[1, 0]), n(&[1, 2])]]).unwrap();
        let d = f.desingularize();
        assert!(d.is_smooth());
        assert!(d.rays().contains(&n(&[1, 1])));
        assert_eq!(d.cones().len(), 2);
        assert_eq!(coordinate_fan(3).desingularize(), coordinate_fan(3));
    }

    #[test]
    fn desingularize_square_cone() {
        let sq = vec![n(&[1, 0, 1]), n(&[0, 1, 1]), n(&[-1, 0, 1]), n(&[0, -1, 1])];
        let f = Fan::from_cones(3, vec![sq]).unwrap();
        let d = f.desingularize();
        assert!(d.is_smooth());
        assert!(d.refines(&f));
        assert!(f.rays().iter().all(|r| d.rays().contains(r)));
    }

    #[test]
    fn parallelepiped_order() {
        let pts = parallelepiped_points(&[n(&[1, 0]), n(&[1, 3])]);
        assert_eq!(pts.len(), 2);
        // both points have coefficient sum 1; the tie goes to smaller λ
        assert_eq!(pts[0].0, n(&[1, 2]));
        let sum: Rational = pts[0].1.iter().sum();
        assert_eq!(sum, Rational::one());
        let pts = parallelepiped_points(&[n(&[1, 0]), n(&[1, 2]), ][..]);
        assert_eq!(pts[0].0, n(&[1, 1]));
    }

    #[test]
    fn refinement_of_fan_with_itself() {
        let f = coordinate_fan(3);
        assert_eq!(f.common_refinement(&f), f);
        let g = coordinate_fan(3).star_subdivide(&n(&[1, 1, 1])).unwrap();
        assert_eq!(f.common_refinement(&g), g);
        let p = projective_plane();
        let r = p.common_refinement(&coordinate_fan(2));
        assert!(r.is_complete());
        assert!(r.refines(&p) && r.refines(&coordinate_fan(2)));
    }
}
