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


//! Toric Mori theory on complete simplicial fans.
//!
//! Every wall of the fan carries a curve whose numerical class is the linear
//! relation among the `n + 1` rays of its two cones. Extremal rays of the
//! cone of curves are found by exact linear feasibility; contracting one is
//! a fibration, a divisorial contraction or a flip according to how many
//! relation coefficients are negative.

mod run;
mod step;

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::divisor::{DivisorError, SupportFunction};
use crate::fan::{Fan, FanError, Wall};
use crate::lattice::{Integer, Rational};
use crate::linalg::{nonnegative_combination, nullspace, primitive_integer};

pub use run::{mmp_run, pair_discrepancy, FlipAudit, MmpOptions, MmpOutcome, MmpStep, OutcomeKind, StepKind};
pub use step::{circuit_of, classify, contract, flip, Circuit, ContractionKind, FibrationData};

#[derive(Debug, Error, Clone)]
pub enum MmpError {
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("the fan is not complete and simplicial")]
    NotSimplicial,
    #[error("class has no walls on this fan")]
    UnknownClass,
    #[error("contraction of {kind:?} type requested for a {found:?} class")]
    WrongKind { kind: ContractionKind, found: ContractionKind },
    #[error("adjoint is negative on some wall but no negative class is extremal")]
    NoExtremalRay,
    #[error("fiber degree {0} is impossible for a negative fibration")]
    FiberDegree(Rational),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("step limit {0} reached")]
    StepLimit(usize),
}

/// Degrees of a curve against every torus-invariant prime divisor, scaled to
/// a primitive integer vector indexed by the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass(pub Vec<Integer>);

impl CurveClass {
    pub fn degrees(&self) -> &[Integer] {
        &self.0
    }

    pub fn neg(&self) -> CurveClass {
        CurveClass(self.0.iter().map(|x| -x).collect())
    }

    fn as_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A wall with its relation `Σ a_i u_i = 0`, positive on the opposite rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCurve {
    pub wall: Wall,
    pub class: CurveClass,
}

/// One curve per wall of a complete simplicial fan.
pub fn wall_curves(fan: &Fan) -> Result<Vec<WallCurve>, MmpError> {
    if !fan.is_simplicial() {
        return Err(MmpError::NotSimplicial);
    }
    let dim = fan.dim();
    let mut out = Vec::new();
    for wall in fan.walls() {
        let mut idx = vec![wall.opposite.0, wall.opposite.1];
        idx.extend(wall.rays.iter().copied());
        let rows: Vec<Vec<Rational>> = (0..dim)
            .map(|j| idx.iter().map(|&r| Rational::from_integer(fan.rays()[r][j].clone())).collect())
            .collect();
        let kernel = nullspace(&rows, idx.len());
        if kernel.len() != 1 {
            return Err(MmpError::Internal("wall relation is not unique".into()));
        }
        let mut coeffs = primitive_integer(&kernel[0]);
        if coeffs[0].is_negative() {
            coeffs = coeffs.iter().map(|x| -x).collect();
        }
        if !coeffs[0].is_positive() || !coeffs[1].is_positive() {
            return Err(MmpError::Internal("opposite rays on the same side of a wall".into()));
        }
        let mut dense = vec![Integer::zero(); fan.rays().len()];
        for (&r, c) in idx.iter().zip(coeffs) {
            dense[r] = c;
        }
        out.push(WallCurve { wall, class: CurveClass(dense) });
    }
    if out.is_empty() {
        return Err(MmpError::NotSimplicial);
    }
    Ok(out)
}

/// `−Σ a_i h(u_i)`, the sign of `D_h · C`.
pub fn wall_degree(h: &SupportFunction, class: &CurveClass) -> Rational {
    -class
        .0
        .iter()
        .zip(h.values())
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, v)| Rational::from_integer(a.clone()) * v)
        .sum::<Rational>()
}

/// Distinct wall classes, sorted.
pub fn distinct_classes(curves: &[WallCurve]) -> Vec<CurveClass> {
    let mut classes: Vec<CurveClass> = curves.iter().map(|c| c.class.clone()).collect();
    classes.sort();
    classes.dedup();
    classes
}

/// Whether `class` spans an extreme ray of the cone generated by `classes`.
pub fn is_extremal(class: &CurveClass, classes: &[CurveClass]) -> bool {
    let others: Vec<Vec<Rational>> =
        classes.iter().filter(|c| *c != class).map(CurveClass::as_rational).collect();
    nonnegative_combination(&class.as_rational(), &others).is_none()
}

/// Wall classes spanning extreme rays of the cone of curves.
pub fn extremal_rays(curves: &[WallCurve]) -> Vec<CurveClass> {
    let classes = distinct_classes(curves);
    classes.iter().filter(|c| is_extremal(c, &classes)).cloned().collect()
}

/// Lexicographically smallest extremal class on which `h` is negative.
pub fn select_negative_extremal(h: &SupportFunction, curves: &[WallCurve]) -> Result<Option<CurveClass>, MmpError> {
    let classes = distinct_classes(curves);
    let negative: Vec<&CurveClass> = classes.iter().filter(|c| wall_degree(h, c).is_negative()).collect();
    if negative.is_empty() {
        return Ok(None);
    }
    negative
        .into_iter()
        .find(|c| is_extremal(c, &classes))
        .cloned()
        .map(Some)
        .ok_or(MmpError::NoExtremalRay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::coordinate_fan;
    use crate::lattice::NPoint;

    fn n(v: &[i64]) -> NPoint {
        NPoint::from_i64(v)
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    pub(crate) fn plane() -> Fan {
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
    fn plane_walls() {
        let c = wall_curves(&plane()).unwrap();
        assert_eq!(c.len(), 3);
        for w in &c {
            assert!(w.class.0.iter().all(|a| *a == Integer::from(1)));
        }
        assert_eq!(extremal_rays(&c).len(), 1);
        let idx = plane().ray_index(&n(&[-1, -1])).unwrap();
        let mut vals = vec![q(0); 3];
        vals[idx] = q(-1);
        let h = SupportFunction::new(plane(), vals).unwrap();
        assert!(c.iter().all(|w| wall_degree(&h, &w.class) == q(1)));
    }

    #[test]
    fn octant_walls_and_rays() {
        let c = wall_curves(&coordinate_fan(3)).unwrap();
        assert_eq!(c.len(), 12);
        assert_eq!(extremal_rays(&c).len(), 3);
        for w in &c {
            let sum: Vec<Rational> = (0..3)
                .map(|j| {
                    w.class
                        .0
                        .iter()
                        .zip(coordinate_fan(3).rays())
                        .map(|(a, r)| Rational::from_integer(a * &r[j]))
                        .sum()
                })
                .collect();
            assert!(sum.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn linear_function_has_zero_degree() {
        let f = coordinate_fan(3);
        let h = SupportFunction::from_fn(f.clone(), |p| Rational::from_integer(&p[0] * 2 - &p[2])).unwrap();
        for w in wall_curves(&f).unwrap() {
            assert!(wall_degree(&h, &w.class).is_zero());
        }
    }

    #[test]
    fn non_simplicial_fan_has_no_walls() {
        let sq = vec![n(&[1, 0, 1]), n(&[0, 1, 1]), n(&[-1, 0, 1]), n(&[0, -1, 1])];
        let f = Fan::from_cones(3, vec![sq]).unwrap();
        assert!(matches!(wall_curves(&f), Err(MmpError::NotSimplicial)));
    }
}
