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


//! Support functions, invariant divisors and the hypersurface class.
//!
//! A support function `h` is stored by its values on the rays of a fan.
//! The divisor of `h` is `D_h = −Σ h(p) D_p`, the canonical divisor is
//! `K = −Σ D_p`, and a hypersurface `X` is modelled by its Newton polytope:
//! on any fan its class has values `g(p) = p(Box_g)`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice::{MRational, NPoint, NRational, Rational};
use crate::linalg::express_in_span;
use crate::polytope::{Halfspace, Polytope, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("expected {expected} ray values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("values on cone {0} do not extend to a linear function (not Q-Cartier)")]
    NotQCartier(usize),
    #[error("the class polytope is empty")]
    EmptyClass,
    #[error("the class is not upper convex on its fan")]
    ClassNotNef,
    #[error("the fan does not refine the fan of the pair")]
    NotARefinement,
    #[error("vector lies outside the support of the fan")]
    OutsideSupport,
}

/// Values of a piecewise linear function on the rays of a fan.
#[derive(Clone, Debug)]
pub struct SupportFunction {
    fan: Fan,
    values: Vec<Rational>,
    linear: Vec<MRational>,
    polytope: OnceLock<Result<Polytope, PolytopeError>>,
}

impl PartialEq for SupportFunction {
    fn eq(&self, other: &Self) -> bool {
        self.fan == other.fan && self.values == other.values
    }
}

impl SupportFunction {
    /// Checks that the values extend linearly on every maximal cone.
    pub fn new(fan: Fan, values: Vec<Rational>) -> Result<Self, DivisorError> {
        if values.len() != fan.rays().len() {
            return Err(DivisorError::LengthMismatch { expected: fan.rays().len(), found: values.len() });
        }
        let mut linear = Vec::with_capacity(fan.cones().len());
        for (ci, cone) in fan.cones().iter().enumerate() {
            let columns: Vec<Vec<Rational>> = (0..fan.dim())
                .map(|j| cone.iter().map(|&r| Rational::from_integer(fan.rays()[r][j].clone())).collect())
                .collect();
            let target: Vec<Rational> = cone.iter().map(|&r| values[r].clone()).collect();
            let m = express_in_span(&columns, &target).ok_or(DivisorError::NotQCartier(ci))?;
            linear.push(MRational::new(m));
        }
        Ok(SupportFunction { fan, values, linear, polytope: OnceLock::new() })
    }

    /// Values given as a function of the ray.
    pub fn from_fn(fan: Fan, f: impl Fn(&NPoint) -> Rational) -> Result<Self, DivisorError> {
        let values = fan.rays().iter().map(f).collect();
        SupportFunction::new(fan, values)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at a ray of the fan.
    pub fn at(&self, ray: &NPoint) -> Option<&Rational> {
        self.fan.ray_index(ray).map(|i| &self.values[i])
    }

    /// `h_σ`: the linear function agreeing with `h` on cone `i`.
    pub fn linear_extension(&self, cone: usize) -> &MRational {
        &self.linear[cone]
    }

    pub fn linear_extensions(&self) -> &[MRational] {
        &self.linear
    }

    /// `h(u)`, via the linear extension of a cone containing `u`.
    pub fn evaluate(&self, u: &NRational) -> Result<Rational, DivisorError> {
        let ci = self.fan.cone_containing_rational(u).ok_or(DivisorError::OutsideSupport)?;
        Ok(u.pair(&self.linear[ci]))
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.fan
            .rays()
            .iter()
            .zip(&self.values)
            .map(|(p, v)| Halfspace::new(p.clone(), v.clone()).expect("rays are primitive"))
            .collect()
    }

    /// `Box_h = {m : (p, m) ≥ h(p) for every ray p}`.
    pub fn box_polytope(&self) -> Result<&Polytope, DivisorError> {
        self.polytope
            .get_or_init(|| Polytope::with_dim(self.fan.dim(), &self.halfspaces()))
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    pub fn nef_status(&self) -> Result<NefStatus, DivisorError> {
        let b = self.box_polytope()?;
        if b.is_empty() {
            return Ok(NefStatus::EmptyAdjointPolytope);
        }
        if self.linear.iter().all(|m| b.contains(m)) {
            Ok(NefStatus::Nef)
        } else {
            Ok(NefStatus::NotNef)
        }
    }

    pub fn is_nef(&self) -> bool {
        matches!(self.nef_status(), Ok(NefStatus::Nef))
    }

    /// Nef, and `σ ↦ h_σ` is a bijection onto the vertices of `Box_h`.
    pub fn is_ample(&self) -> bool {
        if !self.is_nef() {
            return false;
        }
        let Ok(b) = self.box_polytope() else {
            return false;
        };
        let mut images = self.linear.clone();
        images.sort();
        images.dedup();
        images.len() == self.linear.len() && images == b.vertices()
    }

    /// `k · h`.
    pub fn scaled(&self, k: &Rational) -> SupportFunction {
        SupportFunction {
            fan: self.fan.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
            linear: self.linear.iter().map(|m| m.scale(k)).collect(),
            polytope: OnceLock::new(),
        }
    }

    /// Smallest positive integer clearing the denominators of every `h_σ`.
    pub fn clearing_multiple(&self) -> crate::lattice::Integer {
        use num_integer::Integer as _;
        self.linear
            .iter()
            .flat_map(|m| m.coords().iter())
            .fold(crate::lattice::Integer::one(), |l, c| l.lcm(c.denom()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NefStatus {
    Nef,
    NotNef,
    /// `Box_h` is empty; no multiple of the divisor has sections.
    EmptyAdjointPolytope,
}

/// `D = Σ c_p D_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToricDivisor {
    fan: Fan,
    coefficients: Vec<Rational>,
}

impl ToricDivisor {
    pub fn new(fan: Fan, coefficients: Vec<Rational>) -> Result<Self, DivisorError> {
        if coefficients.len() != fan.rays().len() {
            return Err(DivisorError::LengthMismatch {
                expected: fan.rays().len(),
                found: coefficients.len(),
            });
        }
        Ok(ToricDivisor { fan, coefficients })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// `h(p) = −c_p`.
    pub fn support(&self) -> Result<SupportFunction, DivisorError> {
        SupportFunction::new(self.fan.clone(), self.coefficients.iter().map(|c| -c).collect())
    }

    pub fn from_support(h: &SupportFunction) -> ToricDivisor {
        ToricDivisor { fan: h.fan.clone(), coefficients: h.values.iter().map(|v| -v).collect() }
    }
}

/// Class of a general member `X` of a base point free linear system,
/// remembered through its Newton polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceClass {
    fan: Fan,
    values: Vec<Rational>,
    newton: Polytope,
}

impl HypersurfaceClass {
    /// Class of a general member of `|D|`; `D` must be nef with a nonempty
    /// polytope.
    pub fn from_divisor(d: &ToricDivisor) -> Result<Self, DivisorError> {
        let g = d.support()?;
        let newton = g.box_polytope()?.clone();
        if newton.is_empty() {
            return Err(DivisorError::EmptyClass);
        }
        if !g.is_nef() {
            return Err(DivisorError::ClassNotNef);
        }
        Ok(HypersurfaceClass { fan: g.fan.clone(), values: g.values.clone(), newton })
    }

    /// Class on `fan` of a general hypersurface with Newton polytope `p`.
    pub fn from_newton_polytope(fan: &Fan, p: Polytope) -> Result<Self, DivisorError> {
        if p.is_empty() {
            return Err(DivisorError::EmptyClass);
        }
        let values = fan.rays().iter().map(|r| p.support_value(r)).collect::<Result<_, _>>()?;
        Ok(HypersurfaceClass { fan: fan.clone(), values, newton: p })
    }

    /// Proper transform on another fan in the same lattice.
    pub fn transport(&self, fan: &Fan) -> HypersurfaceClass {
        HypersurfaceClass::from_newton_polytope(fan, self.newton.clone())
            .expect("the Newton polytope is nonempty")
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// `g(p)` for each ray.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn newton_polytope(&self) -> &Polytope {
        &self.newton
    }

    pub fn support(&self) -> Result<SupportFunction, DivisorError> {
        SupportFunction::new(self.fan.clone(), self.values.clone())
    }

    /// Support function of `K + X`: `h(p) = 1 + g(p)`.
    pub fn adjoint(&self) -> Result<SupportFunction, DivisorError> {
        SupportFunction::new(self.fan.clone(), self.values.iter().map(|g| g + Rational::one()).collect())
    }

    /// The divisor `−Σ g(p) D_p`.
    pub fn divisor(&self) -> ToricDivisor {
        ToricDivisor { fan: self.fan.clone(), coefficients: self.values.iter().map(|g| -g).collect() }
    }
}

/// Which exceptional rays count as meeting `X`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MeetsPolicy {
    /// Every exceptional ray.
    #[default]
    Conservative,
    /// Rays whose face of the Newton polytope has positive dimension.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyRecord {
    pub ray: NPoint,
    /// Maximal cone of the coarse fan containing the ray.
    pub host_cone: usize,
    /// Discrepancy of `K + X`.
    pub discrepancy: Rational,
    /// Discrepancy of `K` alone, when `K` is Q-Cartier on the host cone.
    pub canonical_only: Option<Rational>,
    /// `u(Box_g) − g_lin(u) ≥ 0`.
    pub class_correction: Rational,
    pub meets_x: bool,
}

#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub resolution: Fan,
    pub records: Vec<DiscrepancyRecord>,
    pub terminal: bool,
}

impl DiscrepancyReport {
    pub fn minimum(&self) -> Option<&Rational> {
        self.records.iter().filter(|r| r.meets_x).map(|r| &r.discrepancy).min()
    }
}

/// Discrepancies of the pair `(fan of class, X)` at the rays a refinement adds.
pub fn discrepancies(
    class: &HypersurfaceClass,
    refinement: &Fan,
    policy: MeetsPolicy,
) -> Result<DiscrepancyReport, DivisorError> {
    let fan = class.fan();
    if !refinement.refines(fan) {
        return Err(DivisorError::NotARefinement);
    }
    let h = class.adjoint()?;
    let g = class.support()?;
    let canonical = SupportFunction::new(fan.clone(), vec![Rational::one(); fan.rays().len()]).ok();
    let mut records = Vec::new();
    for u in refinement.rays() {
        if fan.ray_index(u).is_some() {
            continue;
        }
        let uq = u.to_rational();
        let host = fan.cone_containing_rational(&uq).ok_or(DivisorError::OutsideSupport)?;
        let on_x = class.newton.support_value(u)?;
        let discrepancy = uq.pair(h.linear_extension(host)) - Rational::one() - &on_x;
        let class_correction = &on_x - uq.pair(g.linear_extension(host));
        let canonical_only = canonical.as_ref().map(|k| uq.pair(k.linear_extension(host)) - Rational::one());
        let meets_x = match policy {
            MeetsPolicy::Conservative => true,
            MeetsPolicy::Relaxed => class.newton.face_dimension(u) >= 1,
        };
        records.push(DiscrepancyRecord {
            ray: u.clone(),
            host_cone: host,
            discrepancy,
            canonical_only,
            class_correction,
            meets_x,
        });
    }
    let terminal = records.iter().all(|r| !r.meets_x || r.discrepancy.is_positive());
    Ok(DiscrepancyReport { resolution: refinement.clone(), records, terminal })
}

/// A smooth refinement with at least one exceptional ray.
///
/// For a fan that is already smooth the first cone is subdivided at the sum
/// of its rays, which keeps the fan smooth.
pub fn witness_resolution(fan: &Fan) -> Fan {
    let d = fan.desingularize();
    if d.rays().len() > fan.rays().len() {
        return d;
    }
    let rays = d.cone_rays(0);
    let dim = d.dim();
    let sum = rays.iter().fold(NPoint::zero(dim), |a, r| a.add(r));
    d.star_subdivide(&sum).expect("the sum of a cone's rays lies in it")
}

/// Terminality of the pair, decided on one resolution.
pub fn is_terminal_pair(class: &HypersurfaceClass, policy: MeetsPolicy) -> Result<DiscrepancyReport, DivisorError> {
    discrepancies(class, &witness_resolution(class.fan()), policy)
}

/// Growth order of `dim Γ(m D_h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    NegInfinity,
    Dim(usize),
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::NegInfinity => f.write_str("-inf"),
            Kappa::Dim(d) => write!(f, "{d}"),
        }
    }
}

impl Kappa {
    pub fn from_polytope(p: &Polytope) -> Kappa {
        if p.is_empty() {
            Kappa::NegInfinity
        } else {
            Kappa::Dim(p.dim() as usize)
        }
    }
}

pub fn kappa(h: &SupportFunction) -> Result<Kappa, DivisorError> {
    Ok(Kappa::from_polytope(h.box_polytope()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::coordinate_fan;
    use num_traits::Zero;

    fn n(v: &[i64]) -> NPoint {
        NPoint::from_i64(v)
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn plane() -> Fan {
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

    fn octant_class(c: i64) -> HypersurfaceClass {
        let f = coordinate_fan(3);
        HypersurfaceClass::from_divisor(&ToricDivisor::new(f, vec![q(c); 6]).unwrap()).unwrap()
    }

    #[test]
    fn hyperplane_class_of_plane() {
        let f = plane();
        let idx = f.ray_index(&n(&[-1, -1])).unwrap();
        let mut vals = vec![q(0); 3];
        vals[idx] = q(-1);
        let h = SupportFunction::new(f.clone(), vals).unwrap();
        let c = f.cones().iter().position(|c| !c.contains(&idx)).unwrap();
        assert_eq!(h.linear_extension(c), &MRational::from_ratios(&[(0, 1), (0, 1)]));
        assert!(h.is_nef());
        assert!(h.is_ample());
        assert_eq!(kappa(&h).unwrap(), Kappa::Dim(2));

        let anti = HypersurfaceClass::from_divisor(&ToricDivisor::new(f, vec![q(1); 3]).unwrap()).unwrap();
        assert!(anti.values().iter().all(|g| *g == q(-1)));
        assert!(anti.adjoint().unwrap().values().iter().all(Zero::is_zero));
    }

    #[test]
    fn divisor_round_trip() {
        let f = coordinate_fan(3);
        let d = ToricDivisor::new(f, (0..6).map(q).collect()).unwrap();
        let h = d.support().unwrap();
        assert_eq!(h.values()[2], q(-2));
        assert_eq!(ToricDivisor::from_support(&h), d);
    }

    #[test]
    fn non_q_cartier_is_rejected() {
        let sq = vec![n(&[1, 0, 1]), n(&[0, 1, 1]), n(&[-1, 0, 1]), n(&[0, -1, 1])];
        let f = Fan::from_cones(3, vec![sq]).unwrap();
        let ok = SupportFunction::new(f.clone(), vec![q(1); 4]);
        assert!(ok.is_ok());
        let bad = SupportFunction::new(f, vec![q(1), q(0), q(0), q(0)]);
        assert_eq!(bad.unwrap_err(), DivisorError::NotQCartier(0));
    }

    #[test]
    fn empty_box_is_distinct() {
        let h = SupportFunction::new(coordinate_fan(3), vec![q(1); 6]).unwrap();
        assert_eq!(h.nef_status().unwrap(), NefStatus::EmptyAdjointPolytope);
        assert!(!h.is_nef());
        assert_eq!(kappa(&h).unwrap(), Kappa::NegInfinity);
    }

    #[test]
    fn zero_function_extends_by_origin() {
        let h = SupportFunction::new(coordinate_fan(3), vec![q(0); 6]).unwrap();
        assert!(h.linear_extensions().iter().all(|m| m.is_zero()));
        assert_eq!(h.evaluate(&n(&[1, 1, 1]).to_rational()).unwrap(), q(0));
        assert!(h.is_nef());
        assert!(!h.is_ample());
    }

    #[test]
    fn transport_to_subdivision() {
        let c = octant_class(1);
        assert_eq!(c.newton_polytope().vertices().len(), 8);
        let sub = coordinate_fan(3).star_subdivide(&n(&[1, 1, 1])).unwrap();
        let t = c.transport(&sub);
        let i = sub.ray_index(&n(&[1, 1, 1])).unwrap();
        assert_eq!(t.values()[i], q(-3));
        let same = c.transport(c.fan());
        assert_eq!(same.values(), c.values());
    }

    #[test]
    fn discrepancy_at_cube_corner() {
        let c = octant_class(1);
        let sub = coordinate_fan(3).star_subdivide(&n(&[1, 1, 1])).unwrap();
        let r = discrepancies(&c, &sub, MeetsPolicy::Conservative).unwrap();
        assert_eq!(r.records.len(), 1);
        let rec = &r.records[0];
        assert_eq!(rec.discrepancy, q(2));
        assert_eq!(rec.canonical_only, Some(q(2)));
        assert_eq!(rec.class_correction, q(0));
        assert!(r.terminal);
    }

    #[test]
    fn singular_cone_is_not_terminal() {
        let f = Fan::from_cones(
            2,
            vec![
                vec![n(&[1, 0]), n(&[-1, 3])],
                vec![n(&[-1, 3]), n(&[0, -1])],
                vec![n(&[0, -1]), n(&[1, 0])],
            ],
        )
        .unwrap();
        let c = HypersurfaceClass::from_divisor(&ToricDivisor::new(f, vec![q(0); 3]).unwrap()).unwrap();
        let r = is_terminal_pair(&c, MeetsPolicy::Conservative).unwrap();
        assert!(!r.terminal);
        let at = r.records.iter().find(|x| x.ray == n(&[0, 1])).unwrap();
        assert_eq!(at.discrepancy, Rational::new((-1).into(), 3.into()));
    }

    #[test]
    fn refinement_is_required() {
        let c = octant_class(1);
        assert_eq!(
            discrepancies(&c, &plane(), MeetsPolicy::Conservative).unwrap_err(),
            DivisorError::NotARefinement
        );
    }

    #[test]
    fn smooth_witness_has_an_exceptional_ray() {
        let f = coordinate_fan(3);
        let w = witness_resolution(&f);
        assert!(w.is_smooth());
        assert_eq!(w.rays().len(), 7);
        let r = is_terminal_pair(&octant_class(1), MeetsPolicy::Conservative).unwrap();
        assert!(r.terminal);
        assert_eq!(r.records.len(), 1);
    }

    #[test]
    fn class_must_be_nef() {
        // on the plane, −D for a line has an empty polytope
        let f = plane();
        let e = HypersurfaceClass::from_divisor(&ToricDivisor::new(f, vec![q(-1); 3]).unwrap());
        assert_eq!(e.unwrap_err(), DivisorError::EmptyClass);
    }
}
