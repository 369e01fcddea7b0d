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


use num_traits::{One, Signed};

use crate::divisor::{is_terminal_pair, HypersurfaceClass, Kappa, MeetsPolicy, SupportFunction};
use crate::fan::Fan;
use crate::lattice::{primitivize, NPoint, Rational};

use super::step::Contraction;
use super::{contract, select_negative_extremal, wall_curves, wall_degree, CurveClass, FibrationData, MmpError};

#[derive(Clone, Copy, Debug)]
pub struct MmpOptions {
    /// Defaults to ten times the squared initial ray count.
    pub max_steps: Option<usize>,
    /// Re-check terminality of the pair after every step.
    pub verify_terminal: bool,
    /// Compare discrepancies on a common refinement across every flip.
    pub audit_flips: bool,
    pub policy: MeetsPolicy,
}

impl Default for MmpOptions {
    fn default() -> Self {
        MmpOptions { max_steps: None, verify_terminal: false, audit_flips: true, policy: MeetsPolicy::Conservative }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Divisorial,
    Flip,
    FibrationStop,
    NefStop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    MinimalModel,
    MoriFibration,
    BirationalToProjectiveSpace,
}

/// Discrepancies of the pair before and after a flip at every ray of a
/// common smooth refinement.
#[derive(Clone, Debug)]
pub struct FlipAudit {
    pub rays: Vec<NPoint>,
    pub before: Vec<Rational>,
    pub after: Vec<Rational>,
}

impl FlipAudit {
    pub fn never_decreases(&self) -> bool {
        self.before.iter().zip(&self.after).all(|(b, a)| a >= b)
    }

    pub fn strictly_increases(&self) -> bool {
        self.before.iter().zip(&self.after).any(|(b, a)| a > b)
    }
}

#[derive(Clone, Debug)]
pub struct MmpStep {
    pub kind: StepKind,
    pub class: Option<CurveClass>,
    pub fan_before: Fan,
    pub fan_after: Option<Fan>,
    /// Adjoint degree on the contracted class.
    pub adjoint_degree: Option<Rational>,
    pub removed_ray: Option<NPoint>,
    /// Discrepancy of the contracted pair at the removed ray.
    pub exceptional_discrepancy: Option<Rational>,
    /// `(α, α′)` at the ray through the flipped circuit.
    pub flip_discrepancies: Option<(Rational, Rational)>,
    /// Adjoint degree on the opposite class after a flip.
    pub degree_after_flip: Option<Rational>,
    pub flip_audit: Option<FlipAudit>,
    pub terminal_after: Option<bool>,
}

impl MmpStep {
    fn stop(kind: StepKind, fan: &Fan) -> MmpStep {
        MmpStep {
            kind,
            class: None,
            fan_before: fan.clone(),
            fan_after: None,
            adjoint_degree: None,
            removed_ray: None,
            exceptional_discrepancy: None,
            flip_discrepancies: None,
            degree_after_flip: None,
            flip_audit: None,
            terminal_after: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MmpOutcome {
    pub kind: OutcomeKind,
    pub class: HypersurfaceClass,
    pub adjoint: SupportFunction,
    pub trace: Vec<MmpStep>,
    pub kappa: Kappa,
    pub fibration: Option<FibrationData>,
    /// `X · ℓ` on a one-dimensional fiber.
    pub fiber_degree: Option<Rational>,
}

impl MmpOutcome {
    pub fn fan(&self) -> &Fan {
        self.class.fan()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.trace.iter().filter(|s| s.kind == kind).count()
    }
}

/// Discrepancy of `(fan of class, X)` at `u`; zero at rays of the fan.
pub fn pair_discrepancy(class: &HypersurfaceClass, u: &NPoint) -> Result<Rational, MmpError> {
    let h = class.adjoint()?;
    let on_x = class.newton_polytope().support_value(u).map_err(crate::divisor::DivisorError::from)?;
    Ok(h.evaluate(&u.to_rational())? - Rational::one() - on_x)
}

fn audit(before: &HypersurfaceClass, after: &HypersurfaceClass) -> Result<FlipAudit, MmpError> {
    let refinement = before.fan().common_refinement(after.fan()).desingularize();
    let rays = refinement.rays().to_vec();
    let b = rays.iter().map(|u| pair_discrepancy(before, u)).collect::<Result<_, _>>()?;
    let a = rays.iter().map(|u| pair_discrepancy(after, u)).collect::<Result<_, _>>()?;
    Ok(FlipAudit { rays, before: b, after: a })
}

/// Run the minimal model program on a terminal pair with simplicial fan.
pub fn mmp_run(input: &HypersurfaceClass, options: MmpOptions) -> Result<MmpOutcome, MmpError> {
    let fan = input.fan();
    if !fan.is_simplicial() || !fan.is_complete() {
        return Err(MmpError::NotSimplicial);
    }
    let r = fan.rays().len();
    let max_steps = options.max_steps.unwrap_or(10 * r * r);
    let mut class = input.clone();
    let mut trace = Vec::new();
    loop {
        let h = class.adjoint()?;
        let curves = wall_curves(class.fan())?;
        let Some(c) = select_negative_extremal(&h, &curves)? else {
            if !h.is_nef() {
                return Err(MmpError::Internal("adjoint is nonnegative on all walls but not nef".into()));
            }
            trace.push(MmpStep::stop(StepKind::NefStop, class.fan()));
            let kappa = Kappa::from_polytope(h.box_polytope()?);
            return Ok(MmpOutcome {
                kind: OutcomeKind::MinimalModel,
                class,
                adjoint: h,
                trace,
                kappa,
                fibration: None,
                fiber_degree: None,
            });
        };
        if trace.len() >= max_steps {
            return Err(MmpError::StepLimit(max_steps));
        }
        let degree = wall_degree(&h, &c);
        let (result, circuit) = contract(class.fan(), &curves, &c)?;
        let mut step = MmpStep::stop(StepKind::NefStop, class.fan());
        step.class = Some(c.clone());
        step.adjoint_degree = Some(degree);
        let next = match result {
            Contraction::Fibration(data) => {
                let mut fiber_degree = None;
                let mut kind = OutcomeKind::MoriFibration;
                if data.fiber_dim == 1 {
                    let x: Rational = -circuit
                        .support()
                        .iter()
                        .map(|&i| Rational::from_integer(c.0[i].clone()) * &class.values()[i])
                        .sum::<Rational>();
                    if !x.is_integer() || x > Rational::one() || x.is_negative() {
                        return Err(MmpError::FiberDegree(x));
                    }
                    if x.is_one() {
                        kind = OutcomeKind::BirationalToProjectiveSpace;
                    }
                    fiber_degree = Some(x);
                }
                step.kind = StepKind::FibrationStop;
                trace.push(step);
                return Ok(MmpOutcome {
                    kind,
                    class,
                    adjoint: h,
                    trace,
                    kappa: Kappa::NegInfinity,
                    fibration: Some(data),
                    fiber_degree,
                });
            }
            Contraction::Divisorial { fan, removed } => {
                let next = class.transport(&fan);
                step.kind = StepKind::Divisorial;
                step.exceptional_discrepancy = Some(pair_discrepancy(&next, &removed)?);
                step.removed_ray = Some(removed);
                next
            }
            Contraction::Flip { fan } => {
                let next = class.transport(&fan);
                step.kind = StepKind::Flip;
                let dim = fan.dim();
                let w = circuit
                    .positive
                    .iter()
                    .fold(NPoint::zero(dim), |acc, &i| acc.add(&fan.rays()[i].scale(&c.0[i])));
                let u = primitivize(&w).map_err(|e| MmpError::Internal(e.to_string()))?;
                step.flip_discrepancies = Some((pair_discrepancy(&class, &u)?, pair_discrepancy(&next, &u)?));
                step.degree_after_flip = Some(wall_degree(&next.adjoint()?, &c.neg()));
                if options.audit_flips {
                    step.flip_audit = Some(audit(&class, &next)?);
                }
                next
            }
        };
        if options.verify_terminal {
            step.terminal_after = Some(is_terminal_pair(&next, options.policy)?.terminal);
        }
        step.fan_after = Some(next.fan().clone());
        trace.push(step);
        class = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example;
    use crate::fan::coordinate_fan;

    #[test]
    fn first_example_contracts_eight_divisors() {
        let e = example("kappa-zero").unwrap();
        let out = mmp_run(&e.class, MmpOptions::default()).unwrap();
        assert_eq!(out.kind, OutcomeKind::MinimalModel);
        assert_eq!(out.count(StepKind::Divisorial), 8);
        assert_eq!(out.fan(), &coordinate_fan(3));
        assert_eq!(out.kappa, Kappa::Dim(0));
        for s in out.trace.iter().filter(|s| s.kind == StepKind::Divisorial) {
            assert!(s.exceptional_discrepancy.as_ref().unwrap().is_positive());
        }
    }

    #[test]
    fn nef_adjoint_stops_immediately() {
        let e = example("kappa-zero").unwrap();
        let on_sigma = e.class.transport(&coordinate_fan(3));
        let out = mmp_run(&on_sigma, MmpOptions::default()).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].kind, StepKind::NefStop);
    }

    #[test]
    fn second_example_keeps_the_segment() {
        let e = example("kappa-one").unwrap();
        let out = mmp_run(&e.class, MmpOptions { verify_terminal: true, ..Default::default() }).unwrap();
        assert_eq!(out.kind, OutcomeKind::MinimalModel);
        assert_eq!(out.kappa, Kappa::Dim(1));
        let expected = e.class.adjoint().unwrap().box_polytope().unwrap().clone();
        assert_eq!(out.adjoint.box_polytope().unwrap(), &expected);
        assert!(out.trace.iter().all(|s| s.terminal_after != Some(false)));
    }

    fn flip_fixture() -> HypersurfaceClass {
        let n = |v: &[i64]| NPoint::from_i64(v);
        let (e1, e2, e3, e4, w) = (n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[1, 1, -1]), n(&[-1, -1, 0]));
        let cones = vec![
            vec![e1.clone(), e2.clone(), e3.clone()],
            vec![e1.clone(), e2.clone(), e4.clone()],
            vec![w.clone(), e1.clone(), e3.clone()],
            vec![w.clone(), e3.clone(), e2.clone()],
            vec![w.clone(), e2.clone(), e4.clone()],
            vec![w, e4, e1],
        ];
        let fan = Fan::from_cones(3, cones).unwrap();
        let q = |a: i64| Rational::from_integer(a.into());
        let p = crate::polytope::intersect(&[
            crate::polytope::Halfspace::new(n(&[0, 0, 1]), q(0)).unwrap(),
            crate::polytope::Halfspace::new(n(&[0, 0, -1]), q(0)).unwrap(),
            crate::polytope::Halfspace::new(n(&[1, 1, 0]), q(0)).unwrap(),
            crate::polytope::Halfspace::new(n(&[-1, -1, 0]), q(0)).unwrap(),
            crate::polytope::Halfspace::new(n(&[-1, 0, 0]), q(0)).unwrap(),
            crate::polytope::Halfspace::new(n(&[1, 0, 0]), q(-1)).unwrap(),
        ])
        .unwrap();
        HypersurfaceClass::from_newton_polytope(&fan, p).unwrap()
    }

    #[test]
    fn quadrilateral_flip() {
        let class = flip_fixture();
        let fan = class.fan().clone();
        assert!(fan.is_complete() && fan.is_smooth());
        let out = mmp_run(&class, MmpOptions::default()).unwrap();
        let step = &out.trace[0];
        assert_eq!(step.kind, StepKind::Flip);
        assert_eq!(step.adjoint_degree, Some(Rational::from_integer((-1).into())));
        assert!(step.degree_after_flip.as_ref().unwrap().is_positive());
        let (a, b) = step.flip_discrepancies.clone().unwrap();
        assert_eq!(&b - &a, Rational::one());
        let audit = step.flip_audit.as_ref().unwrap();
        assert!(audit.never_decreases() && audit.strictly_increases());
        let flipped = step.fan_after.clone().unwrap();
        assert_eq!(flipped.rays(), fan.rays());
        let back = super::super::flip(&flipped, &step.class.as_ref().unwrap().neg()).unwrap();
        assert_eq!(back, fan);
    }
}
