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

use num_traits::{Signed, Zero};

use crate::fan::Fan;
use crate::lattice::{Integer, NPoint};
use crate::linalg::{dot_int, integer_kernel, primitive_int};

use super::{wall_curves, CurveClass, MmpError, WallCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    Fibration,
    Divisorial,
    Flip,
}

/// Support of an extremal class split by sign, with the zero parts of its walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    /// For each wall of the class, its rays with zero coefficient.
    pub zero_sets: Vec<Vec<usize>>,
}

impl Circuit {
    pub fn support(&self) -> Vec<usize> {
        let mut z: Vec<usize> = self.positive.iter().chain(&self.negative).copied().collect();
        z.sort();
        z
    }

    /// Cones `Z \ {i} ∪ W0` for `i` in `side`.
    fn cones(&self, side: &[usize]) -> Vec<Vec<usize>> {
        let z = self.support();
        let mut out = Vec::new();
        for w0 in &self.zero_sets {
            for i in side {
                let mut c: Vec<usize> = z.iter().filter(|&&r| r != *i).chain(w0).copied().collect();
                c.sort();
                out.push(c);
            }
        }
        out
    }
}

pub fn circuit_of(curves: &[WallCurve], class: &CurveClass) -> Result<Circuit, MmpError> {
    let mut zero_sets = BTreeSet::new();
    for c in curves.iter().filter(|c| &c.class == class) {
        zero_sets.insert(c.wall.rays.iter().copied().filter(|&r| class.0[r].is_zero()).collect::<Vec<_>>());
    }
    if zero_sets.is_empty() {
        return Err(MmpError::UnknownClass);
    }
    let positive = (0..class.0.len()).filter(|&i| class.0[i].is_positive()).collect();
    let negative = (0..class.0.len()).filter(|&i| class.0[i].is_negative()).collect();
    Ok(Circuit { positive, negative, zero_sets: zero_sets.into_iter().collect() })
}

pub fn classify(c: &Circuit) -> ContractionKind {
    match c.negative.len() {
        0 => ContractionKind::Fibration,
        1 => ContractionKind::Divisorial,
        _ => ContractionKind::Flip,
    }
}

/// Swap the cones over the positive side of the circuit for those over the
/// negative side.
fn exchange(fan: &Fan, circuit: &Circuit) -> Result<Fan, MmpError> {
    let old: BTreeSet<Vec<usize>> = circuit.cones(&circuit.positive).into_iter().collect();
    let present: BTreeSet<&Vec<usize>> = fan.cones().iter().collect();
    if let Some(missing) = old.iter().find(|c| !present.contains(c)) {
        return Err(MmpError::Internal(format!("cone {missing:?} of the extremal ray is not in the fan")));
    }
    let mut cones: Vec<Vec<NPoint>> = fan
        .cones()
        .iter()
        .filter(|c| !old.contains(*c))
        .map(|c| c.iter().map(|&r| fan.rays()[r].clone()).collect())
        .collect();
    for c in circuit.cones(&circuit.negative) {
        cones.push(c.iter().map(|&r| fan.rays()[r].clone()).collect());
    }
    Ok(Fan::from_cones(fan.dim(), cones)?)
}

/// Result of contracting an extremal ray.
#[derive(Clone, Debug)]
pub enum Contraction {
    Divisorial { fan: Fan, removed: NPoint },
    Flip { fan: Fan },
    Fibration(FibrationData),
}

/// Contract the extremal ray spanned by `class`.
pub fn contract(fan: &Fan, curves: &[WallCurve], class: &CurveClass) -> Result<(Contraction, Circuit), MmpError> {
    let circuit = circuit_of(curves, class)?;
    let result = match classify(&circuit) {
        ContractionKind::Fibration => Contraction::Fibration(fibration(fan, &circuit)),
        ContractionKind::Divisorial => {
            let removed = fan.rays()[circuit.negative[0]].clone();
            let next = exchange(fan, &circuit)?;
            if next.rays().len() + 1 != fan.rays().len() || next.ray_index(&removed).is_some() {
                return Err(MmpError::Internal("divisorial contraction kept the exceptional ray".into()));
            }
            Contraction::Divisorial { fan: next, removed }
        }
        ContractionKind::Flip => {
            let next = exchange(fan, &circuit)?;
            if next.rays() != fan.rays() {
                return Err(MmpError::Internal("flip changed the ray set".into()));
            }
            Contraction::Flip { fan: next }
        }
    };
    Ok((result, circuit))
}

/// Flip of a fan along a flipping class.
pub fn flip(fan: &Fan, class: &CurveClass) -> Result<Fan, MmpError> {
    let curves = wall_curves(fan)?;
    match contract(fan, &curves, class)? {
        (Contraction::Flip { fan }, _) => Ok(fan),
        (_, c) => Err(MmpError::WrongKind { kind: ContractionKind::Flip, found: classify(&c) }),
    }
}

/// Fibration data: fiber dimension and the quotient fan.
#[derive(Clone, Debug)]
pub struct FibrationData {
    pub fiber_dim: usize,
    pub base_dim: usize,
    /// Maximal cones of the base as primitive vectors in `N / span(Z)`.
    pub base_cones: Vec<Vec<Vec<Integer>>>,
    pub base: Option<Fan>,
    /// For one-dimensional fibers: `u` with the fiber rays `±u`.
    pub fiber_direction: Option<NPoint>,
}

fn fibration(fan: &Fan, circuit: &Circuit) -> FibrationData {
    let z = circuit.support();
    let rows: Vec<Vec<Integer>> = z.iter().map(|&i| fan.rays()[i].coords().to_vec()).collect();
    let annihilator = integer_kernel(&rows, fan.dim());
    let base_dim = annihilator.len();
    let project = |r: &NPoint| -> Vec<Integer> {
        primitive_int(&annihilator.iter().map(|m| dot_int(r.coords(), m)).collect::<Vec<_>>())
    };
    let mut base_cones: Vec<Vec<Vec<Integer>>> = circuit
        .zero_sets
        .iter()
        .map(|w0| {
            let mut c: Vec<Vec<Integer>> = w0.iter().map(|&i| project(&fan.rays()[i])).collect();
            c.sort();
            c
        })
        .collect();
    base_cones.sort();
    base_cones.dedup();
    let base = if base_dim == 0 {
        None
    } else {
        Fan::from_cones(
            base_dim,
            base_cones.iter().map(|c| c.iter().map(|v| NPoint::new(v.clone())).collect()).collect(),
        )
        .ok()
    };
    let fiber_direction = (z.len() == 2).then(|| fan.rays()[z[0]].clone());
    FibrationData { fiber_dim: z.len() - 1, base_dim, base_cones, base, fiber_direction }
}
