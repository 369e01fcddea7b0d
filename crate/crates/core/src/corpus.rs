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


//! Built-in example pairs.
//!
//! Both examples live on the fourteen rays `±e_i` and `(±1,±1,±1)`. The fan
//! is the normal fan of the class polytope with every square cone split
//! along the diagonal joining its two coordinate rays.

use crate::divisor::{HypersurfaceClass, ToricDivisor};
use crate::fan::{dual_fan, Fan};
use crate::lattice::{NPoint, Rational};
use crate::polytope::{intersect, Halfspace};

/// A fan with a hypersurface class on it.
#[derive(Clone, Debug)]
pub struct ExamplePair {
    pub name: &'static str,
    pub summary: &'static str,
    pub class: HypersurfaceClass,
}

impl ExamplePair {
    pub fn fan(&self) -> &Fan {
        self.class.fan()
    }
}

pub const NAMES: [&str; 2] = ["kappa-zero", "kappa-one"];

/// `p_1..p_6` then `q_1..q_8`.
pub fn example_rays() -> Vec<NPoint> {
    [
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
        [1, 1, 1],
        [-1, -1, -1],
        [1, 1, -1],
        [-1, -1, 1],
        [1, -1, 1],
        [-1, 1, -1],
        [-1, 1, 1],
        [1, -1, -1],
    ]
    .iter()
    .map(|v| NPoint::from_i64(v))
    .collect()
}

pub fn example(name: &str) -> Option<ExamplePair> {
    match name {
        "kappa-zero" => Some(build(
            "kappa-zero",
            "coefficients 1 on the coordinate rays and 2 on the diagonal rays; adjoint polytope is a point",
            &[1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2],
        )),
        "kappa-one" => Some(build(
            "kappa-one",
            "coefficients 2,2 on ±e1, 1 on the other coordinate rays, 3 on the diagonal rays; adjoint polytope is a segment",
            &[2, 2, 1, 1, 1, 1, 3, 3, 3, 3, 3, 3, 3, 3],
        )),
        _ => None,
    }
}

pub fn all_examples() -> Vec<ExamplePair> {
    NAMES.iter().map(|n| example(n).expect("built-in name")).collect()
}

fn build(name: &'static str, summary: &'static str, coefficients: &[i64; 14]) -> ExamplePair {
    let rays = example_rays();
    let halfspaces: Vec<Halfspace> = rays
        .iter()
        .zip(coefficients)
        .map(|(r, &c)| Halfspace::new(r.clone(), Rational::from_integer((-c).into())).expect("nonzero ray"))
        .collect();
    let polytope = intersect(&halfspaces).expect("the class polytope is bounded");
    let normal = dual_fan(&polytope).expect("the class polytope is full-dimensional");
    let fan = split_squares(&normal);
    let coeffs = fan
        .rays()
        .iter()
        .map(|r| {
            let i = rays.iter().position(|x| x == r).expect("fan rays are example rays");
            Rational::from_integer(coefficients[i].into())
        })
        .collect();
    let divisor = ToricDivisor::new(fan, coeffs).expect("one coefficient per ray");
    let class = HypersurfaceClass::from_divisor(&divisor).expect("the example class is base point free");
    ExamplePair { name, summary, class }
}

fn is_coordinate(r: &NPoint) -> bool {
    r.coords().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() == 1
}

fn split_squares(fan: &Fan) -> Fan {
    let mut cones: Vec<Vec<NPoint>> = Vec::new();
    let mut squares: Vec<[Vec<Vec<NPoint>>; 2]> = Vec::new();
    for i in 0..fan.cones().len() {
        let rays = fan.cone_rays(i);
        if rays.len() != 4 {
            cones.push(rays);
            continue;
        }
        let (axis, other): (Vec<NPoint>, Vec<NPoint>) = rays.into_iter().partition(is_coordinate);
        assert_eq!(axis.len(), 2, "square cones carry two coordinate rays");
        let split = |d: &[NPoint], e: &[NPoint]| -> Vec<Vec<NPoint>> {
            e.iter().map(|x| vec![d[0].clone(), d[1].clone(), x.clone()]).collect()
        };
        squares.push([split(&axis, &other), split(&other, &axis)]);
    }
    // first choice everywhere, then the other diagonal where smoothness fails
    let mut choice = vec![0usize; squares.len()];
    for attempt in 0..=squares.len() {
        let mut all = cones.clone();
        for (s, &c) in squares.iter().zip(&choice) {
            all.extend(s[c].iter().cloned());
        }
        let candidate = Fan::from_cones(fan.dim(), all).expect("diagonal splits form a fan");
        if candidate.is_smooth() {
            return candidate;
        }
        if attempt < squares.len() {
            choice[attempt] = 1;
        }
    }
    panic!("no smooth diagonal choice")
}
