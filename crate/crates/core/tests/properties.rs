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


//! Property tests for the invariants of each layer. Inputs are generated from
//! a seed so failures shrink to a single reproducible number.

mod common;

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use toric_mmp::corpus::example;
use toric_mmp::divisor::{
    discrepancies, HypersurfaceClass, MeetsPolicy, SupportFunction, ToricDivisor,
};
use toric_mmp::fan::{dual_fan, Fan};
use toric_mmp::io;
use toric_mmp::lattice::{primitivize, NPoint, Rational};
use toric_mmp::mmp::wall_curves;
use toric_mmp::puff::construct_minimal_model;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn random_primitive(rng: &mut impl Rng, dim: usize) -> NPoint {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-5..=5)).collect();
        if v.iter().any(|&x| x != 0) {
            return primitivize(&NPoint::from_i64(&v)).unwrap();
        }
    }
}

fn subdivide_randomly(rng: &mut impl Rng, fan: &Fan) -> Fan {
    let rays = fan.cone_rays(rng.gen_range(0..fan.cones().len()));
    let w = rays.iter().fold(NPoint::zero(fan.dim()), |a, r| a.add(&r.scale(&rng.gen_range(1..=3).into())));
    fan.star_subdivide(&primitivize(&w).unwrap()).unwrap()
}

/// Every maximal cone of `fine` lies in a maximal cone of `coarse`.
fn cones_nest(fine: &Fan, coarse: &Fan) -> bool {
    (0..fine.cones().len()).all(|i| {
        let rays = fine.cone_rays(i);
        (0..coarse.cones().len()).any(|j| rays.iter().all(|r| coarse.cone(j).contains(r)))
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn polytope_vertices_satisfy_constraints(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = rng.gen_range(1..=4);
        let rp = common::random_polytope(&mut rng, dim, 14);
        let p = rp.polytope();
        for v in p.vertices() {
            prop_assert!(p.halfspaces().iter().all(|h| h.holds(v)));
        }
        for h in p.halfspaces() {
            if !p.is_empty() {
                prop_assert!(&p.support_value(h.normal()).unwrap() >= h.level());
            }
        }
        if p.dim() == dim as isize {
            for i in 0..p.halfspaces().len() {
                prop_assert!(!p.contributes_properly(i) || p.contributes(&p.halfspaces()[i]));
            }
        }
    }

    #[test]
    fn polytope_matches_brute_force(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = rng.gen_range(1..=3);
        let rp = common::random_polytope(&mut rng, dim, 10);
        let mut ours: Vec<Vec<common::Q>> =
            rp.polytope().vertices().iter().map(|v| v.coords().iter().map(common::to_q).collect()).collect();
        ours.sort();
        prop_assert_eq!(ours, common::brute_vertices(&rp.normals, &rp.levels, dim));
    }

    #[test]
    fn lattice_counts_grow(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let p = common::random_solid(&mut rng);
        let counts: Vec<usize> = (1..=3).map(|k| p.scale(k).count_lattice_points()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn dual_fans_are_complete(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let p = common::random_solid(&mut rng);
        let fan = dual_fan(&p).unwrap();
        prop_assert!(fan.is_complete());
        let proper: BTreeSet<NPoint> = (0..p.halfspaces().len())
            .filter(|&i| p.contributes_properly(i))
            .map(|i| p.halfspaces()[i].normal().clone())
            .collect();
        prop_assert_eq!(fan.rays().iter().cloned().collect::<BTreeSet<_>>(), proper);
        if p.is_simple().unwrap() {
            prop_assert!(fan.is_simplicial());
        }
    }

    #[test]
    fn subdivisions_refine(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = dual_fan(&common::random_solid(&mut rng)).unwrap();
        let starred = subdivide_randomly(&mut rng, &fan.desingularize());
        prop_assert!(starred.is_complete() && starred.refines(&fan) && cones_nest(&starred, &fan));
        let smooth = fan.desingularize();
        prop_assert!(smooth.is_smooth() && smooth.is_complete() && cones_nest(&smooth, &fan));
        let old: BTreeSet<&NPoint> = fan.rays().iter().collect();
        prop_assert!(old.is_subset(&smooth.rays().iter().collect()));
        let other = dual_fan(&common::random_solid(&mut rng)).unwrap();
        let common_fan = fan.common_refinement(&other);
        prop_assert!(common_fan.refines(&fan) && common_fan.refines(&other));
    }

    #[test]
    fn fan_documents_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = dual_fan(&common::random_solid(&mut rng)).unwrap();
        let text = io::save_fan(&fan, None);
        let back = io::parse_fan(&text, "round trip").unwrap();
        prop_assert_eq!(&back, &fan);
        prop_assert_eq!(io::save_fan(&back, None), text);
    }

    #[test]
    fn divisor_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = common::random_simplicial_fan(&mut rng);
        let coeffs: Vec<Rational> =
            fan.rays().iter().map(|_| Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into())).collect();
        let d = ToricDivisor::new(fan, coeffs).unwrap();
        prop_assert_eq!(ToricDivisor::from_support(&d.support().unwrap()), d);
    }

    #[test]
    fn nef_functions_are_support_functions(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let ample = common::random_ample(&mut rng);
        prop_assert!(ample.is_ample());
        let refined = subdivide_randomly(&mut rng, ample.fan());
        let h = if rng.gen_bool(0.5) {
            ample.clone()
        } else {
            SupportFunction::from_fn(refined, |p| ample.evaluate(&p.to_rational()).unwrap()).unwrap()
        };
        let fan = h.fan().clone();
        prop_assert!(h.is_nef());
        let b = h.box_polytope().unwrap().clone();
        for _ in 0..100 {
            let p = random_primitive(&mut rng, 3);
            prop_assert_eq!(h.evaluate(&p.to_rational()).unwrap(), b.support_value(&p).unwrap());
        }
        let k = rng.gen_range(2..=4u64);
        let scaled = h.scaled(&Rational::from_integer(k.into()));
        prop_assert_eq!(scaled.box_polytope().unwrap(), &b.scale(k));
        if h.is_ample() {
            let back = dual_fan(&b).unwrap();
            prop_assert_eq!(back.cones(), fan.cones());
            prop_assert_eq!(back.rays(), fan.rays());
        }
    }

    #[test]
    fn nef_agrees_with_wall_degrees(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = common::random_simplicial_fan(&mut rng);
        let disturb = rng.gen_bool(0.5);
        let h = common::random_convexified(&mut rng, &fan, disturb);
        let walls = wall_curves(&fan).unwrap();
        let convex = walls.iter().all(|w| !toric_mmp::mmp::wall_degree(&h, &w.class).is_negative());
        prop_assert_eq!(h.is_nef(), convex);
    }

    #[test]
    fn wall_relations_are_primitive(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = common::random_simplicial_fan(&mut rng);
        for w in wall_curves(&fan).unwrap() {
            let a = &w.class.0;
            let mut sum = NPoint::zero(3);
            for (ai, r) in a.iter().zip(fan.rays()) {
                sum = sum.add(&r.scale(ai));
            }
            prop_assert!(sum.is_zero());
            prop_assert!(a[w.wall.opposite.0].is_positive() && a[w.wall.opposite.1].is_positive());
            let g = a.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
            prop_assert!(g.is_one());
        }
    }

    #[test]
    fn canonical_discrepancy_dominates(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let fan = common::random_simplicial_fan(&mut rng);
        let class = HypersurfaceClass::from_newton_polytope(&fan, common::random_solid(&mut rng)).unwrap();
        let refined = subdivide_randomly(&mut rng, &fan);
        let rep = discrepancies(&class, &refined, MeetsPolicy::Conservative).unwrap();
        for r in &rep.records {
            let k = r.canonical_only.clone().expect("simplicial cones are Q-Cartier");
            prop_assert!(!r.class_correction.is_negative());
            prop_assert_eq!(&k - &r.discrepancy, r.class_correction.clone());
            prop_assert_eq!(k == r.discrepancy, r.class_correction.is_zero());
        }
    }
}

#[test]
fn puffing_is_seed_independent_on_the_examples() {
    for name in ["kappa-zero", "kappa-one"] {
        let e = example(name).unwrap();
        let models: Vec<_> =
            (0..5).map(|s| construct_minimal_model(&e.class, s, MeetsPolicy::Conservative).unwrap()).collect();
        for m in &models[1..] {
            assert_eq!(m.sigma, models[0].sigma);
            assert_eq!(m.adjoint_polytope, models[0].adjoint_polytope);
        }
        let k: &SupportFunction = &models[0].k;
        assert!(k.is_nef());
        assert_eq!(k.box_polytope().unwrap(), &models[0].adjoint_polytope);
    }
}
