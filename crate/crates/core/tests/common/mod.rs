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


//! Independent oracles and random generators shared by the integration tests.
//! The oracles use fixed-width `Ratio<i128>` arithmetic and never call the
//! library's geometry.

#![allow(dead_code)]

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toric_mmp::divisor::SupportFunction;
use toric_mmp::fan::{dual_fan, Fan};
use toric_mmp::lattice::{NPoint, Rational};
use toric_mmp::polytope::{Halfspace, Polytope};

pub type Q = Ratio<i128>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn to_q(r: &Rational) -> Q {
    Q::new(r.numer().to_i128().expect("small"), r.denom().to_i128().expect("small"))
}

pub fn from_q(q: Q) -> Rational {
    Rational::new((*q.numer()).into(), (*q.denom()).into())
}

/// Unique solution of a square system, if any.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= f * p;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Vertices of `{m : (p_i, m) ≥ l_i}` by solving every `dim`-subset of
/// equalities and keeping the feasible solutions.
pub fn brute_vertices(normals: &[Vec<i64>], levels: &[Q], dim: usize) -> Vec<Vec<Q>> {
    let mut all = Vec::new();
    subsets(normals.len(), dim, 0, &mut Vec::new(), &mut all);
    let mut out = Vec::new();
    for s in all {
        let a = s.iter().map(|&i| normals[i].iter().map(|&x| Q::from(x as i128)).collect()).collect();
        let b = s.iter().map(|&i| levels[i]).collect();
        let Some(x) = solve(a, b) else { continue };
        let feasible = normals.iter().zip(levels).all(|(p, l)| {
            p.iter().zip(&x).map(|(&pi, xi)| Q::from(pi as i128) * xi).sum::<Q>() >= *l
        });
        if feasible {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    out
}

pub struct RandomPolytope {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
    pub levels: Vec<Q>,
}

impl RandomPolytope {
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.normals
            .iter()
            .zip(&self.levels)
            .map(|(p, l)| Halfspace::new(NPoint::from_i64(p), from_q(*l)).expect("nonzero normal"))
            .collect()
    }

    pub fn polytope(&self) -> Polytope {
        Polytope::with_dim(self.dim, &self.halfspaces()).expect("bounded by construction")
    }
}

fn random_normal(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A bounding box plus random cuts; sometimes empty or lower dimensional.
pub fn random_polytope(rng: &mut ChaCha8Rng, dim: usize, max_facets: usize) -> RandomPolytope {
    let mut normals = Vec::new();
    let mut levels = Vec::new();
    for i in 0..dim {
        for s in [1i64, -1] {
            let mut e = vec![0; dim];
            e[i] = s;
            normals.push(e);
            levels.push(Q::from(-(rng.gen_range(0..=4) as i128)));
        }
    }
    let extra = rng.gen_range(0..=max_facets - 2 * dim);
    for _ in 0..extra {
        normals.push(random_normal(rng, dim, 3));
        levels.push(Q::new(rng.gen_range(-9..=1), rng.gen_range(1..=3)));
    }
    RandomPolytope { dim, normals, levels }
}

/// A full-dimensional lattice polytope in dimension 3 with few facets.
pub fn random_solid(rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let mut hs = Vec::new();
        for i in 0..3 {
            for s in [1i64, -1] {
                let mut e = [0i64; 3];
                e[i] = s;
                hs.push(Halfspace::new(NPoint::from_i64(&e), Rational::from_integer((-rng.gen_range(1..=3)).into())).unwrap());
            }
        }
        for _ in 0..rng.gen_range(0..=3) {
            let p = random_normal(rng, 3, 1);
            if hs.iter().any(|h: &Halfspace| h.normal() == &NPoint::from_i64(&p)) {
                continue;
            }
            hs.push(Halfspace::new(NPoint::from_i64(&p), Rational::from_integer((-rng.gen_range(1..=3)).into())).unwrap());
        }
        let p = Polytope::with_dim(3, &hs).unwrap();
        if p.dim() == 3 && p.vertices().iter().all(|v| v.is_integral()) {
            return p;
        }
    }
}

/// Complete simplicial fans in dimension 3 from normal fans of random solids.
pub fn random_simplicial_fan(rng: &mut ChaCha8Rng) -> Fan {
    loop {
        let f = dual_fan(&random_solid(rng)).unwrap();
        if f.is_simplicial() {
            return f;
        }
    }
}

/// Smooth complete fans in dimension 3 with at most `max_rays` rays, and the
/// solid whose normal fan they refine.
pub fn random_smooth_fan(rng: &mut ChaCha8Rng, max_rays: usize) -> (Fan, Polytope) {
    loop {
        let p = random_solid(rng);
        let f = dual_fan(&p).unwrap().desingularize();
        if f.rays().len() <= max_rays {
            return (f, p);
        }
    }
}

/// Blow up faces of random cones at the sum of their rays, keeping the fan
/// smooth, while the ray count stays within `max_rays`.
pub fn random_blowups(rng: &mut ChaCha8Rng, fan: Fan, count: usize, max_rays: usize) -> Fan {
    let mut fan = fan;
    for _ in 0..count {
        if fan.rays().len() >= max_rays {
            break;
        }
        let rays = fan.cone_rays(rng.gen_range(0..fan.cones().len()));
        let k = rng.gen_range(2..=rays.len());
        let sum = rays[..k].iter().fold(NPoint::zero(fan.dim()), |a, r| a.add(r));
        fan = fan.star_subdivide(&sum).expect("the point lies in the fan");
    }
    fan
}

/// A simplicial complete fan with the support function of a solid whose
/// normal fan it is; the function is ample.
pub fn random_ample(rng: &mut ChaCha8Rng) -> SupportFunction {
    loop {
        let p = random_solid(rng);
        let fan = dual_fan(&p).unwrap();
        if fan.is_simplicial() {
            let values = fan.rays().iter().map(|r| p.support_value(r).unwrap()).collect();
            return SupportFunction::new(fan, values).unwrap();
        }
    }
}

/// `h = min_k (·, m_k)` over random points, optionally disturbed at one ray.
pub fn random_convexified(rng: &mut ChaCha8Rng, fan: &Fan, disturb: bool) -> SupportFunction {
    let pts: Vec<Vec<i64>> = (0..rng.gen_range(1..=4)).map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let mut values: Vec<Rational> = fan
        .rays()
        .iter()
        .map(|r| {
            pts.iter()
                .map(|m| r.coords().iter().zip(m).map(|(a, &b)| a * num_bigint::BigInt::from(b)).sum::<num_bigint::BigInt>())
                .min()
                .map(Rational::from_integer)
                .unwrap()
        })
        .collect();
    if disturb {
        let i = rng.gen_range(0..values.len());
        let d = if rng.gen_bool(0.5) { 1 } else { -1 };
        values[i] += Rational::from_integer(d.into());
    }
    SupportFunction::new(fan.clone(), values).unwrap()
}

/// `h(p) = p(Box_h)` at every ray, `h_σ ∈ Box_h`, and the denominator-clearing
/// multiple puts every `m·h_σ` on a lattice point of `m·Box_h`.
pub fn support_certificate_holds(h: &SupportFunction) -> Result<(), String> {
    let b = h.box_polytope().map_err(|e| e.to_string())?;
    for (p, v) in h.fan().rays().iter().zip(h.values()) {
        if &b.support_value(p).map_err(|e| e.to_string())? != v {
            return Err(format!("h({p:?}) differs from the support value"));
        }
    }
    if !h.linear_extensions().iter().all(|m| b.contains(m)) {
        return Err("some h_σ lies outside Box_h".into());
    }
    let m = h.clearing_multiple();
    let mb = b.scale(m.to_u64().ok_or("multiple too large")?);
    let mq = Rational::from_integer(m);
    if !h.linear_extensions().iter().map(|x| x.scale(&mq)).all(|x| x.is_integral() && mb.contains(&x)) {
        return Err("scaled h_σ are not lattice points of the scaled polytope".into());
    }
    Ok(())
}
