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


//! Double description for polyhedral cones `{x : a_k · x ≥ 0}`.
//!
//! Inequalities are folded in one at a time. While a lineality direction
//! crosses the new hyperplane it is used as a pivot; afterwards the usual
//! positive/negative ray pairing runs with the combinatorial adjacency test.

use num_traits::{Signed, Zero};

use crate::lattice::Integer;
use crate::linalg::{dot_int, primitive_int};

/// Generators of a cone: `cone = cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<Integer>>,
    pub lineality: Vec<Vec<Integer>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

/// Extreme rays and lineality of `{x ∈ R^dim : row · x ≥ 0 for every row}`.
pub fn cone_from_inequalities(dim: usize, rows: &[Vec<Integer>]) -> ConeGenerators {
    let n_rows = rows.len();
    let mut lineality: Vec<Vec<Integer>> = (0..dim)
        .map(|i| (0..dim).map(|j| Integer::from((i == j) as u8)).collect())
        .collect();
    let mut rays: Vec<(Vec<Integer>, Bits)> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        if let Some(pos) = lineality.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l = lineality.swap_remove(pos);
            let mut al = dot_int(a, &l);
            if al.is_negative() {
                l = l.iter().map(|x| -x).collect();
                al = -al;
            }
            for v in lineality.iter_mut() {
                let av = dot_int(a, v);
                if !av.is_zero() {
                    *v = primitive_int(&combine(&al, v, &av, &l));
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = dot_int(a, r);
                if !ar.is_zero() {
                    *r = primitive_int(&combine(&al, r, &ar, &l));
                }
                z.set(k);
            }
            let mut z = Bits::new(n_rows);
            for j in 0..k {
                z.set(j);
            }
            rays.push((primitive_int(&l), z));
            continue;
        }

        let values: Vec<Integer> = rays.iter().map(|(r, _)| dot_int(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if values[i].is_zero() {
                    z.set(k);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<Integer>, Bits)> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.and(&rays[n].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, z))| i == p || i == n || !z.contains(&common));
                if adjacent {
                    // (a·p) n − (a·n) p lies on the hyperplane
                    let v = combine(&values[p], &rays[n].0, &values[n], &rays[p].0);
                    let mut z = common;
                    z.set(k);
                    next.push((primitive_int(&v), z));
                }
            }
        }
        for (i, (r, z)) in rays.into_iter().enumerate() {
            if values[i].is_positive() {
                next.push((r, z));
            } else if values[i].is_zero() {
                let mut z = z;
                z.set(k);
                next.push((r, z));
            }
        }
        rays = next;
    }

    let mut rays: Vec<Vec<Integer>> = rays.into_iter().map(|(r, _)| r).collect();
    rays.sort();
    rays.dedup();
    ConeGenerators { rays, lineality }
}

/// `s·v − t·w`
fn combine(s: &Integer, v: &[Integer], t: &Integer, w: &[Integer]) -> Vec<Integer> {
    v.iter().zip(w).map(|(x, y)| s * x - t * y).collect()
}
