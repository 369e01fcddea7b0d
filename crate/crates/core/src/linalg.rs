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

//! Dense exact linear algebra over `Q` and `Z`.
//!
//! Everything here is sized for desk-scale toric data: matrices with a few
//! dozen rows. Rows are plain `Vec`s so callers can build them from any point
//! type.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::lattice::{Integer, Rational};

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[r][col..width].to_vec();
                for (x, p) in rows[i][col..width].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_int(rows: &[Vec<Integer>]) -> usize {
    rank(&to_rational_rows(rows))
}

pub fn to_rational_rows(rows: &[Vec<Integer>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

/// Dimension of the affine hull of a point set (`-1` when empty).
pub fn affine_rank(points: &[Vec<Rational>]) -> isize {
    let Some(base) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs) as isize
}

/// Coefficients `x` with `Σ x_i · vectors[i] = target`, if such a combination
/// exists. The solution is unique when the vectors are independent.
pub fn express_in_span(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    let dim = target.len();
    // augmented system: one row per coordinate, one column per vector
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &col) in rows.iter().zip(&pivots) {
        x[col] = row[k].clone();
    }
    Some(x)
}

/// Solve `A x = b` for square nonsingular `A`.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(rows.iter().map(|r| r[n].clone()).collect())
}

/// A basis of `{x : A x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); width];
            v[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(rows: &[Vec<Integer>]) -> Integer {
    let n = rows.len();
    if n == 0 {
        return Integer::one();
    }
    let mut m = rows.to_vec();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Integer::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// A lattice basis of `{x ∈ Z^width : A x = 0}`.
///
/// Column operations are tracked in a unimodular matrix; the columns that end
/// up zero in `A·U` span the integral kernel.
pub fn integer_kernel(rows: &[Vec<Integer>], width: usize) -> Vec<Vec<Integer>> {
    let mut a = rows.to_vec();
    let mut u: Vec<Vec<Integer>> = (0..width)
        .map(|i| (0..width).map(|j| if i == j { Integer::one() } else { Integer::zero() }).collect())
        .collect();
    // u is stored column-major: u[c] is column c
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == width {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot..width).filter(|&c| !a[r][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            // bring the smallest entry to the pivot column
            let best = *nonzero.iter().min_by_key(|&&c| a[r][c].abs()).unwrap();
            swap_cols(&mut a, &mut u, pivot, best);
            let mut done = true;
            for c in pivot + 1..width {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pivot]);
                add_col_multiple(&mut a, &mut u, c, pivot, &(-q));
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[r][pivot].is_zero() {
            pivot += 1;
        }
    }
    u[pivot..].to_vec()
}

fn swap_cols(a: &mut [Vec<Integer>], u: &mut [Vec<Integer>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// column `target += factor · column source`
fn add_col_multiple(a: &mut [Vec<Integer>], u: &mut [Vec<Integer>], target: usize, source: usize, factor: &Integer) {
    for row in a.iter_mut() {
        let delta = factor * &row[source];
        row[target] += delta;
    }
    let src = u[source].clone();
    for (x, s) in u[target].iter_mut().zip(src) {
        *x += factor * s;
    }
}

/// Finds `λ ≥ 0` with `Σ λ_j · generators[j] = target`, or `None` if the
/// target is not in the cone spanned by the generators.
///
/// Phase-one simplex with Bland's rule on an exact tableau, so it always
/// terminates.
pub fn nonnegative_combination(target: &[Rational], generators: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let m = target.len();
    let k = generators.len();
    let width = k + m;
    // tableau rows: [generator columns | artificial columns | rhs]
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = target[i].is_negative();
            let mut row: Vec<Rational> = generators
                .iter()
                .map(|g| if flip { -g[i].clone() } else { g[i].clone() })
                .collect();
            row.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row.push(target[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..width).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost: Vec<Rational> = (0..=width)
        .map(|j| {
            if (k..width).contains(&j) {
                Rational::zero()
            } else {
                -tab.iter().map(|r| r[j].clone()).sum::<Rational>()
            }
        })
        .collect();
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let (row, _) = leave.expect("phase-one simplex cannot be unbounded");
        let inv = tab[row][enter].recip();
        for x in tab[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = tab[row].clone();
        for (i, r) in tab.iter_mut().enumerate() {
            if i != row && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (x, p) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
        basis[row] = enter;
    }
    if !cost[width].is_zero() {
        return None;
    }
    let mut lambda = vec![Rational::zero(); k];
    for (i, &b) in basis.iter().enumerate() {
        if b < k {
            lambda[b] = tab[i][width].clone();
        } else if !tab[i][width].is_zero() {
            return None;
        }
    }
    Some(lambda)
}

/// Primitive integer vector on the ray of a nonzero rational vector.
pub fn primitive_integer(v: &[Rational]) -> Vec<Integer> {
    let denom = v.iter().fold(Integer::one(), |l, c| l.lcm(c.denom()));
    let scaled: Vec<Integer> = v.iter().map(|c| (c * Rational::from_integer(denom.clone())).to_integer()).collect();
    primitive_int(&scaled)
}

/// Divide an integer vector by the gcd of its entries (zero stays zero).
pub fn primitive_int(v: &[Integer]) -> Vec<Integer> {
    let g = v.iter().fold(Integer::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

pub fn dot_int(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
