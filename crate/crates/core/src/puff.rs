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


//! Minimal models from the adjoint polytope.
//!
//! The half-spaces that contribute to `Box_h` are pushed outwards by a small
//! generic amount; the normal fan `Σ` of the relaxed polytope carries the
//! minimal model. Every claim about `Σ` is re-checked on the output.

use std::collections::BTreeSet;

use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::divisor::{discrepancies, DivisorError, HypersurfaceClass, Kappa, MeetsPolicy, SupportFunction};
use crate::fan::{dual_fan, Fan, FanError};
use crate::lattice::{NPoint, Rational};
use crate::polytope::{Halfspace, Polytope, PolytopeError};

/// Halvings of the scale tried per weight draw.
pub const MAX_HALVINGS: usize = 40;
/// Weight draws tried before giving up.
pub const MAX_DRAWS: usize = 8;

#[derive(Debug, Error, Clone)]
pub enum PuffError {
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("the adjoint polytope is empty; use the contraction method")]
    EmptyAdjoint,
    #[error("no chamber found after {draws} weight draws: {diagnostics}")]
    ChamberNotFound { draws: usize, diagnostics: String },
    #[error("claim: {claim}")]
    ClaimFailed { claim: &'static str, report: Box<MinimalModelReport> },
}

/// Ray indices of the half-spaces whose boundary meets `Box_h`.
pub fn contributing_halfspaces(h: &SupportFunction) -> Result<Vec<usize>, PuffError> {
    let b = h.box_polytope()?;
    if b.is_empty() {
        return Err(PuffError::EmptyAdjoint);
    }
    let hs = h.halfspaces();
    Ok((0..hs.len()).filter(|&i| b.contributes(&hs[i])).collect())
}

/// `ε_i = t · w_i` on the contributing indices.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonAssignment {
    pub indices: Vec<usize>,
    pub weights: Vec<Rational>,
    pub t: Rational,
}

impl EpsilonAssignment {
    pub fn epsilon(&self) -> Vec<Rational> {
        self.weights.iter().map(|w| w * &self.t).collect()
    }

    pub fn with_t(&self, t: Rational) -> EpsilonAssignment {
        EpsilonAssignment { t, ..self.clone() }
    }
}

/// `Box(ε) = ∩ {(p_i, m) ≥ h(p_i) − ε_i}` over contributing `i`.
pub fn puffed_polytope(h: &SupportFunction, eps: &EpsilonAssignment) -> Result<Polytope, PuffError> {
    let hs = h.halfspaces();
    let relaxed: Vec<Halfspace> =
        eps.indices.iter().zip(eps.epsilon()).map(|(&i, e)| hs[i].shifted(&-e)).collect();
    Ok(Polytope::with_dim(h.fan().dim(), &relaxed)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChamberCertificate {
    pub epsilon: EpsilonAssignment,
    pub simple: bool,
    pub proper: Vec<bool>,
    /// Combinatorial type agrees at `t`, `t/2` and `t/4`.
    pub stable: bool,
    pub halvings: usize,
    pub draws: usize,
    /// Vertex/half-space incidences of `Box(ε)`.
    pub signature: Vec<Vec<usize>>,
}

impl ChamberCertificate {
    pub fn is_valid(&self) -> bool {
        self.simple && self.stable && self.proper.iter().all(|&p| p)
    }
}

fn draw_weights(seed: u64, draw: usize, count: usize) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((draw as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    rand::seq::index::sample(&mut rng, 999, count)
        .into_iter()
        .map(|k| Rational::one() + Rational::new((k as i64 + 1).into(), 1000.into()))
        .collect()
}

struct Probe {
    simple: bool,
    proper: Vec<bool>,
    signature: Vec<Vec<usize>>,
}

fn probe(h: &SupportFunction, eps: &EpsilonAssignment) -> Result<Probe, PuffError> {
    let p = puffed_polytope(h, eps)?;
    let simple = p.dim() == p.ambient_dim() as isize && p.is_simple()?;
    let proper = (0..eps.indices.len()).map(|i| p.contributes_properly(i)).collect();
    Ok(Probe { simple, proper, signature: p.combinatorial_type() })
}

/// Seeded weights, then halving of the scale until the relaxed polytope is
/// simple, every relaxed half-space is needed, and the combinatorics are
/// stable over two further halvings.
pub fn sample_epsilon_in_chamber(
    h: &SupportFunction,
    seed: u64,
) -> Result<(EpsilonAssignment, ChamberCertificate), PuffError> {
    let indices = contributing_halfspaces(h)?;
    let half = Rational::new(1.into(), 2.into());
    let mut diagnostics = Vec::new();
    for draw in 0..MAX_DRAWS {
        let weights = draw_weights(seed, draw, indices.len());
        let base = EpsilonAssignment { indices: indices.clone(), weights, t: Rational::one() };
        let mut window: Vec<Probe> = Vec::new();
        let mut t = Rational::one();
        let mut last = None;
        for halving in 0..MAX_HALVINGS + 2 {
            window.push(probe(h, &base.with_t(t.clone()))?);
            if window.len() > 3 {
                window.remove(0);
            }
            if window.len() == 3 {
                let head = &window[0];
                let stable = window[1].signature == head.signature && window[2].signature == head.signature;
                let t0 = &t * Rational::from_integer(4.into());
                let cert = ChamberCertificate {
                    epsilon: base.with_t(t0.clone()),
                    simple: head.simple,
                    proper: head.proper.clone(),
                    stable,
                    halvings: halving - 2,
                    draws: draw + 1,
                    signature: head.signature.clone(),
                };
                if cert.is_valid() {
                    return Ok((base.with_t(t0), cert));
                }
                if stable {
                    // the chamber was reached; this direction is degenerate
                    last = Some(cert);
                    break;
                }
                last = Some(cert);
            }
            t *= &half;
        }
        if let Some(c) = last {
            diagnostics.push(format!(
                "draw {}: simple={} proper={}/{} stable={}",
                draw + 1,
                c.simple,
                c.proper.iter().filter(|&&p| p).count(),
                c.proper.len(),
                c.stable
            ));
        }
    }
    Err(PuffError::ChamberNotFound { draws: MAX_DRAWS, diagnostics: diagnostics.join("; ") })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelChecks {
    pub ray_set_equals_contributing: bool,
    pub k_matches_h: bool,
    pub k_sigma_in_box: bool,
    pub nef: bool,
    pub terminal: bool,
    /// `m_p = p(Box_h) − h(p) + α_p` on every exceptional ray.
    pub positivity_identity: bool,
    pub box_preserved: bool,
    pub simplicial: bool,
    pub semi_ample: bool,
}

impl ModelChecks {
    pub fn named(&self) -> [(&'static str, bool); 9] {
        [
            ("ray_set_equals_contributing", self.ray_set_equals_contributing),
            ("k_matches_h", self.k_matches_h),
            ("k_sigma_in_box", self.k_sigma_in_box),
            ("nef", self.nef),
            ("terminal", self.terminal),
            ("positivity_identity", self.positivity_identity),
            ("box_preserved", self.box_preserved),
            ("simplicial", self.simplicial),
            ("semi_ample", self.semi_ample),
        ]
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.named().into_iter().find(|(_, ok)| !ok).map(|(n, _)| n)
    }
}

#[derive(Clone, Debug)]
pub struct MinimalModelReport {
    pub sigma: Fan,
    pub k: SupportFunction,
    pub contributing: Vec<NPoint>,
    pub certificate: ChamberCertificate,
    pub adjoint_polytope: Polytope,
    pub checks: ModelChecks,
    /// Smallest exceptional `m_p` over rays meeting `X`.
    pub min_exceptional_coefficient: Option<Rational>,
    pub semi_ample_multiple: crate::lattice::Integer,
    pub kappa: Kappa,
}

/// Run the construction without aborting on failed claims.
pub fn build_minimal_model(
    class: &HypersurfaceClass,
    seed: u64,
    policy: MeetsPolicy,
) -> Result<MinimalModelReport, PuffError> {
    let h = class.adjoint()?;
    let box_h = h.box_polytope()?.clone();
    if box_h.is_empty() {
        return Err(PuffError::EmptyAdjoint);
    }
    let contributing_idx = contributing_halfspaces(&h)?;
    let contributing: Vec<NPoint> = contributing_idx.iter().map(|&i| h.fan().rays()[i].clone()).collect();
    let (eps, certificate) = sample_epsilon_in_chamber(&h, seed)?;
    let sigma = dual_fan(&puffed_polytope(&h, &eps)?)?;

    let ray_set_equals_contributing = sigma.rays().iter().collect::<BTreeSet<_>>()
        == contributing.iter().collect::<BTreeSet<_>>();
    // k carries the values of h on the surviving rays
    let restricted: Option<Vec<Rational>> = sigma.rays().iter().map(|p| h.at(p).cloned()).collect();
    let k_values = restricted.unwrap_or_else(|| vec![Rational::one(); sigma.rays().len()]);
    let k = SupportFunction::new(sigma.clone(), k_values)?;
    let transported = class.transport(&sigma);
    let k_matches_h = ray_set_equals_contributing && transported.adjoint()?.values() == k.values();
    let box_k = k.box_polytope()?.clone();
    let k_sigma_in_box = k.linear_extensions().iter().all(|m| box_k.contains(m));
    let nef = k.is_nef();
    let box_preserved = box_k == box_h;
    let simplicial = sigma.is_simplicial();

    let refinement = sigma.common_refinement(h.fan()).desingularize();
    let on_sigma = discrepancies(&transported, &refinement, policy)?;
    let on_delta = discrepancies(class, &refinement, policy)?;
    let mut positivity_identity = true;
    for rec in &on_sigma.records {
        let alpha = on_delta
            .records
            .iter()
            .find(|r| r.ray == rec.ray)
            .map_or_else(|| Rational::from_integer(0.into()), |r| r.discrepancy.clone());
        let h_p = h.evaluate(&rec.ray.to_rational())?;
        let expected = box_h.support_value(&rec.ray)? - h_p + alpha;
        if expected != rec.discrepancy {
            positivity_identity = false;
        }
    }
    let terminal = on_sigma.terminal;

    let multiple = k.clearing_multiple();
    let mq = Rational::from_integer(multiple.clone());
    let scaled_box = box_h.scale(multiple.to_u64().expect("denominators are small"));
    let semi_ample = k
        .linear_extensions()
        .iter()
        .map(|m| m.scale(&mq))
        .all(|m| m.is_integral() && scaled_box.contains(&m));

    let checks = ModelChecks {
        ray_set_equals_contributing,
        k_matches_h,
        k_sigma_in_box,
        nef,
        terminal,
        positivity_identity,
        box_preserved,
        simplicial,
        semi_ample,
    };
    Ok(MinimalModelReport {
        kappa: Kappa::from_polytope(&box_k),
        min_exceptional_coefficient: on_sigma.minimum().cloned(),
        sigma,
        k,
        contributing,
        certificate,
        adjoint_polytope: box_h,
        checks,
        semi_ample_multiple: multiple,
    })
}

/// Build `Σ` and fail with the first claim that does not hold.
pub fn construct_minimal_model(
    class: &HypersurfaceClass,
    seed: u64,
    policy: MeetsPolicy,
) -> Result<MinimalModelReport, PuffError> {
    let report = build_minimal_model(class, seed, policy)?;
    match report.checks.first_failure() {
        None => Ok(report),
        Some(claim) => Err(PuffError::ClaimFailed { claim, report: Box::new(report) }),
    }
}
