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


//! Command-line surface. Each command wraps one library operation and emits a
//! JSON report; `--pretty` swaps it for a short human summary.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus;
use crate::divisor::{is_terminal_pair, HypersurfaceClass, Kappa, MeetsPolicy, NefStatus};
use crate::io::{self, DocumentError};
use crate::lattice::NPoint;
use crate::mmp::{mmp_run, MmpError, MmpOptions, MmpOutcome, OutcomeKind, StepKind};
use crate::puff::{build_minimal_model, contributing_halfspaces, MinimalModelReport, PuffError};

#[derive(Parser, Debug)]
#[command(name = "toric-mmp", version, about = "Minimal models of toric hypersurface pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print a human summary instead of the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a fan or pair document.
    Validate { input: String },
    /// Discrepancies of the pair on a smooth refinement.
    Resolve {
        input: String,
        #[arg(long, value_enum, default_value_t = Policy::Conservative)]
        policy: Policy,
    },
    /// The adjoint polytope and its contributing half-spaces.
    Box { input: String },
    /// Kodaira dimension of the adjoint divisor.
    Kappa { input: String },
    /// Build a minimal model.
    MinimalModel {
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Puff)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Policy::Conservative)]
        policy: Policy,
    },
    /// Compare the adjoint polytopes and κ of two reports.
    Verify { first: PathBuf, second: PathBuf },
    /// List the built-in examples, or emit one as a pair document.
    Examples { name: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Puff,
    Mmp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Conservative,
    Relaxed,
}

impl From<Policy> for MeetsPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Conservative => MeetsPolicy::Conservative,
            Policy::Relaxed => MeetsPolicy::Relaxed,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    /// A claim failed; the report is still emitted.
    Claim { claim: String, report: Option<Value> },
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Claim { .. } => 3,
            CliError::Resource(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Validation(m) => format!("invalid input: {m}"),
            CliError::Claim { claim, .. } => format!("claim: {claim}"),
            CliError::Resource(m) => format!("resource limit: {m}"),
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// A report plus its human summary.
pub struct Output {
    pub report: Value,
    pub summary: String,
}

fn load(input: &str) -> Result<HypersurfaceClass, CliError> {
    Ok(io::load_pair(input)?)
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Claim { claim: format!("internal ({e})"), report: None }
}

fn ray_list(rays: &[NPoint]) -> Value {
    Value::Array(rays.iter().map(|r| io::integer_vector(r.coords())).collect())
}

fn opt_rational(q: Option<&crate::lattice::Rational>) -> Value {
    q.map_or(Value::Null, io::rational_value)
}

fn validate(input: &str) -> Result<Output, CliError> {
    let text = if input.starts_with('@') {
        None
    } else {
        Some(std::fs::read_to_string(input).map_err(|e| CliError::Validation(format!("{input}: {e}")))?)
    };
    let is_pair = match &text {
        None => true,
        Some(t) => serde_json::from_str::<Value>(t)
            .map_err(|e| CliError::Validation(format!("{input}: {e}")))?
            .get("class_coefficients")
            .is_some(),
    };
    let (fan, class) = if is_pair {
        let c = load(input)?;
        (c.fan().clone(), Some(c))
    } else {
        (io::parse_fan(text.as_deref().unwrap_or_default(), input)?, None)
    };
    let mut report = json!({
        "document": if is_pair { "pair" } else { "fan" },
        "dimension": fan.dim(),
        "rays": fan.rays().len(),
        "maximal_cones": fan.cones().len(),
        "complete": fan.is_complete(),
        "simplicial": fan.is_simplicial(),
        "smooth": fan.is_smooth(),
    });
    let mut summary = format!(
        "{} document: dimension {}, {} rays, {} maximal cones, complete {}, smooth {}",
        if is_pair { "pair" } else { "fan" },
        fan.dim(),
        fan.rays().len(),
        fan.cones().len(),
        fan.is_complete(),
        fan.is_smooth()
    );
    if let Some(c) = class {
        let h = c.adjoint().map_err(internal)?;
        let status = h.nef_status().map_err(internal)?;
        report["adjoint_nef"] = json!(status == NefStatus::Nef);
        report["adjoint_polytope_empty"] = json!(status == NefStatus::EmptyAdjointPolytope);
        summary.push_str(&format!("; adjoint {status:?}"));
    }
    Ok(Output { report, summary })
}

fn resolve(input: &str, policy: Policy) -> Result<Output, CliError> {
    let class = load(input)?;
    let rep = is_terminal_pair(&class, policy.into()).map_err(internal)?;
    let records: Vec<Value> = rep
        .records
        .iter()
        .map(|r| {
            json!({
                "ray": io::integer_vector(r.ray.coords()),
                "host_cone": r.host_cone,
                "discrepancy": io::rational_value(&r.discrepancy),
                "canonical_only": opt_rational(r.canonical_only.as_ref()),
                "class_correction": io::rational_value(&r.class_correction),
                "meets_x": r.meets_x,
            })
        })
        .collect();
    let min = rep.minimum();
    let summary = format!(
        "smooth refinement with {} rays ({} new); minimum discrepancy {}; terminal {}",
        rep.resolution.rays().len(),
        rep.records.len(),
        min.map_or("none".into(), io::format_rational),
        rep.terminal
    );
    Ok(Output {
        report: json!({
            "resolution": io::fan_value(&rep.resolution),
            "records": records,
            "minimum_discrepancy": opt_rational(min),
            "terminal": rep.terminal,
        }),
        summary,
    })
}

fn adjoint_box(input: &str) -> Result<Output, CliError> {
    let class = load(input)?;
    let h = class.adjoint().map_err(internal)?;
    let b = h.box_polytope().map_err(internal)?;
    let contributing: Vec<usize> = match contributing_halfspaces(&h) {
        Ok(c) => c,
        Err(PuffError::EmptyAdjoint) => Vec::new(),
        Err(e) => return Err(internal(e)),
    };
    let rays: Vec<NPoint> = contributing.iter().map(|&i| h.fan().rays()[i].clone()).collect();
    let summary = format!(
        "adjoint polytope of dimension {} with {} vertices; {} contributing half-spaces",
        b.dim(),
        b.vertices().len(),
        rays.len()
    );
    Ok(Output {
        report: json!({
            "adjoint_polytope": io::polytope_value(b),
            "adjoint_values": h.values().iter().map(io::rational_value).collect::<Vec<_>>(),
            "contributing_rays": ray_list(&rays),
        }),
        summary,
    })
}

fn kappa_command(input: &str) -> Result<Output, CliError> {
    let class = load(input)?;
    let h = class.adjoint().map_err(internal)?;
    let k = crate::divisor::kappa(&h).map_err(internal)?;
    Ok(Output { report: json!({ "kappa": k.to_string() }), summary: format!("kappa = {k}") })
}

fn puff_report(r: &MinimalModelReport, seed: u64) -> Value {
    let checks: serde_json::Map<String, Value> =
        r.checks.named().iter().map(|(n, ok)| (n.to_string(), json!(ok))).collect();
    let cert = &r.certificate;
    json!({
        "method": "puff",
        "seed": seed,
        "outcome": "minimal_model",
        "kappa": r.kappa.to_string(),
        "adjoint_polytope": io::polytope_value(&r.adjoint_polytope),
        "fan": io::fan_value(&r.sigma),
        "adjoint_values": r.k.values().iter().map(io::rational_value).collect::<Vec<_>>(),
        "contributing_rays": ray_list(&r.contributing),
        "certificate": {
            "epsilon": cert.epsilon.epsilon().iter().map(io::rational_value).collect::<Vec<_>>(),
            "t": io::rational_value(&cert.epsilon.t),
            "halvings": cert.halvings,
            "draws": cert.draws,
            "simple": cert.simple,
            "stable": cert.stable,
            "proper": cert.proper.iter().all(|&p| p),
        },
        "checks": checks,
        "min_exceptional_coefficient": opt_rational(r.min_exceptional_coefficient.as_ref()),
        "semi_ample_multiple": io::integer_vector(std::slice::from_ref(&r.semi_ample_multiple))[0].clone(),
    })
}

fn step_name(k: StepKind) -> &'static str {
    match k {
        StepKind::Divisorial => "divisorial",
        StepKind::Flip => "flip",
        StepKind::FibrationStop => "fibration",
        StepKind::NefStop => "nef",
    }
}

fn outcome_name(k: OutcomeKind) -> &'static str {
    match k {
        OutcomeKind::MinimalModel => "minimal_model",
        OutcomeKind::MoriFibration => "mori_fibration",
        OutcomeKind::BirationalToProjectiveSpace => "birational_to_projective_space",
    }
}

fn mmp_report(out: &MmpOutcome) -> Result<Value, CliError> {
    let trace: Vec<Value> = out
        .trace
        .iter()
        .map(|s| {
            json!({
                "kind": step_name(s.kind),
                "class": s.class.as_ref().map(|c| io::integer_vector(&c.0)),
                "adjoint_degree": opt_rational(s.adjoint_degree.as_ref()),
                "removed_ray": s.removed_ray.as_ref().map(|r| io::integer_vector(r.coords())),
                "exceptional_discrepancy": opt_rational(s.exceptional_discrepancy.as_ref()),
                "flip_discrepancies": s.flip_discrepancies.as_ref()
                    .map(|(a, b)| json!([io::rational_value(a), io::rational_value(b)])),
                "rays_after": s.fan_after.as_ref().map(|f| f.rays().len()),
                "terminal_after": s.terminal_after,
            })
        })
        .collect();
    let b = out.adjoint.box_polytope().map_err(internal)?;
    let kappa = match out.kind {
        OutcomeKind::MinimalModel => out.kappa,
        _ => Kappa::NegInfinity,
    };
    Ok(json!({
        "method": "mmp",
        "outcome": outcome_name(out.kind),
        "kappa": kappa.to_string(),
        "adjoint_polytope": io::polytope_value(b),
        "fan": io::fan_value(out.fan()),
        "adjoint_values": out.adjoint.values().iter().map(io::rational_value).collect::<Vec<_>>(),
        "trace": trace,
        "fiber_degree": opt_rational(out.fiber_degree.as_ref()),
        "base_dimension": out.fibration.as_ref().map(|f| f.base_dim),
    }))
}

fn mmp_claims(out: &MmpOutcome) -> Option<&'static str> {
    for s in &out.trace {
        if s.terminal_after == Some(false) {
            return Some("terminal");
        }
        if let Some(a) = &s.flip_audit {
            if !a.never_decreases() || !a.strictly_increases() {
                return Some("flip_discrepancies_increase");
            }
        }
    }
    (out.kind == OutcomeKind::MinimalModel && !out.adjoint.is_nef()).then_some("nef")
}

fn minimal_model(input: &str, method: Method, seed: u64, max_steps: Option<usize>, policy: Policy) -> Result<Output, CliError> {
    let class = load(input)?;
    match method {
        Method::Puff => {
            let r = match build_minimal_model(&class, seed, policy.into()) {
                Ok(r) => r,
                Err(PuffError::EmptyAdjoint) => {
                    return Err(CliError::Validation(
                        "the adjoint polytope is empty; use --method mmp".into(),
                    ))
                }
                Err(PuffError::ChamberNotFound { draws, diagnostics }) => {
                    return Err(CliError::Resource(format!("no chamber after {draws} draws: {diagnostics}")))
                }
                Err(e) => return Err(internal(e)),
            };
            let report = puff_report(&r, seed);
            if let Some(claim) = r.checks.first_failure() {
                return Err(CliError::Claim { claim: claim.into(), report: Some(report) });
            }
            let summary = format!(
                "puff: Σ has {} rays and {} maximal cones; kappa = {}; all checks passed",
                r.sigma.rays().len(),
                r.sigma.cones().len(),
                r.kappa
            );
            Ok(Output { report, summary })
        }
        Method::Mmp => {
            let options = MmpOptions { max_steps, verify_terminal: true, audit_flips: true, policy: policy.into() };
            let out = match mmp_run(&class, options) {
                Ok(o) => o,
                Err(MmpError::StepLimit(n)) => return Err(CliError::Resource(format!("step limit {n} reached"))),
                Err(MmpError::NotSimplicial) => {
                    return Err(CliError::Validation("the fan is not complete and simplicial".into()))
                }
                Err(e) => return Err(internal(e)),
            };
            let report = mmp_report(&out)?;
            if let Some(claim) = mmp_claims(&out) {
                return Err(CliError::Claim { claim: claim.into(), report: Some(report) });
            }
            let summary = format!(
                "mmp: {} divisorial, {} flips; outcome {}; final fan has {} rays; kappa = {}",
                out.count(StepKind::Divisorial),
                out.count(StepKind::Flip),
                outcome_name(out.kind),
                out.fan().rays().len(),
                report["kappa"].as_str().unwrap_or("?")
            );
            Ok(Output { report, summary })
        }
    }
}

fn polytope_key(v: &Value) -> Result<(i64, Vec<Vec<crate::lattice::Rational>>), CliError> {
    let bad = || CliError::Validation("report lacks a well-formed adjoint_polytope".into());
    let p = v.get("adjoint_polytope").ok_or_else(bad)?;
    let dim = p.get("dimension").and_then(Value::as_i64).ok_or_else(bad)?;
    let mut verts = Vec::new();
    for vert in p.get("vertices").and_then(Value::as_array).ok_or_else(bad)? {
        let coords = vert
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_str().ok_or_else(bad).and_then(|s| io::parse_rational(s).map_err(CliError::Validation)))
            .collect::<Result<Vec<_>, _>>()?;
        verts.push(coords);
    }
    verts.sort();
    Ok((dim, verts))
}

fn verify(first: &PathBuf, second: &PathBuf) -> Result<Output, CliError> {
    let read = |p: &PathBuf| -> Result<Value, CliError> {
        let t = std::fs::read_to_string(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
        serde_json::from_str(&t).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
    };
    let (a, b) = (read(first)?, read(second)?);
    let polytopes_agree = polytope_key(&a)? == polytope_key(&b)?;
    let kappa_agrees = a.get("kappa").is_some() && a.get("kappa") == b.get("kappa");
    let report = json!({
        "adjoint_polytopes_agree": polytopes_agree,
        "kappa_agrees": kappa_agrees,
    });
    if !polytopes_agree {
        return Err(CliError::Claim { claim: "adjoint_polytopes_agree".into(), report: Some(report) });
    }
    if !kappa_agrees {
        return Err(CliError::Claim { claim: "kappa_agrees".into(), report: Some(report) });
    }
    Ok(Output { report, summary: "reports agree on the adjoint polytope and kappa".into() })
}

fn examples(name: Option<&str>) -> Result<Output, CliError> {
    match name {
        None => {
            let list: Vec<Value> = corpus::all_examples()
                .iter()
                .map(|e| json!({ "name": e.name, "summary": e.summary }))
                .collect();
            let summary = corpus::NAMES.join("\n");
            Ok(Output { report: json!({ "examples": list }), summary })
        }
        Some(n) => {
            let e = corpus::example(n).ok_or_else(|| CliError::from(DocumentError::UnknownExample(n.into())))?;
            let doc = io::PairDocument::from_class(&e.class, Some(e.name.into()));
            let report = serde_json::to_value(doc).map_err(internal)?;
            Ok(Output { report, summary: format!("{}: {}", e.name, e.summary) })
        }
    }
}

/// Execute one command.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Validate { input } => validate(input),
        Command::Resolve { input, policy } => resolve(input, *policy),
        Command::Box { input } => adjoint_box(input),
        Command::Kappa { input } => kappa_command(input),
        Command::MinimalModel { input, method, seed, max_steps, policy } => {
            minimal_model(input, *method, *seed, *max_steps, *policy)
        }
        Command::Verify { first, second } => verify(first, second),
        Command::Examples { name } => examples(name.as_deref()),
    }
}

fn emit(cli: &Cli, report: &Value, summary: Option<&str>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    if let Some(path) = &cli.output {
        std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    match summary {
        Some(s) if cli.pretty => println!("{s}"),
        _ if cli.output.is_none() => println!("{text}"),
        _ => {}
    }
    Ok(())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => match emit(&cli, &out.report, Some(&out.summary)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Err(err) => {
            if let CliError::Claim { report: Some(r), .. } = &err {
                if let Err(e) = emit(&cli, r, None) {
                    eprintln!("{e}");
                }
            }
            eprintln!("{}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
