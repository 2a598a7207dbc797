use bosonic_core::allocation::{
    brute_force_allocation, kkt_certificate, optimal_allocation, AllocationProblem,
};
use bosonic_core::capacities::{capacity_sweep, family_capacity, spaced, unconstrained_limit};
use bosonic_core::code_conversion::{
    et_to_pc, et_to_qc, ordering_ledger, qc_to_pc, rate, sk_to_pc, CodeParams, Conversion,
};
use bosonic_core::Family;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{limit_json, to_csv, to_json};
use crate::spec::ChannelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ConversionKind {
    EtToQc,
    QcToPc,
    SkToPc,
    EtToPc,
    Ledger,
}

fn regime(family: Family) -> &'static str {
    if family.is_degradable() {
        "degradable"
    } else {
        "antidegradable"
    }
}

pub fn capacity(spec: &ChannelSpec, n_s: f64) -> CliResult<String> {
    let channel = spec.to_channel()?;
    if !(n_s >= 0.0 && n_s.is_finite()) {
        return Err(bosonic_core::Error::Domain(format!(
            "mean photon number must be >= 0, got {n_s}"
        ))
        .into());
    }
    let record = match spec.single_family() {
        Some(family) => json!({
            "channel": family,
            "n_s": n_s,
            "constrained": family_capacity(family, n_s)?,
            "unconstrained": limit_json(unconstrained_limit(&channel)?.as_f64()),
            "formula": "closed_form",
            "degradable": family.is_degradable(),
            "regime": regime(family),
        }),
        None => parallel_capacity(spec, n_s)?,
    };
    Ok(to_json(&record))
}

/// Parallel channels share the budget `Σ ω_j N_j ≤ n_s`; antidegradable
/// members carry no capacity and receive no photons.
fn parallel_capacity(spec: &ChannelSpec, budget: f64) -> CliResult<Value> {
    let leaves = spec.leaves();
    let active: Vec<usize> = (0..leaves.len())
        .filter(|&j| leaves[j].family.is_degradable())
        .collect();
    let mut photons = vec![0.0; leaves.len()];
    let mut constrained = 0.0;
    let mut multiplier = None;
    if !active.is_empty() {
        let problem = AllocationProblem {
            channels: active.iter().map(|&j| leaves[j]).collect(),
            budget,
        };
        let result = optimal_allocation(&problem)?;
        for (&j, &n) in active.iter().zip(&result.photons) {
            photons[j] = n;
        }
        constrained = result.capacity;
        multiplier = result.multiplier;
    }
    let mut unconstrained = 0.0;
    for leaf in &leaves {
        unconstrained += unconstrained_limit(&leaf.family.channel()?)?.as_f64();
    }
    let degradable_count = active.len();
    let regime = if degradable_count == leaves.len() {
        "degradable"
    } else if degradable_count == 0 {
        "antidegradable"
    } else {
        "mixed"
    };
    Ok(json!({
        "channel": leaves,
        "n_s": budget,
        "constrained": constrained,
        "unconstrained": limit_json(unconstrained),
        "formula": "kkt_allocation",
        "degradable": degradable_count == leaves.len(),
        "regime": regime,
        "allocation": photons,
        "multiplier": multiplier,
    }))
}

/// Parses `A:B:N`.
pub fn parse_range(text: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Usage(format!("--ns-range expects A:B:N, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    let n = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
    Ok((lo, hi, n))
}

pub fn sweep(
    spec: &ChannelSpec,
    range: (f64, f64, usize),
    log: bool,
    format: OutputFormat,
) -> CliResult<String> {
    spec.to_channel()?;
    let family = spec.single_family().ok_or_else(|| {
        bosonic_core::Error::UnsupportedChannel("sweeps take a single-mode channel".into())
    })?;
    let (lo, hi, points) = range;
    let grid = spaced(lo, hi, points, log)?;
    let rows = capacity_sweep(family, &grid)?;
    Ok(match format {
        OutputFormat::Csv => to_csv(
            &["n_s", "constrained", "unconstrained"],
            &rows
                .iter()
                .map(|r| vec![r.n_s, r.constrained, r.unconstrained.as_f64()])
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Json => to_json(&json!({
            "channel": family,
            "log": log,
            "rows": rows
                .iter()
                .map(|r| json!({
                    "n_s": r.n_s,
                    "constrained": r.constrained,
                    "unconstrained": limit_json(r.unconstrained.as_f64()),
                }))
                .collect::<Vec<_>>(),
        })),
    })
}

pub fn allocate(problem: &AllocationProblem, grid_points: Option<usize>) -> CliResult<String> {
    let result = optimal_allocation(problem)?;
    let certificate = kkt_certificate(problem, &result)?;
    let mut record = json!({
        "problem": problem,
        "photons": result.photons,
        "capacity": result.capacity,
        "multiplier": result.multiplier,
        "method": result.method,
        "kkt": certificate,
    });
    if let Some(points) = grid_points {
        let grid = brute_force_allocation(problem, points)?;
        record["grid_oracle"] = json!({
            "grid_points": points,
            "photons": grid.photons,
            "capacity": grid.capacity,
            "difference": result.capacity - grid.capacity,
        });
    }
    Ok(to_json(&record))
}

fn conversion_json(step: &Conversion) -> Value {
    json!({
        "provenance": step.provenance,
        "code": step.code,
        "rate": rate(&step.code),
        "vacuous": step.vacuous,
    })
}

pub fn convert(
    params: Option<&CodeParams>,
    kind: ConversionKind,
    delta: Option<f64>,
) -> CliResult<String> {
    if kind == ConversionKind::Ledger {
        return Ok(to_json(&ordering_ledger()));
    }
    let params = params.ok_or_else(|| CliError::Usage("convert needs --spec".into()))?;
    params.validate()?;
    let need_delta =
        || delta.ok_or_else(|| CliError::Usage("this conversion needs --delta".into()));
    let chain = match kind {
        ConversionKind::EtToQc => vec![et_to_qc(params, need_delta()?)?],
        ConversionKind::QcToPc => vec![qc_to_pc(params)?],
        ConversionKind::SkToPc => vec![sk_to_pc(params, need_delta()?)?],
        ConversionKind::EtToPc => et_to_pc(params, need_delta()?)?,
        ConversionKind::Ledger => unreachable!("handled above"),
    };
    let last = chain.last().expect("every conversion has a step");
    Ok(to_json(&json!({
        "input": params,
        "input_rate": rate(params),
        "output": last.code,
        "output_rate": rate(&last.code),
        "vacuous": last.vacuous,
        "chain": chain.iter().map(conversion_json).collect::<Vec<_>>(),
    })))
}
