use bosonic_core::capacities::{
    family_capacity, thermal_optimality_scan, ScanGrid, THERMAL_SCAN_TOL,
};
use bosonic_core::fock_oracle::{
    concavity_witness, fidelity, min_fidelity_entanglement_check, random_density_matrix,
    thermal_coherent_information, thermal_density_matrix, trace_distance, DensityMatrix,
    FockFamily, KrausChannel, CONCAVITY_TOL, GRID_SLACK,
};
use bosonic_core::Family;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Fixed seed so that sampled suites are reproducible run to run.
pub const SEED: u64 = 0x5eed_b05e;

pub const SUITES: [&str; 5] = ["oracle", "thermal", "concavity", "fvdg", "appendix"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Self {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

/// `|value - reference| <= tolerance`.
fn agreement(name: String, value: f64, reference: f64, tolerance: f64) -> Check {
    let error = (value - reference).abs();
    Check {
        name,
        value,
        reference,
        error,
        tolerance,
        passed: error <= tolerance,
        detail: None,
    }
}

/// `value >= reference - tolerance`; `error` is the shortfall.
fn lower_bound(name: String, value: f64, reference: f64, tolerance: f64) -> Check {
    let error = (reference - value).max(0.0);
    Check {
        name,
        value,
        reference,
        error,
        tolerance,
        passed: error <= tolerance,
        detail: None,
    }
}

pub fn run(suite: &str, tol: Option<f64>) -> CliResult<SuiteReport> {
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be >= 0, got {t}")));
        }
    }
    let checks = match suite {
        "oracle" => oracle(tol)?,
        "thermal" => thermal(tol.unwrap_or(THERMAL_SCAN_TOL))?,
        "concavity" => concavity(tol.unwrap_or(CONCAVITY_TOL))?,
        "fvdg" => fvdg(tol.unwrap_or(1e-9))?,
        "appendix" => appendix(tol.unwrap_or(GRID_SLACK))?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport::new(suite, checks))
}

fn oracle(tol: Option<f64>) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let eta = 0.78;
    for (n_s, cutoff) in [(0.1, 40), (1.0, 60), (10.0, 120)] {
        let fock = thermal_coherent_information(FockFamily::PureLoss { eta }, n_s, cutoff)?;
        let closed = family_capacity(Family::PureLoss { eta }, n_s)?;
        let mut c = agreement(
            format!("pure_loss eta={eta} n_s={n_s}"),
            fock.value,
            closed,
            tol.unwrap_or(1e-4),
        );
        c.detail = Some(json!({ "cutoff": fock.cutoff, "boundary_mass": fock.boundary_mass }));
        checks.push(c);
    }
    for kappa in [1.5, 2.0] {
        for n_s in [0.5, 1.0] {
            let fock = thermal_coherent_information(FockFamily::Amplifier { kappa }, n_s, 80)?;
            let closed = family_capacity(Family::Amplifier { kappa }, n_s)?;
            let mut c = agreement(
                format!("amplifier kappa={kappa} n_s={n_s}"),
                fock.value,
                closed,
                tol.unwrap_or(1e-3),
            );
            c.detail = Some(json!({ "cutoff": fock.cutoff, "boundary_mass": fock.boundary_mass }));
            checks.push(c);
        }
    }
    Ok(checks)
}

fn thermal(tol: f64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for family in [
        Family::PureLoss { eta: 0.78 },
        Family::Amplifier { kappa: 2.0 },
    ] {
        let ch = family.channel()?;
        for n_s in [0.5, 1.0] {
            let report = thermal_optimality_scan(&ch, n_s, ScanGrid::default(), tol)?;
            let mut c = lower_bound(
                format!("{} n_s={n_s}", family_label(family)),
                report.thermal_value,
                report.grid_max,
                tol,
            );
            c.detail = Some(json!({
                "points": report.points,
                "argmax": report.argmax,
                "violations": report.violations,
            }));
            checks.push(c);
        }
    }
    Ok(checks)
}

fn family_label(family: Family) -> String {
    match family {
        Family::PureLoss { eta } => format!("pure_loss eta={eta}"),
        Family::Amplifier { kappa } => format!("amplifier kappa={kappa}"),
    }
}

fn concavity(tol: f64) -> CliResult<Vec<Check>> {
    let family = FockFamily::PureLoss { eta: 0.78 };
    let cutoff = 40;
    let lambdas: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let thermal = thermal_density_matrix(1.0, cutoff)?;
    let vacuum = DensityMatrix::vacuum(cutoff)?;
    let mut checks = Vec::new();
    for (label, rho0) in [
        ("vacuum vs thermal", &vacuum),
        ("thermal vs thermal", &thermal),
    ] {
        let report = concavity_witness(family, rho0, &thermal, &lambdas, cutoff)?;
        let mut c = lower_bound(
            format!("pure_loss eta=0.78 {label} n=1"),
            report.min_difference,
            0.0,
            tol,
        );
        c.detail = Some(json!({ "lambdas": report.lambdas, "differences": report.differences }));
        checks.push(c);
    }
    Ok(checks)
}

fn fvdg(tol: f64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lower_worst = f64::NEG_INFINITY;
    let mut upper_worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for k in 0..200 {
        let dim = 2 + k % 3;
        let rho = random_density_matrix(dim, &mut rng)?;
        let sigma = random_density_matrix(dim, &mut rng)?;
        let f = fidelity(&rho, &sigma)?;
        let td = trace_distance(&rho, &sigma)?;
        // Positive excess means a bound is violated.
        let lower = (1.0 - f.sqrt()) - td;
        let upper = td - (1.0 - f).sqrt();
        lower_worst = lower_worst.max(lower);
        upper_worst = upper_worst.max(upper);
        if lower > tol || upper > tol {
            failures.push(json!({ "pair": k, "dim": dim, "fidelity": f, "trace_distance": td }));
        }
    }
    let mut lo = lower_bound("1 - sqrt(F) <= T".into(), -lower_worst, 0.0, tol);
    let mut hi = lower_bound("T <= sqrt(1 - F)".into(), -upper_worst, 0.0, tol);
    lo.detail = Some(json!({ "pairs": 200, "failures": failures.clone() }));
    hi.detail = Some(json!({ "pairs": 200, "failures": failures }));
    Ok(vec![lo, hi])
}

fn appendix(tol: f64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    for (label, channel) in [
        ("identity qubit", KrausChannel::identity(2)?),
        ("depolarizing p=0.01", KrausChannel::depolarizing(0.01)?),
    ] {
        let report = min_fidelity_entanglement_check(&channel, 200, &mut rng)?;
        let mut c = lower_bound(
            label.to_string(),
            report.entanglement_fidelity_hat,
            report.bound,
            tol,
        );
        c.detail = Some(json!({
            "epsilon_hat": report.epsilon_hat,
            "samples": report.samples,
        }));
        checks.push(c);
    }
    Ok(checks)
}
