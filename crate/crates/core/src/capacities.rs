//! Energy-constrained capacities of the pure-loss and amplifier families.
//!
//! For degradable channels the quantum, entanglement, private and secret-key
//! capacities under an energy budget coincide with the coherent information
//! maximised over inputs meeting the budget, and for these phase-insensitive
//! families the thermal input is optimal. The closed forms below are that
//! value; [`coherent_information_gaussian`] recomputes it from covariance
//! matrices, and [`thermal_optimality_scan`] checks the thermal optimum
//! against a grid of non-thermal Gaussian inputs.

use serde::Serialize;

use crate::gaussian_channels::{apply, apply_complementary, ChannelKind, Family, GaussianChannel};
use crate::gaussian_core::{
    entropy, g_unchecked, thermal_photon_number, thermal_state_by_photons, EnergyObservable,
    GaussianState,
};
use crate::{Error, Result};

/// Which evaluation route produced a capacity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    ClosedForm,
    CoherentInfo,
    UnconstrainedLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    /// Bits per channel use.
    pub value: f64,
    pub input_state: GaussianState,
    pub channel: GaussianChannel,
    /// Mean photon number budget.
    pub constraint: f64,
    pub formula: Formula,
}

/// The infinite-energy capacity, which diverges for the identity channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl Limit {
    pub fn as_f64(self) -> f64 {
        match self {
            Limit::Finite(v) => v,
            Limit::Infinite => f64::INFINITY,
        }
    }
}

fn check_photons(n_s: f64) -> Result<()> {
    if !(n_s >= 0.0 && n_s.is_finite()) {
        return Err(Error::Domain(format!(
            "mean photon number must be >= 0, got {n_s}"
        )));
    }
    Ok(())
}

/// `max[g(ηN) - g((1-η)N), 0]` for `η ∈ [1/2, 1]`.
///
/// Below 1/2 the channel is antidegradable and the capacity is zero; that
/// case is reported as [`Error::Antidegradable`] so callers can label it.
pub fn pure_loss_capacity(eta: f64, n_s: f64) -> Result<f64> {
    Family::PureLoss { eta }.validate()?;
    check_photons(n_s)?;
    if eta < 0.5 {
        return Err(Error::Antidegradable { eta });
    }
    Ok((g_unchecked(eta * n_s) - g_unchecked((1.0 - eta) * n_s)).max(0.0))
}

/// `g(κN + κ - 1) - g((κ-1)(N+1))`.
pub fn amplifier_capacity(kappa: f64, n_s: f64) -> Result<f64> {
    Family::Amplifier { kappa }.validate()?;
    check_photons(n_s)?;
    let v = g_unchecked(kappa * n_s + kappa - 1.0) - g_unchecked((kappa - 1.0) * (n_s + 1.0));
    Ok(v.max(0.0))
}

/// Closed-form capacity of a family; zero in the antidegradable regime.
pub fn family_capacity(family: Family, n_s: f64) -> Result<f64> {
    match family {
        Family::PureLoss { eta } => match pure_loss_capacity(eta, n_s) {
            Err(Error::Antidegradable { .. }) => Ok(0.0),
            other => other,
        },
        Family::Amplifier { kappa } => amplifier_capacity(kappa, n_s),
    }
}

fn family_limit(family: Family) -> Result<Limit> {
    family.validate()?;
    Ok(match family {
        Family::PureLoss { eta: 1.0 } => Limit::Infinite,
        Family::PureLoss { eta } => Limit::Finite((eta / (1.0 - eta)).log2().max(0.0)),
        Family::Amplifier { kappa: 1.0 } => Limit::Infinite,
        Family::Amplifier { kappa } => Limit::Finite((kappa / (kappa - 1.0)).log2()),
    })
}

/// Capacity without an energy constraint: `max[log2(η/(1-η)), 0]` or
/// `log2(κ/(κ-1))`.
pub fn unconstrained_limit(ch: &GaussianChannel) -> Result<Limit> {
    match ch.kind().family() {
        Some(f) if ch.num_modes() == 1 => family_limit(f),
        _ => Err(Error::UnsupportedChannel(
            "unconstrained limit is implemented for single-mode pure-loss and amplifier channels"
                .into(),
        )),
    }
}

/// `H(N(ρ)) - H(N^c(ρ))` from covariance matrices.
pub fn coherent_information_gaussian(ch: &GaussianChannel, input: &GaussianState) -> Result<f64> {
    if ch.dilation().is_none() {
        return Err(Error::UnsupportedChannel(
            "coherent information needs a dilation".into(),
        ));
    }
    let out = apply(ch, input)?;
    let env = apply_complementary(ch, input)?;
    Ok(entropy(&out)? - entropy(&env)?)
}

/// Energy-constrained capacity of a single-mode family, by closed form.
pub fn capacity(ch: &GaussianChannel, n_s: f64) -> Result<CapacityResult> {
    let family = single_mode_family(ch)?;
    let value = match family {
        Family::PureLoss { eta } => pure_loss_capacity(eta, n_s)?,
        Family::Amplifier { kappa } => amplifier_capacity(kappa, n_s)?,
    };
    Ok(CapacityResult {
        value,
        input_state: thermal_state_by_photons(&[n_s])?,
        channel: ch.clone(),
        constraint: n_s,
        formula: Formula::ClosedForm,
    })
}

/// Energy-constrained capacity evaluated as the coherent information of the
/// thermal input, through the channel's dilation.
pub fn capacity_by_coherent_info(ch: &GaussianChannel, n_s: f64) -> Result<CapacityResult> {
    check_photons(n_s)?;
    if let ChannelKind::PureLoss { eta } = ch.kind() {
        if *eta < 0.5 {
            return Err(Error::Antidegradable { eta: *eta });
        }
    }
    let input = thermal_state_by_photons(&vec![n_s; ch.num_modes()])?;
    let value = coherent_information_gaussian(ch, &input)?.max(0.0);
    Ok(CapacityResult {
        value,
        input_state: input,
        channel: ch.clone(),
        constraint: n_s,
        formula: Formula::CoherentInfo,
    })
}

fn single_mode_family(ch: &GaussianChannel) -> Result<Family> {
    match ch.kind().family() {
        Some(f) if ch.num_modes() == 1 => Ok(f),
        _ => Err(Error::UnsupportedChannel(
            "closed forms exist for single-mode pure-loss and amplifier channels".into(),
        )),
    }
}

/// Resolution of the Gaussian-input grid used by [`thermal_optimality_scan`].
///
/// Every grid point spends exactly `N_S` photons: a fraction of the budget on
/// thermal noise, a fraction of the rest on squeezing, and the remainder on a
/// coherent displacement whose phase is the third axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub thermal_steps: usize,
    pub squeeze_steps: usize,
    pub displacement_phases: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            thermal_steps: 20,
            squeeze_steps: 20,
            displacement_phases: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub thermal_photons: f64,
    pub squeeze_r: f64,
    pub displacement_amplitude: f64,
    pub displacement_phase: f64,
    pub coherent_info: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub n_s: f64,
    pub points: usize,
    pub thermal_value: f64,
    pub grid_max: f64,
    pub argmax: ScanPoint,
    pub tolerance: f64,
    pub thermal_dominates: bool,
    /// Grid points whose coherent information exceeds the thermal value by
    /// more than `tolerance`.
    pub violations: Vec<ScanPoint>,
}

/// Default slack for thermal dominance.
pub const THERMAL_SCAN_TOL: f64 = 1e-9;
const ENERGY_FILTER_TOL: f64 = 1e-9;

fn fraction(k: usize, steps: usize) -> f64 {
    if steps <= 1 {
        1.0
    } else {
        k as f64 / (steps - 1) as f64
    }
}

/// Scans single-mode Gaussian inputs of mean photon number exactly `n_s` and
/// checks that the thermal input maximises the coherent information.
pub fn thermal_optimality_scan(
    ch: &GaussianChannel,
    n_s: f64,
    grid: ScanGrid,
    tolerance: f64,
) -> Result<ScanReport> {
    check_photons(n_s)?;
    if grid.thermal_steps == 0 || grid.squeeze_steps == 0 || grid.displacement_phases == 0 {
        return Err(Error::Domain(
            "scan grid needs at least one point per axis".into(),
        ));
    }
    if ch.num_modes() != 1 {
        return Err(Error::UnsupportedChannel(
            "thermal scan is single-mode".into(),
        ));
    }
    let family = single_mode_family(ch)?;
    if !family.is_degradable() {
        return Err(Error::UnsupportedChannel(
            "thermal scan requires a degradable family".into(),
        ));
    }
    let obs = EnergyObservable::photon_number(1);
    let grid = if n_s == 0.0 {
        ScanGrid {
            thermal_steps: 1,
            squeeze_steps: 1,
            displacement_phases: 1,
        }
    } else {
        grid
    };

    let thermal_value = coherent_information_gaussian(ch, &thermal_state_by_photons(&[n_s])?)?;
    let mut points = Vec::new();
    for i in 0..grid.thermal_steps {
        // Thermal fraction runs from 1 (pure thermal) down to 0.
        let n_t = if i == 0 {
            n_s
        } else {
            n_s * (1.0 - fraction(i, grid.thermal_steps)).max(0.0)
        };
        let rest = (n_s - n_t).max(0.0);
        for j in 0..grid.squeeze_steps {
            let e_sq = if grid.squeeze_steps == 1 {
                0.0
            } else {
                rest * fraction(j, grid.squeeze_steps)
            };
            // Squeezed thermal energy: ((2N_t+1) cosh 2r - 1)/2.
            let cosh2r = (2.0 * (n_t + e_sq) + 1.0) / (2.0 * n_t + 1.0);
            let r = 0.5 * cosh2r.max(1.0).acosh();
            let disp_photons = (rest - e_sq).max(0.0);
            let amp = disp_photons.sqrt();
            for k in 0..grid.displacement_phases {
                let phase = 2.0 * std::f64::consts::PI * k as f64 / grid.displacement_phases as f64;
                let mu = [
                    std::f64::consts::SQRT_2 * amp * phase.cos(),
                    std::f64::consts::SQRT_2 * amp * phase.sin(),
                ];
                let state = GaussianState::squeezed_thermal(n_t, r, mu)?;
                let energy = crate::gaussian_core::mean_energy(&state, &obs)?;
                if (energy - n_s).abs() > ENERGY_FILTER_TOL * n_s.max(1.0) {
                    continue;
                }
                points.push(ScanPoint {
                    thermal_photons: n_t,
                    squeeze_r: r,
                    displacement_amplitude: amp,
                    displacement_phase: phase,
                    coherent_info: coherent_information_gaussian(ch, &state)?,
                });
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Domain(format!(
            "no grid point meets the energy constraint N_S = {n_s}"
        )));
    }
    let argmax = *points
        .iter()
        .max_by(|a, b| a.coherent_info.total_cmp(&b.coherent_info))
        .expect("non-empty");
    let violations: Vec<ScanPoint> = points
        .iter()
        .filter(|p| p.coherent_info > thermal_value + tolerance)
        .copied()
        .collect();
    Ok(ScanReport {
        n_s,
        points: points.len(),
        thermal_value,
        grid_max: argmax.coherent_info,
        argmax,
        tolerance,
        thermal_dominates: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n_s: f64,
    pub constrained: f64,
    pub unconstrained: Limit,
}

/// Constrained and unconstrained capacity over a list of photon budgets.
pub fn capacity_sweep(family: Family, n_s_values: &[f64]) -> Result<Vec<SweepRow>> {
    let limit = family_limit(family)?;
    n_s_values
        .iter()
        .map(|&n_s| {
            Ok(SweepRow {
                n_s,
                constrained: family_capacity(family, n_s)?,
                unconstrained: limit,
            })
        })
        .collect()
}

/// Points `[lo, hi]` spaced linearly or logarithmically.
pub fn spaced(lo: f64, hi: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Domain(format!(
            "a sweep needs at least 2 points, got {points}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
        return Err(Error::Domain(format!("invalid sweep range [{lo}, {hi}]")));
    }
    if log && lo <= 0.0 {
        return Err(Error::Domain(
            "log spacing needs a positive lower bound".into(),
        ));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let t = k as f64 / last;
            if k == 0 {
                lo
            } else if k == points - 1 {
                hi
            } else if log {
                10f64.powf(lo.log10() + t * (hi.log10() - lo.log10()))
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect())
}

/// Sum over modes of the single-mode capacity at the thermal occupation
/// `N_j = 1/(e^{βω_j} - 1)`.
pub fn broadband_capacity(frequencies: &[f64], family: Family, beta: f64) -> Result<f64> {
    let obs = EnergyObservable::new(frequencies.to_vec())?;
    if !(beta > 0.0) {
        return Err(Error::Domain(format!(
            "inverse temperature must be > 0, got {beta}"
        )));
    }
    obs.frequencies()
        .iter()
        .map(|&w| family_capacity(family, thermal_photon_number(w, beta)))
        .sum()
}

/// How the broadband budget is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetKind {
    /// `P = Σ_j N_j(β)`.
    PhotonNumber,
    /// `P = Σ_j ω_j N_j(β)`.
    Energy,
}

/// Relative tolerance on the budget met by [`solve_beta`].
pub const BETA_BUDGET_RTOL: f64 = 1e-10;

/// Inverse temperature at which the thermal state spends `budget`. Returns
/// `+∞` for a zero budget.
pub fn solve_beta(frequencies: &[f64], budget: f64, kind: BudgetKind) -> Result<f64> {
    let obs = EnergyObservable::new(frequencies.to_vec())?;
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::Domain(format!("budget must be >= 0, got {budget}")));
    }
    if budget == 0.0 {
        return Ok(f64::INFINITY);
    }
    let spend = |beta: f64| -> f64 {
        obs.frequencies()
            .iter()
            .map(|&w| {
                let n = thermal_photon_number(w, beta);
                match kind {
                    BudgetKind::PhotonNumber => n,
                    BudgetKind::Energy => w * n,
                }
            })
            .sum()
    };

    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    for _ in 0..2100 {
        if spend(lo) >= budget {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..2100 {
        if spend(hi) <= budget {
            break;
        }
        hi *= 2.0;
    }
    if !(spend(lo) >= budget && spend(hi) <= budget) || lo == 0.0 || hi.is_infinite() {
        return Err(Error::Numerical(format!("cannot bracket budget {budget}")));
    }
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let s = spend(mid);
        if s > budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-16 * hi {
            break;
        }
    }
    let beta = (lo * hi).sqrt();
    let s = spend(beta);
    if (s - budget).abs() > BETA_BUDGET_RTOL * budget {
        return Err(Error::Numerical(format!(
            "bisection stalled: spend {s} vs budget {budget}"
        )));
    }
    Ok(beta)
}
