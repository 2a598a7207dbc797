//! Energy allocation across parallel pure-loss and amplifier channels.
//!
//! Each channel `j` with frequency `ω_j` receives `N_j` photons, costing
//! `ω_j N_j` of the budget `P`. The total capacity `Σ_j C_j(N_j)` is concave,
//! so the optimum satisfies the KKT conditions: every active channel has
//! `C_j'(N_j)/ω_j = λ` and every idle one has `C_j'(0)/ω_j ≤ λ`. We find `λ`
//! by bisection and invert each strictly decreasing marginal by an inner
//! bisection.

use serde::{Deserialize, Serialize};

use crate::capacities::family_capacity;
use crate::gaussian_channels::Family;
use crate::gaussian_core::g_prime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocationChannel {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "unit_frequency")]
    pub omega: f64,
}

fn unit_frequency() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationProblem {
    pub channels: Vec<AllocationChannel>,
    pub budget: f64,
}

impl AllocationProblem {
    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() {
            return Err(Error::Domain("allocation problem has no channels".into()));
        }
        if !(self.budget >= 0.0 && self.budget.is_finite()) {
            return Err(Error::Domain(format!(
                "budget must be >= 0, got {}",
                self.budget
            )));
        }
        for (j, ch) in self.channels.iter().enumerate() {
            ch.family.validate()?;
            if !ch.family.is_degradable() {
                return Err(Error::Domain(format!(
                    "channel {j} is outside the degradable range ({:?})",
                    ch.family
                )));
            }
            if !(ch.omega > 0.0 && ch.omega.is_finite()) {
                return Err(Error::Domain(format!(
                    "channel {j} frequency must be > 0, got {}",
                    ch.omega
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Kkt,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    pub photons: Vec<f64>,
    pub capacity: f64,
    /// Lagrange multiplier. `None` when it is not defined (zero budget, grid
    /// search, or no channel can use energy).
    pub multiplier: Option<f64>,
    pub method: Method,
}

/// `dC/dN` for one channel. Infinite at `n = 0` for pure loss with
/// `η > 1/2` and for the identity amplifier.
pub fn marginal_capacity(family: Family, n: f64) -> Result<f64> {
    family.validate()?;
    if !(n >= 0.0) {
        return Err(Error::Domain(format!(
            "photon number must be >= 0, got {n}"
        )));
    }
    let term = |coef: f64, x: f64| if coef == 0.0 { 0.0 } else { coef * g_prime(x) };
    Ok(match family {
        Family::PureLoss { eta } if eta <= 0.5 => 0.0,
        Family::PureLoss { eta } => {
            if n == 0.0 {
                f64::INFINITY
            } else {
                (term(eta, eta * n) - term(1.0 - eta, (1.0 - eta) * n)).max(0.0)
            }
        }
        Family::Amplifier { kappa } => {
            if kappa == 1.0 {
                g_prime(n)
            } else {
                (term(kappa, kappa * n + kappa - 1.0)
                    - term(kappa - 1.0, (kappa - 1.0) * (n + 1.0)))
                .max(0.0)
            }
        }
    })
}

fn total_capacity(problem: &AllocationProblem, photons: &[f64]) -> Result<f64> {
    problem
        .channels
        .iter()
        .zip(photons)
        .map(|(ch, &n)| family_capacity(ch.family, n))
        .sum()
}

/// Photons for channel `ch` at multiplier `lambda`: zero if the marginal
/// per unit energy at 0 does not exceed `lambda`, otherwise the root of
/// `C'(N)/ω = λ`.
fn invert_marginal(ch: &AllocationChannel, lambda: f64) -> Result<f64> {
    let slope = |n: f64| -> Result<f64> { Ok(marginal_capacity(ch.family, n)? / ch.omega) };
    if slope(0.0)? <= lambda {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while slope(hi)? > lambda {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numerical(format!(
                "marginal of {:?} does not fall below {lambda}",
                ch.family
            )));
        }
    }
    let mut lo = 0.0;
    // Bisection to machine resolution.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid)? > lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn allocate_at(problem: &AllocationProblem, lambda: f64) -> Result<(Vec<f64>, f64)> {
    let photons = problem
        .channels
        .iter()
        .map(|ch| invert_marginal(ch, lambda))
        .collect::<Result<Vec<_>>>()?;
    let spent = problem
        .channels
        .iter()
        .zip(&photons)
        .map(|(ch, n)| ch.omega * n)
        .sum();
    Ok((photons, spent))
}

/// Relative tolerance on the budget actually spent.
pub const BUDGET_RTOL: f64 = 1e-8;

/// KKT-optimal allocation by bisection on the Lagrange multiplier.
pub fn optimal_allocation(problem: &AllocationProblem) -> Result<AllocationResult> {
    problem.validate()?;
    let n = problem.channels.len();
    if problem.budget == 0.0 {
        return Ok(AllocationResult {
            photons: vec![0.0; n],
            capacity: 0.0,
            multiplier: None,
            method: Method::Kkt,
        });
    }
    let usable = problem
        .channels
        .iter()
        .any(|ch| !matches!(ch.family, Family::PureLoss { eta } if eta <= 0.5));
    if !usable {
        // Every marginal vanishes: no allocation helps.
        return Ok(AllocationResult {
            photons: vec![0.0; n],
            capacity: 0.0,
            multiplier: None,
            method: Method::Kkt,
        });
    }

    let p = problem.budget;
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while allocate_at(problem, hi)?.1 > p {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numerical(
                "cannot bracket multiplier from above".into(),
            ));
        }
    }
    while allocate_at(problem, lo)?.1 < p {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Numerical(
                "cannot bracket multiplier from below".into(),
            ));
        }
    }
    // spend(lo) >= P >= spend(hi)
    let (mut photons, mut spent) = allocate_at(problem, hi)?;
    for _ in 0..500 {
        if (p - spent) <= 1e-13 * p {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let (ph, s) = allocate_at(problem, mid)?;
        if s > p {
            lo = mid;
        } else {
            hi = mid;
            photons = ph;
            spent = s;
        }
    }
    if (p - spent) > BUDGET_RTOL * p {
        return Err(Error::Numerical(format!(
            "budget not met: spent {spent} of {p}"
        )));
    }
    Ok(AllocationResult {
        capacity: total_capacity(problem, &photons)?,
        photons,
        multiplier: Some(hi),
        method: Method::Kkt,
    })
}

/// Largest number of channels accepted by [`brute_force_allocation`].
pub const GRID_MAX_CHANNELS: usize = 3;

/// Exhaustive search over the lattice `N_j = i_j P / (G ω_j)` with
/// `Σ i_j ≤ G`.
pub fn brute_force_allocation(
    problem: &AllocationProblem,
    grid_points: usize,
) -> Result<AllocationResult> {
    problem.validate()?;
    let k = problem.channels.len();
    if k > GRID_MAX_CHANNELS {
        return Err(Error::Precondition(format!(
            "grid oracle handles at most {GRID_MAX_CHANNELS} channels, got {k}"
        )));
    }
    if grid_points < 10 {
        return Err(Error::Precondition(format!(
            "grid oracle needs at least 10 points, got {grid_points}"
        )));
    }
    let step = problem.budget / grid_points as f64;
    let tables = problem
        .channels
        .iter()
        .map(|ch| {
            (0..=grid_points)
                .map(|i| family_capacity(ch.family, i as f64 * step / ch.omega))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = (f64::NEG_INFINITY, vec![0usize; k]);
    let mut idx = vec![0usize; k];
    loop {
        let used: usize = idx.iter().sum();
        if used <= grid_points {
            let value: f64 = idx.iter().zip(&tables).map(|(&i, t)| t[i]).sum();
            if value > best.0 {
                best = (value, idx.clone());
            }
        }
        // Odometer over the simplex.
        let mut pos = 0;
        loop {
            if pos == k {
                let photons = best
                    .1
                    .iter()
                    .zip(&problem.channels)
                    .map(|(&i, ch)| i as f64 * step / ch.omega)
                    .collect();
                return Ok(AllocationResult {
                    photons,
                    capacity: best.0,
                    multiplier: None,
                    method: Method::Grid,
                });
            }
            idx[pos] += 1;
            if idx.iter().sum::<usize>() <= grid_points {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Residuals of the KKT conditions at an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktCertificate {
    /// `max |C_j'(N_j)/ω_j - λ|` over active channels.
    pub active_residual: f64,
    /// `max (C_j'(0)/ω_j - λ)_+` over idle channels.
    pub inactive_violation: f64,
    /// `(P - Σ ω_j N_j) / P`.
    pub budget_gap: f64,
}

pub fn kkt_certificate(
    problem: &AllocationProblem,
    result: &AllocationResult,
) -> Result<KktCertificate> {
    let lambda = result.multiplier.unwrap_or(0.0);
    let mut active_residual: f64 = 0.0;
    let mut inactive_violation: f64 = 0.0;
    let mut spent = 0.0;
    for (ch, &n) in problem.channels.iter().zip(&result.photons) {
        spent += ch.omega * n;
        let slope = marginal_capacity(ch.family, n)? / ch.omega;
        if n > 0.0 {
            active_residual = active_residual.max((slope - lambda).abs());
        } else {
            inactive_violation = inactive_violation.max(slope - lambda);
        }
    }
    let budget_gap = if problem.budget > 0.0 {
        (problem.budget - spent) / problem.budget
    } else {
        0.0
    };
    Ok(KktCertificate {
        active_residual,
        inactive_violation,
        budget_gap,
    })
}
