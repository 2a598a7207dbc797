use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::density::{
    thermal_cutoff, thermal_density_matrix, von_neumann_entropy, DensityMatrix, C64, MAX_CUTOFF,
    THERMAL_TAIL,
};
use super::unitary::{TwoModeUnitary, TRUNCATION_WARN};
use crate::{Error, Family, Result};

/// Channel families with an explicit Fock-space dilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FockFamily {
    Identity,
    PureLoss { eta: f64 },
    Amplifier { kappa: f64 },
}

impl From<Family> for FockFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::PureLoss { eta } => FockFamily::PureLoss { eta },
            Family::Amplifier { kappa } => FockFamily::Amplifier { kappa },
        }
    }
}

impl FockFamily {
    fn validate(&self) -> Result<()> {
        match *self {
            FockFamily::Identity => Ok(()),
            FockFamily::PureLoss { eta } => Family::PureLoss { eta }.validate(),
            FockFamily::Amplifier { kappa } => Family::Amplifier { kappa }.validate(),
        }
    }

    /// Working cutoff for output and environment given the input cutoff and
    /// its mean photon number.
    fn working_cutoff(&self, d_in: usize, n_in: f64, requested: usize) -> Result<usize> {
        let d = match *self {
            FockFamily::Identity | FockFamily::PureLoss { .. } => requested.max(d_in),
            FockFamily::Amplifier { kappa } => {
                let n_out = kappa * n_in + kappa - 1.0;
                requested
                    .max(2 * d_in)
                    .max(thermal_cutoff(n_out, THERMAL_TAIL)?)
            }
        };
        if d > MAX_CUTOFF {
            return Err(Error::Domain(format!(
                "dilation needs cutoff {d} > {MAX_CUTOFF}"
            )));
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelOutput {
    pub output: DensityMatrix,
    pub environment: DensityMatrix,
    /// Population reaching the top Fock level of either output mode.
    pub boundary_mass: f64,
    pub cutoff: usize,
    pub truncation_warning: bool,
}

/// Applies the dilation unitary to `input ⊗ |0⟩⟨0|` and traces out each
/// side. The input must be single-mode.
pub fn channel_output_and_env(
    family: FockFamily,
    input: &DensityMatrix,
    cutoff: usize,
) -> Result<ChannelOutput> {
    family.validate()?;
    if input.modes() != 1 {
        return Err(Error::Shape("channel input must be single-mode".into()));
    }
    let d_in = input.cutoff();
    let n_in = input.mean_photon_number(0)?;
    let d = family.working_cutoff(d_in, n_in, cutoff)?;

    let images: Vec<Vec<(usize, usize, C64)>> = match family {
        FockFamily::Identity => (0..d_in)
            .map(|n| vec![(n, 0, C64::new(1.0, 0.0))])
            .collect(),
        FockFamily::PureLoss { eta } => {
            let u = TwoModeUnitary::beamsplitter(eta, d)?;
            (0..d_in)
                .map(|n| u.image_of_number_state(n))
                .collect::<Result<_>>()?
        }
        FockFamily::Amplifier { kappa } => {
            let u = TwoModeUnitary::two_mode_squeezer(kappa, d)?;
            (0..d_in)
                .map(|n| u.image_of_number_state(n))
                .collect::<Result<_>>()?
        }
    };

    let rho = input.matrix();
    let output = reduce(&images, rho, d, |(_, b)| b, |(a, _)| a);
    let environment = reduce(&images, rho, d, |(a, _)| a, |(_, b)| b);

    let boundary_mass: f64 = images
        .iter()
        .enumerate()
        .map(|(n, image)| {
            let edge: f64 = image
                .iter()
                .filter(|&&(a, b, _)| a == d - 1 || b == d - 1)
                .map(|(_, _, amp)| amp.norm_sqr())
                .sum();
            rho[(n, n)].re * edge
        })
        .sum();

    Ok(ChannelOutput {
        output: DensityMatrix::new(d, 1, output)?,
        environment: DensityMatrix::new(d, 1, environment)?,
        boundary_mass,
        cutoff: d,
        truncation_warning: boundary_mass > TRUNCATION_WARN,
    })
}

/// Partial trace of `V ρ V†` given the isometry as triplets per input level:
/// triplets sharing the traced index interfere, all others do not.
fn reduce(
    images: &[Vec<(usize, usize, C64)>],
    rho: &DMatrix<C64>,
    d: usize,
    traced: impl Fn((usize, usize)) -> usize,
    kept: impl Fn((usize, usize)) -> usize,
) -> DMatrix<C64> {
    let mut groups: BTreeMap<usize, Vec<(usize, usize, C64)>> = BTreeMap::new();
    for (n, image) in images.iter().enumerate() {
        for &(a, b, amp) in image {
            groups
                .entry(traced((a, b)))
                .or_default()
                .push((n, kept((a, b)), amp));
        }
    }
    let mut out = DMatrix::zeros(d, d);
    for entries in groups.values() {
        for &(n, k, amp) in entries {
            for &(n2, k2, amp2) in entries {
                let r = rho[(n, n2)];
                if r != C64::new(0.0, 0.0) {
                    out[(k, k2)] += amp * r * amp2.conj();
                }
            }
        }
    }
    (&out + out.adjoint()) * C64::new(0.5, 0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoherentInfo {
    pub value: f64,
    pub output_entropy: f64,
    pub environment_entropy: f64,
    pub cutoff: usize,
    pub boundary_mass: f64,
    pub truncation_warning: bool,
}

/// `H(N(ρ)) − H(N^c(ρ))` for a single-mode input.
pub fn coherent_information_fock(
    family: FockFamily,
    input: &DensityMatrix,
    cutoff: usize,
) -> Result<CoherentInfo> {
    let out = channel_output_and_env(family, input, cutoff)?;
    let output_entropy = von_neumann_entropy(&out.output);
    let environment_entropy = von_neumann_entropy(&out.environment);
    Ok(CoherentInfo {
        value: output_entropy - environment_entropy,
        output_entropy,
        environment_entropy,
        cutoff: out.cutoff,
        boundary_mass: out.boundary_mass,
        truncation_warning: out.truncation_warning,
    })
}

/// Coherent information of a thermal input with mean photon number `n_s`.
pub fn thermal_coherent_information(
    family: FockFamily,
    n_s: f64,
    cutoff: usize,
) -> Result<CoherentInfo> {
    let input = thermal_density_matrix(n_s, cutoff)?;
    coherent_information_fock(family, &input, cutoff)
}

pub const CONCAVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityReport {
    pub lambdas: Vec<f64>,
    /// `I_c(λρ₀ + (1−λ)ρ₁) − λ I_c(ρ₀) − (1−λ) I_c(ρ₁)` per λ.
    pub differences: Vec<f64>,
    pub min_difference: f64,
    pub tolerance: f64,
    pub concave: bool,
}

pub fn concavity_witness(
    family: FockFamily,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    lambdas: &[f64],
    cutoff: usize,
) -> Result<ConcavityReport> {
    if let FockFamily::PureLoss { eta } = family {
        if eta < 0.5 {
            return Err(Error::Precondition(format!(
                "pure loss with eta = {eta} is not degradable"
            )));
        }
    }
    let d = rho0.cutoff().max(rho1.cutoff());
    let rho0 = rho0.padded(d)?;
    let rho1 = rho1.padded(d)?;
    let i0 = coherent_information_fock(family, &rho0, cutoff)?.value;
    let i1 = coherent_information_fock(family, &rho1, cutoff)?.value;
    let mut differences = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let diff = if lambda == 0.0 || lambda == 1.0 {
            0.0
        } else {
            let mix = DensityMatrix::mix(lambda, &rho0, &rho1)?;
            let im = coherent_information_fock(family, &mix, cutoff)?.value;
            im - (lambda * i0 + (1.0 - lambda) * i1)
        };
        differences.push(diff);
    }
    let min_difference = differences.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ConcavityReport {
        lambdas: lambdas.to_vec(),
        concave: min_difference >= -CONCAVITY_TOL,
        min_difference,
        differences,
        tolerance: CONCAVITY_TOL,
    })
}
