use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::{Error, Result};

pub type C64 = Complex<f64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const EIGEN_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are dropped from entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Numerical support threshold for relative entropy.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Thermal tail mass allowed by the automatic cutoff.
pub const THERMAL_TAIL: f64 = 1e-10;
/// Largest Fock cutoff the oracle will build.
pub const MAX_CUTOFF: usize = 2048;

/// Density operator on `modes` modes, each truncated to Fock levels
/// `0..cutoff`. Multi-mode indices are row-major: mode 0 is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    cutoff: usize,
    modes: usize,
    #[serde(skip)]
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(cutoff: usize, modes: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::unchecked(cutoff, modes, matrix)?;
        rho.check()?;
        Ok(rho)
    }

    fn unchecked(cutoff: usize, modes: usize, matrix: DMatrix<C64>) -> Result<Self> {
        if cutoff == 0 || modes == 0 {
            return Err(Error::Shape(
                "cutoff and mode count must be positive".into(),
            ));
        }
        let dim = cutoff
            .checked_pow(modes as u32)
            .ok_or_else(|| Error::Shape("dimension overflow".into()))?;
        if matrix.shape() != (dim, dim) {
            return Err(Error::Shape(format!(
                "{modes} modes at cutoff {cutoff} need a {dim}x{dim} matrix, got {:?}",
                matrix.shape()
            )));
        }
        Ok(Self {
            cutoff,
            modes,
            matrix,
        })
    }

    fn check(&self) -> Result<()> {
        let herm = (&self.matrix - self.matrix.adjoint()).camax();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// A single system of dimension `dim` (one "mode" with cutoff `dim`).
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let dim = matrix.nrows();
        Self::new(dim, 1, matrix)
    }

    pub fn from_pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi / C64::new(norm, 0.0);
        Self::from_matrix(&v * v.adjoint())
    }

    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::Domain(format!(
                "Fock level {n} outside cutoff {cutoff}"
            )));
        }
        let mut m = DMatrix::zeros(cutoff, cutoff);
        m[(n, n)] = C64::new(1.0, 0.0);
        Self::unchecked(cutoff, 1, m)
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::fock(0, cutoff)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        let m = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self::unchecked(dim, 1, m)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(hermitian_part(&self.matrix))
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// `λ ρ + (1 - λ) σ`.
    pub fn mix(lambda: f64, rho: &Self, sigma: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        if rho.cutoff != sigma.cutoff || rho.modes != sigma.modes {
            return Err(Error::Shape("mixing states of different shape".into()));
        }
        let m = &rho.matrix * C64::new(lambda, 0.0) + &sigma.matrix * C64::new(1.0 - lambda, 0.0);
        Self::unchecked(rho.cutoff, rho.modes, m)
    }

    /// Embeds a single-mode state into a larger cutoff, padding with zeros.
    pub fn padded(&self, cutoff: usize) -> Result<Self> {
        if self.modes != 1 {
            return Err(Error::Shape(
                "padding is defined for single-mode states".into(),
            ));
        }
        if cutoff < self.cutoff {
            return Err(Error::Domain(format!(
                "cannot shrink cutoff {} to {cutoff}",
                self.cutoff
            )));
        }
        let mut m = DMatrix::zeros(cutoff, cutoff);
        m.view_mut((0, 0), (self.cutoff, self.cutoff))
            .copy_from(&self.matrix);
        Self::unchecked(cutoff, 1, m)
    }

    /// `ρ ⊗ σ` as a state with `ρ.modes + σ.modes` modes at a common cutoff.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::Shape("tensor product needs equal cutoffs".into()));
        }
        Self::unchecked(
            self.cutoff,
            self.modes + other.modes,
            self.matrix.kronecker(&other.matrix),
        )
    }

    /// Reduced state of `keep`, tracing out every other mode.
    pub fn reduced(&self, keep: usize) -> Result<Self> {
        if keep >= self.modes {
            return Err(Error::Shape(format!(
                "mode {keep} out of range for {} modes",
                self.modes
            )));
        }
        let d = self.cutoff;
        let stride = d.pow((self.modes - 1 - keep) as u32);
        let digit = |idx: usize| (idx / stride) % d;
        let strip = |idx: usize| {
            // Index with the kept digit removed.
            let high = idx / (stride * d);
            let low = idx % stride;
            high * stride + low
        };
        let mut out = DMatrix::zeros(d, d);
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                if strip(i) == strip(j) {
                    out[(digit(i), digit(j))] += self.matrix[(i, j)];
                }
            }
        }
        Self::unchecked(d, 1, out)
    }

    /// `⟨a†a⟩` of mode `mode`.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        let r = if self.modes == 1 {
            self.clone()
        } else {
            self.reduced(mode)?
        };
        Ok((0..r.cutoff).map(|n| n as f64 * r.matrix[(n, n)].re).sum())
    }

    /// Probability on the top Fock level of each mode.
    pub fn top_level_mass(&self) -> f64 {
        let d = self.cutoff;
        (0..self.dim())
            .filter(|&i| {
                let mut idx = i;
                (0..self.modes).any(|_| {
                    let top = idx % d == d - 1;
                    idx /= d;
                    top
                })
            })
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Hermitian function of a Hermitian matrix via its eigendecomposition.
fn hermitian_map(m: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(f(l), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn same_shape(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Shape(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// Smallest cutoff whose thermal tail `(N/(N+1))^d` is at most `tail`.
pub fn thermal_cutoff(n_mean: f64, tail: f64) -> Result<usize> {
    if n_mean == 0.0 {
        return Ok(1);
    }
    let q = n_mean / (n_mean + 1.0);
    let d = (tail.ln() / q.ln()).ceil();
    if !(d.is_finite()) || d > MAX_CUTOFF as f64 {
        return Err(Error::Domain(format!(
            "thermal state with N = {n_mean} needs cutoff {d} > {MAX_CUTOFF}"
        )));
    }
    Ok((d as usize).max(1))
}

/// Truncated thermal state `p_k ∝ (N/(N+1))^k`, renormalised. The cutoff is
/// raised as needed so the discarded tail is at most [`THERMAL_TAIL`].
pub fn thermal_density_matrix(n_mean: f64, cutoff: usize) -> Result<DensityMatrix> {
    if !(n_mean >= 0.0 && n_mean.is_finite()) {
        return Err(Error::Domain(format!(
            "mean photon number must be >= 0, got {n_mean}"
        )));
    }
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::Domain(format!(
            "cutoff must lie in 1..={MAX_CUTOFF}, got {cutoff}"
        )));
    }
    let d = cutoff.max(thermal_cutoff(n_mean, THERMAL_TAIL)?);
    let q = n_mean / (n_mean + 1.0);
    let weights: Vec<f64> = (0..d).map(|k| q.powi(k as i32)).collect();
    let total: f64 = weights.iter().sum();
    let diag = DVector::from_iterator(d, weights.iter().map(|w| C64::new(w / total, 0.0)));
    DensityMatrix::unchecked(d, 1, DMatrix::from_diagonal(&diag))
}

/// `-Σ λ log2 λ` over eigenvalues above [`ENTROPY_CUTOFF`].
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > ENTROPY_CUTOFF)
        .map(|l| -l * l.log2())
        .sum()
}

/// Uhlmann fidelity `‖√ρ √σ‖₁²`, with the trace norm taken from singular
/// values so that rank-deficient inputs stay accurate.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_shape(rho, sigma)?;
    let sqrt = |l: f64| if l > ENTROPY_CUTOFF { l.sqrt() } else { 0.0 };
    let product = hermitian_map(rho.matrix(), sqrt) * hermitian_map(sigma.matrix(), sqrt);
    let trace_norm: f64 = product.singular_values().iter().sum();
    Ok((trace_norm * trace_norm).clamp(0.0, 1.0))
}

/// Normalised trace distance `½‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_shape(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let sum: f64 = SymmetricEigen::new(hermitian_part(&diff))
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// `D(ρ‖σ) = Tr ρ log2 ρ - Tr ρ log2 σ`, or `+∞` when the support of `ρ` is
/// not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_shape(rho, sigma)?;
    let eig = SymmetricEigen::new(hermitian_part(sigma.matrix()));
    let mut cross = 0.0;
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if l <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * l.log2();
    }
    let neg_entropy = -von_neumann_entropy(rho);
    Ok(neg_entropy - cross)
}

/// Haar-random pure state of dimension `dim`.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&random_vector(dim, rng))
}

pub(crate) fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    DVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random mixed state from the Ginibre ensemble, `G G† / Tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::from_matrix(hermitian_part(&(m / tr)))
}

/// Random two-mode state at the given per-mode cutoff.
pub fn random_two_mode_state<R: Rng + ?Sized>(cutoff: usize, rng: &mut R) -> Result<DensityMatrix> {
    let single = random_density_matrix(cutoff * cutoff, rng)?;
    DensityMatrix::new(cutoff, 2, single.matrix)
}
