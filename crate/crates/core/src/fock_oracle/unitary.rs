use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::density::{DensityMatrix, C64};
use crate::{Error, Result};

/// Tail mass above which a truncated dilation is reported as unreliable.
pub const TRUNCATION_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TwoModeKind {
    /// `exp(θ(a†b − ab†))`, conserves `n_a + n_b`.
    Beamsplitter { theta: f64 },
    /// `exp(r(a†b† − ab))`, conserves `n_a − n_b`.
    Squeezer { r: f64 },
}

/// One invariant subspace of a two-mode unitary in the truncated Fock basis.
///
/// The generator restricted to the block is real, antisymmetric and
/// tridiagonal in the ordering of `basis`, so `iG` is unitarily equivalent
/// (by a diagonal phase) to the real symmetric matrix with off-diagonal
/// `couplings`.
#[derive(Debug, Clone)]
pub struct Block {
    basis: Vec<(usize, usize)>,
    couplings: Vec<f64>,
}

impl Block {
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn eigen(&self) -> SymmetricEigen<f64, nalgebra::Dyn> {
        let n = self.len();
        let mut t = DMatrix::zeros(n, n);
        for (k, &c) in self.couplings.iter().enumerate() {
            t[(k + 1, k)] = c;
            t[(k, k + 1)] = c;
        }
        SymmetricEigen::new(t)
    }

    /// `exp(G)` restricted to the block, in the ordering of `basis`.
    pub fn matrix(&self) -> DMatrix<C64> {
        let eig = self.eigen();
        let n = self.len();
        let q = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            eig.eigenvalues.iter().map(|&h| C64::from_polar(1.0, -h)),
        ));
        let d = DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| i_pow(k)));
        &d * &q * phases * q.transpose() * d.adjoint()
    }

    /// Column `j` of `exp(G)`.
    pub fn column(&self, j: usize) -> DVector<C64> {
        let eig = self.eigen();
        let n = self.len();
        let phase_j = i_pow(j).conj();
        DVector::from_fn(n, |k, _| {
            let mut acc = C64::new(0.0, 0.0);
            for (l, &h) in eig.eigenvalues.iter().enumerate() {
                acc += C64::from_polar(eig.eigenvectors[(k, l)] * eig.eigenvectors[(j, l)], -h);
            }
            i_pow(k) * acc * phase_j
        })
    }
}

fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Two-mode Gaussian unitary on `cutoff` Fock levels per mode, stored as
/// its invariant blocks. Blocks are built on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoModeUnitary {
    kind: TwoModeKind,
    cutoff: usize,
}

impl TwoModeUnitary {
    pub fn beamsplitter(eta: f64, cutoff: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Domain(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        check_cutoff(cutoff)?;
        Ok(Self {
            kind: TwoModeKind::Beamsplitter {
                theta: eta.sqrt().acos(),
            },
            cutoff,
        })
    }

    pub fn two_mode_squeezer(kappa: f64, cutoff: usize) -> Result<Self> {
        if !(kappa >= 1.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("gain must be >= 1, got {kappa}")));
        }
        check_cutoff(cutoff)?;
        Ok(Self {
            kind: TwoModeKind::Squeezer {
                r: kappa.sqrt().acosh(),
            },
            cutoff,
        })
    }

    pub fn kind(&self) -> TwoModeKind {
        self.kind
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Labels of all blocks: total photon number for the beamsplitter,
    /// photon-number difference for the squeezer.
    pub fn block_labels(&self) -> Vec<i64> {
        let top = self.cutoff as i64 - 1;
        match self.kind {
            TwoModeKind::Beamsplitter { .. } => (0..=2 * top).collect(),
            TwoModeKind::Squeezer { .. } => (-top..=top).collect(),
        }
    }

    pub fn block(&self, label: i64) -> Block {
        let top = self.cutoff as i64 - 1;
        let mut basis = Vec::new();
        let mut couplings = Vec::new();
        match self.kind {
            TwoModeKind::Beamsplitter { theta } => {
                let n = label;
                for k in (n - top).max(0)..=n.min(top) {
                    basis.push((k as usize, (n - k) as usize));
                }
                // a†b |k, n−k⟩ = √((k+1)(n−k)) |k+1, n−k−1⟩
                for &(a, b) in basis.iter().take(basis.len().saturating_sub(1)) {
                    couplings.push(theta * (((a + 1) * b) as f64).sqrt());
                }
            }
            TwoModeKind::Squeezer { r } => {
                let (a0, b0) = (label.max(0), (-label).max(0));
                let len = (top - a0).min(top - b0) + 1;
                for k in 0..len.max(0) {
                    basis.push(((a0 + k) as usize, (b0 + k) as usize));
                }
                // a†b† |a, b⟩ = √((a+1)(b+1)) |a+1, b+1⟩
                for &(a, b) in basis.iter().take(basis.len().saturating_sub(1)) {
                    couplings.push(r * (((a + 1) * (b + 1)) as f64).sqrt());
                }
            }
        }
        Block { basis, couplings }
    }

    /// Image of the product state `|n⟩|0⟩` as `(a, b, amplitude)` triplets.
    pub fn image_of_number_state(&self, n: usize) -> Result<Vec<(usize, usize, C64)>> {
        if n >= self.cutoff {
            return Err(Error::Domain(format!(
                "Fock level {n} outside cutoff {}",
                self.cutoff
            )));
        }
        let block = self.block(n as i64);
        let j = block
            .basis
            .iter()
            .position(|&p| p == (n, 0))
            .expect("|n,0> lies in its own block");
        let col = block.column(j);
        Ok(block
            .basis
            .iter()
            .zip(col.iter())
            .map(|(&(a, b), &amp)| (a, b, amp))
            .collect())
    }

    /// Full `d² × d²` matrix with index `a·d + b`.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.cutoff;
        let mut u = DMatrix::zeros(d * d, d * d);
        for label in self.block_labels() {
            let block = self.block(label);
            let m = block.matrix();
            for (i, &(a, b)) in block.basis.iter().enumerate() {
                for (j, &(a2, b2)) in block.basis.iter().enumerate() {
                    u[(a * d + b, a2 * d + b2)] = m[(i, j)];
                }
            }
        }
        u
    }

    /// `U ρ U†` for a two-mode state at the same cutoff.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.modes() != 2 || rho.cutoff() != self.cutoff {
            return Err(Error::Shape(format!(
                "unitary acts on two modes at cutoff {}, got {} modes at cutoff {}",
                self.cutoff,
                rho.modes(),
                rho.cutoff()
            )));
        }
        let u = self.to_dense();
        DensityMatrix::new(self.cutoff, 2, &u * rho.matrix() * u.adjoint())
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 || cutoff > super::density::MAX_CUTOFF {
        return Err(Error::Domain(format!("invalid cutoff {cutoff}")));
    }
    Ok(())
}
