use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::density::{random_vector, C64};
use crate::{Error, Result};

pub const KRAUS_TOL: f64 = 1e-10;
/// Largest channel dimension the sampled check accepts.
pub const MAX_SMALL_DIM: usize = 4;
/// Allowance for sampling the minima at finite resolution.
pub const GRID_SLACK: f64 = 1e-3;

/// Channel on a `dim`-level system given by Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        let dim = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?
            .nrows();
        if kraus.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(Error::Shape(
                "Kraus operators must be square and equal-sized".into(),
            ));
        }
        let sum = kraus
            .iter()
            .fold(DMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        let dev = (sum - DMatrix::identity(dim, dim)).camax();
        if dev > KRAUS_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![DMatrix::identity(dim, dim)])
    }

    /// `ρ ↦ (1 − p) ρ + p I/2` on a qubit.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "depolarizing strength {p} outside [0, 1]"
            )));
        }
        let c = |re: f64, im: f64| C64::new(re, im);
        let x = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let id = DMatrix::identity(2, 2);
        let w0 = C64::new((1.0 - 0.75 * p).sqrt(), 0.0);
        let w = C64::new((0.25 * p).sqrt(), 0.0);
        Self::new(vec![id * w0, x * w, y * w, z * w])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `⟨ψ|N(ψ)|ψ⟩` for a unit vector.
    pub fn pure_fidelity(&self, psi: &DVector<C64>) -> f64 {
        self.kraus
            .iter()
            .map(|k| psi.dotc(&(k * psi)).norm_sqr())
            .sum()
    }

    /// `⟨φ|(id ⊗ N)(φ)|φ⟩` for a unit vector on reference ⊗ system, both of
    /// dimension `dim`, indexed `r·dim + s`.
    pub fn entanglement_fidelity(&self, phi: &DVector<C64>) -> f64 {
        let d = self.dim;
        self.kraus
            .iter()
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..d {
                    for s in 0..d {
                        let mut ks = C64::new(0.0, 0.0);
                        for t in 0..d {
                            ks += k[(s, t)] * phi[r * d + t];
                        }
                        acc += phi[r * d + s].conj() * ks;
                    }
                }
                acc.norm_sqr()
            })
            .sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinFidelityReport {
    pub samples: usize,
    /// `1 − min` sampled input-output fidelity over pure inputs.
    pub epsilon_hat: f64,
    /// Minimum sampled entanglement fidelity.
    pub entanglement_fidelity_hat: f64,
    pub bound: f64,
    pub slack: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Minimises `f` over unit vectors: seeds from `starts`, then random-walk
/// refinement with a shrinking step.
fn sampled_minimum<R: Rng + ?Sized>(
    dim: usize,
    starts: impl IntoIterator<Item = DVector<C64>>,
    rng: &mut R,
    f: impl Fn(&DVector<C64>) -> f64,
) -> f64 {
    let mut best: Option<(f64, DVector<C64>)> = None;
    for v in starts {
        let v = v.normalize();
        let val = f(&v);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, v));
        }
    }
    let (mut val, mut v) = best.expect("at least one start");
    let mut step = 0.2;
    while step > 1e-6 {
        let mut improved = false;
        for _ in 0..20 {
            let trial = (&v + random_vector(dim, rng) * C64::new(step, 0.0)).normalize();
            let t = f(&trial);
            if t < val {
                val = t;
                v = trial;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    val
}

/// Sampled check of `F_e ≥ 1 − 2√ε` with `ε = 1 − min_ψ ⟨ψ|N(ψ)|ψ⟩`.
///
/// Pure inputs come from a product grid of real amplitudes and phases in
/// each basis direction plus `sample_size` Haar-random states; the best
/// sample is then locally refined.
pub fn min_fidelity_entanglement_check<R: Rng + ?Sized>(
    channel: &KrausChannel,
    sample_size: usize,
    rng: &mut R,
) -> Result<MinFidelityReport> {
    let d = channel.dim();
    if d > MAX_SMALL_DIM {
        return Err(Error::Precondition(format!(
            "channel dimension {d} exceeds {MAX_SMALL_DIM}"
        )));
    }

    let mut inputs: Vec<DVector<C64>> = Vec::new();
    // Two-level superpositions cos t |i⟩ + e^{iφ} sin t |j⟩ on a grid.
    for i in 0..d {
        for j in (i + 1)..d {
            for a in 0..=16 {
                let t = a as f64 * std::f64::consts::FRAC_PI_2 / 16.0;
                for b in 0..16 {
                    let phi = b as f64 * std::f64::consts::TAU / 16.0;
                    let mut v = DVector::zeros(d);
                    v[i] = C64::new(t.cos(), 0.0);
                    v[j] = C64::from_polar(t.sin(), phi);
                    inputs.push(v);
                }
            }
        }
    }
    if d == 1 {
        inputs.push(DVector::from_element(1, C64::new(1.0, 0.0)));
    }
    inputs.extend((0..sample_size).map(|_| random_vector(d, rng)));
    let n_inputs = inputs.len();
    let min_fid = sampled_minimum(d, inputs, rng, |v| channel.pure_fidelity(v));

    let dd = d * d;
    let mut pairs: Vec<DVector<C64>> = Vec::new();
    let max_ent = DVector::from_fn(dd, |k, _| {
        if k / d == k % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    pairs.push(max_ent);
    // Schmidt-form states with random weights and phases, plus generic pairs.
    for _ in 0..sample_size {
        let coeffs: Vec<f64> = (0..d)
            .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
            .collect();
        let phases: Vec<f64> = (0..d)
            .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
            .collect();
        pairs.push(DVector::from_fn(dd, |k, _| {
            let (r, s) = (k / d, k % d);
            if r == s {
                C64::from_polar(coeffs[r], phases[r])
            } else {
                C64::new(0.0, 0.0)
            }
        }));
        pairs.push(random_vector(dd, rng));
    }
    let n_pairs = pairs.len();
    let min_fe = sampled_minimum(dd, pairs, rng, |v| channel.entanglement_fidelity(v));

    let epsilon_hat = (1.0 - min_fid).max(0.0);
    let bound = 1.0 - 2.0 * epsilon_hat.sqrt();
    let margin = min_fe - (bound - GRID_SLACK);
    Ok(MinFidelityReport {
        samples: n_inputs + n_pairs,
        epsilon_hat,
        entanglement_fidelity_hat: min_fe,
        bound,
        slack: GRID_SLACK,
        margin,
        holds: margin >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ch = KrausChannel::identity(2).unwrap();
        let rep = min_fidelity_entanglement_check(&ch, 50, &mut rng).unwrap();
        assert_abs_diff_eq!(rep.epsilon_hat, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.entanglement_fidelity_hat, 1.0, epsilon = 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn maximally_entangled_on_identity() {
        let ch = KrausChannel::identity(3).unwrap();
        let phi = DVector::from_fn(9, |k, _| {
            if k / 3 == k % 3 {
                C64::new(1.0 / 3f64.sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert_abs_diff_eq!(ch.entanglement_fidelity(&phi), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn depolarizing_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let ch = KrausChannel::depolarizing(0.01).unwrap();
        let rep = min_fidelity_entanglement_check(&ch, 200, &mut rng).unwrap();
        // Every pure input has fidelity 1 − p/2; every input F_e ≥ 1 − 3p/4.
        assert_abs_diff_eq!(rep.epsilon_hat, 0.005, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.entanglement_fidelity_hat, 0.9925, epsilon = 1e-6);
        assert!(rep.holds && rep.margin > 0.1);
    }

    #[test]
    fn rejects_invalid_kraus() {
        let half = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(KrausChannel::new(vec![half]).is_err());
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(KrausChannel::depolarizing(1.5).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let big = KrausChannel::identity(5).unwrap();
        assert!(min_fidelity_entanglement_check(&big, 1, &mut rng).is_err());
    }
}
