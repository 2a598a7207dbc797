//! Gaussian channels in `(X, Y, d)` form, with explicit one-mode dilations
//! for the pure-loss and quantum-limited amplifier families.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::gaussian_core::{min_hermitian_eigenvalue, symplectic_form, GaussianState, C64};
use crate::{Error, Result};

pub const CHANNEL_VALIDITY_TOL: f64 = 1e-9;
pub const NOISE_PSD_TOL: f64 = 1e-12;

/// Single-mode phase-insensitive families with a known dilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    PureLoss { eta: f64 },
    Amplifier { kappa: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::PureLoss { eta } if !(0.0..=1.0).contains(&eta) => Err(Error::Domain(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            ))),
            Family::Amplifier { kappa } if !(kappa >= 1.0 && kappa.is_finite()) => Err(
                Error::Domain(format!("amplifier gain must be >= 1, got {kappa}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn is_degradable(&self) -> bool {
        match *self {
            Family::PureLoss { eta } => eta >= 0.5,
            Family::Amplifier { .. } => true,
        }
    }

    /// The single-mode channel of this family.
    pub fn channel(&self) -> Result<GaussianChannel> {
        match *self {
            Family::PureLoss { eta } => pure_loss(eta, 1),
            Family::Amplifier { kappa } => quantum_limited_amplifier(kappa, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelKind {
    PureLoss { eta: f64 },
    Amplifier { kappa: f64 },
    Parallel { members: Vec<ChannelKind> },
    Custom,
}

impl From<Family> for ChannelKind {
    fn from(f: Family) -> Self {
        match f {
            Family::PureLoss { eta } => ChannelKind::PureLoss { eta },
            Family::Amplifier { kappa } => ChannelKind::Amplifier { kappa },
        }
    }
}

impl ChannelKind {
    /// The family, if this is a single implemented family.
    pub fn family(&self) -> Option<Family> {
        match *self {
            ChannelKind::PureLoss { eta } => Some(Family::PureLoss { eta }),
            ChannelKind::Amplifier { kappa } => Some(Family::Amplifier { kappa }),
            _ => None,
        }
    }
}

/// Environment part of a Gaussian dilation: the complementary channel maps
/// `V ↦ X_E V X_Eᵀ + Y_E`, `μ ↦ X_E μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDilation {
    x_e: DMatrix<f64>,
    y_e: DMatrix<f64>,
    env_modes: usize,
}

impl ChannelDilation {
    pub fn x_e(&self) -> &DMatrix<f64> {
        &self.x_e
    }

    pub fn y_e(&self) -> &DMatrix<f64> {
        &self.y_e
    }

    pub fn env_modes(&self) -> usize {
        self.env_modes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianChannel {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
    d: DVector<f64>,
    kind: ChannelKind,
    dilation: Option<ChannelDilation>,
}

impl GaussianChannel {
    /// A custom channel. Checks `Y ≥ 0` and `Y + iΩ - iXΩXᵀ ≥ 0`.
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let n = x.nrows();
        if n == 0 || !n.is_multiple_of(2) || x.ncols() != n || y.shape() != (n, n) || d.len() != n {
            return Err(Error::Shape(format!(
                "channel needs 2m x 2m X and Y and a 2m vector d; got X {:?}, Y {:?}, d {}",
                x.shape(),
                y.shape(),
                d.len()
            )));
        }
        let asym = (&y - y.transpose()).amax();
        if asym > NOISE_PSD_TOL * y.amax().max(1.0) {
            return Err(Error::InvalidChannel(format!(
                "Y is not symmetric ({asym:e})"
            )));
        }
        let y = (&y + y.transpose()) * 0.5;
        let y_min = y.clone().symmetric_eigen().eigenvalues.min();
        if y_min < -NOISE_PSD_TOL {
            return Err(Error::InvalidChannel(format!(
                "Y has negative eigenvalue {y_min:e}"
            )));
        }
        let ch = Self {
            x,
            y,
            d,
            kind: ChannelKind::Custom,
            dilation: None,
        };
        let margin = ch.validity_margin();
        if margin < -CHANNEL_VALIDITY_TOL {
            return Err(Error::InvalidChannel(format!(
                "Y + iΩ - iXΩXᵀ has eigenvalue {margin:e}"
            )));
        }
        Ok(ch)
    }

    /// Attaches a user-supplied complementary map. The pair is not checked to
    /// come from a symplectic dilation; callers vouch for it.
    pub fn with_dilation(mut self, x_e: DMatrix<f64>, y_e: DMatrix<f64>) -> Result<Self> {
        let n = self.x.nrows();
        if x_e.ncols() != n || !x_e.nrows().is_multiple_of(2) || y_e.shape() != (x_e.nrows(), x_e.nrows()) {
            return Err(Error::Shape(format!(
                "dilation needs X_E of shape 2m_E x {n} and square Y_E; got {:?}, {:?}",
                x_e.shape(),
                y_e.shape()
            )));
        }
        let env_modes = x_e.nrows() / 2;
        self.dilation = Some(ChannelDilation {
            x_e,
            y_e,
            env_modes,
        });
        Ok(self)
    }

    pub fn identity(modes: usize) -> Result<Self> {
        pure_loss(1.0, modes)
    }

    pub fn num_modes(&self) -> usize {
        self.x.nrows() / 2
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn d(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn dilation(&self) -> Option<&ChannelDilation> {
        self.dilation.as_ref()
    }

    /// Smallest eigenvalue of `Y + iΩ - iXΩXᵀ`; non-negative for a valid
    /// channel.
    pub fn validity_margin(&self) -> f64 {
        let m = self.num_modes();
        let omega = symplectic_form(m);
        let twisted = &omega - &self.x * &omega * self.x.transpose();
        let n = 2 * m;
        let h = DMatrix::from_fn(n, n, |i, j| C64::new(self.y[(i, j)], twisted[(i, j)]));
        min_hermitian_eigenvalue(h)
    }
}

/// `q` block scaled by `a`, `p` block scaled by `b`, over `modes` modes.
fn quadrature_diag(modes: usize, a: f64, b: f64) -> DMatrix<f64> {
    let diag: Vec<f64> = std::iter::repeat_n(a, modes)
        .chain(std::iter::repeat_n(b, modes))
        .collect();
    DMatrix::from_diagonal(&DVector::from_vec(diag))
}

/// Pure-loss channel of transmissivity `eta` on each of `modes` modes,
/// dilated by a beamsplitter with a vacuum environment.
pub fn pure_loss(eta: f64, modes: usize) -> Result<GaussianChannel> {
    Family::PureLoss { eta }.validate()?;
    check_modes(modes)?;
    let n = 2 * modes;
    let t = eta.sqrt();
    let leak = (1.0 - eta).sqrt();
    Ok(GaussianChannel {
        x: DMatrix::identity(n, n) * t,
        y: DMatrix::identity(n, n) * (1.0 - eta),
        d: DVector::zeros(n),
        kind: ChannelKind::PureLoss { eta },
        dilation: Some(ChannelDilation {
            x_e: DMatrix::identity(n, n) * leak,
            y_e: DMatrix::identity(n, n) * eta,
            env_modes: modes,
        }),
    })
}

/// Quantum-limited amplifier of gain `kappa`, dilated by a two-mode squeezer
/// with a vacuum idler. The environment sees the phase-conjugated input.
pub fn quantum_limited_amplifier(kappa: f64, modes: usize) -> Result<GaussianChannel> {
    Family::Amplifier { kappa }.validate()?;
    check_modes(modes)?;
    let n = 2 * modes;
    let g = (kappa - 1.0).sqrt();
    Ok(GaussianChannel {
        x: DMatrix::identity(n, n) * kappa.sqrt(),
        y: DMatrix::identity(n, n) * (kappa - 1.0),
        d: DVector::zeros(n),
        kind: ChannelKind::Amplifier { kappa },
        dilation: Some(ChannelDilation {
            x_e: quadrature_diag(modes, g, -g),
            y_e: DMatrix::identity(n, n) * kappa,
            env_modes: modes,
        }),
    })
}

fn check_modes(modes: usize) -> Result<()> {
    if modes == 0 {
        return Err(Error::Domain("a channel needs at least one mode".into()));
    }
    Ok(())
}

/// `μ ↦ Xμ + d`, `V ↦ XVXᵀ + Y`.
pub fn apply(ch: &GaussianChannel, state: &GaussianState) -> Result<GaussianState> {
    if ch.num_modes() != state.num_modes() {
        return Err(Error::Shape(format!(
            "channel acts on {} modes, state has {}",
            ch.num_modes(),
            state.num_modes()
        )));
    }
    let cov = &ch.x * state.cov() * ch.x.transpose() + &ch.y;
    let mean = &ch.x * state.mean() + &ch.d;
    GaussianState::new(mean, (&cov + cov.transpose()) * 0.5)
}

/// Environment state `X_E V X_Eᵀ + Y_E`, mean `X_E μ`.
pub fn apply_complementary(ch: &GaussianChannel, state: &GaussianState) -> Result<GaussianState> {
    let dil = ch.dilation.as_ref().ok_or_else(|| {
        Error::UnsupportedChannel("channel has no dilation; complementary channel unknown".into())
    })?;
    if ch.num_modes() != state.num_modes() {
        return Err(Error::Shape(format!(
            "channel acts on {} modes, state has {}",
            ch.num_modes(),
            state.num_modes()
        )));
    }
    let cov = &dil.x_e * state.cov() * dil.x_e.transpose() + &dil.y_e;
    let mean = &dil.x_e * state.mean();
    GaussianState::new(mean, (&cov + cov.transpose()) * 0.5)
}

/// Embeds `block` (over `sub_rows`/`sub_cols` modes) into `target` with mode
/// offsets, keeping the `qq..pp` layout on both sides.
fn embed(
    target: &mut DMatrix<f64>,
    block: &DMatrix<f64>,
    (rows_total, row_off): (usize, usize),
    (cols_total, col_off): (usize, usize),
) {
    let sub_rows = block.nrows() / 2;
    let sub_cols = block.ncols() / 2;
    let map = |k: usize, sub: usize, total: usize, off: usize| {
        if k < sub {
            off + k
        } else {
            total + off + (k - sub)
        }
    };
    for i in 0..block.nrows() {
        for j in 0..block.ncols() {
            target[(
                map(i, sub_rows, rows_total, row_off),
                map(j, sub_cols, cols_total, col_off),
            )] = block[(i, j)];
        }
    }
}

/// Block-diagonal composition of channels acting on disjoint modes.
pub fn parallel(channels: &[GaussianChannel]) -> Result<GaussianChannel> {
    if channels.is_empty() {
        return Err(Error::Domain(
            "parallel composition of zero channels".into(),
        ));
    }
    let m: usize = channels.iter().map(GaussianChannel::num_modes).sum();
    let with_dilation = channels.iter().all(|c| c.dilation.is_some());
    let m_env: usize = channels
        .iter()
        .filter_map(|c| c.dilation.as_ref().map(|d| d.env_modes))
        .sum();

    let mut x = DMatrix::zeros(2 * m, 2 * m);
    let mut y = DMatrix::zeros(2 * m, 2 * m);
    let mut d = DVector::zeros(2 * m);
    let mut x_e = DMatrix::zeros(2 * m_env, 2 * m);
    let mut y_e = DMatrix::zeros(2 * m_env, 2 * m_env);

    let (mut off, mut env_off) = (0, 0);
    for ch in channels {
        let k = ch.num_modes();
        embed(&mut x, &ch.x, (m, off), (m, off));
        embed(&mut y, &ch.y, (m, off), (m, off));
        for j in 0..k {
            d[off + j] = ch.d[j];
            d[m + off + j] = ch.d[k + j];
        }
        if let Some(dil) = &ch.dilation {
            embed(&mut x_e, &dil.x_e, (m_env, env_off), (m, off));
            embed(&mut y_e, &dil.y_e, (m_env, env_off), (m_env, env_off));
            env_off += dil.env_modes;
        }
        off += k;
    }

    Ok(GaussianChannel {
        x,
        y,
        d,
        kind: ChannelKind::Parallel {
            members: channels.iter().map(|c| c.kind.clone()).collect(),
        },
        dilation: with_dilation.then_some(ChannelDilation {
            x_e,
            y_e,
            env_modes: m_env,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degradability {
    pub degradable: bool,
    pub rationale: String,
}

/// Degradability by family parameter range.
pub fn is_degradable(ch: &GaussianChannel) -> Result<Degradability> {
    kind_degradability(&ch.kind)
}

fn kind_degradability(kind: &ChannelKind) -> Result<Degradability> {
    match kind {
        ChannelKind::PureLoss { eta } if *eta >= 0.5 => Ok(Degradability {
            degradable: true,
            rationale: format!("pure-loss channel with eta = {eta} >= 1/2 is degradable"),
        }),
        ChannelKind::PureLoss { eta } => Ok(Degradability {
            degradable: false,
            rationale: format!("pure-loss channel with eta = {eta} < 1/2 is antidegradable"),
        }),
        ChannelKind::Amplifier { kappa } => Ok(Degradability {
            degradable: true,
            rationale: format!("quantum-limited amplifier (kappa = {kappa}) is degradable"),
        }),
        ChannelKind::Parallel { members } => {
            let parts = members
                .iter()
                .map(kind_degradability)
                .collect::<Result<Vec<_>>>()?;
            let degradable = parts.iter().all(|p| p.degradable);
            let rationale = if degradable {
                "all members of the parallel composition are degradable".to_string()
            } else {
                let bad: Vec<_> = parts
                    .iter()
                    .filter(|p| !p.degradable)
                    .map(|p| p.rationale.as_str())
                    .collect();
                format!("not all members are degradable: {}", bad.join("; "))
            };
            Ok(Degradability {
                degradable,
                rationale,
            })
        }
        ChannelKind::Custom => Err(Error::UnsupportedChannel(
            "degradability is only decided for pure-loss and amplifier families".into(),
        )),
    }
}
