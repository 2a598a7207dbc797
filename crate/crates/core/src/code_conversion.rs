//! Parameter arithmetic for converting one kind of energy-constrained code
//! into another, and the capacity ordering those conversions imply.
//!
//! A code is described by `(n, M, G, P, ε)`: `n` channel uses, `M` messages,
//! energy observable `G` (carried as a label), energy budget `P` and error
//! `ε`. The conversions never change `n` or `G`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Quantum communication, uniform energy constraint.
    QuantumUniform,
    /// Entanglement transmission, average energy constraint.
    EntanglementAvg,
    /// Private communication, uniform energy constraint.
    PrivateUniform,
    /// Secret-key transmission, average energy constraint.
    #[serde(rename = "secretkey_avg")]
    SecretKeyAvg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: u64,
    pub m: u64,
    pub energy: f64,
    pub epsilon: f64,
    pub task: Task,
    #[serde(default = "default_observable")]
    pub observable: String,
}

fn default_observable() -> String {
    "G".to_string()
}

impl CodeParams {
    pub fn new(n: u64, m: u64, energy: f64, epsilon: f64, task: Task) -> Result<Self> {
        let params = Self {
            n,
            m,
            energy,
            epsilon,
            task,
            observable: default_observable(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Domain("a code needs n >= 1 channel uses".into()));
        }
        if self.m < 1 {
            return Err(Error::Domain("a code needs M >= 1 messages".into()));
        }
        if !(self.energy >= 0.0 && self.energy.is_finite()) {
            return Err(Error::Domain(format!(
                "energy budget must be >= 0, got {}",
                self.energy
            )));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Domain(format!(
                "epsilon must lie in [0, 1], got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    fn expect_task(&self, task: Task) -> Result<()> {
        self.validate()?;
        if self.task != task {
            return Err(Error::Precondition(format!(
                "conversion expects a {task:?} code, got {:?}",
                self.task
            )));
        }
        Ok(())
    }
}

/// `log2(M) / n`.
pub fn rate(params: &CodeParams) -> f64 {
    (params.m as f64).log2() / params.n as f64
}

/// Which conversion produced a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A code for one task is already a code for a weaker task.
    DefinitionalInclusion,
    EntanglementToQuantum,
    QuantumToPrivate,
    SecretKeyToPrivate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conversion {
    pub code: CodeParams,
    /// The error bound exceeded 1 and was clamped: the guarantee is vacuous.
    pub vacuous: bool,
    pub provenance: Provenance,
}

fn clamp_epsilon(eps: f64) -> (f64, bool) {
    if eps > 1.0 {
        (1.0, true)
    } else {
        (eps, false)
    }
}

fn check_delta(delta: f64, m: u64, upper: f64, label: &str) -> Result<()> {
    let lower = 1.0 / m as f64;
    if !(delta > lower && delta < upper) {
        return Err(Error::Precondition(format!(
            "delta must lie in (1/M, {label}) = ({lower}, {upper}), got {delta}"
        )));
    }
    Ok(())
}

/// `(n, M, G, P, ε)` entanglement transmission with average constraint to
/// `(n, ⌊δM⌋, G, P/(1-2δ), 2√(ε/(δ-1/M)))` quantum communication with uniform
/// constraint.
pub fn et_to_qc(params: &CodeParams, delta: f64) -> Result<Conversion> {
    params.expect_task(Task::EntanglementAvg)?;
    check_delta(delta, params.m, 0.5, "1/2")?;
    let m = params.m as f64;
    let eps = 2.0 * (params.epsilon / (delta - 1.0 / m)).sqrt();
    let (epsilon, vacuous) = clamp_epsilon(eps);
    Ok(Conversion {
        code: CodeParams {
            n: params.n,
            m: (delta * m).floor() as u64,
            energy: params.energy / (-2.0f64).mul_add(delta, 1.0),
            epsilon,
            task: Task::QuantumUniform,
            observable: params.observable.clone(),
        },
        vacuous,
        provenance: Provenance::EntanglementToQuantum,
    })
}

/// `(n, M, G, P, ε)` quantum communication to `(n, ⌊M/2⌋, G, P, 2√ε)` private
/// communication, both with uniform constraint.
pub fn qc_to_pc(params: &CodeParams) -> Result<Conversion> {
    params.expect_task(Task::QuantumUniform)?;
    let m = params.m / 2;
    if m == 0 {
        return Err(Error::Precondition(
            "a one-message quantum code yields a zero-message private code".into(),
        ));
    }
    let (epsilon, vacuous) = clamp_epsilon(2.0 * params.epsilon.sqrt());
    Ok(Conversion {
        code: CodeParams {
            n: params.n,
            m,
            energy: params.energy,
            epsilon,
            task: Task::PrivateUniform,
            observable: params.observable.clone(),
        },
        vacuous,
        provenance: Provenance::QuantumToPrivate,
    })
}

/// `(n, M, G, P, ε)` secret-key transmission with average constraint to
/// `(n, ⌊δM⌋, G, P/(1-3δ), ε/(δ-1/M))` private communication with uniform
/// constraint.
pub fn sk_to_pc(params: &CodeParams, delta: f64) -> Result<Conversion> {
    params.expect_task(Task::SecretKeyAvg)?;
    check_delta(delta, params.m, 1.0 / 3.0, "1/3")?;
    let m = params.m as f64;
    let (epsilon, vacuous) = clamp_epsilon(params.epsilon / (delta - 1.0 / m));
    Ok(Conversion {
        code: CodeParams {
            n: params.n,
            m: (delta * m).floor() as u64,
            energy: params.energy / (-3.0f64).mul_add(delta, 1.0),
            epsilon,
            task: Task::PrivateUniform,
            observable: params.observable.clone(),
        },
        vacuous,
        provenance: Provenance::SecretKeyToPrivate,
    })
}

/// Entanglement code to private code via a quantum code. Returns both steps.
pub fn et_to_pc(params: &CodeParams, delta: f64) -> Result<Vec<Conversion>> {
    let first = et_to_qc(params, delta)?;
    let mut second = qc_to_pc(&first.code)?;
    second.vacuous |= first.vacuous;
    Ok(vec![first, second])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CapacitySymbol {
    /// Quantum capacity.
    Q,
    /// Entanglement-transmission capacity.
    E,
    /// Private capacity.
    P,
    /// Secret-key-transmission capacity.
    K,
}

/// `lhs ≤ rhs`, justified by `provenance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: CapacitySymbol,
    pub rhs: CapacitySymbol,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingLedger {
    pub symbols: Vec<CapacitySymbol>,
    pub relations: Vec<Relation>,
    /// The order the relations imply.
    pub summary: &'static str,
}

/// The capacity order `Q = E ≤ P = K` with the justification of each link.
pub fn ordering_ledger() -> OrderingLedger {
    use CapacitySymbol::*;
    use Provenance::*;
    let rel = |lhs, rhs, provenance| Relation {
        lhs,
        rhs,
        provenance,
    };
    OrderingLedger {
        symbols: vec![Q, E, P, K],
        relations: vec![
            rel(Q, E, DefinitionalInclusion),
            rel(P, K, DefinitionalInclusion),
            rel(E, Q, EntanglementToQuantum),
            rel(Q, P, QuantumToPrivate),
            rel(K, P, SecretKeyToPrivate),
        ],
        summary: "Q = E <= P = K",
    }
}
