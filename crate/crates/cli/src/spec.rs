use std::path::Path;

use bosonic_core::allocation::AllocationChannel;
use bosonic_core::gaussian_channels::parallel;
use bosonic_core::{Family, GaussianChannel};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

fn unit_frequency() -> f64 {
    1.0
}

/// Channel description as read from the command line.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    PureLoss {
        eta: f64,
        #[serde(default = "unit_frequency")]
        omega: f64,
    },
    Amplifier {
        kappa: f64,
        #[serde(default = "unit_frequency")]
        omega: f64,
    },
    Parallel {
        children: Vec<ChannelSpec>,
    },
}

impl ChannelSpec {
    /// Leaf channels in order, with nested parallel groups flattened.
    pub fn leaves(&self) -> Vec<AllocationChannel> {
        match self {
            ChannelSpec::PureLoss { eta, omega } => vec![AllocationChannel {
                family: Family::PureLoss { eta: *eta },
                omega: *omega,
            }],
            ChannelSpec::Amplifier { kappa, omega } => vec![AllocationChannel {
                family: Family::Amplifier { kappa: *kappa },
                omega: *omega,
            }],
            ChannelSpec::Parallel { children } => {
                children.iter().flat_map(ChannelSpec::leaves).collect()
            }
        }
    }

    pub fn single_family(&self) -> Option<Family> {
        match self {
            ChannelSpec::Parallel { .. } => None,
            _ => Some(self.leaves()[0].family),
        }
    }

    /// Builds and validates the Gaussian channel.
    pub fn to_channel(&self) -> CliResult<GaussianChannel> {
        let leaves = self.leaves();
        if leaves.is_empty() {
            return Err(CliError::Core(bosonic_core::Error::Domain(
                "parallel channel has no children".into(),
            )));
        }
        for leaf in &leaves {
            if !(leaf.omega > 0.0 && leaf.omega.is_finite()) {
                return Err(CliError::Core(bosonic_core::Error::Domain(format!(
                    "frequency must be > 0, got {}",
                    leaf.omega
                ))));
            }
        }
        let channels = leaves
            .iter()
            .map(|leaf| leaf.family.channel())
            .collect::<bosonic_core::Result<Vec<_>>>()?;
        if channels.len() == 1 && self.single_family().is_some() {
            Ok(channels.into_iter().next().expect("one channel"))
        } else {
            Ok(parallel(&channels)?)
        }
    }
}

/// Reads `arg` as inline JSON if it starts with `{`, otherwise as a path.
pub fn read_source(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))
    }
}

/// Parses JSON text; errors carry the line and column of the fault.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Parse(format!(
            "line {}, column {}: {}",
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })
}

fn strip_position(msg: &str) -> &str {
    match msg.rfind(" at line ") {
        Some(i) => &msg[..i],
        None => msg,
    }
}

pub fn load<T: DeserializeOwned>(arg: &str) -> CliResult<T> {
    parse_json(&read_source(arg)?)
}
