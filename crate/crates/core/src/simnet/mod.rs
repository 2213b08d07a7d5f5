//! Deterministic lossy-channel simulator.
//!
//! Frames are processed lock-step: each is sealed, passed through the
//! [`ChannelModel`], optionally tampered with or replayed by an adversary,
//! and opened before the next one is sealed. All randomness comes from
//! [`SplitMix64`] streams derived from the scenario seed (see [`rng`]), so
//! a scenario always produces the same [`ScenarioMetrics`].

mod channel;
mod propagation;
pub mod rng;
mod runner;
mod scenario;

use std::fmt;
use std::str::FromStr;

pub use channel::{transmit, ChannelModel};
pub use propagation::{error_propagation_report, ModeStats, PropagationConfig, PropagationReport};
pub use rng::SplitMix64;
pub use runner::{run_scenario, CorruptionBucket, ScenarioMetrics};
pub use scenario::{Flow, ScenarioConfig};

use crate::{Error, Result};

/// How an AE payload is enciphered. `Cbc` is the contrast leg: the payload
/// is padded, so the frame grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PayloadMode {
    Ofb,
    Cbc,
}

impl PayloadMode {
    pub fn name(self) -> &'static str {
        match self {
            PayloadMode::Ofb => "ofb",
            PayloadMode::Cbc => "cbc",
        }
    }
}

impl fmt::Display for PayloadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PayloadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ofb" => Ok(PayloadMode::Ofb),
            "cbc" => Ok(PayloadMode::Cbc),
            other => Err(Error::config(format!(
                "unknown payload mode `{other}` (expected ofb or cbc)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adversary {
    None,
    /// Re-injects every frame that reached the receiver, once, right after it.
    Replayer,
    /// Flips this many distinct bits of every delivered frame.
    BitFlipper {
        bits: u32,
    },
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::None => f.write_str("none"),
            Adversary::Replayer => f.write_str("replayer"),
            Adversary::BitFlipper { bits } => write!(f, "bit_flipper({bits})"),
        }
    }
}
