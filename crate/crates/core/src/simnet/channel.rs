use super::rng::SplitMix64;
use crate::{Error, Result};

/// Independent bit errors plus whole-frame loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub bit_error_rate: f64,
    pub frame_loss_rate: f64,
    pub seed: u64,
}

impl ChannelModel {
    pub fn new(bit_error_rate: f64, frame_loss_rate: f64, seed: u64) -> Result<Self> {
        let model = ChannelModel {
            bit_error_rate,
            frame_loss_rate,
            seed,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn clean(seed: u64) -> Self {
        ChannelModel {
            bit_error_rate: 0.0,
            frame_loss_rate: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("bit_error_rate", self.bit_error_rate),
            ("frame_loss_rate", self.frame_loss_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Passes one frame through the channel. The loss decision is drawn first,
/// then one draw per bit in order (none when the error rate is 0 or 1).
/// Returns `None` when the frame is lost.
pub fn transmit(channel: &ChannelModel, frame: &[u8], rng: &mut SplitMix64) -> Option<Vec<u8>> {
    if rng.chance(channel.frame_loss_rate) {
        return None;
    }
    let mut out = frame.to_vec();
    if channel.bit_error_rate > 0.0 {
        for byte in out.iter_mut() {
            for bit in 0..8 {
                if rng.chance(channel.bit_error_rate) {
                    *byte ^= 0x80 >> bit;
                }
            }
        }
    }
    Some(out)
}
