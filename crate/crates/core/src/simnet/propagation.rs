//! Exhaustive single-bit-flip study of OFB against CBC.

use std::fmt::Write as _;

use super::PayloadMode;
use crate::ciphers::{BlockCipherHandle, CipherId, BLOCK_LEN};
use crate::modes::{cbc_decrypt, cbc_encrypt, ofb_process, pad_iso, Iv64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationConfig {
    pub cipher: CipherId,
    pub key: Vec<u8>,
    pub iv: Iv64,
    pub message_len: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            cipher: CipherId::Misty1,
            key: (0..16u8).map(|i| i * 0x11).collect(),
            iv: Iv64::new([0, 1, 0, 2, 0, 0, 0, 1]),
            message_len: 64,
        }
    }
}

impl PropagationConfig {
    /// Message byte `i` is `i mod 256`.
    pub fn message(&self) -> Vec<u8> {
        (0..self.message_len).map(|i| i as u8).collect()
    }
}

/// Corrupted plaintext bits per single ciphertext bit flip, over every
/// bit of the `message_len`-byte ciphertext prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeStats {
    pub mode: PayloadMode,
    pub flips: u64,
    pub total: u64,
    pub min: u64,
    pub max: u64,
    /// Every flip in block `j` corrupted only blocks `j` and `j + 1`.
    pub confined: bool,
    /// Ciphertext bytes beyond the message length.
    pub expansion: usize,
}

impl ModeStats {
    pub fn mean(&self) -> f64 {
        self.total as f64 / self.flips as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationReport {
    pub config: PropagationConfig,
    pub modes: Vec<ModeStats>,
}

impl PropagationReport {
    pub fn get(&self, mode: PayloadMode) -> Option<&ModeStats> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "mode\tmessage_len\tflips\tcorrupted_total\tmin\tmean\tmax\tconfined\texpansion\n",
        );
        for m in &self.modes {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{}\t{}",
                m.mode,
                self.config.message_len,
                m.flips,
                m.total,
                m.min,
                m.mean(),
                m.max,
                m.confined,
                m.expansion
            );
        }
        out
    }
}

fn diff_bits(a: &[u8], b: &[u8]) -> Vec<usize> {
    let mut bits = Vec::new();
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let mut d = x ^ y;
        while d != 0 {
            let lead = d.leading_zeros() as usize;
            bits.push(i * 8 + lead);
            d &= !(0x80 >> lead);
        }
    }
    bits
}

/// Flips each ciphertext bit of the message span once and decrypts.
/// Exhaustive at every length; cost is quadratic in `message_len`.
pub fn error_propagation_report(config: &PropagationConfig) -> Result<PropagationReport> {
    if config.message_len == 0 {
        return Err(Error::config("message length must be at least 1 byte"));
    }
    let cipher = BlockCipherHandle::new(config.cipher, &config.key)?;
    let msg = config.message();
    let nbits = msg.len() * 8;

    let ofb_ct = ofb_process(&cipher, config.iv, &msg);
    let padded = pad_iso(&msg);
    let cbc_ct = cbc_encrypt(&cipher, config.iv, &padded)?;

    let mut modes = Vec::new();
    for mode in [PayloadMode::Ofb, PayloadMode::Cbc] {
        let (ct, reference) = match mode {
            PayloadMode::Ofb => (&ofb_ct, &msg),
            PayloadMode::Cbc => (&cbc_ct, &padded),
        };
        let mut stats = ModeStats {
            mode,
            flips: 0,
            total: 0,
            min: u64::MAX,
            max: 0,
            confined: true,
            expansion: ct.len() - msg.len(),
        };
        let mut work = ct.clone();
        for bit in 0..nbits {
            work[bit / 8] ^= 0x80 >> (bit % 8);
            let pt = match mode {
                PayloadMode::Ofb => ofb_process(&cipher, config.iv, &work),
                PayloadMode::Cbc => cbc_decrypt(&cipher, config.iv, &work)?,
            };
            work[bit / 8] ^= 0x80 >> (bit % 8);

            let hit = diff_bits(&pt, reference);
            let block = bit / (BLOCK_LEN * 8);
            let allowed = match mode {
                PayloadMode::Ofb => bit..=bit,
                PayloadMode::Cbc => block * 64..=(block + 2) * 64 - 1,
            };
            stats.confined &= hit.iter().all(|b| allowed.contains(b));
            let n = hit.len() as u64;
            stats.flips += 1;
            stats.total += n;
            stats.min = stats.min.min(n);
            stats.max = stats.max.max(n);
        }
        modes.push(stats);
    }
    Ok(PropagationReport {
        config: config.clone(),
        modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(len: usize) -> PropagationReport {
        error_propagation_report(&PropagationConfig {
            message_len: len,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn ofb_corrupts_exactly_one_bit() {
        for len in [1, 7, 8, 9, 64] {
            let r = report(len);
            let ofb = r.get(PayloadMode::Ofb).unwrap();
            assert_eq!(ofb.flips, len as u64 * 8);
            assert_eq!((ofb.min, ofb.total, ofb.max), (1, ofb.flips, 1));
            assert!(ofb.confined);
            assert_eq!(ofb.expansion, 0);
        }
    }

    #[test]
    fn cbc_matches_enumeration_oracle() {
        let cbc = report(64).get(PayloadMode::Cbc).unwrap().clone();
        assert_eq!(
            (cbc.flips, cbc.total, cbc.min, cbc.max),
            (512, 17067, 21, 47)
        );
        assert!(cbc.confined);
        assert_eq!(cbc.expansion, 8);
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(matches!(
            error_propagation_report(&PropagationConfig {
                message_len: 0,
                ..Default::default()
            }),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn diff_bit_positions() {
        assert_eq!(diff_bits(&[0x81, 0], &[0, 0x01]), [0, 7, 15]);
    }
}
