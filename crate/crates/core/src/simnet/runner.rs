use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::rng::{derive, SplitMix64};
use super::{transmit, Adversary, PayloadMode, ScenarioConfig};
use crate::linklayer::{
    self, build_iv, FrameHeader, LinkKey, LinkTxState, ReplayState, ReplayVerdict, SecuredFrame,
    SecurityMode, HEADER_LEN,
};
use crate::mac::{cbc_mac, Tag32, TAG_LEN};
use crate::modes::{cbc_decrypt, cbc_encrypt, pad_iso, unpad_iso};
use crate::{Error, Result};

// Sub-stream labels under a frame seed.
const PAYLOAD_STREAM: u64 = 0;
const CHANNEL_STREAM: u64 = 1;
const ADVERSARY_STREAM: u64 = 2;

/// Frames observed with `k` corrupted body bits, and the plaintext bits
/// that came out wrong.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CorruptionBucket {
    pub frames: u64,
    pub plaintext_bits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioMetrics {
    pub sent: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub accepted: u64,
    pub rejected_bad_mac: u64,
    pub rejected_replay: u64,
    pub rejected_malformed: u64,
    /// Delivered frames whose header arrived damaged. They are left out of
    /// the corruption table because the IV no longer matches.
    pub header_corrupted: u64,
    /// Keyed by corrupted ciphertext (body) bits per frame.
    pub corruption: BTreeMap<u64, CorruptionBucket>,
    /// Payload bytes of accepted frames that arrived intact.
    pub goodput_bytes: u64,
    /// Bytes on air beyond the payload, over all transmissions.
    pub overhead_bytes: u64,
}

impl ScenarioMetrics {
    pub fn rejected(&self) -> u64 {
        self.rejected_bad_mac + self.rejected_replay + self.rejected_malformed
    }

    pub fn conserved(&self) -> bool {
        self.sent == self.delivered + self.dropped
            && self.delivered == self.accepted + self.rejected()
    }

    pub fn corrupted_ciphertext_bits(&self) -> u64 {
        self.corruption.iter().map(|(k, b)| k * b.frames).sum()
    }

    pub fn corrupted_plaintext_bits(&self) -> u64 {
        self.corruption.values().map(|b| b.plaintext_bits).sum()
    }

    /// Corrupted plaintext bits per corrupted ciphertext bit, over frames
    /// with at least one corrupted body bit.
    pub fn propagation_ratio(&self) -> Option<f64> {
        let ct = self.corrupted_ciphertext_bits();
        (ct > 0).then(|| {
            let pt: u64 = self
                .corruption
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(_, b)| b.plaintext_bits)
                .sum();
            pt as f64 / ct as f64
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("metric\tvalue\n");
        for (name, v) in [
            ("sent", self.sent),
            ("delivered", self.delivered),
            ("dropped", self.dropped),
            ("accepted", self.accepted),
            ("rejected_bad_mac", self.rejected_bad_mac),
            ("rejected_replay", self.rejected_replay),
            ("rejected_malformed", self.rejected_malformed),
            ("header_corrupted", self.header_corrupted),
            ("goodput_bytes", self.goodput_bytes),
            ("overhead_bytes", self.overhead_bytes),
        ] {
            let _ = writeln!(out, "{name}\t{v}");
        }
        out.push_str("\nct_bits\tframes\tpt_bits\n");
        for (k, b) in &self.corruption {
            let _ = writeln!(out, "{k}\t{}\t{}", b.frames, b.plaintext_bits);
        }
        out
    }

    pub fn summary(&self, config: &ScenarioConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "scenario {}: {} frames, mode {}, payload {}, adversary {}, mac check {}",
            config.name,
            config.total_frames(),
            config.security,
            config.payload_mode,
            config.adversary,
            if config.verify_mac { "on" } else { "off" }
        );
        let _ = writeln!(
            s,
            "channel: bit error rate {}, frame loss rate {}, seed {}",
            config.channel.bit_error_rate, config.channel.frame_loss_rate, config.seed
        );
        let _ = writeln!(
            s,
            "sent {} = delivered {} + dropped {}",
            self.sent, self.delivered, self.dropped
        );
        let _ = writeln!(
            s,
            "delivered {} = accepted {} + bad mac {} + replay {} + malformed {}",
            self.delivered,
            self.accepted,
            self.rejected_bad_mac,
            self.rejected_replay,
            self.rejected_malformed
        );
        let _ = writeln!(
            s,
            "goodput {} bytes, overhead {} bytes",
            self.goodput_bytes, self.overhead_bytes
        );
        match self.propagation_ratio() {
            Some(r) => {
                let _ = writeln!(
                    s,
                    "corrupted plaintext bits per corrupted ciphertext bit: {r:.4} ({} / {})",
                    self.corrupted_plaintext_bits(),
                    self.corrupted_ciphertext_bits()
                );
            }
            None => s.push_str("no corrupted ciphertext observed\n"),
        }
        s
    }
}

struct Link<'a> {
    key: &'a LinkKey,
    tx: LinkTxState,
    seed: u64,
    transmissions: u64,
}

impl Link<'_> {
    fn next_frame_seed(&mut self) -> u64 {
        let s = derive(self.seed, self.transmissions);
        self.transmissions += 1;
        s
    }
}

/// What the sender put on the air, kept for comparison at the receiver.
struct Sent {
    wire: Vec<u8>,
    payload: Vec<u8>,
    /// Plaintext the body decrypts to: the payload, padded for CBC.
    reference: Vec<u8>,
}

enum Outcome {
    Accepted { intact: bool },
    BadMac,
    Replay,
    Malformed,
}

struct Runner<'a> {
    cfg: &'a ScenarioConfig,
    m: ScenarioMetrics,
    receivers: BTreeMap<u16, ReplayState>,
}

/// Runs every flow in file order, every frame lock-step.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioMetrics> {
    config.validate()?;
    let mut links: BTreeMap<(u16, u16), Link> = BTreeMap::new();
    let mut runner = Runner {
        cfg: config,
        m: ScenarioMetrics::default(),
        receivers: BTreeMap::new(),
    };

    for flow in &config.traffic {
        let key = config.link_key(flow.src, flow.dst).ok_or_else(|| {
            Error::config(format!(
                "no key provisioned for link {}-{}",
                flow.src, flow.dst
            ))
        })?;
        let link = links.entry((flow.src, flow.dst)).or_insert_with(|| Link {
            key,
            tx: LinkTxState::new(),
            seed: derive(
                config.seed,
                (u64::from(flow.src) << 16) | u64::from(flow.dst),
            ),
            transmissions: 0,
        });
        for _ in 0..flow.count {
            let seed = link.next_frame_seed();
            let mut payload = vec![0u8; flow.payload_len];
            SplitMix64::new(derive(seed, PAYLOAD_STREAM)).fill_bytes(&mut payload);
            let sent = runner.seal(link.key, &mut link.tx, flow.src, flow.dst, payload)?;

            let received = runner.deliver(link.key, flow.dst, &sent, &sent.wire, seed);
            if let (Adversary::Replayer, Some(captured)) = (config.adversary, received) {
                let seed = link.next_frame_seed();
                runner.deliver(link.key, flow.dst, &sent, &captured, seed);
            }
        }
    }

    let m = runner.m;
    assert!(m.conserved(), "frame accounting broken: {m:?}");
    Ok(m)
}

impl Runner<'_> {
    fn seal(
        &self,
        key: &LinkKey,
        tx: &mut LinkTxState,
        src: u16,
        dst: u16,
        payload: Vec<u8>,
    ) -> Result<Sent> {
        let cfg = self.cfg;
        if cfg.security == SecurityMode::Auth || cfg.payload_mode == PayloadMode::Ofb {
            let wire = linklayer::seal(key, cfg.security, dst, src, &payload, tx)?;
            return Ok(Sent {
                wire,
                reference: payload.clone(),
                payload,
            });
        }
        // CBC contrast leg: same header and tag, padded CBC body.
        let reference = pad_iso(&payload);
        let len = u8::try_from(reference.len())
            .map_err(|_| Error::PayloadLength { len: payload.len() })?;
        let header = FrameHeader::new(SecurityMode::Ae, dst, src, len, tx.take()?);
        let body = cbc_encrypt(key.enc_cipher(), build_iv(&header), &reference)?;
        let mut frame = SecuredFrame {
            header,
            body,
            tag: Tag32([0; TAG_LEN]),
        };
        frame.tag = cbc_mac(key.mac_cipher(), &frame.authenticated_bytes());
        Ok(Sent {
            wire: frame.to_bytes(),
            payload,
            reference,
        })
    }

    /// One transmission: channel, adversary, receiver. Returns what arrived.
    fn deliver(
        &mut self,
        key: &LinkKey,
        dst: u16,
        sent: &Sent,
        on_air: &[u8],
        seed: u64,
    ) -> Option<Vec<u8>> {
        self.m.sent += 1;
        self.m.overhead_bytes += (sent.wire.len() - sent.payload.len()) as u64;
        let mut channel_rng = SplitMix64::new(derive(seed, CHANNEL_STREAM));
        let Some(mut rx) = transmit(&self.cfg.channel, on_air, &mut channel_rng) else {
            self.m.dropped += 1;
            return None;
        };
        self.m.delivered += 1;
        if let Adversary::BitFlipper { bits } = self.cfg.adversary {
            flip_distinct_bits(
                &mut rx,
                bits,
                &mut SplitMix64::new(derive(seed, ADVERSARY_STREAM)),
            );
        }

        match self.receive(key, dst, sent, &rx) {
            Outcome::Accepted { intact } => {
                self.m.accepted += 1;
                if intact {
                    self.m.goodput_bytes += sent.payload.len() as u64;
                }
            }
            Outcome::BadMac => self.m.rejected_bad_mac += 1,
            Outcome::Replay => self.m.rejected_replay += 1,
            Outcome::Malformed => self.m.rejected_malformed += 1,
        }
        Some(rx)
    }

    fn receive(&mut self, key: &LinkKey, dst: u16, sent: &Sent, rx: &[u8]) -> Outcome {
        let cbc =
            self.cfg.security == SecurityMode::Ae && self.cfg.payload_mode == PayloadMode::Cbc;
        let frame = match SecuredFrame::split(rx) {
            Ok(f) => f,
            Err(_) => return Outcome::Malformed,
        };
        if self.cfg.verify_mac {
            if linklayer::verify_frame(key, &frame).is_err() {
                return Outcome::BadMac;
            }
            if frame.check_len().is_err() {
                return Outcome::Malformed;
            }
            let replay = self.receivers.entry(dst).or_default();
            if replay.check_update(frame.header.src, frame.header.ctr) == ReplayVerdict::Reject {
                return Outcome::Replay;
            }
        } else if frame.check_len().is_err() {
            return Outcome::Malformed;
        }

        let decrypted = if cbc {
            match cbc_decrypt(key.enc_cipher(), build_iv(&frame.header), &frame.body) {
                Ok(pt) => pt,
                Err(_) => return Outcome::Malformed,
            }
        } else {
            linklayer::decrypt_body(key, &frame)
        };

        if rx[..HEADER_LEN] == sent.wire[..HEADER_LEN] {
            let sent_body = &sent.wire[HEADER_LEN..sent.wire.len() - TAG_LEN];
            let k = hamming(sent_body, &frame.body);
            let bucket = self.m.corruption.entry(k).or_default();
            bucket.frames += 1;
            bucket.plaintext_bits += hamming(&decrypted, &sent.reference);
        } else {
            self.m.header_corrupted += 1;
        }

        let payload = if cbc {
            match unpad_iso(&decrypted) {
                Ok(p) => p,
                Err(_) => return Outcome::Malformed,
            }
        } else {
            &decrypted[..]
        };
        Outcome::Accepted {
            intact: payload == sent.payload,
        }
    }
}

fn hamming(a: &[u8], b: &[u8]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| u64::from((x ^ y).count_ones()))
        .sum()
}

fn flip_distinct_bits(frame: &mut [u8], bits: u32, rng: &mut SplitMix64) {
    let total = frame.len() as u64 * 8;
    let mut chosen: Vec<u64> = Vec::new();
    while (chosen.len() as u64) < u64::from(bits).min(total) {
        let b = rng.below(total);
        if !chosen.contains(&b) {
            chosen.push(b);
            frame[(b / 8) as usize] ^= 0x80 >> (b % 8);
        }
    }
}
