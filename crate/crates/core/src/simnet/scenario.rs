//! Scenario files.
//!
//! Line-oriented `key = value` text in sections; `#` starts a comment.
//!
//! ```text
//! [scenario]
//! name = replay-demo
//! seed = 42
//! mode = ae              # ae | auth
//! payload_mode = ofb     # ofb | cbc
//! verify_mac = true
//!
//! [channel]
//! bit_error_rate = 0
//! frame_loss_rate = 0
//!
//! [adversary]
//! kind = replayer        # none | replayer | bit_flipper
//! flip_bits = 1          # bit_flipper only
//!
//! [nodes]
//! count = 2              # addresses 1..=count
//!
//! [keys]
//! link = 1 2 <enc hex> <mac hex>    # one key per unordered pair
//!
//! [traffic]
//! flow = 1 2 29 1000     # src dst payload_len count
//!
//! [propagation]          # optional
//! message_len = 64
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use super::{Adversary, ChannelModel, PayloadMode, PropagationConfig};
use crate::linklayer::{LinkKey, SecurityMode, MAX_PAYLOAD};
use crate::modes::{padded_len, Iv64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub src: u16,
    pub dst: u16,
    pub payload_len: usize,
    pub count: u64,
    /// Source line, for error messages; 0 when built in code.
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub name: String,
    pub seed: u64,
    pub channel: ChannelModel,
    pub node_count: u16,
    /// Keyed by `(low address, high address)`.
    pub keys: BTreeMap<(u16, u16), LinkKey>,
    pub traffic: Vec<Flow>,
    pub adversary: Adversary,
    pub security: SecurityMode,
    pub payload_mode: PayloadMode,
    pub verify_mac: bool,
    pub propagation: Option<PropagationConfig>,
}

impl ScenarioConfig {
    /// Two nodes, no keys, no traffic, clean channel.
    pub fn new(name: &str, seed: u64) -> Self {
        ScenarioConfig {
            name: name.to_string(),
            seed,
            channel: ChannelModel::clean(seed),
            node_count: 2,
            keys: BTreeMap::new(),
            traffic: Vec::new(),
            adversary: Adversary::None,
            security: SecurityMode::Ae,
            payload_mode: PayloadMode::Ofb,
            verify_mac: true,
            propagation: None,
        }
    }

    pub fn link_key(&self, a: u16, b: u16) -> Option<&LinkKey> {
        self.keys.get(&(a.min(b), a.max(b)))
    }

    pub fn total_frames(&self) -> u64 {
        self.traffic.iter().map(|f| f.count).sum()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::new("unnamed", 0);
        let mut section = String::new();
        let mut seen = BTreeMap::new();
        let (mut ber, mut loss) = (0.0, 0.0);
        let mut adversary_kind = None;
        let mut flip_bits = 1u32;
        let mut prop: Option<PropagationConfig> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(line, "unterminated section header"))?
                    .trim();
                if !matches!(
                    name,
                    "scenario"
                        | "channel"
                        | "adversary"
                        | "nodes"
                        | "keys"
                        | "traffic"
                        | "propagation"
                ) {
                    return Err(Error::parse(line, format!("unknown section [{name}]")));
                }
                section = name.to_string();
                if section == "propagation" {
                    prop.get_or_insert_with(PropagationConfig::default);
                }
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if section.is_empty() {
                return Err(Error::parse(line, "entry before any [section]"));
            }
            let repeatable = matches!(
                (section.as_str(), key),
                ("keys", "link") | ("traffic", "flow")
            );
            if !repeatable
                && seen
                    .insert((section.clone(), key.to_string()), line)
                    .is_some()
            {
                return Err(Error::config_at(
                    line,
                    format!("duplicate `{key}` in [{section}]"),
                ));
            }

            match (section.as_str(), key) {
                ("scenario", "name") => cfg.name = value.to_string(),
                ("scenario", "seed") => cfg.seed = num(line, value)?,
                ("scenario", "mode") => cfg.security = value.parse().map_err(|e| at(line, e))?,
                ("scenario", "payload_mode") => {
                    cfg.payload_mode = value.parse().map_err(|e| at(line, e))?
                }
                ("scenario", "verify_mac") => cfg.verify_mac = boolean(line, value)?,
                ("channel", "bit_error_rate") => ber = prob(line, value)?,
                ("channel", "frame_loss_rate") => loss = prob(line, value)?,
                ("adversary", "kind") => adversary_kind = Some((line, value.to_string())),
                ("adversary", "flip_bits") => {
                    flip_bits = num(line, value)?;
                    if flip_bits == 0 {
                        return Err(Error::config_at(line, "flip_bits must be at least 1"));
                    }
                }
                ("nodes", "count") => {
                    cfg.node_count = num(line, value)?;
                    if cfg.node_count < 2 {
                        return Err(Error::config_at(line, "need at least 2 nodes"));
                    }
                }
                ("keys", "link") => {
                    let f: Vec<&str> = value.split_whitespace().collect();
                    if f.len() != 4 {
                        return Err(Error::parse(
                            line,
                            "expected `link = <a> <b> <enc hex> <mac hex>`",
                        ));
                    }
                    let (a, b): (u16, u16) = (num(line, f[0])?, num(line, f[1])?);
                    if a == b {
                        return Err(Error::config_at(line, "a link needs two distinct nodes"));
                    }
                    let key = LinkKey::new(&hexarg(line, f[2])?, &hexarg(line, f[3])?)
                        .map_err(|e| at(line, e))?;
                    if cfg.keys.insert((a.min(b), a.max(b)), key).is_some() {
                        return Err(Error::config_at(line, format!("link {a}-{b} keyed twice")));
                    }
                }
                ("traffic", "flow") => {
                    let f: Vec<&str> = value.split_whitespace().collect();
                    if f.len() != 4 {
                        return Err(Error::parse(
                            line,
                            "expected `flow = <src> <dst> <len> <count>`",
                        ));
                    }
                    cfg.traffic.push(Flow {
                        src: num(line, f[0])?,
                        dst: num(line, f[1])?,
                        payload_len: num(line, f[2])?,
                        count: num(line, f[3])?,
                        line,
                    });
                }
                ("propagation", k) => {
                    let p = prop.get_or_insert_with(PropagationConfig::default);
                    match k {
                        "message_len" => p.message_len = num(line, value)?,
                        "cipher" => p.cipher = value.parse().map_err(|e| at(line, e))?,
                        "key" => p.key = hexarg(line, value)?,
                        "iv" => {
                            p.iv =
                                Iv64::from_slice(&hexarg(line, value)?).map_err(|e| at(line, e))?
                        }
                        _ => {
                            return Err(Error::parse(
                                line,
                                format!("unknown key `{k}` in [propagation]"),
                            ))
                        }
                    }
                }
                (s, k) => return Err(Error::parse(line, format!("unknown key `{k}` in [{s}]"))),
            }
        }

        cfg.channel = ChannelModel {
            bit_error_rate: ber,
            frame_loss_rate: loss,
            seed: cfg.seed,
        };
        cfg.adversary = match adversary_kind {
            None => Adversary::None,
            Some((line, kind)) => match kind.as_str() {
                "none" => Adversary::None,
                "replayer" => Adversary::Replayer,
                "bit_flipper" => Adversary::BitFlipper { bits: flip_bits },
                other => {
                    return Err(Error::config_at(
                        line,
                        format!(
                            "unknown adversary `{other}` (expected none, replayer or bit_flipper)"
                        ),
                    ))
                }
            },
        };
        if let Some(p) = &prop {
            if p.message_len == 0 {
                let line = seen.get(&("propagation".to_string(), "message_len".to_string()));
                return Err(Error::Config {
                    line: line.copied(),
                    msg: "message_len must be at least 1".into(),
                });
            }
            p.cipher.check_key(&p.key).map_err(|e| {
                match seen.get(&("propagation".to_string(), "key".to_string())) {
                    Some(&l) => at(l, e),
                    None => e,
                }
            })?;
        }
        cfg.propagation = prop;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that every flow is between known nodes over a keyed link
    /// and fits in a frame.
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        let limit = match (self.security, self.payload_mode) {
            (SecurityMode::Ae, PayloadMode::Cbc) => MAX_PAYLOAD / 8 * 8 - 1,
            _ => MAX_PAYLOAD,
        };
        for flow in &self.traffic {
            let err = |msg: String| match flow.line {
                0 => Error::config(msg),
                l => Error::config_at(l, msg),
            };
            for addr in [flow.src, flow.dst] {
                if addr == 0 || addr > self.node_count {
                    return Err(err(format!(
                        "node {addr} is not one of 1..={}",
                        self.node_count
                    )));
                }
            }
            if flow.src == flow.dst {
                return Err(err(format!("flow from node {} to itself", flow.src)));
            }
            if self.link_key(flow.src, flow.dst).is_none() {
                return Err(err(format!(
                    "no key provisioned for link {}-{}",
                    flow.src, flow.dst
                )));
            }
            if flow.payload_len > limit {
                return Err(err(format!(
                    "payload of {} bytes does not fit a frame in this mode (max {limit}, {} after padding)",
                    flow.payload_len,
                    padded_len(flow.payload_len)
                )));
            }
        }
        if let Some(p) = &self.propagation {
            if p.message_len == 0 {
                return Err(Error::config("message_len must be at least 1"));
            }
            p.cipher.check_key(&p.key)?;
        }
        Ok(())
    }
}

fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Config { line: None, msg } => Error::Config {
            line: Some(line),
            msg,
        },
        other => Error::config_at(line, other.to_string()),
    }
}

fn num<T: std::str::FromStr>(line: usize, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| Error::parse(line, format!("`{v}`: {e}")))
}

fn prob(line: usize, v: &str) -> Result<f64> {
    let p: f64 = num(line, v)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config_at(
            line,
            format!("probability {p} is outside [0, 1]"),
        ));
    }
    Ok(p)
}

fn boolean(line: usize, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::parse(line, format!("`{v}` is not a boolean"))),
    }
}

fn hexarg(line: usize, v: &str) -> Result<Vec<u8>> {
    hex::decode(v).map_err(|e| Error::parse(line, format!("bad hex `{v}`: {e}")))
}
