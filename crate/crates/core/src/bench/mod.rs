//! Memory and speed benchmarks, and rankings derived from them.
//!
//! A [`BenchRecord`] is one (cipher, mode, profile) cell. Records are
//! either measured on this machine by [`bench_cipher_mode`] or loaded from
//! the published tables with [`load_paper_table`]; the two are never ranked
//! together. [`rank_report`] orders cipher labels per category, and
//! [`check_reproduction`] compares the result with the published rankings.

mod measure;
mod rank;
mod table;

use std::fmt;
use std::str::FromStr;

pub use measure::{bench_all, bench_cipher_mode, BenchOptions};
pub use rank::{
    check_reproduction, rank_report, Basis, Category, CellCheck, CellStatus, RankEntry, RankReport,
    Ranking, PUBLISHED_RANKINGS,
};
pub use table::{
    load_paper_table, merge_tables, paper_tables, parse_paper_table, records_to_tsv, PAPER_CYCLES,
    PAPER_MEMORY,
};

use crate::ciphers::{CipherId, Profile};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchMode {
    Cbc,
    Ofb,
}

impl BenchMode {
    pub const ALL: [BenchMode; 2] = [BenchMode::Cbc, BenchMode::Ofb];

    pub fn name(self) -> &'static str {
        match self {
            BenchMode::Cbc => "cbc",
            BenchMode::Ofb => "ofb",
        }
    }
}

impl fmt::Display for BenchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cbc" => Ok(BenchMode::Cbc),
            "ofb" => Ok(BenchMode::Ofb),
            other => Err(Error::config(format!(
                "unknown mode `{other}` (expected cbc or ofb)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Measured,
    PaperTable,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Measured => "measured",
            Source::PaperTable => "paper-table",
        }
    }

    /// Unit of the cost fields.
    pub fn cost_unit(self) -> &'static str {
        match self {
            Source::Measured => "ns",
            Source::PaperTable => "cycles",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One benchmark cell. Absent values are `None`, never estimated.
///
/// Memory is in bytes. Costs are per key (`keysetup_cost`) or per byte
/// (`percall_cost`, `decrypt_cost`), in the unit given by
/// [`Source::cost_unit`].
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    /// Set for ciphers implemented in this crate.
    pub cipher: Option<CipherId>,
    pub mode: BenchMode,
    pub profile: Profile,
    pub code_memory: Option<u64>,
    /// Key schedule plus mode working state.
    pub data_memory: Option<u64>,
    /// Key schedule alone: what key setup leaves behind.
    pub keysetup_memory: Option<u64>,
    pub keysetup_cost: Option<f64>,
    /// Encryption cost per byte.
    pub percall_cost: Option<f64>,
    pub decrypt_cost: Option<f64>,
    pub source: Source,
}

impl BenchRecord {
    pub fn empty(label: &str, mode: BenchMode, profile: Profile, source: Source) -> Self {
        BenchRecord {
            label: label.to_string(),
            cipher: label.parse().ok(),
            mode,
            profile,
            code_memory: None,
            data_memory: None,
            keysetup_memory: None,
            keysetup_cost: None,
            percall_cost: None,
            decrypt_cost: None,
            source,
        }
    }
}
