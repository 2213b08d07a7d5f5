use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{BenchMode, BenchRecord, Source};
use crate::ciphers::Profile;
use crate::{Error, Result};

/// Published memory figures, one line per (cipher, mode, profile).
pub const PAPER_MEMORY: &str = include_str!("../../data/paper_memory.txt");
/// Published cycle counts per byte.
pub const PAPER_CYCLES: &str = include_str!("../../data/paper_cycles.txt");

pub fn load_paper_table(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
    parse_paper_table(&std::fs::read_to_string(path)?)
}

/// Parses `cipher mode profile code_memory data_memory enc_cost dec_cost`
/// lines, `-` for an absent value. Blank lines and `#` comments are skipped.
pub fn parse_paper_table(text: &str) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let f: Vec<&str> = content.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::parse(
                line,
                format!("expected 7 fields, found {}", f.len()),
            ));
        }
        let mode: BenchMode = f[1]
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let profile: Profile = f[2]
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let mut r = BenchRecord::empty(f[0], mode, profile, Source::PaperTable);
        r.code_memory = field(line, f[3])?;
        r.data_memory = field(line, f[4])?;
        r.percall_cost = field::<u64>(line, f[5])?.map(|v| v as f64);
        r.decrypt_cost = field::<u64>(line, f[6])?.map(|v| v as f64);
        records.push(r);
    }
    if records.is_empty() {
        return Err(Error::config("table contains no records"));
    }
    Ok(records)
}

fn field<T: std::str::FromStr>(line: usize, v: &str) -> Result<Option<T>> {
    if v == "-" {
        return Ok(None);
    }
    v.parse().map(Some).map_err(|_| {
        Error::parse(
            line,
            format!("`{v}` is neither a nonnegative integer nor `-`"),
        )
    })
}

/// Both shipped tables merged into one record per (cipher, mode, profile).
pub fn paper_tables() -> Vec<BenchRecord> {
    let memory = parse_paper_table(PAPER_MEMORY).expect("shipped table parses");
    let cycles = parse_paper_table(PAPER_CYCLES).expect("shipped table parses");
    merge_tables(memory, cycles)
}

/// Combines records for the same (label, mode, profile), taking each field
/// from the first record that has it.
pub fn merge_tables(
    first: impl IntoIterator<Item = BenchRecord>,
    second: impl IntoIterator<Item = BenchRecord>,
) -> Vec<BenchRecord> {
    let mut merged: BTreeMap<(String, BenchMode, Profile), BenchRecord> = BTreeMap::new();
    for r in first.into_iter().chain(second) {
        let key = (r.label.clone(), r.mode, r.profile);
        match merged.get_mut(&key) {
            None => {
                merged.insert(key, r);
            }
            Some(m) => {
                m.code_memory = m.code_memory.or(r.code_memory);
                m.data_memory = m.data_memory.or(r.data_memory);
                m.keysetup_memory = m.keysetup_memory.or(r.keysetup_memory);
                m.keysetup_cost = m.keysetup_cost.or(r.keysetup_cost);
                m.percall_cost = m.percall_cost.or(r.percall_cost);
                m.decrypt_cost = m.decrypt_cost.or(r.decrypt_cost);
            }
        }
    }
    merged.into_values().collect()
}

pub fn records_to_tsv(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "label\tmode\tprofile\tsource\tcode_memory\tdata_memory\tkeysetup_memory\tkeysetup_cost\tenc_cost\tdec_cost\tcost_unit\n",
    );
    let int = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let real = |v: Option<f64>| {
        v.map_or("-".to_string(), |v| {
            if v.fract() == 0.0 {
                format!("{v:.0}")
            } else {
                format!("{v:.3}")
            }
        })
    };
    for r in records {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.label,
            r.mode,
            r.profile,
            r.source,
            int(r.code_memory),
            int(r.data_memory),
            int(r.keysetup_memory),
            real(r.keysetup_cost),
            real(r.percall_cost),
            real(r.decrypt_cost),
            r.source.cost_unit()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(
        rs: &'a [BenchRecord],
        label: &str,
        mode: BenchMode,
        p: Profile,
    ) -> &'a BenchRecord {
        rs.iter()
            .find(|r| r.label == label && r.mode == mode && r.profile == p)
            .unwrap()
    }

    #[test]
    fn shipped_memory_table() {
        let rs = parse_paper_table(PAPER_MEMORY).unwrap();
        assert_eq!(rs.len(), 16);
        assert_eq!(rs.iter().filter(|r| r.profile == Profile::Size).count(), 8);
        let m = find(&rs, "MISTY", BenchMode::Ofb, Profile::Size);
        assert_eq!((m.code_memory, m.data_memory), (Some(6311), Some(42)));
        assert!(rs
            .iter()
            .all(|r| r.source == Source::PaperTable && r.percall_cost.is_none()));
    }

    #[test]
    fn shipped_cycle_table() {
        let rs = parse_paper_table(PAPER_CYCLES).unwrap();
        let m = find(&rs, "MISTY", BenchMode::Ofb, Profile::Size);
        assert_eq!((m.percall_cost, m.decrypt_cost), (Some(445.0), Some(455.0)));
        assert_eq!(m.cipher, Some(crate::ciphers::CipherId::Misty1));
        assert_eq!(
            find(&rs, "RC6-32", BenchMode::Cbc, Profile::Speed).cipher,
            None
        );
    }

    #[test]
    fn merged_tables() {
        let rs = paper_tables();
        assert_eq!(rs.len(), 16);
        let m = find(&rs, "Rijndael", BenchMode::Cbc, Profile::Speed);
        assert_eq!(
            (m.code_memory, m.data_memory, m.percall_cost, m.decrypt_cost),
            (Some(13998), Some(92), Some(218.0), Some(223.0))
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_paper_table(""), Err(Error::Config { .. })));
        assert!(matches!(
            parse_paper_table("# only\n\n"),
            Err(Error::Config { .. })
        ));
        let bad = "MISTY OFB size 1 2 - -\nMISTY OFB size 1 x - -\n";
        assert!(matches!(
            parse_paper_table(bad),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_paper_table("MISTY ECB size 1 2 - -"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_paper_table("MISTY OFB size 1 -3 - -"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_paper_table("MISTY OFB size 1 2 -"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
