use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use super::{BenchMode, BenchRecord, Source};
use crate::ciphers::Profile;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    KeySetup,
    Encryption,
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::KeySetup, Basis::Encryption];

    pub fn name(self) -> &'static str {
        match self {
            Basis::KeySetup => "key-setup",
            Basis::Encryption => "encryption",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    CodeMemory,
    DataMemory,
    Speed,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::CodeMemory, Category::DataMemory, Category::Speed];

    pub fn name(self) -> &'static str {
        match self {
            Category::CodeMemory => "code-memory",
            Category::DataMemory => "data-memory",
            Category::Speed => "speed",
        }
    }

    /// The record field ranked in this category; smaller is better.
    pub fn value(self, basis: Basis, r: &BenchRecord) -> Option<f64> {
        match (basis, self) {
            (_, Category::CodeMemory) => r.code_memory.map(|v| v as f64),
            (Basis::KeySetup, Category::DataMemory) => r.keysetup_memory.map(|v| v as f64),
            (Basis::Encryption, Category::DataMemory) => r.data_memory.map(|v| v as f64),
            (Basis::KeySetup, Category::Speed) => r.keysetup_cost,
            (Basis::Encryption, Category::Speed) => r.percall_cost,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankEntry {
    /// 1 is best. Tied entries share the rank of the first of them.
    pub rank: usize,
    pub label: String,
    pub value: f64,
    pub tied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    pub basis: Basis,
    pub profile: Profile,
    pub mode: BenchMode,
    pub category: Category,
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.label.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub source: Source,
    pub rankings: Vec<Ranking>,
}

/// Ranks every (basis, profile, mode, category) for which all records
/// carry a value; categories with no values at all are skipped. Ties break
/// by label, ascending, and are marked.
pub fn rank_report(records: &[BenchRecord]) -> Result<RankReport> {
    let first = records
        .first()
        .ok_or_else(|| Error::config("no records to rank"))?;
    if let Some(other) = records.iter().find(|r| r.source != first.source) {
        return Err(Error::config(format!(
            "cannot rank {} and {} records together",
            first.source, other.source
        )));
    }

    let mut groups: BTreeMap<(Profile, BenchMode), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let group = groups.entry((r.profile, r.mode)).or_default();
        if group.iter().any(|g| g.label == r.label) {
            return Err(Error::config(format!(
                "duplicate record for {} {} {}",
                r.label, r.mode, r.profile
            )));
        }
        group.push(r);
    }

    let mut rankings = Vec::new();
    for basis in Basis::ALL {
        for (&(profile, mode), group) in &groups {
            for category in Category::ALL {
                let values: Vec<(&str, Option<f64>)> = group
                    .iter()
                    .map(|r| (r.label.as_str(), category.value(basis, r)))
                    .collect();
                if values.iter().all(|(_, v)| v.is_none()) {
                    continue;
                }
                let missing: Vec<&str> = values
                    .iter()
                    .filter(|(_, v)| v.is_none())
                    .map(|(l, _)| *l)
                    .collect();
                if !missing.is_empty() {
                    return Err(Error::config(format!(
                        "{basis} {category} ({profile}, {mode}) has no value for {}",
                        missing.join(", ")
                    )));
                }
                let mut sorted: Vec<(&str, f64)> =
                    values.into_iter().map(|(l, v)| (l, v.unwrap())).collect();
                if let Some((l, v)) = sorted.iter().find(|(_, v)| v.is_nan() || *v < 0.0) {
                    return Err(Error::config(format!(
                        "{l}: {category} value {v} is negative or NaN"
                    )));
                }
                sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));

                let mut entries: Vec<RankEntry> = Vec::with_capacity(sorted.len());
                for (i, &(label, value)) in sorted.iter().enumerate() {
                    let tied_prev = i > 0 && sorted[i - 1].1 == value;
                    let tied_next = sorted.get(i + 1).is_some_and(|n| n.1 == value);
                    let rank = if tied_prev {
                        entries[i - 1].rank
                    } else {
                        i + 1
                    };
                    entries.push(RankEntry {
                        rank,
                        label: label.to_string(),
                        value,
                        tied: tied_prev || tied_next,
                    });
                }
                let ranked: BTreeSet<&str> = entries.iter().map(|e| e.label.as_str()).collect();
                let input: BTreeSet<&str> = group.iter().map(|r| r.label.as_str()).collect();
                assert_eq!(ranked, input, "ranking is not a permutation of its input");

                rankings.push(Ranking {
                    basis,
                    profile,
                    mode,
                    category,
                    entries,
                });
            }
        }
    }
    Ok(RankReport {
        source: first.source,
        rankings,
    })
}

impl RankReport {
    pub fn get(
        &self,
        basis: Basis,
        profile: Profile,
        mode: BenchMode,
        category: Category,
    ) -> Option<&Ranking> {
        self.rankings.iter().find(|r| {
            r.basis == basis && r.profile == profile && r.mode == mode && r.category == category
        })
    }

    pub fn modes(&self) -> BTreeSet<BenchMode> {
        self.rankings.iter().map(|r| r.mode).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("basis\tprofile\tmode\tcategory\trank\tlabel\tvalue\ttied\n");
        for r in &self.rankings {
            for e in &r.entries {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.basis, r.profile, r.mode, r.category, e.rank, e.label, e.value, e.tied
                );
            }
        }
        out
    }

    /// Two rank tables (key setup, encryption) per mode, each with the
    /// size and speed profiles side by side. `-` marks an unranked column
    /// and `=` a tie.
    pub fn render(&self) -> String {
        const W: usize = 12;
        let mut out = String::new();
        for mode in self.modes() {
            for basis in Basis::ALL {
                let cols: Vec<Option<&Ranking>> = Profile::ALL
                    .iter()
                    .flat_map(|&p| Category::ALL.map(|c| self.get(basis, p, mode, c)))
                    .collect();
                let depth = cols
                    .iter()
                    .flatten()
                    .map(|r| r.entries.len())
                    .max()
                    .unwrap_or(0);
                if depth == 0 {
                    continue;
                }
                let title = match basis {
                    Basis::KeySetup => "By key setup",
                    Basis::Encryption => "By encryption",
                };
                let _ = writeln!(out, "{title} ({} rows, {})", mode, self.source);
                let _ = writeln!(
                    out,
                    "{:<6}{:<w$}speed-optimized",
                    "",
                    "size-optimized",
                    w = 3 * W
                );
                let _ = write!(out, "{:<6}", "rank");
                for _ in Profile::ALL {
                    for h in ["code", "data", "speed"] {
                        let _ = write!(out, "{h:<W$}");
                    }
                }
                out.truncate(out.trim_end().len());
                out.push('\n');
                for i in 0..depth {
                    let _ = write!(out, "{:<6}", i + 1);
                    for col in &cols {
                        let cell = match col.and_then(|r| r.entries.get(i)) {
                            Some(e) if e.tied => format!("{}=", e.label),
                            Some(e) => e.label.clone(),
                            None => "-".to_string(),
                        };
                        let _ = write!(out, "{cell:<W$}");
                    }
                    out.truncate(out.trim_end().len());
                    out.push('\n');
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Published rankings, best first.
pub const PUBLISHED_RANKINGS: [(Basis, Profile, Category, [&str; 4]); 12] = {
    use Basis::*;
    use Category as C;
    use Profile as P;
    [
        (
            KeySetup,
            P::Size,
            C::CodeMemory,
            ["RC5-32", "RC6-32", "MISTY", "Rijndael"],
        ),
        (
            KeySetup,
            P::Size,
            C::DataMemory,
            ["MISTY", "Rijndael", "RC6-32", "RC5-32"],
        ),
        (
            KeySetup,
            P::Size,
            C::Speed,
            ["MISTY", "Rijndael", "RC5-32", "RC6-32"],
        ),
        (
            KeySetup,
            P::Speed,
            C::CodeMemory,
            ["RC6-32", "RC5-32", "MISTY", "Rijndael"],
        ),
        (
            KeySetup,
            P::Speed,
            C::DataMemory,
            ["MISTY", "Rijndael", "RC6-32", "RC5-32"],
        ),
        (
            KeySetup,
            P::Speed,
            C::Speed,
            ["MISTY", "Rijndael", "RC5-32", "RC6-32"],
        ),
        (
            Encryption,
            P::Size,
            C::CodeMemory,
            ["RC5-32", "RC6-32", "MISTY", "Rijndael"],
        ),
        (
            Encryption,
            P::Size,
            C::DataMemory,
            ["RC5-32", "MISTY", "RC6-32", "Rijndael"],
        ),
        (
            Encryption,
            P::Size,
            C::Speed,
            ["Rijndael", "MISTY", "RC6-32", "RC5-32"],
        ),
        (
            Encryption,
            P::Speed,
            C::CodeMemory,
            ["RC6-32", "RC5-32", "MISTY", "Rijndael"],
        ),
        (
            Encryption,
            P::Speed,
            C::DataMemory,
            ["RC5-32", "MISTY", "RC6-32", "Rijndael"],
        ),
        (
            Encryption,
            P::Speed,
            C::Speed,
            ["Rijndael", "MISTY", "RC5-32", "RC6-32"],
        ),
    ]
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Match,
    Mismatch,
    /// The published tables hold no data for this column.
    Excluded(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    pub basis: Basis,
    pub profile: Profile,
    pub mode: BenchMode,
    pub category: Category,
    pub expected: [&'static str; 4],
    pub actual: Option<Vec<String>>,
    pub status: CellStatus,
}

impl fmt::Display for CellCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            CellStatus::Match => "MATCH",
            CellStatus::Mismatch => "MISMATCH",
            CellStatus::Excluded(_) => "EXCLUDED",
        };
        write!(
            f,
            "{status}\t{}\t{}\t{}\t{}\texpected {}",
            self.basis,
            self.profile,
            self.mode,
            self.category,
            self.expected.join(",")
        )?;
        match (&self.actual, &self.status) {
            (Some(a), _) => write!(f, "\tgot {}", a.join(",")),
            (None, CellStatus::Excluded(why)) => write!(f, "\t({why})"),
            (None, _) => Ok(()),
        }
    }
}

fn exclusion_reason(basis: Basis, category: Category) -> &'static str {
    match (basis, category) {
        (Basis::KeySetup, Category::Speed) => "no key-setup cycle counts are published",
        (Basis::KeySetup, Category::DataMemory) => {
            "no key-setup data memory is published; the published data memory includes mode state"
        }
        _ => "column absent from the input records",
    }
}

/// Compares every published cell, for each mode in `report`. A cell the
/// report cannot rank is excluded, not failed.
pub fn check_reproduction(report: &RankReport) -> Vec<CellCheck> {
    let mut checks = Vec::new();
    for mode in report.modes() {
        for (basis, profile, category, expected) in PUBLISHED_RANKINGS {
            let actual = report
                .get(basis, profile, mode, category)
                .map(|r| r.labels().into_iter().map(String::from).collect::<Vec<_>>());
            let status = match &actual {
                None => CellStatus::Excluded(exclusion_reason(basis, category)),
                Some(a) if a.iter().map(String::as_str).eq(expected) => CellStatus::Match,
                Some(_) => CellStatus::Mismatch,
            };
            checks.push(CellCheck {
                basis,
                profile,
                mode,
                category,
                expected,
                actual,
                status,
            });
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::paper_tables;

    fn rec(label: &str, code: u64, cost: f64) -> BenchRecord {
        let mut r = BenchRecord::empty(label, BenchMode::Cbc, Profile::Size, Source::PaperTable);
        r.code_memory = Some(code);
        r.percall_cost = Some(cost);
        r
    }

    #[test]
    fn code_memory_example() {
        let rs = [
            rec("RC5-32", 1653, 1247.0),
            rec("RC6-32", 2121, 1222.0),
            rec("MISTY", 6973, 478.0),
            rec("Rijndael", 13448, 321.0),
        ];
        let report = rank_report(&rs).unwrap();
        let get = |c| {
            report
                .get(Basis::Encryption, Profile::Size, BenchMode::Cbc, c)
                .unwrap()
                .labels()
        };
        assert_eq!(
            get(Category::CodeMemory),
            ["RC5-32", "RC6-32", "MISTY", "Rijndael"]
        );
        assert_eq!(
            get(Category::Speed),
            ["Rijndael", "MISTY", "RC6-32", "RC5-32"]
        );
        assert!(report
            .get(
                Basis::Encryption,
                Profile::Size,
                BenchMode::Cbc,
                Category::DataMemory
            )
            .is_none());
    }

    #[test]
    fn ties_break_by_label_and_are_marked() {
        let report = rank_report(&[rec("b", 5, 1.0), rec("a", 5, 2.0), rec("c", 1, 3.0)]).unwrap();
        let r = report
            .get(
                Basis::Encryption,
                Profile::Size,
                BenchMode::Cbc,
                Category::CodeMemory,
            )
            .unwrap();
        assert_eq!(r.labels(), ["c", "a", "b"]);
        let marks: Vec<_> = r.entries.iter().map(|e| (e.rank, e.tied)).collect();
        assert_eq!(marks, [(1, false), (2, true), (2, true)]);
        assert!(report.render().contains("a="));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(rank_report(&[]), Err(Error::Config { .. })));
        let mut m = rec("x", 1, 1.0);
        m.source = Source::Measured;
        assert!(rank_report(&[rec("y", 1, 1.0), m]).is_err());
        assert!(rank_report(&[rec("y", 1, 1.0), rec("y", 2, 1.0)]).is_err());
        let mut partial = rec("z", 1, 1.0);
        partial.code_memory = None;
        assert!(rank_report(&[rec("y", 1, 1.0), partial]).is_err());
    }

    #[test]
    fn published_tables_reproduce() {
        let report = rank_report(&paper_tables()).unwrap();
        let checks = check_reproduction(&report);
        assert_eq!(checks.len(), 24);
        let count = |s: fn(&CellStatus) -> bool| checks.iter().filter(|c| s(&c.status)).count();
        assert_eq!(count(|s| *s == CellStatus::Match), 16);
        assert_eq!(count(|s| matches!(s, CellStatus::Excluded(_))), 8);
        assert_eq!(count(|s| *s == CellStatus::Mismatch), 0);
        for c in &checks {
            if let CellStatus::Excluded(_) = c.status {
                assert_eq!(c.basis, Basis::KeySetup);
                assert_ne!(c.category, Category::CodeMemory);
            }
        }
    }
}
