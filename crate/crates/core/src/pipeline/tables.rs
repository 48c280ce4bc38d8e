use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::DEFAULT_BUDGET;
use crate::singtypes::SingularityType;

use super::{scan, AnalyzeConfig, Check, ScanCase, ScanConfig, ScanCounters, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    /// Types of orders `(2,3,7,n)` and `(2,3,11,13)` with `D` a square.
    T1,
    /// Types of orders `(2,3,7,n)` passing linking, smooth and spin-d.
    T2,
    /// Types of orders `(2,3,5,p4)` passing the full battery.
    T3,
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().trim_start_matches('T') {
            "1" => Ok(TableId::T1),
            "2" => Ok(TableId::T2),
            "3" => Ok(TableId::T3),
            _ => Err(Error::Parse(format!("unknown table {s:?}, expected 1, 2 or 3"))),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            TableId::T1 => 1,
            TableId::T2 => 2,
            TableId::T3 => 3,
        };
        write!(f, "T{n}")
    }
}

const T1_ROWS: [&str; 24] = [
    "2/1,3/2,7/2,11/2",
    "2/1,3/2,7/2,11/7",
    "2/1,3/1,7/3,13/3",
    "2/1,3/1,7/3,13/4",
    "2/1,3/1,7/6,13/12",
    "2/1,3/1,7/3,19/3",
    "2/1,3/1,7/6,19/2",
    "2/1,3/1,7/6,19/8",
    "2/1,3/1,7/6,19/14",
    "2/1,3/2,7/2,23/13",
    "2/1,3/1,7/2,25/6",
    "2/1,3/1,7/2,25/11",
    "2/1,3/1,7/2,25/12",
    "2/1,3/2,7/1,29/9",
    "2/1,3/2,7/2,29/16",
    "2/1,3/2,7/2,29/23",
    "2/1,3/1,7/3,31/10",
    "2/1,3/1,7/6,31/4",
    "2/1,3/1,7/6,31/5",
    "2/1,3/1,7/6,31/7",
    "2/1,3/1,7/2,37/6",
    "2/1,3/2,7/3,41/23",
    "2/1,3/2,11/2,13/3",
    "2/1,3/2,11/2,13/4",
];

const T2_ROWS: [&str; 13] = [
    "2/1,3/2,7/1,11/2",
    "2/1,3/1,7/3,19/2",
    "2/1,3/2,7/1,23/2",
    "2/1,3/2,7/1,23/4",
    "2/1,3/2,7/2,23/3",
    "2/1,3/1,7/2,25/2",
    "2/1,3/2,7/1,29/4",
    "2/1,3/2,7/2,29/5",
    "2/1,3/1,7/3,31/2",
    "2/1,3/1,7/3,31/4",
    "2/1,3/1,7/2,37/2",
    "2/1,3/1,7/2,37/8",
    "2/1,3/1,7/2,37/13",
];

const T3_ROWS: [&str; 16] = [
    "2/1,3/2,5/1,2599/1384",
    "2/1,3/2,5/2,2623/821",
    "2/1,3/2,5/2,5203/1651",
    "2/1,3/2,5/1,6049/3866",
    "2/1,3/2,5/2,9607/946",
    "2/1,3/2,5/2,12727/1884",
    "2/1,3/2,5/2,17833/4898",
    "2/1,3/2,5/2,26473/7271",
    "2/1,3/2,5/1,26869/14314",
    "2/1,3/2,5/1,27289/3616",
    "2/1,3/2,5/1,31309/19161",
    "2/1,3/2,5/1,32149/18482",
    "2/1,3/2,5/2,37837/3192",
    "2/1,3/2,5/1,44161/27733",
    "2/1,3/2,5/2,44407/11507",
    "2/1,3/2,5/4,47929/9960",
];

/// Largest `p4` (exclusive) covered by the third table.
pub const T3_P4_BELOW: i128 = 50_000;

/// Expected rows in published order, canonicalized.
pub fn table_expected(id: TableId) -> Vec<SingularityType> {
    let rows: &[&str] = match id {
        TableId::T1 => &T1_ROWS,
        TableId::T2 => &T2_ROWS,
        TableId::T3 => &T3_ROWS,
    };
    rows.iter().map(|r| r.parse().expect("embedded row")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReproduction {
    pub id: TableId,
    /// Types found by the defining scan, in scan order.
    pub found: Vec<SingularityType>,
    /// Expected rows restricted to the scanned range, in published order.
    pub expected: Vec<SingularityType>,
    pub missing: Vec<SingularityType>,
    pub extra: Vec<SingularityType>,
    pub inconclusive: Vec<SingularityType>,
    pub counters: ScanCounters,
}

impl TableReproduction {
    fn new(
        id: TableId,
        found: Vec<SingularityType>,
        inconclusive: Vec<SingularityType>,
        expected: Vec<SingularityType>,
        counters: ScanCounters,
    ) -> Self {
        let f: BTreeSet<_> = found.iter().cloned().collect();
        let e: BTreeSet<_> = expected.iter().cloned().collect();
        TableReproduction {
            id,
            missing: expected.iter().filter(|t| !f.contains(t)).cloned().collect(),
            extra: found.iter().filter(|t| !e.contains(t)).cloned().collect(),
            found,
            expected,
            inconclusive,
            counters,
        }
    }

    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.inconclusive.is_empty()
    }

    /// Matched rows numbered in published order, then unexpected rows.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let found: BTreeSet<_> = self.found.iter().collect();
        for (i, t) in self.expected.iter().enumerate() {
            if found.contains(t) {
                out.push_str(&format!("{:>3}  {}\n", i + 1, t.table_row()));
            }
        }
        for t in &self.extra {
            out.push_str(&format!("  +  {}\n", t.table_row()));
        }
        out
    }

    /// Row-level differences, empty when the table matches.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for t in &self.missing {
            out.push_str(&format!("- {}\n", t.table_row()));
        }
        for t in &self.extra {
            out.push_str(&format!("+ {}\n", t.table_row()));
        }
        for t in &self.inconclusive {
            out.push_str(&format!("? {}\n", t.table_row()));
        }
        out
    }

    /// `Err(Mismatch)` with the diff unless the table matches.
    pub fn ensure_match(self) -> Result<Self> {
        if self.matches() {
            Ok(self)
        } else {
            Err(Error::Mismatch(format!("table {}:\n{}", self.id, self.diff())))
        }
    }
}

/// Options of [`reproduce_table`].
#[derive(Debug, Clone)]
pub struct TableOptions {
    pub jobs: Option<usize>,
    pub budget: u64,
    /// Exclusive bound on `p4` for the third table.
    pub p4_below: i128,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            jobs: None,
            budget: DEFAULT_BUDGET,
            p4_below: T3_P4_BELOW,
        }
    }
}

fn collect(case: &ScanCase, cfg: &ScanConfig) -> Result<(Vec<SingularityType>, Vec<SingularityType>, ScanCounters)> {
    let mut found = Vec::new();
    let mut inconclusive = Vec::new();
    let counters = scan(case, cfg, |r| {
        match r.verdict {
            Verdict::Survives => found.push(r.ty),
            Verdict::Inconclusive => inconclusive.push(r.ty),
            Verdict::Obstructed { .. } => {}
        }
        Ok(())
    })?;
    Ok((found, inconclusive, counters))
}

fn scan_config(checks: Vec<Check>, opts: &TableOptions) -> ScanConfig {
    ScanConfig {
        analyze: AnalyzeConfig {
            checks,
            budget: opts.budget,
            ..AnalyzeConfig::default()
        },
        jobs: opts.jobs,
        ..ScanConfig::default()
    }
}

/// Runs the scan that defines a table and compares it with the published
/// rows.
pub fn reproduce_table(id: TableId, opts: &TableOptions) -> Result<TableReproduction> {
    match id {
        TableId::T1 => {
            let cfg = scan_config(vec![Check::DSquare], opts);
            let (mut found, mut inc, mut counters) = collect(&ScanCase::Case2, &cfg)?;
            let (f3, i3, c3) = collect(&ScanCase::Case3, &cfg)?;
            found.extend(f3);
            inc.extend(i3);
            counters.merge_public(&c3);
            Ok(TableReproduction::new(id, found, inc, table_expected(id), counters))
        }
        TableId::T2 => {
            let funnel = case2_funnel(opts)?;
            Ok(TableReproduction::new(
                id,
                funnel.survivors,
                funnel.inconclusive,
                table_expected(id),
                funnel.counters,
            ))
        }
        TableId::T3 => {
            let cfg = scan_config(Check::ALL.to_vec(), opts);
            let (found, inc, counters) = collect(&ScanCase::case1(opts.p4_below), &cfg)?;
            let expected = table_expected(id)
                .into_iter()
                .filter(|t| t.pairs()[3].p < opts.p4_below)
                .collect();
            Ok(TableReproduction::new(id, found, inc, expected, counters))
        }
    }
}

/// Stage counts of the `(2,3,7,n)` funnel: linking, then existence of an
/// embedding, then KM and complement, then spin-d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Funnel {
    pub enumerated: u64,
    pub linking: u64,
    pub donaldson: u64,
    pub km_complement: u64,
    pub spin_d: u64,
    pub survivors: Vec<SingularityType>,
    pub inconclusive: Vec<SingularityType>,
    pub counters: ScanCounters,
}

pub fn case2_funnel(opts: &TableOptions) -> Result<Funnel> {
    let cfg = scan_config(vec![Check::Linking, Check::Smooth, Check::SpinD], opts);
    let (survivors, inconclusive, counters) = collect(&ScanCase::Case2, &cfg)?;
    let stage = |n: &str| counters.stage(n).expect("configured stage");
    Ok(Funnel {
        enumerated: counters.enumerated,
        linking: stage("linking"),
        donaldson: stage("donaldson"),
        km_complement: stage("km_complement"),
        spin_d: stage("spin_d"),
        survivors,
        inconclusive,
        counters,
    })
}
