//! Per-type analysis, scans over the enumerated cases, and table
//! reproduction.

mod record;
mod scan;
mod tables;

pub use record::{csv_header, csv_row, ReportRecord};
pub use scan::{scan, Emit, ScanCase, ScanCheckpoint, ScanConfig, ScanCounters, CHECKPOINT_SCHEMA};
pub use tables::{
    case2_funnel, reproduce_table, table_expected, Funnel, TableId, TableOptions, TableReproduction,
    T3_P4_BELOW,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebraic::{
    algebraic_report_with, d_squareness, e_orb, k_square, linking_check, prefilter_applies,
    residue_prefilter, AlgebraicReport, LinkingResult,
};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::floer::{spin_d_check, SpinDResult};
use crate::families::{mysterious_embedding, mysterious_parameter};
use crate::lattice::{
    annotate_classes, smooth_battery, ClassReport, SearchStatus, SmoothReport, DEFAULT_BUDGET,
};
use crate::singtypes::SingularityType;

/// One condition of the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Obmy,
    DSquare,
    Linking,
    SpinD,
    Smooth,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Obmy, Check::DSquare, Check::Linking, Check::SpinD, Check::Smooth];

    pub fn name(self) -> &'static str {
        match self {
            Check::Obmy => "obmy",
            Check::DSquare => "d_square",
            Check::Linking => "linking",
            Check::SpinD => "spin_d",
            Check::Smooth => "smooth",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "obmy" => Ok(Check::Obmy),
            "d" | "d_square" | "dsquare" => Ok(Check::DSquare),
            "linking" => Ok(Check::Linking),
            "spin_d" | "spind" => Ok(Check::SpinD),
            "smooth" => Ok(Check::Smooth),
            other => Err(Error::Parse(format!("unknown check {other:?}"))),
        }
    }
}

/// Parses a comma separated check list such as `obmy,d,linking`.
pub fn parse_checks(s: &str) -> Result<Vec<Check>> {
    let checks = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Check>>>()?;
    if checks.is_empty() {
        return Err(Error::Parse("empty check list".into()));
    }
    for (i, c) in checks.iter().enumerate() {
        if checks[..i].contains(c) {
            return Err(Error::Parse(format!("check {c} listed twice")));
        }
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    /// Checks in evaluation order.
    pub checks: Vec<Check>,
    /// Stop at the first failing check.
    pub short_circuit: bool,
    /// Node budget of each embedding search.
    pub budget: u64,
    /// Use the residue prefilter for the linking check when it applies.
    pub prefilter: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            checks: Check::ALL.to_vec(),
            short_circuit: true,
            budget: DEFAULT_BUDGET,
            prefilter: true,
        }
    }
}

impl AnalyzeConfig {
    /// Stable text identifying everything that affects results.
    pub fn fingerprint(&self) -> String {
        let checks: Vec<&str> = self.checks.iter().map(|c| c.name()).collect();
        format!(
            "checks={};short_circuit={};budget={};prefilter={}",
            checks.join(","),
            self.short_circuit,
            self.budget,
            self.prefilter
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Failing conditions: the first one in short-circuit mode, all of them
    /// otherwise. Smooth failures are named `donaldson`, `km`, `complement`.
    Obstructed { by: Vec<String> },
    Survives,
    /// An embedding search ran out of budget and no completed check failed.
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Obstructed { .. } => "obstructed",
            Verdict::Survives => "survives",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn obstructed_by(&self) -> &[String] {
        match self {
            Verdict::Obstructed { by } => by,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothSection {
    Ran(SmoothReport),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    #[serde(rename = "type")]
    pub ty: SingularityType,
    pub algebraic: AlgebraicReport,
    /// Residue prefilter result, when it applies and is enabled.
    pub prefilter: Option<bool>,
    /// `None` when the check did not run.
    pub spin_d: Option<SpinDResult>,
    pub smooth: SmoothSection,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn smooth_report(&self) -> Option<&SmoothReport> {
        match &self.smooth {
            SmoothSection::Ran(r) => Some(r),
            SmoothSection::Skipped(_) => None,
        }
    }
}

/// Members of the surviving family carry a known embedding, far beyond the
/// reach of the search. It is used when it passes every smooth condition.
fn witnessed(ty: &SingularityType) -> Option<SmoothReport> {
    let s = mysterious_parameter(ty)?;
    let (pl, emb) = mysterious_embedding(s).ok()?;
    let classes = annotate_classes(&pl, vec![emb], ty.order_product()).ok()?;
    classes.iter().all(ClassReport::survives).then(|| SmoothReport {
        ambient_rank: pl.vertex_count() + 1,
        classes,
        donaldson_pass: true,
        status: SearchStatus::Witnessed,
        nodes: 0,
    })
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Pass,
    Fail(Vec<String>),
    Inconclusive,
}

/// Computes conditions on demand and caches them, so that cheap checks can
/// reject a type before anything expensive runs.
pub(crate) struct Evaluation<'a> {
    ty: &'a SingularityType,
    cfg: &'a AnalyzeConfig,
    k2: Option<Rational>,
    d: Option<(Rational, Option<i128>)>,
    prefilter: Option<Option<bool>>,
    linking: Option<LinkingResult>,
    spin_d: Option<SpinDResult>,
    smooth: Option<SmoothReport>,
}

impl<'a> Evaluation<'a> {
    pub(crate) fn new(ty: &'a SingularityType, cfg: &'a AnalyzeConfig) -> Self {
        Evaluation {
            ty,
            cfg,
            k2: None,
            d: None,
            prefilter: None,
            linking: None,
            spin_d: None,
            smooth: None,
        }
    }

    pub(crate) fn obmy(&mut self) -> bool {
        let ty = self.ty;
        let k2 = *self.k2.get_or_insert_with(|| k_square(ty));
        k2.is_positive() && k2 <= e_orb(ty).checked_mul_int(3).expect("small value")
    }

    pub(crate) fn d_square(&mut self) -> bool {
        let ty = self.ty;
        self.d.get_or_insert_with(|| d_squareness(ty)).1.is_some()
    }

    fn prefilter(&mut self) -> Option<bool> {
        let (ty, enabled) = (self.ty, self.cfg.prefilter);
        *self.prefilter.get_or_insert_with(|| {
            (enabled && prefilter_applies(ty))
                .then(|| residue_prefilter(ty.pairs()[2].q, ty.pairs()[3].p))
        })
    }

    pub(crate) fn linking(&mut self) -> bool {
        if self.prefilter() == Some(false) {
            return false;
        }
        let ty = self.ty;
        self.linking.get_or_insert_with(|| linking_check(ty)).pass
    }

    fn spin_d(&mut self) -> bool {
        let ty = self.ty;
        self.spin_d.get_or_insert_with(|| spin_d_check(ty)).pass
    }

    pub(crate) fn smooth(&mut self) -> &SmoothReport {
        let (ty, budget) = (self.ty, self.cfg.budget);
        self.smooth.get_or_insert_with(|| {
            witnessed(ty).unwrap_or_else(|| smooth_battery(ty, budget).expect("plumbing of a valid type"))
        })
    }

    pub(crate) fn smooth_done(&self) -> Option<&SmoothReport> {
        self.smooth.as_ref()
    }

    pub(crate) fn run(&mut self, check: Check) -> Outcome {
        let pass = match check {
            Check::Obmy => self.obmy(),
            Check::DSquare => self.d_square(),
            Check::Linking => self.linking(),
            Check::SpinD => self.spin_d(),
            Check::Smooth => {
                let r = self.smooth();
                return match r.obstructed() {
                    Some(true) => Outcome::Fail(r.obstructed_by().iter().map(|s| s.to_string()).collect()),
                    Some(false) => Outcome::Pass,
                    None => Outcome::Inconclusive,
                };
            }
        };
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail(vec![check.name().to_string()])
        }
    }

    /// Runs the configured checks and returns the verdict together with the
    /// number of leading checks passed.
    pub(crate) fn verdict(&mut self) -> (Verdict, usize) {
        let mut failed: Vec<String> = Vec::new();
        let mut inconclusive = false;
        let mut passed_prefix = 0;
        let mut prefix_open = true;
        for &check in &self.cfg.checks.clone() {
            match self.run(check) {
                Outcome::Pass => {
                    if prefix_open {
                        passed_prefix += 1;
                    }
                }
                Outcome::Fail(names) => {
                    prefix_open = false;
                    failed.extend(names);
                    if self.cfg.short_circuit {
                        break;
                    }
                }
                Outcome::Inconclusive => {
                    prefix_open = false;
                    inconclusive = true;
                }
            }
        }
        let verdict = if !failed.is_empty() {
            Verdict::Obstructed { by: failed }
        } else if inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::Survives
        };
        (verdict, passed_prefix)
    }

    /// Full report, reusing everything computed so far.
    pub(crate) fn into_report(mut self, verdict: Verdict) -> ObstructionReport {
        let ty = self.ty;
        let linking = self.linking.take().unwrap_or_else(|| linking_check(ty));
        let algebraic = algebraic_report_with(ty, linking);
        let prefilter = self.prefilter();
        let smooth = match self.smooth.take() {
            Some(r) => SmoothSection::Ran(r),
            None if self.cfg.checks.contains(&Check::Smooth) => {
                SmoothSection::Skipped("an earlier check failed".into())
            }
            None => SmoothSection::Skipped("not enabled".into()),
        };
        ObstructionReport {
            ty: *self.ty,
            algebraic,
            prefilter,
            spin_d: self.spin_d.take(),
            smooth,
            verdict,
        }
    }
}

/// Runs the configured battery on one type.
pub fn analyze(ty: &SingularityType, cfg: &AnalyzeConfig) -> ObstructionReport {
    let mut ev = Evaluation::new(ty, cfg);
    let (verdict, _) = ev.verdict();
    ev.into_report(verdict)
}
