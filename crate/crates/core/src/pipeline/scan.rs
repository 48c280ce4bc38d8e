use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singtypes::{
    case1_orders, case1_shard, enumerate_case2, enumerate_case3, Case1Options, SingularityType,
};

use super::{AnalyzeConfig, Check, Evaluation, ObstructionReport, Verdict};

/// Version of the checkpoint file layout.
pub const CHECKPOINT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanCase {
    /// Orders `(2, 3, 5, p4)` with `p4_min <= p4 < p4_below`.
    Case1 {
        p4_min: i128,
        p4_below: i128,
        options: Case1Options,
    },
    /// Orders `(2, 3, 7, n)`.
    Case2,
    /// Orders `(2, 3, 11, 13)`.
    Case3,
}

impl ScanCase {
    pub fn case1(p4_below: i128) -> ScanCase {
        ScanCase::Case1 {
            p4_min: 7,
            p4_below,
            options: Case1Options::default(),
        }
    }

    /// Text identifying the enumerated range, stored in checkpoints.
    pub fn descriptor(&self) -> String {
        match self {
            ScanCase::Case1 {
                p4_min,
                p4_below,
                options,
            } => {
                let join = |v: &[i128]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!(
                    "case1:p4=[{p4_min},{p4_below}):q2={}:q3={}",
                    join(&options.q2_values),
                    join(&options.q3_values)
                )
            }
            ScanCase::Case2 => "case2".into(),
            ScanCase::Case3 => "case3".into(),
        }
    }

    /// Shard keys (`p4`) in ascending order.
    pub fn shards(&self) -> Vec<i128> {
        match self {
            ScanCase::Case1 { p4_min, p4_below, .. } => case1_orders(*p4_min, *p4_below - 1).collect(),
            ScanCase::Case2 | ScanCase::Case3 => {
                let mut keys: Vec<i128> = self.fixed_types().iter().map(|t| t.pairs()[3].p).collect();
                keys.dedup();
                keys
            }
        }
    }

    fn fixed_types(&self) -> Vec<SingularityType> {
        match self {
            ScanCase::Case2 => enumerate_case2(),
            ScanCase::Case3 => enumerate_case3(),
            ScanCase::Case1 { .. } => Vec::new(),
        }
    }

    /// Types of one shard in stream order.
    pub fn shard_types(&self, p4: i128) -> Vec<SingularityType> {
        match self {
            ScanCase::Case1 { options, .. } => case1_shard(p4, options),
            _ => self
                .fixed_types()
                .into_iter()
                .filter(|t| t.pairs()[3].p == p4)
                .collect(),
        }
    }
}

/// Which reports a scan hands to its sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    /// Survivors and inconclusive types.
    #[default]
    Survivors,
    All,
}

#[derive(Debug, Clone, Default)]
pub struct ScanConfig {
    pub analyze: AnalyzeConfig,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub emit: Emit,
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint if it exists.
    pub resume: bool,
    /// Shards per parallel batch (and per checkpoint write); 0 picks a default.
    pub batch: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounters {
    pub enumerated: u64,
    /// Types passing oBMY, D-squareness and linking, whatever the configured
    /// checks are.
    pub pass_algebraic: u64,
    /// `pass_algebraic` split by `q3` (case 1 only).
    pub pass_algebraic_by_q3: BTreeMap<i128, u64>,
    /// Types passing every configured check up to and including each stage.
    /// The smooth check is split into `donaldson` and `km_complement`.
    pub stages: Vec<(String, u64)>,
    pub survivors: u64,
    pub inconclusive: u64,
}

impl ScanCounters {
    fn for_config(cfg: &AnalyzeConfig) -> ScanCounters {
        let mut stages = Vec::new();
        for c in &cfg.checks {
            if *c == Check::Smooth {
                stages.push(("donaldson".to_string(), 0));
                stages.push(("km_complement".to_string(), 0));
            } else {
                stages.push((c.name().to_string(), 0));
            }
        }
        ScanCounters {
            stages,
            ..ScanCounters::default()
        }
    }

    pub(crate) fn merge_public(&mut self, other: &ScanCounters) {
        self.merge(other);
    }

    fn merge(&mut self, other: &ScanCounters) {
        self.enumerated += other.enumerated;
        self.pass_algebraic += other.pass_algebraic;
        for (k, v) in &other.pass_algebraic_by_q3 {
            *self.pass_algebraic_by_q3.entry(*k).or_default() += v;
        }
        for (a, b) in self.stages.iter_mut().zip(&other.stages) {
            a.1 += b.1;
        }
        self.survivors += other.survivors;
        self.inconclusive += other.inconclusive;
    }

    pub fn stage(&self, name: &str) -> Option<u64> {
        self.stages.iter().find(|(n, _)| n == name).map(|x| x.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub schema_version: u32,
    pub case: String,
    pub config: String,
    /// Last shard whose results are included in `counters`.
    pub last_p4: Option<i128>,
    pub counters: ScanCounters,
}

impl ScanCheckpoint {
    pub fn load(path: &std::path::Path) -> Result<ScanCheckpoint> {
        let text = fs::read_to_string(path)?;
        let cp: ScanCheckpoint = serde_json::from_str(&text)
            .map_err(|e| Error::CheckpointCorrupt(format!("{}: {e}", path.display())))?;
        if cp.schema_version != CHECKPOINT_SCHEMA {
            return Err(Error::CheckpointCorrupt(format!(
                "schema version {} (expected {CHECKPOINT_SCHEMA})",
                cp.schema_version
            )));
        }
        Ok(cp)
    }

    /// Writes through a temporary file and a rename.
    pub fn store(&self, path: &std::path::Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self).expect("checkpoint serializes"))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

struct ShardResult {
    counters: ScanCounters,
    reports: Vec<ObstructionReport>,
}

fn run_shard(case: &ScanCase, p4: i128, cfg: &ScanConfig, template: &ScanCounters) -> ShardResult {
    let mut counters = template.clone();
    let mut reports = Vec::new();
    let is_case1 = matches!(case, ScanCase::Case1 { .. });
    for ty in case.shard_types(p4) {
        counters.enumerated += 1;
        let mut ev = Evaluation::new(&ty, &cfg.analyze);
        if ev.obmy() && ev.d_square() && ev.linking() {
            counters.pass_algebraic += 1;
            if is_case1 {
                *counters.pass_algebraic_by_q3.entry(ty.pairs()[2].q).or_default() += 1;
            }
        }
        let (verdict, passed) = ev.verdict();
        let mut slot = 0;
        for (i, c) in cfg.analyze.checks.iter().enumerate() {
            let width = if *c == Check::Smooth { 2 } else { 1 };
            if i < passed {
                for s in &mut counters.stages[slot..slot + width] {
                    s.1 += 1;
                }
            } else if i == passed && *c == Check::Smooth
                && ev.smooth_done().is_some_and(|r| r.donaldson_pass) {
                    counters.stages[slot].1 += 1;
                }
            slot += width;
        }
        match verdict {
            Verdict::Survives => counters.survivors += 1,
            Verdict::Inconclusive => counters.inconclusive += 1,
            Verdict::Obstructed { .. } => {}
        }
        if cfg.emit == Emit::All || !matches!(verdict, Verdict::Obstructed { .. }) {
            reports.push(ev.into_report(verdict));
        }
    }
    ShardResult { counters, reports }
}

/// Scans a case in shard order, handing reports to `sink` in deterministic
/// `(p4, q3, q4)` order whatever the parallelism. Returns the final counters.
pub fn scan<F>(case: &ScanCase, cfg: &ScanConfig, mut sink: F) -> Result<ScanCounters>
where
    F: FnMut(&ObstructionReport) -> Result<()>,
{
    let descriptor = case.descriptor();
    let fingerprint = cfg.analyze.fingerprint();
    let template = ScanCounters::for_config(&cfg.analyze);
    let mut counters = template.clone();
    let mut shards = case.shards();

    if let (true, Some(path)) = (cfg.resume, &cfg.checkpoint) {
        if path.exists() {
            let cp = ScanCheckpoint::load(path)?;
            if cp.case != descriptor || cp.config != fingerprint {
                return Err(Error::CheckpointCorrupt(format!(
                    "checkpoint is for {} / {}, not {descriptor} / {fingerprint}",
                    cp.case, cp.config
                )));
            }
            if cp.counters.stages.iter().map(|s| &s.0).ne(template.stages.iter().map(|s| &s.0)) {
                return Err(Error::CheckpointCorrupt("stage list differs".into()));
            }
            if let Some(last) = cp.last_p4 {
                shards.retain(|&p| p > last);
            }
            log::info!("resuming {descriptor} after p4 = {:?}", cp.last_p4);
            counters = cp.counters;
        }
    }

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cfg.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(|e| Error::InvalidArgs(format!("thread pool: {e}")))?
    };
    let batch = if cfg.batch == 0 { 256 } else { cfg.batch };
    for chunk in shards.chunks(batch) {
        let results: Vec<ShardResult> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&p4| run_shard(case, p4, cfg, &template))
                .collect()
        });
        for r in &results {
            counters.merge(&r.counters);
            for rep in &r.reports {
                sink(rep)?;
            }
        }
        let last = *chunk.last().expect("nonempty chunk");
        if let Some(path) = &cfg.checkpoint {
            ScanCheckpoint {
                schema_version: CHECKPOINT_SCHEMA,
                case: descriptor.clone(),
                config: fingerprint.clone(),
                last_p4: Some(last),
                counters: counters.clone(),
            }
            .store(path)?;
        }
        log::debug!("{descriptor}: through p4 = {last}, {} enumerated", counters.enumerated);
    }
    Ok(counters)
}
