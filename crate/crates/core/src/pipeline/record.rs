use serde::{Deserialize, Serialize};

use crate::lattice::SearchStatus;

use super::{ObstructionReport, SmoothSection};

/// One JSON Lines record. Rationals are strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    #[serde(rename = "type")]
    pub ty: [[i128; 2]; 4],
    #[serde(rename = "K2")]
    pub k2: String,
    pub e_orb: String,
    pub obmy: ObmyRecord,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "D_root")]
    pub d_root: Option<i128>,
    pub linking: LinkingRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prefilter: Option<bool>,
    pub spin_d: Option<SpinDRecord>,
    pub smooth: SmoothRecord,
    pub verdict: String,
    pub obstructed_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObmyRecord {
    pub pass: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingRecord {
    pub q: i128,
    pub pass: bool,
    pub witness: Option<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinDRecord {
    pub applicable: bool,
    pub pass: bool,
    pub witness: Option<[i128; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SmoothRecord {
    Ran {
        #[serde(rename = "N")]
        n: usize,
        classes: usize,
        status: SearchStatus,
        nodes: u64,
        per_class: Vec<ClassRecord>,
    },
    Skipped { skipped: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub complement_norm: i128,
    pub complement_pass: bool,
    pub km_pass: bool,
    /// Squares of the violating characteristic spheres.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub km_violations: Vec<i64>,
}

impl From<&ObstructionReport> for ReportRecord {
    fn from(r: &ObstructionReport) -> Self {
        let a = &r.algebraic;
        let smooth = match &r.smooth {
            SmoothSection::Ran(s) => SmoothRecord::Ran {
                n: s.ambient_rank,
                classes: s.classes.len(),
                status: s.status,
                nodes: s.nodes,
                per_class: s
                    .classes
                    .iter()
                    .map(|c| {
                        let mut km_violations: Vec<i64> =
                            c.km.violations.iter().map(|v| v.square).collect();
                        km_violations.sort_unstable();
                        km_violations.dedup();
                        ClassRecord {
                            complement_norm: c.complement.norm,
                            complement_pass: c.complement.pass,
                            km_pass: c.km.pass,
                            km_violations,
                        }
                    })
                    .collect(),
            },
            SmoothSection::Skipped(reason) => SmoothRecord::Skipped {
                skipped: reason.clone(),
            },
        };
        ReportRecord {
            ty: r.ty.raw().map(|(p, q)| [p, q]),
            k2: a.k_square.to_string(),
            e_orb: a.e_orb.to_string(),
            obmy: ObmyRecord {
                pass: a.obmy_pass,
                equality: a.obmy_equality,
            },
            d: a.d.to_string(),
            d_root: a.d_root,
            linking: LinkingRecord {
                q: a.linking.q,
                pass: a.linking.pass,
                witness: a.linking.witness,
            },
            prefilter: r.prefilter,
            spin_d: r.spin_d.as_ref().map(|s| SpinDRecord {
                applicable: s.applicable,
                pass: s.pass,
                witness: s.witness,
            }),
            smooth,
            verdict: r.verdict.label().to_string(),
            obstructed_by: r.verdict.obstructed_by().to_vec(),
        }
    }
}

impl ReportRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Header of the CSV projection.
pub fn csv_header() -> Vec<&'static str> {
    vec![
        "type", "K2", "D", "D_root", "obmy", "linking", "spin_d", "classes", "verdict",
        "obstructed_by",
    ]
}

/// One CSV row matching [`csv_header`].
pub fn csv_row(r: &ObstructionReport) -> Vec<String> {
    let a = &r.algebraic;
    let opt = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
    vec![
        r.ty.table_row(),
        a.k_square.to_string(),
        a.d.to_string(),
        a.d_root.map_or(String::new(), |x| x.to_string()),
        a.obmy_pass.to_string(),
        a.linking.pass.to_string(),
        opt(r.spin_d.as_ref().map(|s| s.pass)),
        r.smooth_report().map_or(String::new(), |s| s.classes.len().to_string()),
        r.verdict.label().to_string(),
        r.verdict.obstructed_by().join(";"),
    ]
}
