//! Embeddings of linear plumbing lattices into the diagonal lattice
//! `-Z^N` (`<e_i, e_j> = -delta_ij`), their equivalence classes, and the
//! Kervaire-Milnor and orthogonal-complement conditions.

mod canonical;
mod checks;
mod fixture;
mod search;

pub use canonical::{canonical_form, CanonicalForm};
pub use checks::{complement_check, km_check, ComplementResult, KmResult, CharacteristicSubset};
pub use fixture::{parse_fixture, render_fixture};
pub use search::{embed_search, embed_search_ordered, search_order, SearchMode, SearchOutcome, SearchStatus};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singtypes::{plumbing_of, Orientation, Plumbing, SingularityType};

/// Default node budget per search.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// One coordinate vector per plumbing vertex (global vertex order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub ambient_rank: usize,
    pub vectors: Vec<Vec<i64>>,
}

/// `<u, v> = -sum u_k v_k`.
pub fn pairing(u: &[i64], v: &[i64]) -> i64 {
    -u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()
}

impl Embedding {
    pub fn new(ambient_rank: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_rank) {
            return Err(Error::InvalidArgs(format!(
                "vector of length {} in ambient rank {ambient_rank}",
                v.len()
            )));
        }
        Ok(Embedding {
            ambient_rank,
            vectors,
        })
    }

    /// Checks `<v,v> = weight`, `<u,v> = 1` on edges and `0` otherwise.
    #[allow(clippy::needless_range_loop)]
    pub fn verify(&self, pl: &Plumbing) -> Result<()> {
        let weights = pl.weights();
        if weights.len() != self.vectors.len() {
            return Err(Error::Mismatch(format!(
                "{} vectors for {} vertices",
                self.vectors.len(),
                weights.len()
            )));
        }
        let adj = pl.adjacency();
        for u in 0..weights.len() {
            for v in u..weights.len() {
                let got = pairing(&self.vectors[u], &self.vectors[v]);
                let want = if u == v {
                    weights[u]
                } else if adj[u][v] {
                    1
                } else {
                    0
                };
                if got != want {
                    return Err(Error::Mismatch(format!(
                        "<v{u}, v{v}> = {got}, expected {want}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies a signed column permutation: new column `k` is
    /// `signs[k] * old column perm[k]`.
    pub fn permute_columns(&self, perm: &[usize], signs: &[i64]) -> Embedding {
        let vectors = self
            .vectors
            .iter()
            .map(|row| perm.iter().zip(signs).map(|(&j, &s)| s * row[j]).collect())
            .collect();
        Embedding {
            ambient_rank: self.ambient_rank,
            vectors,
        }
    }

    /// Negates every vector of the given chain.
    pub fn flip_chain(&self, pl: &Plumbing, chain: usize) -> Embedding {
        let offs = pl.chain_offsets();
        let range = offs[chain]..offs[chain] + pl.chains()[chain].len();
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if range.contains(&i) {
                    row.iter().map(|x| -x).collect()
                } else {
                    row.clone()
                }
            })
            .collect();
        Embedding {
            ambient_rank: self.ambient_rank,
            vectors,
        }
    }
}

/// Complement and Kervaire-Milnor data of one embedding class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub embedding: Embedding,
    pub complement: ComplementResult,
    pub km: KmResult,
}

impl ClassReport {
    pub fn survives(&self) -> bool {
        self.complement.pass && self.km.pass
    }
}

/// Smooth conditions for a type: existence of embeddings into `-Z^{n+1}`,
/// and per class the complement and Kervaire-Milnor conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothReport {
    pub ambient_rank: usize,
    pub classes: Vec<ClassReport>,
    pub donaldson_pass: bool,
    pub status: SearchStatus,
    pub nodes: u64,
}

impl SmoothReport {
    /// `Some(true)` when every class fails a condition (or none exist),
    /// `None` when the search ran out of budget without an answer.
    pub fn obstructed(&self) -> Option<bool> {
        if self.classes.iter().any(ClassReport::survives) {
            return Some(false);
        }
        match self.status {
            SearchStatus::Complete => Some(true),
            SearchStatus::BudgetExhausted | SearchStatus::Witnessed => None,
        }
    }

    /// Names of the failing conditions when obstructed.
    pub fn obstructed_by(&self) -> Vec<&'static str> {
        if self.obstructed() != Some(true) {
            return Vec::new();
        }
        if self.classes.is_empty() {
            return vec!["donaldson"];
        }
        let mut out = Vec::new();
        if self.classes.iter().any(|c| !c.km.pass) {
            out.push("km");
        }
        if self.classes.iter().any(|c| !c.complement.pass) {
            out.push("complement");
        }
        out
    }
}

/// Annotates embedding classes of a plumbing with the complement check
/// (against `order_product`) and the Kervaire-Milnor check.
pub fn annotate_classes(
    pl: &Plumbing,
    classes: Vec<Embedding>,
    order_product: i128,
) -> Result<Vec<ClassReport>> {
    classes
        .into_iter()
        .map(|embedding| {
            let complement = complement_check(&embedding, order_product)?;
            let km = km_check(&embedding, pl);
            Ok(ClassReport {
                embedding,
                complement,
                km,
            })
        })
        .collect()
}

/// Runs the full smooth battery on a type with ambient rank `n + 1`.
pub fn smooth_battery(ty: &SingularityType, budget: u64) -> Result<SmoothReport> {
    let pl = plumbing_of(ty, Orientation::Standard);
    let n = pl.vertex_count() + 1;
    let outcome = embed_search(&pl, n, SearchMode::EnumerateClasses, budget);
    let classes = annotate_classes(&pl, outcome.classes, ty.order_product())?;
    Ok(SmoothReport {
        ambient_rank: n,
        donaldson_pass: !classes.is_empty(),
        classes,
        status: outcome.status,
        nodes: outcome.nodes,
    })
}
