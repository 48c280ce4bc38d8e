use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::singtypes::Plumbing;

use super::canonical::{canonical_form, representative, CanonicalForm};
use super::Embedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// Stop at the first embedding.
    Exists,
    /// Enumerate every equivalence class.
    EnumerateClasses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    Complete,
    BudgetExhausted,
    /// No search ran: a known surviving embedding was supplied instead, so
    /// other classes are not listed.
    Witnessed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Canonical representatives, sorted by canonical form.
    pub classes: Vec<Embedding>,
    pub status: SearchStatus,
    pub nodes: u64,
}

/// Vertex processing order, built greedily. Each chain starts at the first
/// vertex of its longest run of `-2`s (its first vertex if it has none) and
/// grows as an interval. The next vertex is the one of least norm among the
/// neighbours of each started chain and the starts of unstarted chains,
/// with ties going to extending a started chain, then to the lower index.
/// Long runs of twos are placed first and heavy vertices last, when the
/// most inner products constrain them.
pub fn search_order(pl: &Plumbing) -> Vec<usize> {
    let offs = pl.chain_offsets();
    let chains = pl.chains();
    // Placed interval of each chain, if started.
    let mut span: Vec<Option<(usize, usize)>> = vec![None; chains.len()];
    let mut order = Vec::with_capacity(pl.vertex_count());
    while order.len() < pl.vertex_count() {
        let mut best: Option<((i64, bool, usize), usize, usize)> = None;
        for (c, ch) in chains.iter().enumerate() {
            let (cands, fresh) = match span[c] {
                None => ([Some(longest_twos(ch)), None], true),
                Some((lo, hi)) => ([lo.checked_sub(1), Some(hi + 1).filter(|&i| i < ch.len())], false),
            };
            for i in cands.into_iter().flatten() {
                let key = (-ch[i], fresh, offs[c] + i);
                if best.is_none_or(|b| key < b.0) {
                    best = Some((key, c, i));
                }
            }
        }
        let (_, c, i) = best.expect("an unplaced vertex remains");
        span[c] = Some(match span[c] {
            None => (i, i),
            Some((lo, hi)) => (lo.min(i), hi.max(i)),
        });
        order.push(offs[c] + i);
    }
    order
}

/// Start of the longest run of `-2`s (the first such run on ties), or 0.
fn longest_twos(chain: &[i64]) -> usize {
    let (mut best, mut best_len, mut run) = (0, 0, 0);
    for (i, &w) in chain.iter().enumerate() {
        run = if w == -2 { run + 1 } else { 0 };
        if run > best_len {
            best_len = run;
            best = i + 1 - run;
        }
    }
    best
}

struct Search<'a> {
    pl: &'a Plumbing,
    ambient: usize,
    mode: SearchMode,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    done: bool,
    /// Vertex at each processing position.
    order: Vec<usize>,
    /// Norm of each processed vertex.
    norms: Vec<i64>,
    /// Whether the position is the first processed vertex of its chain.
    chain_start: Vec<bool>,
    /// `targets[t][s]`: required Euclidean dot product with position `s < t`.
    targets: Vec<Vec<i64>>,
    rows: Vec<Vec<i64>>,
    /// `suffix[s][j] = sum_{k >= j} rows[s][k]^2`.
    suffix: Vec<Vec<i64>>,
    used: usize,
    /// Per position: previous used column whose column agrees with this one
    /// up to sign on all placed rows (`usize::MAX` if none), and the sign
    /// relating the column to its class.
    class_prev: Vec<Vec<usize>>,
    class_sign: Vec<Vec<i64>>,
    found: BTreeSet<CanonicalForm>,
    // scratch for the current vertex
    partial: Vec<i64>,
    current: Vec<i64>,
}

/// Searches for embeddings of `pl` into `-Z^ambient`.
///
/// Vertices are placed one at a time. Coordinates on already used basis
/// indices are found by depth-first search with a Cauchy-Schwarz bound on
/// every pending inner product; the remaining norm goes to fresh indices as
/// a nonincreasing sequence of positive entries on the lowest unused
/// indices. The first vertex of each chain has its leading nonzero used
/// coordinate positive. Surviving solutions are deduplicated by
/// [`canonical_form`].
pub fn embed_search(pl: &Plumbing, ambient: usize, mode: SearchMode, budget: u64) -> SearchOutcome {
    embed_search_ordered(pl, search_order(pl), ambient, mode, budget)
}

/// [`embed_search`] with an explicit vertex processing order, which must be
/// a permutation of the vertices.
pub fn embed_search_ordered(
    pl: &Plumbing,
    order: Vec<usize>,
    ambient: usize,
    mode: SearchMode,
    budget: u64,
) -> SearchOutcome {
    let n = order.len();
    let weights = pl.weights();
    let pos = pl.vertex_positions();
    let adj = pl.adjacency();
    let mut seen_chain = vec![false; pl.chains().len()];
    let mut chain_start = Vec::with_capacity(n);
    for &v in &order {
        let c = pos[v].0;
        chain_start.push(!seen_chain[c]);
        seen_chain[c] = true;
    }
    let targets = (0..n)
        .map(|t| {
            (0..t)
                .map(|s| if adj[order[t]][order[s]] { -1 } else { 0 })
                .collect()
        })
        .collect();
    let mut search = Search {
        pl,
        ambient,
        mode,
        budget,
        nodes: 0,
        exhausted: false,
        done: false,
        norms: order.iter().map(|&v| -weights[v]).collect(),
        order,
        chain_start,
        targets,
        rows: vec![vec![0; ambient]; n],
        suffix: vec![vec![0; ambient + 1]; n],
        used: 0,
        class_prev: vec![vec![usize::MAX; ambient]; n],
        class_sign: vec![vec![1; ambient]; n],
        found: BTreeSet::new(),
        partial: vec![0; n],
        current: vec![0; ambient],
    };
    search.place(0);
    let classes = search
        .found
        .iter()
        .map(|form| representative(form, n))
        .collect();
    SearchOutcome {
        classes,
        status: if search.exhausted {
            SearchStatus::BudgetExhausted
        } else {
            SearchStatus::Complete
        },
        nodes: search.nodes,
    }
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            self.done = true;
        }
        !self.done
    }

    fn place(&mut self, t: usize) {
        if self.done {
            return;
        }
        if t == self.order.len() {
            self.record();
            return;
        }
        self.partial[..t].iter_mut().for_each(|x| *x = 0);
        self.current.iter_mut().for_each(|x| *x = 0);
        self.column_classes(t);
        let norm = self.norms[t];
        self.fill(t, 0, norm, false);
    }

    fn record(&mut self) {
        let n = self.order.len();
        let mut vectors = vec![Vec::new(); n];
        for (t, &v) in self.order.iter().enumerate() {
            vectors[v] = self.rows[t].clone();
        }
        let emb = Embedding {
            ambient_rank: self.ambient,
            vectors,
        };
        debug_assert!(emb.verify(self.pl).is_ok());
        self.found.insert(canonical_form(&emb, self.pl));
        if self.mode == SearchMode::Exists {
            self.done = true;
        }
    }

    /// Groups used columns that coincide up to sign on the placed rows. Any
    /// signed permutation inside such a group fixes every placed row, so the
    /// new row may be taken nonincreasing in sign-normalized values within
    /// each group.
    fn column_classes(&mut self, t: usize) {
        let mut last: HashMap<Vec<i64>, usize> = HashMap::new();
        for j in 0..self.used {
            let mut col: Vec<i64> = (0..t).map(|s| self.rows[s][j]).collect();
            let sign = match col.iter().find(|&&x| x != 0) {
                Some(&x) if x < 0 => -1,
                _ => 1,
            };
            if sign < 0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            self.class_sign[t][j] = sign;
            self.class_prev[t][j] = last.insert(col, j).unwrap_or(usize::MAX);
        }
    }

    /// Whether every pending dot product can still be met with `rest` norm
    /// left for columns `j..used`.
    fn feasible(&self, t: usize, j: usize, rest: i64) -> bool {
        let targets = &self.targets[t];
        (0..t).all(|s| {
            let gap = targets[s] - self.partial[s];
            let room = self.suffix[s][j] - self.suffix[s][self.used];
            if room == 0 {
                gap == 0
            } else {
                gap * gap <= rest * room
            }
        })
    }

    /// Chooses the coordinate of column `j` (a used column) for position `t`.
    fn fill(&mut self, t: usize, j: usize, rest: i64, nonzero_seen: bool) {
        if self.done {
            return;
        }
        if j == self.used {
            self.fresh(t, rest);
            return;
        }
        let bound = (rest as f64).sqrt() as i64;
        let bound = if (bound + 1) * (bound + 1) <= rest { bound + 1 } else { bound };
        let mut lo = if self.chain_start[t] && !nonzero_seen { 0 } else { -bound };
        let mut hi = bound;
        let prev = self.class_prev[t][j];
        if prev != usize::MAX {
            let cap = self.class_sign[t][prev] * self.current[prev];
            if self.class_sign[t][j] > 0 {
                hi = hi.min(cap);
            } else {
                lo = lo.max(-cap);
            }
        }
        // Try 0 first, then +-1, +-2, ...
        let mut candidates = Vec::with_capacity(2 * bound as usize + 1);
        if lo <= 0 && 0 <= hi {
            candidates.push(0);
        }
        for a in 1..=bound {
            if a >= lo && a <= hi {
                candidates.push(a);
            }
            if -a >= lo && -a <= hi {
                candidates.push(-a);
            }
        }
        for x in candidates {
            if !self.tick() {
                return;
            }
            let rest2 = rest - x * x;
            if x != 0 {
                for s in 0..t {
                    self.partial[s] += x * self.rows[s][j];
                }
            }
            if self.feasible(t, j + 1, rest2) {
                self.current[j] = x;
                self.fill(t, j + 1, rest2, nonzero_seen || x != 0);
                self.current[j] = 0;
            }
            if x != 0 {
                for s in 0..t {
                    self.partial[s] -= x * self.rows[s][j];
                }
            }
            if self.done {
                return;
            }
        }
    }

    /// Spends the remaining norm on fresh columns, then recurses.
    fn fresh(&mut self, t: usize, rest: i64) {
        let mut parts = Vec::new();
        self.fresh_parts(t, rest, i64::MAX, &mut parts);
    }

    fn fresh_parts(&mut self, t: usize, rest: i64, max: i64, parts: &mut Vec<i64>) {
        if self.done {
            return;
        }
        if rest == 0 {
            self.commit(t, parts);
            return;
        }
        if self.used + parts.len() >= self.ambient {
            return;
        }
        let mut c = ((rest as f64).sqrt() as i64 + 1).min(max);
        while c >= 1 {
            if c * c <= rest {
                parts.push(c);
                self.fresh_parts(t, rest - c * c, c, parts);
                parts.pop();
                if self.done {
                    return;
                }
            }
            c -= 1;
        }
    }

    fn commit(&mut self, t: usize, parts: &[i64]) {
        let used = self.used;
        let mut row = self.current.clone();
        for (k, &c) in parts.iter().enumerate() {
            row[used + k] = c;
        }
        let mut suffix = vec![0; self.ambient + 1];
        for k in (0..self.ambient).rev() {
            suffix[k] = suffix[k + 1] + row[k] * row[k];
        }
        let saved_current = std::mem::replace(&mut self.current, vec![0; self.ambient]);
        let saved_partial = self.partial.clone();
        self.rows[t] = row;
        self.suffix[t] = suffix;
        self.used = used + parts.len();
        self.place(t + 1);
        self.used = used;
        self.rows[t].iter_mut().for_each(|x| *x = 0);
        self.current = saved_current;
        self.partial = saved_partial;
    }
}
