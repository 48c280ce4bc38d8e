//! Singularity types: four cyclic quotient singularities `(p_i, q_i)` with
//! pairwise coprime orders, their canonical form, enumeration of the
//! candidate families and the associated linear plumbings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{ext_gcd, factorize, gcd, mod_inverse};
use crate::hjcf::{dual_cf, hj_expand};

/// A lens space `L(p, q)` with `p > 1`, `0 < q < p`, `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensPair {
    pub p: i128,
    pub q: i128,
}

impl LensPair {
    pub fn new(p: i128, q: i128) -> Result<Self> {
        if p < 2 || q <= 0 || q >= p || gcd(p, q) != 1 {
            return Err(Error::InvalidType(format!("({p},{q}) is not a lens pair")));
        }
        Ok(LensPair { p, q })
    }

    pub fn q_inverse(&self) -> i128 {
        if self.p == 1 {
            0
        } else {
            mod_inverse(self.q, self.p).expect("lens pair is coprime")
        }
    }

    /// The representative `min(q, q^{-1} mod p)`.
    pub fn canonical(&self) -> LensPair {
        LensPair {
            p: self.p,
            q: self.q.min(self.q_inverse()),
        }
    }
}

impl fmt::Display for LensPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Four lens pairs with pairwise coprime orders, ascending in `p`, each `q`
/// canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularityType {
    pairs: [LensPair; 4],
}

impl SingularityType {
    pub fn pairs(&self) -> &[LensPair; 4] {
        &self.pairs
    }

    /// `P = p1 p2 p3 p4`.
    pub fn order_product(&self) -> i128 {
        self.pairs.iter().map(|x| x.p).product()
    }

    pub fn raw(&self) -> [(i128, i128); 4] {
        self.pairs.map(|x| (x.p, x.q))
    }

    /// Table-style rendering, e.g. `(2,1), (3,2), (5,1), (9409,5519)`.
    pub fn table_row(&self) -> String {
        self.pairs
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Canonical type from raw pairs: validates coprimality, replaces every `q`
/// by `min(q, q^{-1})` and sorts by `p`.
pub fn normalize(raw: [(i128, i128); 4]) -> Result<SingularityType> {
    let mut pairs = [LensPair { p: 0, q: 0 }; 4];
    for (slot, &(p, q)) in pairs.iter_mut().zip(raw.iter()) {
        *slot = LensPair::new(p, q)?.canonical();
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if gcd(pairs[i].p, pairs[j].p) != 1 {
                return Err(Error::InvalidType(format!(
                    "orders {} and {} are not coprime",
                    pairs[i].p, pairs[j].p
                )));
            }
        }
    }
    pairs.sort();
    Ok(SingularityType { pairs })
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}/{}", x.p, x.q)?;
        }
        Ok(())
    }
}

impl FromStr for SingularityType {
    type Err = Error;

    /// Parses `"2/1,3/2,5/1,9409/5519"`; whitespace around items is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four p/q pairs separated by commas, got {:?}",
                s
            )));
        }
        let mut raw = [(0i128, 0i128); 4];
        for (slot, part) in raw.iter_mut().zip(&parts) {
            let (p, q) = part
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("pair {part:?} is not of the form p/q")))?;
            let p = p.trim().parse().map_err(|_| Error::Parse(format!("bad integer {p:?}")))?;
            let q = q.trim().parse().map_err(|_| Error::Parse(format!("bad integer {q:?}")))?;
            *slot = (p, q);
        }
        normalize(raw)
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SingularityType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[(i128, i128); 4]>::deserialize(d)?;
        normalize(raw).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Canonical representatives `q` of the lens spaces `L(p, q)`, ascending.
pub fn q_classes(p: i128) -> Vec<i128> {
    (1..p)
        .filter(|&q| {
            let (g, x, _) = ext_gcd(q, p);
            g == 1 && q <= x.rem_euclid(p)
        })
        .collect()
}

/// The three residues of `q3` considered for orders `(2, 3, 5, p4)`.
pub const CASE1_Q3: [i128; 3] = [1, 2, 4];

/// Options for the `(2, 3, 5, p4)` enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case1Options {
    /// Values of `q2`; the default `[2]` matches the published counts.
    pub q2_values: Vec<i128>,
    pub q3_values: Vec<i128>,
}

impl Default for Case1Options {
    fn default() -> Self {
        Case1Options {
            q2_values: vec![2],
            q3_values: CASE1_Q3.to_vec(),
        }
    }
}

/// Orders `p4` in `[p4_min, p4_max]` coprime to 30, ascending.
pub fn case1_orders(p4_min: i128, p4_max: i128) -> impl Iterator<Item = i128> {
    (p4_min.max(7)..=p4_max).filter(|p| gcd(*p, 30) == 1)
}

/// All types of one `p4` shard in stream order (`q2`, `q3`, `q4` ascending).
pub fn case1_shard(p4: i128, opts: &Case1Options) -> Vec<SingularityType> {
    let q4s = q_classes(p4);
    let mut out = Vec::with_capacity(q4s.len() * opts.q3_values.len() * opts.q2_values.len());
    for &q2 in &opts.q2_values {
        for &q3 in &opts.q3_values {
            for &q4 in &q4s {
                out.push(SingularityType {
                    pairs: [
                        LensPair { p: 2, q: 1 },
                        LensPair { p: 3, q: q2 },
                        LensPair { p: 5, q: q3 },
                        LensPair { p: p4, q: q4 },
                    ],
                });
            }
        }
    }
    out
}

/// Types `{(2,1),(3,2),(5,q3),(p4,q4)}` with `gcd(p4,30) = 1`, ordered by
/// `(p4, q3, q4)`.
pub fn enumerate_case1(p4_min: i128, p4_max: i128) -> impl Iterator<Item = SingularityType> {
    enumerate_case1_with(p4_min, p4_max, Case1Options::default())
}

pub fn enumerate_case1_with(
    p4_min: i128,
    p4_max: i128,
    opts: Case1Options,
) -> impl Iterator<Item = SingularityType> {
    case1_orders(p4_min, p4_max).flat_map(move |p4| case1_shard(p4, &opts))
}

/// Number of types `enumerate_case1(p4_min, p4_max)` yields, from
/// `(phi(p4) + 2^omega(p4)) / 2` per `q3`.
pub fn count_case1(p4_min: i128, p4_max: i128) -> Result<u128> {
    let mut total = 0u128;
    for p4 in case1_orders(p4_min, p4_max) {
        total += classes_count(p4)?;
    }
    Ok(total * CASE1_Q3.len() as u128)
}

/// Number of lens spaces `L(p, q)` up to `q ~ q^{-1}` for odd `p`.
pub fn classes_count(p: i128) -> Result<u128> {
    let f = factorize(p as u64)?;
    Ok(((f.phi() + f.square_roots_of_unity()) / 2) as u128)
}

/// Fourth orders of the `(2, 3, 7, n)` case.
pub const CASE2_ORDERS: [i128; 10] = [11, 13, 17, 19, 23, 25, 29, 31, 37, 41];

/// All canonical types with orders `(2,3,7,n)`, `n` in [`CASE2_ORDERS`].
pub fn enumerate_case2() -> Vec<SingularityType> {
    let mut out = Vec::new();
    for n in CASE2_ORDERS {
        push_product(&mut out, [2, 3, 7, n]);
    }
    out
}

/// All canonical types with orders `(2,3,11,13)`.
pub fn enumerate_case3() -> Vec<SingularityType> {
    let mut out = Vec::new();
    push_product(&mut out, [2, 3, 11, 13]);
    out
}

/// Case (2) followed by case (3): 1092 types.
pub fn enumerate_cases23() -> Vec<SingularityType> {
    let mut out = enumerate_case2();
    out.extend(enumerate_case3());
    out
}

fn push_product(out: &mut Vec<SingularityType>, orders: [i128; 4]) {
    let classes = orders.map(q_classes);
    for &a in &classes[0] {
        for &b in &classes[1] {
            for &c in &classes[2] {
                for &d in &classes[3] {
                    let pairs = [a, b, c, d]
                        .iter()
                        .zip(orders)
                        .map(|(&q, p)| LensPair { p, q })
                        .collect::<Vec<_>>();
                    out.push(SingularityType {
                        pairs: pairs.try_into().expect("four pairs"),
                    });
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Plumbings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Chains from `p/q`.
    Standard,
    /// Chains from `p/(p-q)`.
    Reversed,
}

/// A disjoint union of weighted linear chains. Vertices are numbered
/// chain by chain, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Plumbing {
    chains: Vec<Vec<i64>>,
}

impl Plumbing {
    /// Builds a plumbing from chains of weights, each `<= -2`.
    pub fn new(chains: Vec<Vec<i64>>) -> Result<Self> {
        for c in &chains {
            if c.is_empty() {
                return Err(Error::InvalidArgs("empty chain".into()));
            }
            if let Some(w) = c.iter().find(|&&w| w > -2) {
                return Err(Error::InvalidArgs(format!("vertex weight {w} above -2")));
            }
        }
        Ok(Plumbing { chains })
    }

    /// Chains from continued fraction words (weights are the negated words).
    pub fn from_words(words: &[&[i64]]) -> Result<Self> {
        Plumbing::new(
            words
                .iter()
                .map(|w| w.iter().map(|a| -a).collect())
                .collect(),
        )
    }

    pub fn chains(&self) -> &[Vec<i64>] {
        &self.chains
    }

    pub fn vertex_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    /// Weights in global vertex order.
    pub fn weights(&self) -> Vec<i64> {
        self.chains.iter().flatten().copied().collect()
    }

    /// `(chain index, position in chain)` for each global vertex.
    pub fn vertex_positions(&self) -> Vec<(usize, usize)> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| (0..ch.len()).map(move |i| (c, i)))
            .collect()
    }

    /// Global index of the first vertex of each chain.
    pub fn chain_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.chains.len());
        let mut acc = 0;
        for c in &self.chains {
            offs.push(acc);
            acc += c.len();
        }
        offs
    }

    /// Whether global vertices `u` and `v` are joined by an edge.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let pos = self.vertex_positions();
        let (cu, iu) = pos[u];
        let (cv, iv) = pos[v];
        cu == cv && iu.abs_diff(iv) == 1
    }

    /// Adjacency matrix in global vertex order.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let pos = self.vertex_positions();
        let mut adj = vec![vec![false; n]; n];
        for u in 0..n {
            for v in 0..n {
                let ((cu, iu), (cv, iv)) = (pos[u], pos[v]);
                adj[u][v] = cu == cv && iu.abs_diff(iv) == 1;
            }
        }
        adj
    }

    pub fn weight_sum(&self) -> i64 {
        self.chains.iter().flatten().sum()
    }
}

impl fmt::Display for Plumbing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chains
            .iter()
            .map(|c| {
                let w: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", w.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The boundary-sum plumbing of a type: one chain per pair.
pub fn plumbing_of(ty: &SingularityType, orientation: Orientation) -> Plumbing {
    let chains = ty
        .pairs
        .iter()
        .map(|x| {
            let cf = match orientation {
                Orientation::Standard => hj_expand(x.p, x.q),
                Orientation::Reversed => dual_cf(x.p, x.q),
            }
            .expect("lens pair is valid");
            cf.coefficients().iter().map(|a| -a).collect()
        })
        .collect();
    Plumbing { chains }
}
