//! Brute-force enumeration of embeddings with orbit partitioning, the
//! reference for the symmetry-reduced search.

use std::collections::HashMap;

use obstruct_core::lattice::{canonical_form, embed_search, Embedding, SearchMode, SearchStatus};
use obstruct_core::singtypes::Plumbing;

type Matrix = Vec<Vec<i64>>;

fn vectors_of_norm(n: usize, norm: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let b = (rest as f64).sqrt() as i64;
        for x in -b..=b {
            if x * x <= rest {
                cur.push(x);
                rec(n, rest - x * x, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, norm, &mut Vec::new(), &mut out);
    out
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Every Gram-exact embedding, no symmetry reduction.
fn all_embeddings(pl: &Plumbing, n: usize) -> Vec<Matrix> {
    let weights = pl.weights();
    let adj = pl.adjacency();
    let cands: Vec<Vec<Vec<i64>>> = weights.iter().map(|w| vectors_of_norm(n, -w)).collect();
    let mut out = Vec::new();
    let mut rows: Matrix = Vec::new();
    fn rec(
        v: usize,
        cands: &[Vec<Vec<i64>>],
        adj: &[Vec<bool>],
        rows: &mut Matrix,
        out: &mut Vec<Matrix>,
    ) {
        if v == cands.len() {
            out.push(rows.clone());
            return;
        }
        for c in &cands[v] {
            let ok = (0..v).all(|u| dot(&rows[u], c) == if adj[u][v] { -1 } else { 0 });
            if ok {
                rows.push(c.clone());
                rec(v + 1, cands, adj, rows, out);
                rows.pop();
            }
        }
    }
    rec(0, &cands, &adj, &mut rows, &mut out);
    out
}

/// Number of orbits under adjacent column swaps, a sign change of column 0
/// and chain flips.
fn orbit_count(pl: &Plumbing, sols: &[Matrix]) -> usize {
    let index: HashMap<&Matrix, usize> = sols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = sols.first().map_or(0, |m| m.first().map_or(0, Vec::len));
    let offs = pl.chain_offsets();
    let mut parent: Vec<usize> = (0..sols.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (i, m) in sols.iter().enumerate() {
        let mut images: Vec<Matrix> = Vec::new();
        for k in 0..n.saturating_sub(1) {
            images.push(m.iter().map(|r| {
                let mut r = r.clone();
                r.swap(k, k + 1);
                r
            }).collect());
        }
        if n > 0 {
            images.push(m.iter().map(|r| {
                let mut r = r.clone();
                r[0] = -r[0];
                r
            }).collect());
        }
        for (c, ch) in pl.chains().iter().enumerate() {
            let range = offs[c]..offs[c] + ch.len();
            images.push(m.iter().enumerate().map(|(v, r)| {
                if range.contains(&v) {
                    r.iter().map(|x| -x).collect()
                } else {
                    r.clone()
                }
            }).collect());
        }
        for img in images {
            let j = index[&img];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..sols.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Chains with weights <= -2, total weight >= `-budget`, at most `max_vertices`.
fn plumbings(budget: i64, max_vertices: usize) -> Vec<Plumbing> {
    // Chains up to reversal.
    let mut chains: Vec<Vec<i64>> = Vec::new();
    fn grow(cur: &mut Vec<i64>, rest: i64, max_len: usize, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            let rev: Vec<i64> = cur.iter().rev().copied().collect();
            if *cur <= rev {
                out.push(cur.clone());
            }
        }
        if cur.len() == max_len {
            return;
        }
        for w in 2..=rest {
            cur.push(-w);
            grow(cur, rest - w, max_len, out);
            cur.pop();
        }
    }
    grow(&mut Vec::new(), budget, max_vertices, &mut chains);
    chains.sort();
    // Multisets of chains (nondecreasing index).
    let mut out = Vec::new();
    fn pick(
        chains: &[Vec<i64>],
        start: usize,
        cur: &mut Vec<Vec<i64>>,
        rest: i64,
        verts: usize,
        max_vertices: usize,
        out: &mut Vec<Plumbing>,
    ) {
        if !cur.is_empty() {
            out.push(Plumbing::new(cur.clone()).unwrap());
        }
        for i in start..chains.len() {
            let w: i64 = -chains[i].iter().sum::<i64>();
            let l = chains[i].len();
            if w <= rest && verts + l <= max_vertices {
                cur.push(chains[i].clone());
                pick(chains, i, cur, rest - w, verts + l, max_vertices, out);
                cur.pop();
            }
        }
    }
    pick(&chains, 0, &mut Vec::new(), budget, 0, max_vertices, &mut out);
    out
}

/// Compares the search against brute force for every plumbing with total
/// weight at least `-budget`, at most `max_vertices` vertices, in every rank
/// from the vertex count up to `max_rank`. Returns (cases, nonempty cases).
pub fn compare(budget: i64, max_vertices: usize, max_rank: usize) -> (usize, usize) {
    let mut checked = 0;
    let mut nonempty = 0;
    for pl in plumbings(budget, max_vertices) {
        for n in pl.vertex_count()..=max_rank {
            let sols = all_embeddings(&pl, n);
            let expected = orbit_count(&pl, &sols);
            let got = embed_search(&pl, n, SearchMode::EnumerateClasses, u64::MAX);
            assert_eq!(got.status, SearchStatus::Complete);
            assert_eq!(got.classes.len(), expected, "plumbing {pl} in rank {n}");
            for c in &got.classes {
                c.verify(&pl).unwrap();
            }
            // Canonical forms separate the orbits: one form per orbit.
            let forms: std::collections::BTreeSet<_> = sols
                .iter()
                .map(|m| canonical_form(&Embedding::new(n, m.clone()).unwrap(), &pl))
                .collect();
            assert_eq!(forms.len(), expected, "canonical form vs orbits for {pl} in rank {n}");
            let got_forms: std::collections::BTreeSet<_> =
                got.classes.iter().map(|c| canonical_form(c, &pl)).collect();
            assert_eq!(got_forms, forms, "class representatives for {pl} in rank {n}");
            let exists = embed_search(&pl, n, SearchMode::Exists, u64::MAX);
            assert_eq!(exists.classes.len(), usize::from(expected > 0));
            checked += 1;
            nonempty += usize::from(expected > 0);
        }
    }
    (checked, nonempty)
}

