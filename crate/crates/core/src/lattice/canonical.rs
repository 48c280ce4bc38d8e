use crate::singtypes::Plumbing;

use super::Embedding;

/// Columns of an embedding after the normalization below; equal exactly for
/// equivalent embeddings.
pub type CanonicalForm = Vec<Vec<i64>>;

/// Canonical form under signed column permutations and chain flips.
///
/// For each of the `2^chains` chain-sign patterns every column is scaled so
/// that its first nonzero entry is positive and the columns are sorted in
/// descending order; the smallest resulting column list is the form. For a
/// fixed pattern this is a complete invariant of the signed-permutation
/// orbit, and chain flips commute with column operations, so the minimum is a
/// complete invariant of the full group.
pub fn canonical_form(emb: &Embedding, pl: &Plumbing) -> CanonicalForm {
    let n = emb.vectors.len();
    let chain_of: Vec<usize> = pl.vertex_positions().iter().map(|&(c, _)| c).collect();
    let chains = pl.chains().len();
    let mut best: Option<CanonicalForm> = None;
    for mask in 0u64..(1u64 << chains) {
        let sign = |v: usize| if mask >> chain_of[v] & 1 == 1 { -1 } else { 1 };
        let mut cols: Vec<Vec<i64>> = (0..emb.ambient_rank)
            .map(|k| (0..n).map(|v| sign(v) * emb.vectors[v][k]).collect())
            .collect();
        for col in &mut cols {
            if col.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                col.iter_mut().for_each(|x| *x = -*x);
            }
        }
        cols.sort_unstable_by(|a, b| b.cmp(a));
        if best.as_ref().is_none_or(|b| cols < *b) {
            best = Some(cols);
        }
    }
    best.unwrap_or_default()
}

/// The embedding whose columns are the canonical form.
pub(crate) fn representative(form: &CanonicalForm, n_vertices: usize) -> Embedding {
    let ambient_rank = form.len();
    let vectors = (0..n_vertices)
        .map(|v| form.iter().map(|col| col[v]).collect())
        .collect();
    Embedding {
        ambient_rank,
        vectors,
    }
}
