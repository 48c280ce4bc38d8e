use crate::error::{Error, Result};

use super::Embedding;

/// Renders an embedding as `vertex_id: c1 c2 ... cN` lines.
pub fn render_fixture(emb: &Embedding) -> String {
    let mut out = String::new();
    for (i, row) in emb.vectors.iter().enumerate() {
        let coords: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{i}: {}\n", coords.join(" ")));
    }
    out
}

/// Parses the fixture format; blank lines and `#` comments are skipped.
/// Vertex ids must be `0, 1, 2, ...` in order.
pub fn parse_fixture(text: &str) -> Result<Embedding> {
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("fixture line {}: {msg}", lineno + 1));
        let (id, coords) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let id: usize = id.trim().parse().map_err(|_| err("bad vertex id"))?;
        if id != vectors.len() {
            return Err(err(&format!("expected vertex {}, found {id}", vectors.len())));
        }
        let row = coords
            .split_whitespace()
            .map(|c| c.parse::<i64>().map_err(|_| err(&format!("bad coordinate {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = vectors.first() {
            if first.len() != row.len() {
                return Err(err("rows have different lengths"));
            }
        }
        vectors.push(row);
    }
    let n = vectors.first().map_or(0, Vec::len);
    Embedding::new(n, vectors)
}
