//! Parametric families of types `{(2,1),(3,2),(5,q3),(p4,q4)}`: short
//! continued fractions, the many-twos criterion, and the surviving family
//! `p4 = 204s^2 + 732s + 649`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gcd, is_perfect_square};
use crate::hjcf::{hj_expand, ContinuedFraction};
use crate::lattice::{embed_search, Embedding, SearchMode, SearchStatus, DEFAULT_BUDGET};
use crate::singtypes::{normalize, plumbing_of, Orientation, Plumbing, SingularityType};

/// Admissible values of `sum(m_i) - 3t` for the fourth word, by `q3`.
pub fn admissible_excess(q3: i128) -> Result<[i64; 2]> {
    match q3 {
        1 => Ok([0, 1]),
        2 => Ok([2, 3]),
        4 => Ok([5, 6]),
        _ => Err(Error::OutOfRange(format!("q3 = {q3}, expected 1, 2 or 4"))),
    }
}

/// Plumbing of `(2,1),(3,2),(5,q3)` followed by an arbitrary fourth word.
pub fn plumbing_with_word(q3: i128, word: &[i64]) -> Result<Plumbing> {
    let five = hj_expand(5, q3)?;
    Plumbing::from_words(&[&[2], &[2, 2], five.coefficients(), word])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthScanHit {
    pub word: ContinuedFraction,
    pub p4: i128,
    pub q4: i128,
    pub coprime_to_30: bool,
}

/// Every word of length at most 3 (up to reversal) with admissible excess
/// whose plumbing embeds in codimension one.
pub fn cf_length_le3_scan(q3: i128) -> Result<Vec<LengthScanHit>> {
    let excess = admissible_excess(q3)?;
    let mut hits = Vec::new();
    for t in 1..=3usize {
        let max_coef = 3 * t as i64 + excess[1];
        let mut word = vec![2i64; t];
        loop {
            let e = word.iter().sum::<i64>() - 3 * t as i64;
            let rev: Vec<i64> = word.iter().rev().copied().collect();
            if excess.contains(&e) && word <= rev {
                let pl = plumbing_with_word(q3, &word)?;
                let n = pl.vertex_count() + 1;
                let out = embed_search(&pl, n, SearchMode::Exists, DEFAULT_BUDGET);
                if out.status != SearchStatus::Complete {
                    return Err(Error::OutOfRange(format!("search budget exhausted on {word:?}")));
                }
                if !out.classes.is_empty() {
                    let cf = ContinuedFraction::new(word.clone())?;
                    let (p4, q4) = cf.eval()?;
                    hits.push(LengthScanHit {
                        word: cf,
                        p4,
                        q4,
                        coprime_to_30: gcd(p4, 30) == 1,
                    });
                }
            }
            // Odometer over coefficients 2..=max_coef.
            let Some(i) = (0..t).rev().find(|&i| word[i] < max_coef) else {
                break;
            };
            word[i] += 1;
            word[i + 1..].iter_mut().for_each(|x| *x = 2);
        }
    }
    Ok(hits)
}

/// A word written as `x_0, [2]^{i_1}, x_1, ..., [2]^{i_r}, x_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwosDecomposition {
    /// `x_0, ..., x_r`; the inner blocks must be nonempty.
    pub blocks: Vec<Vec<i64>>,
    /// `i_1, ..., i_r`, each at least 1.
    pub twos: Vec<usize>,
}

impl TwosDecomposition {
    /// Maximal runs of 2s as the `[2]^{i_j}` blocks. This maximizes
    /// `r - sum(length(x_i))` over all decompositions of the word.
    pub fn of_word(word: &[i64]) -> TwosDecomposition {
        let mut blocks = vec![Vec::new()];
        let mut twos = Vec::new();
        let mut i = 0;
        while i < word.len() {
            if word[i] == 2 {
                let start = i;
                while i < word.len() && word[i] == 2 {
                    i += 1;
                }
                twos.push(i - start);
                blocks.push(Vec::new());
            } else {
                blocks.last_mut().expect("nonempty").push(word[i]);
                i += 1;
            }
        }
        TwosDecomposition { blocks, twos }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.twos.len();
        let bad = |m: String| Err(Error::MalformedDecomposition(m));
        if self.blocks.len() != r + 1 {
            return bad(format!("{} blocks for {r} runs of twos", self.blocks.len()));
        }
        if self.twos.contains(&0) {
            return bad("empty run of twos".into());
        }
        if r >= 2 && self.blocks[1..r].iter().any(Vec::is_empty) {
            return bad("empty inner block".into());
        }
        if self.blocks.iter().flatten().any(|&a| a < 2) {
            return bad("coefficient below 2".into());
        }
        Ok(())
    }

    pub fn word(&self) -> Vec<i64> {
        let mut out = self.blocks[0].clone();
        for (i, &n) in self.twos.iter().enumerate() {
            out.extend(std::iter::repeat_n(2, n));
            out.extend(&self.blocks[i + 1]);
        }
        out
    }
}

/// Whether the many-twos inequality `sum length(x_i) < r + c(q3)` holds,
/// with `c = 0, 1, 2` for `q3 = 1, 2, 4`. When it does, the type admits no
/// codimension one embedding.
pub fn many_twos_check(q3: i128, dec: &TwosDecomposition) -> Result<bool> {
    dec.validate()?;
    let slack = match q3 {
        1 => 0,
        2 => 1,
        4 => 2,
        _ => return Err(Error::OutOfRange(format!("q3 = {q3}, expected 1, 2 or 4"))),
    };
    let lengths: usize = dec.blocks.iter().map(Vec::len).sum();
    Ok(lengths < dec.twos.len() + slack)
}

/// The criterion on the best decomposition of a word.
pub fn many_twos_word(q3: i128, word: &[i64]) -> Result<bool> {
    many_twos_check(q3, &TwosDecomposition::of_word(word))
}

fn check_s(s: i128) -> Result<()> {
    if s < 0 || s.rem_euclid(5) == 1 {
        return Err(Error::OutOfRange(format!("s = {s}: need s >= 0, s != 1 mod 5")));
    }
    Ok(())
}

/// `(p4, q4) = (204s^2 + 732s + 649, 12(17s^2 + 44s + 20))`.
pub fn mysterious_pair(s: i128) -> Result<(i128, i128)> {
    check_s(s)?;
    let p = s
        .checked_mul(s)
        .and_then(|s2| s2.checked_mul(204))
        .and_then(|x| x.checked_add(732 * s + 649))
        .ok_or(Error::Overflow("mysterious family"))?;
    let q = s
        .checked_mul(s)
        .and_then(|s2| s2.checked_mul(17))
        .and_then(|x| x.checked_add(44 * s + 20))
        .and_then(|x| x.checked_mul(12))
        .ok_or(Error::Overflow("mysterious family"))?;
    Ok((p, q))
}

/// Raw pairs of the family member, before canonicalization.
pub fn mysterious_raw(s: i128) -> Result<[(i128, i128); 4]> {
    let (p, q) = mysterious_pair(s)?;
    Ok([(2, 1), (3, 2), (5, 1), (p, q)])
}

/// The canonical type of the family member at `s`.
pub fn mysterious_family(s: i128) -> Result<SingularityType> {
    normalize(mysterious_raw(s)?)
}

/// The parameter `s` when `ty` is a member of the surviving family.
pub fn mysterious_parameter(ty: &SingularityType) -> Option<i128> {
    // 204s^2 + 732s + 649 = p4  <=>  s = (sqrt(816 p4 + 6240) - 732) / 408.
    let disc = ty.pairs()[3].p.checked_mul(816)?.checked_add(6240)?;
    let r = is_perfect_square(disc)?;
    if r < 732 || (r - 732) % 408 != 0 {
        return None;
    }
    let s = (r - 732) / 408;
    (mysterious_family(s).ok()? == *ty).then_some(s)
}

/// The values `s = 5k + 3` on which `D` is a square, in the orbit
/// `x = 60k + 210` with `x_0 = 570, x_1 = 630, x_{n+2} = 62 x_{n+1} - x_n`.
pub fn mysterious_sequence(n_max: usize) -> Vec<i128> {
    let (mut a, mut b) = (570i128, 630i128);
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        let k = (a - 210) / 60;
        out.push(5 * k + 3);
        let Some(next) = b.checked_mul(62).and_then(|x| x.checked_sub(a)) else {
            break;
        };
        (a, b) = (b, next);
    }
    out
}

/// The known embedding of the family member at `s` into rank `s + 12`,
/// returned with the plumbing of the canonical type (vertex order matches).
pub fn mysterious_embedding(s: i128) -> Result<(Plumbing, Embedding)> {
    check_s(s)?;
    let su = usize::try_from(s).map_err(|_| Error::OutOfRange(format!("s = {s}")))?;
    let n = su + 12;
    // Coordinates are 1-based in the construction below.
    let vec_of = |terms: &[(usize, i64)]| {
        let mut v = vec![0i64; n];
        for &(i, c) in terms {
            v[i - 1] += c;
        }
        v
    };
    let mut rows = vec![
        vec_of(&[(1, 1), (2, -1)]),
        vec_of(&[(3, -1), (4, 1)]),
        vec_of(&[(3, 1), (5, 1)]),
        vec_of(&[(1, -1), (2, -1), (8, -1), (9, 1), (10, -1)]),
    ];
    // Fourth chain, word [[2]^s, 3, 4, 2, 3+s, 3, 2, 4].
    let mut chain = Vec::with_capacity(su + 7);
    for j in 0..su {
        let a = 11 + su - j;
        chain.push(vec_of(&[(a, 1), (a + 1, -1)]));
    }
    chain.push(vec_of(&[(6, 1), (7, 1), (12, -1)]));
    chain.push(vec_of(&[(3, 1), (4, 1), (5, -1), (6, -1)]));
    chain.push(vec_of(&[(6, 1), (7, -1)]));
    let mut pivot = vec_of(&[(7, 1), (11, -1)]);
    for i in 12..=12 + su {
        pivot[i - 1] += 1;
    }
    chain.push(pivot);
    chain.push(vec_of(&[(8, -1), (10, 1), (11, 1)]));
    chain.push(vec_of(&[(8, 1), (9, 1)]));
    chain.push(vec_of(&[(1, 1), (2, 1), (8, -1), (10, -1)]));

    let ty = mysterious_family(s)?;
    let pl = plumbing_of(&ty, Orientation::Standard);
    let norms: Vec<i64> = chain.iter().map(|r| -r.iter().map(|x| x * x).sum::<i64>()).collect();
    if pl.chains()[3] != norms {
        chain.reverse();
    }
    rows.extend(chain);
    Ok((pl, Embedding::new(n, rows)?))
}

/// Complement generator of [`mysterious_embedding`] as given by the closed
/// formula (before normalization).
pub fn mysterious_complement(s: i128) -> Result<Vec<i128>> {
    check_s(s)?;
    let u = 6 * s + 9;
    let mut a = vec![-u, -u, 10, 10, -10, 30, 30, 4 * u, -4 * u, -6 * u, 10 * u, 60];
    a.extend(std::iter::repeat_n(60, s as usize));
    Ok(a)
}
