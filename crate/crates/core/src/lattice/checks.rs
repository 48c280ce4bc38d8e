use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gcd, Rational};
use crate::singtypes::Plumbing;

use super::{pairing, Embedding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementResult {
    /// Primitive generator of the orthogonal complement.
    pub generator: Vec<i128>,
    /// `<w, w>`.
    pub norm: i128,
    /// `norm == -P`.
    pub pass: bool,
}

/// Orthogonal complement of a corank-one embedding, computed as the integer
/// kernel of the coordinate matrix by exact rational row reduction.
pub fn complement_check(emb: &Embedding, order_product: i128) -> Result<ComplementResult> {
    let n = emb.vectors.len();
    let big_n = emb.ambient_rank;
    let mismatch = |rank| Error::CorankMismatch {
        ambient: big_n,
        vectors: n,
        rank,
    };
    if big_n != n + 1 {
        return Err(mismatch(n));
    }
    let mut m: Vec<Vec<Rational>> = emb
        .vectors
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_int(x as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..big_n {
        let Some(p) = (row..n).find(|&r| m[r][col] != Rational::ZERO) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::ONE.checked_div(m[row][col])?;
        for x in &mut m[row][col..] {
            *x = x.checked_mul(inv)?;
        }
        let pivot = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && line[col] != Rational::ZERO {
                let f = line[col];
                for (x, &y) in line[col..].iter_mut().zip(&pivot[col..]) {
                    *x = x.checked_sub(f.checked_mul(y)?)?;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    if pivots.len() != n {
        return Err(mismatch(pivots.len()));
    }
    let free = (0..big_n)
        .find(|c| !pivots.contains(c))
        .expect("one free column");
    let mut kernel = vec![Rational::ZERO; big_n];
    kernel[free] = Rational::ONE;
    for (r, &c) in pivots.iter().enumerate() {
        kernel[c] = m[r][free].checked_neg()?;
    }
    let lcm = kernel.iter().try_fold(1i128, |acc, x| {
        let d = x.denom();
        (acc / gcd(acc, d))
            .checked_mul(d)
            .ok_or(Error::Overflow("complement denominators"))
    })?;
    let mut w: Vec<i128> = kernel
        .iter()
        .map(|x| x.numer() * (lcm / x.denom()))
        .collect();
    let g = w.iter().fold(0, |acc, &x| gcd(acc, x));
    w.iter_mut().for_each(|x| *x /= g);
    // Fix the sign: first nonzero coordinate positive.
    if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let norm = -w
        .iter()
        .try_fold(0i128, |acc, &x| x.checked_mul(x).and_then(|y| acc.checked_add(y)))
        .ok_or(Error::Overflow("complement norm"))?;
    Ok(ComplementResult {
        generator: w,
        norm,
        pass: norm == -order_product,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicSubset {
    /// Pairwise non-adjacent vertices whose sum is characteristic.
    pub subset: Vec<usize>,
    /// `<sum, sum>`.
    pub square: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmResult {
    /// Signature of the ambient lattice, `-N`.
    pub signature: i64,
    /// Characteristic subsets whose square is `signature` mod 16.
    pub consistent: Vec<CharacteristicSubset>,
    pub violations: Vec<CharacteristicSubset>,
    pub pass: bool,
    /// False if the solution space was too large to list completely.
    pub exhaustive: bool,
}

/// Largest number of GF(2) solutions enumerated.
const KM_SOLUTION_CAP: u32 = 22;

/// Kervaire-Milnor condition: every set of pairwise disjoint vertex spheres
/// whose classes sum to a characteristic vector must have square congruent
/// to the signature `-N` mod 16.
pub fn km_check(emb: &Embedding, pl: &Plumbing) -> KmResult {
    let n = emb.vectors.len();
    let big_n = emb.ambient_rank;
    // One equation per coordinate: sum_v x_v * coord_k(v) = 1 over GF(2).
    // Bits 0..n are the unknowns, bit n is the right-hand side.
    let width = (n + 1).div_ceil(64);
    let mut eqs: Vec<Vec<u64>> = (0..big_n)
        .map(|k| {
            let mut row = vec![0u64; width];
            for v in 0..n {
                if emb.vectors[v][k] & 1 != 0 {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
            row[n / 64] |= 1 << (n % 64);
            row
        })
        .collect();
    let bit = |row: &[u64], i: usize| row[i / 64] >> (i % 64) & 1 == 1;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..eqs.len()).find(|&i| bit(&eqs[i], c)) else {
            continue;
        };
        eqs.swap(r, p);
        for i in 0..eqs.len() {
            if i != r && bit(&eqs[i], c) {
                let (a, b) = if i < r {
                    let (lo, hi) = eqs.split_at_mut(r);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = eqs.split_at_mut(i);
                    (&mut hi[0], &lo[r])
                };
                a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let signature = -(big_n as i64);
    let mut result = KmResult {
        signature,
        consistent: Vec::new(),
        violations: Vec::new(),
        pass: true,
        exhaustive: true,
    };
    // Inconsistent system: no characteristic subset at all.
    if eqs[r..].iter().any(|row| bit(row, n)) {
        return result;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let dim = free.len() as u32;
    if dim > KM_SOLUTION_CAP {
        result.exhaustive = false;
    }
    let adj = pl.adjacency();
    for mask in 0u64..(1u64 << dim.min(KM_SOLUTION_CAP)) {
        let mut x = vec![false; n];
        for (i, &f) in free.iter().enumerate() {
            x[f] = mask >> i & 1 == 1;
        }
        for (i, &c) in pivot_cols.iter().enumerate() {
            let row = &eqs[i];
            let mut val = bit(row, n);
            for &f in &free {
                if x[f] && bit(row, f) {
                    val = !val;
                }
            }
            x[c] = val;
        }
        let subset: Vec<usize> = (0..n).filter(|&v| x[v]).collect();
        let disjoint = subset
            .iter()
            .enumerate()
            .all(|(i, &u)| subset[i + 1..].iter().all(|&v| !adj[u][v]));
        if !disjoint {
            continue;
        }
        let mut sum = vec![0i64; big_n];
        for &v in &subset {
            sum.iter_mut().zip(&emb.vectors[v]).for_each(|(s, c)| *s += c);
        }
        debug_assert!(sum.iter().all(|c| c & 1 != 0));
        let square = pairing(&sum, &sum);
        let entry = CharacteristicSubset { subset, square };
        if (square - signature).rem_euclid(16) == 0 {
            result.consistent.push(entry);
        } else {
            result.violations.push(entry);
        }
    }
    result.pass = result.violations.is_empty();
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4() -> (Plumbing, Embedding) {
        let pl = Plumbing::new(vec![vec![-2], vec![-2, -2], vec![-6, -2], vec![-13]]).unwrap();
        let emb = Embedding::new(
            7,
            vec![
                vec![1, -1, 0, 0, 0, 0, 0],
                vec![0, 0, 1, -1, 0, 0, 0],
                vec![0, 0, 0, 1, -1, 0, 0],
                vec![1, 1, 1, 1, 1, -1, 0],
                vec![0, 0, 0, 0, 0, 1, -1],
                vec![2, 2, -1, -1, -1, 1, 1],
            ],
        )
        .unwrap();
        (pl, emb)
    }

    #[test]
    fn km_fig4() {
        let (pl, emb) = fig4();
        let km = km_check(&emb, &pl);
        assert!(!km.pass);
        assert!(km
            .violations
            .iter()
            .any(|v| v.subset == vec![0, 5] && v.square == -15));
        assert_eq!(km.signature, -7);
    }

    #[test]
    fn complement_fig4() {
        let (_, emb) = fig4();
        let c = complement_check(&emb, 2 * 3 * 11 * 13).unwrap();
        for v in &emb.vectors {
            let dot: i128 = v.iter().zip(&c.generator).map(|(&a, &b)| a as i128 * b).sum();
            assert_eq!(dot, 0);
        }
        assert_eq!(c.generator.iter().fold(0, |a, &b| gcd(a, b)), 1);
    }

    #[test]
    fn complement_trivial() {
        let emb = Embedding::new(2, vec![vec![1, -1]]).unwrap();
        let c = complement_check(&emb, 2).unwrap();
        assert_eq!(c.generator, vec![1, 1]);
        assert_eq!(c.norm, -2);
        assert!(c.pass);
        assert!(!complement_check(&emb, 3).unwrap().pass);
        let bad = Embedding::new(3, vec![vec![1, -1, 0]]).unwrap();
        assert!(matches!(
            complement_check(&bad, 2),
            Err(Error::CorankMismatch { .. })
        ));
    }
}
