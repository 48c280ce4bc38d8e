//! Hirzebruch-Jung continued fractions `[a1, ..., al] = a1 - 1/(a2 - 1/(...))`
//! with every `ai >= 2`, their duals, and parametric families of words of
//! the shape `[head, 2^(k+offset), middle, pivot+k, tail]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gcd, is_perfect_square, mod_inverse, Rational};

/// A Hirzebruch-Jung continued fraction; all coefficients are at least 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if let Some(bad) = coefficients.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidArgs(format!(
                "continued fraction coefficient {bad} is below 2"
            )));
        }
        Ok(ContinuedFraction(coefficients))
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> ContinuedFraction {
        ContinuedFraction(self.0.iter().rev().copied().collect())
    }

    /// `(p, q)` with `p/q` the value; see [`hj_eval`].
    pub fn eval(&self) -> Result<(i128, i128)> {
        hj_eval(self)
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

fn check_pair(p: i128, q: i128) -> Result<()> {
    if p > q && q > 0 && gcd(p, q) == 1 {
        Ok(())
    } else {
        Err(Error::InvalidPair { p, q })
    }
}

/// Expansion of `p/q` (`p > q > 0` coprime): `a = ceil(p/q)`, continue with
/// `(q, a*q - p)` until the remainder vanishes.
pub fn hj_expand(p: i128, q: i128) -> Result<ContinuedFraction> {
    check_pair(p, q)?;
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let a = (p + q - 1) / q;
        out.push(a as i64);
        (p, q) = (q, a * q - p);
    }
    Ok(ContinuedFraction(out))
}

/// Length and coefficient sum of the expansion of `p/q`, without allocating.
pub fn hj_length_and_sum(p: i128, q: i128) -> (usize, i128) {
    let (mut p, mut q) = (p, q);
    let (mut len, mut sum) = (0usize, 0i128);
    while q != 0 {
        let a = (p + q - 1) / q;
        len += 1;
        sum += a;
        (p, q) = (q, a * q - p);
    }
    (len, sum)
}

/// Value of a continued fraction as a coprime pair `(p, q)`; the empty word
/// evaluates to `(1, 0)`.
pub fn hj_eval(cf: &ContinuedFraction) -> Result<(i128, i128)> {
    eval_word(cf.coefficients())
}

/// Evaluates `[a1, ..., al]` for arbitrary integer coefficients (used for
/// ratio predictions where a coefficient may drop to 1).
pub(crate) fn eval_word(word: &[i64]) -> Result<(i128, i128)> {
    let (mut num, mut den) = (1i128, 0i128);
    for &a in word.iter().rev() {
        let next = (a as i128)
            .checked_mul(num)
            .and_then(|x| x.checked_sub(den))
            .ok_or(Error::Overflow("continued fraction evaluation"))?;
        (num, den) = (next, num);
    }
    Ok((num, den))
}

/// Expansion of `p/(p-q)`, the dual of `p/q`.
pub fn dual_cf(p: i128, q: i128) -> Result<ContinuedFraction> {
    check_pair(p, q)?;
    hj_expand(p, p - q)
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// Words `[head, 2^(k + twos_offset), middle, pivot_base + k, tail]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPattern {
    pub head: Vec<i64>,
    pub middle: Vec<i64>,
    pub pivot_base: i64,
    pub tail: Vec<i64>,
    pub twos_offset: i64,
}

impl FamilyPattern {
    pub fn new(
        head: Vec<i64>,
        middle: Vec<i64>,
        pivot_base: i64,
        tail: Vec<i64>,
        twos_offset: i64,
    ) -> Result<Self> {
        for &a in head.iter().chain(&middle).chain(&tail) {
            if a < 2 {
                return Err(Error::InvalidArgs(format!("pattern coefficient {a} below 2")));
            }
        }
        Ok(FamilyPattern {
            head,
            middle,
            pivot_base,
            tail,
            twos_offset,
        })
    }

    /// Smallest `k` for which the pattern instantiates.
    pub fn min_k(&self) -> i64 {
        (-self.twos_offset).max(2 - self.pivot_base)
    }

    pub fn instantiate(&self, k: i64) -> Result<ContinuedFraction> {
        instantiate_family(self, k)
    }
}

impl fmt::Display for FamilyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.head.iter().map(|a| a.to_string()).collect();
        parts.push(match self.twos_offset {
            0 => "[2]^k".to_string(),
            o if o > 0 => format!("[2]^(k+{o})"),
            o => format!("[2]^(k-{})", -o),
        });
        parts.extend(self.middle.iter().map(|a| a.to_string()));
        parts.push(format!("{}+k", self.pivot_base));
        parts.extend(self.tail.iter().map(|a| a.to_string()));
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parses the [`Display`](fmt::Display) form, e.g. `[[2]^k,3,4,2,3+k,3,2,4]`.
/// Outer brackets are optional.
impl FromStr for FamilyPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("pattern {s:?}: {msg}"));
        let mut body = s.trim();
        if body.starts_with('[') && body.ends_with(']') && !body.ends_with("[2]") {
            body = &body[1..body.len() - 1];
        }
        let (mut head, mut middle, mut tail) = (Vec::new(), Vec::new(), Vec::new());
        let mut offset = None;
        let mut pivot = None;
        for tok in body.split(',').map(|t| t.replace(' ', "")) {
            if let Some(exp) = tok.strip_prefix("[2]^") {
                if offset.is_some() || pivot.is_some() {
                    return Err(bad("the block of twos must come once, before the pivot"));
                }
                let exp = exp.trim_start_matches('(').trim_end_matches(')');
                let rest = exp.strip_prefix('k').ok_or_else(|| bad("exponent must start with k"))?;
                offset = Some(if rest.is_empty() {
                    0
                } else {
                    rest.trim_start_matches('+').parse::<i64>().map_err(|_| bad("bad exponent"))?
                });
            } else if let Some(base) = tok.strip_suffix("+k") {
                if offset.is_none() || pivot.is_some() {
                    return Err(bad("the pivot must come once, after the block of twos"));
                }
                pivot = Some(base.parse::<i64>().map_err(|_| bad("bad pivot"))?);
            } else {
                let a: i64 = tok.parse().map_err(|_| bad(&format!("bad coefficient {tok:?}")))?;
                match (offset, pivot) {
                    (None, _) => head.push(a),
                    (Some(_), None) => middle.push(a),
                    _ => tail.push(a),
                }
            }
        }
        let offset = offset.ok_or_else(|| bad("missing block [2]^k"))?;
        let pivot = pivot.ok_or_else(|| bad("missing pivot a+k"))?;
        FamilyPattern::new(head, middle, pivot, tail, offset)
    }
}

/// The coefficient word of `pat` at parameter `k`.
pub fn instantiate_family(pat: &FamilyPattern, k: i64) -> Result<ContinuedFraction> {
    let twos = k + pat.twos_offset;
    let pivot = pat.pivot_base + k;
    if twos < 0 || pivot < 2 {
        return Err(Error::OutOfRange(format!(
            "k = {k} gives {twos} leading twos and pivot {pivot}"
        )));
    }
    let mut word = pat.head.clone();
    word.extend(std::iter::repeat_n(2, twos as usize));
    word.extend(&pat.middle);
    word.push(pivot);
    word.extend(&pat.tail);
    Ok(ContinuedFraction(word))
}

/// `a k^2 + b k + c` with rational coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Quadratic {
    pub fn eval(&self, k: i128) -> Result<Rational> {
        let kr = Rational::from_int(k);
        self.a
            .checked_mul(kr)?
            .checked_add(self.b)?
            .checked_mul(kr)?
            .checked_add(self.c)
    }

    /// Exact interpolation through three points with distinct abscissae.
    pub fn through(points: [(i128, i128); 3]) -> Result<Quadratic> {
        let [(x0, y0), (x1, y1), (x2, y2)] = points;
        if x0 == x1 || x1 == x2 || x0 == x2 {
            return Err(Error::InvalidArgs("interpolation nodes must be distinct".into()));
        }
        let r = Rational::from_int;
        // Divided differences.
        let f01 = r(y1 - y0).checked_div(r(x1 - x0))?;
        let f12 = r(y2 - y1).checked_div(r(x2 - x1))?;
        let f012 = f12.checked_sub(f01)?.checked_div(r(x2 - x0))?;
        // y = y0 + f01 (k - x0) + f012 (k - x0)(k - x1)
        let a = f012;
        let b = f01.checked_sub(f012.checked_mul_int(x0 + x1)?)?;
        let c = r(y0)
            .checked_sub(f01.checked_mul_int(x0)?)?
            .checked_add(f012.checked_mul_int(x0 * x1)?)?;
        Ok(Quadratic { a, b, c })
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})k^2 + ({})k + ({})", self.a, self.b, self.c)
    }
}

/// Quadratic fits of `p(k)`, `q(k)` and `q^{-1}(k)` for a family, together
/// with the leading-coefficient ratios predicted from the head and tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyQuadratics {
    pub p: Quadratic,
    pub q: Quadratic,
    pub q_inv: Quadratic,
    /// Predicted `d1/d2`.
    pub ratio_pq: Rational,
    /// Predicted `d1/d3`; `None` when the tail is empty (then `d3 = 0`).
    pub ratio_p_qinv: Option<Rational>,
}

fn sample_family(pat: &FamilyPattern, k: i64) -> Result<(i128, i128, i128)> {
    let cf = instantiate_family(pat, k)?;
    let (p, q) = hj_eval(&cf)?;
    let q_inv = if p == 1 { 0 } else { mod_inverse(q, p)? };
    Ok((p, q, q_inv))
}

/// Fits exact quadratics through the sampled `(p, q, q^{-1})` and checks
/// them against every sample and against the predicted ratios
/// `d1/d2 = [a1, ..., a_{l-1}, a_l - 1]` (or 1 with no head) and
/// `d1/d3 = [b_t, ..., b_1]` (or `d3 = 0` with no tail).
pub fn family_quadratics(pat: &FamilyPattern, sample_ks: &[i64]) -> Result<FamilyQuadratics> {
    if sample_ks.len() < 4 {
        return Err(Error::InvalidArgs(
            "need at least four sample points".into(),
        ));
    }
    let samples = sample_ks
        .iter()
        .map(|&k| sample_family(pat, k).map(|s| (k as i128, s)))
        .collect::<Result<Vec<_>>>()?;
    let fit = |pick: fn(&(i128, i128, i128)) -> i128, name: &str| -> Result<Quadratic> {
        let pts = [0, 1, 2].map(|i| (samples[i].0, pick(&samples[i].1)));
        let quad = Quadratic::through(pts)?;
        for (k, s) in &samples {
            if quad.eval(*k)? != Rational::from_int(pick(s)) {
                return Err(Error::NotQuadratic(format!(
                    "{name} at k = {k} is {} but the fit {quad} predicts {}",
                    pick(s),
                    quad.eval(*k)?
                )));
            }
        }
        Ok(quad)
    };
    let p = fit(|s| s.0, "p")?;
    let q = fit(|s| s.1, "q")?;
    let q_inv = fit(|s| s.2, "q^-1")?;

    // A head ending in 2s is the same family with a larger offset.
    let mut head = pat.head.clone();
    while head.last() == Some(&2) {
        head.pop();
    }
    let ratio_pq = match head.split_last() {
        None => Rational::ONE,
        Some((last, init)) => {
            let mut w = init.to_vec();
            w.push(last - 1);
            let (n, d) = eval_word(&w)?;
            Rational::new(n, d)?
        }
    };
    let ratio_p_qinv = if pat.tail.is_empty() {
        None
    } else {
        let w: Vec<i64> = pat.tail.iter().rev().copied().collect();
        let (n, d) = eval_word(&w)?;
        Some(Rational::new(n, d)?)
    };

    if p.a.checked_div(q.a)? != ratio_pq {
        return Err(Error::LemmaMismatch(format!(
            "d1/d2 = {} but the head predicts {ratio_pq}",
            p.a.checked_div(q.a)?
        )));
    }
    match ratio_p_qinv {
        None if q_inv.a != Rational::ZERO => {
            return Err(Error::LemmaMismatch(format!(
                "empty tail predicts d3 = 0, fit gives {}",
                q_inv.a
            )));
        }
        Some(r) if q_inv.a == Rational::ZERO || p.a.checked_div(q_inv.a)? != r => {
            return Err(Error::LemmaMismatch(format!(
                "d1/d3 = {}/{} but the tail predicts {r}",
                p.a, q_inv.a
            )));
        }
        _ => {}
    }
    Ok(FamilyQuadratics {
        p,
        q,
        q_inv,
        ratio_pq,
        ratio_p_qinv,
    })
}

/// All `k` in `[0, bound]` with `a k^2 + b k + c` a perfect square, ascending.
pub fn pell_square_ks(a: i128, b: i128, c: i128, bound: i128) -> Vec<i128> {
    (0..=bound)
        .filter(|&k| is_perfect_square(a * k * k + b * k + c).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_text_roundtrip() {
        let pat: FamilyPattern = "[[2]^k,3,4,2,3+k,3,2,4]".parse().unwrap();
        assert_eq!(pat.to_string(), "[[2]^k,3,4,2,3+k,3,2,4]");
        assert_eq!(pat.instantiate(2).unwrap().coefficients(), [2, 2, 3, 4, 2, 5, 3, 2, 4]);
        for text in ["[5,[2]^(k+1),3+k]", "[[2]^(k-2),4,2+k,6]"] {
            let p: FamilyPattern = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        for bad in ["[3+k,[2]^k]", "[2,3]", "[[2]^k,x+k]", "[[2]^k,[2]^k,3+k]"] {
            assert!(bad.parse::<FamilyPattern>().is_err(), "{bad}");
        }
    }

    fn cf(v: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(19, 2).unwrap(), cf(&[10, 2]));
        assert_eq!(hj_expand(7, 6).unwrap(), cf(&[2; 6]));
        assert_eq!(
            hj_expand(9409, 5519).unwrap(),
            cf(&[2, 4, 2, 3, 4, 4, 3, 4, 2, 2])
        );
        assert_eq!(hj_expand(13, 1).unwrap(), cf(&[13]));
        assert!(matches!(hj_expand(6, 4), Err(Error::InvalidPair { .. })));
        assert!(matches!(hj_expand(3, 3), Err(Error::InvalidPair { .. })));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(hj_eval(&cf(&[10, 2])).unwrap(), (19, 2));
        assert_eq!(hj_eval(&cf(&[5])).unwrap(), (5, 1));
        assert_eq!(hj_eval(&cf(&[])).unwrap(), (1, 0));
        let mut w = vec![2; 33];
        w.extend([3, 4, 2, 36, 3, 2, 4]);
        assert_eq!(hj_eval(&cf(&w)).unwrap(), (246961, 239820));
    }

    #[test]
    fn dual_examples() {
        // [[2]^k, x] = ((k+1)x - k)/(kx - (k-1)); k = 8, x = 3 gives 19/17.
        let mut dual = vec![2; 8];
        dual.push(3);
        assert_eq!(dual_cf(19, 2).unwrap(), cf(&dual));
        assert_eq!(dual_cf(2, 1).unwrap(), cf(&[2]));
        assert_eq!(dual_cf(5, 4).unwrap(), cf(&[5]));
    }

    #[test]
    fn instantiate_examples() {
        let fam = FamilyPattern::new(vec![], vec![], 2, vec![9], 0).unwrap();
        assert_eq!(fam.instantiate(0).unwrap(), cf(&[2, 9]));
        let fam = FamilyPattern::new(vec![], vec![], 2, vec![2, 4], -1).unwrap();
        assert_eq!(fam.instantiate(1).unwrap(), cf(&[3, 2, 4]));
        let fam = FamilyPattern::new(vec![], vec![3, 4, 2], 3, vec![3, 2, 4], 0).unwrap();
        assert_eq!(fam.instantiate(2).unwrap(), cf(&[2, 2, 3, 4, 2, 5, 3, 2, 4]));
        let fam = FamilyPattern::new(vec![], vec![], 2, vec![2, 2], -5).unwrap();
        assert!(matches!(fam.instantiate(4), Err(Error::OutOfRange(_))));
        assert_eq!(fam.min_k(), 5);
    }

    fn quad(a: i128, b: i128, c: i128) -> Quadratic {
        let r = Rational::from_int;
        Quadratic {
            a: r(a),
            b: r(b),
            c: r(c),
        }
    }

    #[test]
    fn family_quadratic_examples() {
        let fam = FamilyPattern::new(vec![], vec![], 2, vec![9], 0).unwrap();
        let fit = family_quadratics(&fam, &[0, 1, 2, 3, 7]).unwrap();
        assert_eq!(fit.p, quad(9, 17, 17));
        assert_eq!(fit.q, quad(9, 8, 9));
        assert_eq!(fit.q_inv, quad(1, 2, 2));
        assert_eq!(fit.ratio_p_qinv, Some(Rational::from_int(9)));

        let fam = FamilyPattern::new(vec![], vec![], 2, vec![2, 4], -1).unwrap();
        let fit = family_quadratics(&fam, &[1, 2, 3, 4, 10]).unwrap();
        assert_eq!(fit.p, quad(7, 3, 7));
        assert_eq!(fit.q, quad(7, -4, 4));
        assert_eq!(fit.q_inv, quad(2, 1, 2));

        let fam = FamilyPattern::new(vec![], vec![], 2, vec![2, 2], -5).unwrap();
        let fit = family_quadratics(&fam, &[5, 6, 7, 8, 20]).unwrap();
        assert_eq!(fit.p, quad(3, -11, -1));
        assert_eq!(fit.q, quad(3, -14, -2));
        assert_eq!(fit.q_inv, quad(2, -7, -2));
        assert_eq!(fit.ratio_p_qinv, Some(Rational::new(3, 2).unwrap()));
    }

    #[test]
    fn family_with_head_and_empty_tail() {
        let fam = FamilyPattern::new(vec![3, 5], vec![4], 2, vec![], 0).unwrap();
        let fit = family_quadratics(&fam, &[0, 1, 2, 3, 4, 9]).unwrap();
        assert_eq!(fit.q_inv.a, Rational::ZERO);
        assert_eq!(fit.ratio_pq, Rational::new(11, 4).unwrap()); // [3,4]
        assert!(family_quadratics(&fam, &[0, 1, 2]).is_err());
    }

    #[test]
    fn pell_examples() {
        // 841 = 29^2 at k = 1, 32761 = 181^2 at k = 20.
        assert_eq!(
            pell_square_ks(60, 420, 361, 1000),
            vec![0, 1, 6, 7, 20, 29, 70, 78, 181, 252, 575, 638]
        );
        assert_eq!(pell_square_ks(1, 0, 0, 3), vec![0, 1, 2, 3]);
        assert_eq!(pell_square_ks(60, 420, 361, 5), vec![0, 1]);
    }
}
