//! Exact integer and rational arithmetic, plus the elementary number theory
//! used throughout: inverses, perfect squares, factorization and square roots
//! modulo composites.
//!
//! Everything is carried in `i128`/`u64` with checked operations; overflow is
//! reported as [`Error::Overflow`] rather than wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Greatest common divisor, always non-negative; `gcd(0, 0) = 0`.
pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as i128
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The inverse of `a` modulo `m`, normalized into `[1, m)`.
pub fn mod_inverse(a: i128, m: i128) -> Result<i128> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("modulus {m} must be at least 2")));
    }
    let a_red = a.rem_euclid(m);
    let (g, x, _) = ext_gcd(a_red, m);
    if g != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(x.rem_euclid(m))
}

/// Floor square root of a non-negative integer.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // Newton from a power-of-two upper bound.
    let bits = 128 - n.leading_zeros();
    let mut x: u128 = 1u128 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `Some(r)` with `r*r == n` when `n` is a perfect square, `None` otherwise
/// (including for negative `n`).
pub fn is_perfect_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128);
    (r * r == n as u128).then_some(r as i128)
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgs("zero denominator".into()));
        }
        let g = gcd(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or(Error::Overflow("rational sign"))?;
            d = d.checked_neg().ok_or(Error::Overflow("rational sign"))?;
        }
        Ok(Rational { num: n, den: d })
    }

    pub const fn from_int(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    /// The integer value, if this is an integer.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then_some(self.num)
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational> {
        let g = gcd(self.den, rhs.den);
        let l = self.den / g;
        let r = rhs.den / g;
        let num = self
            .num
            .checked_mul(r)
            .and_then(|a| rhs.num.checked_mul(l).and_then(|b| a.checked_add(b)))
            .ok_or(Error::Overflow("rational add"))?;
        let den = l.checked_mul(rhs.den).ok_or(Error::Overflow("rational add"))?;
        Rational::new(num, den)
    }

    pub fn checked_neg(self) -> Result<Rational> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(Error::Overflow("rational neg"))?,
            den: self.den,
        })
    }

    pub fn checked_sub(self, rhs: Rational) -> Result<Rational> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational> {
        // Cross-cancel first so that products of reduced fractions stay small.
        let g1 = gcd(self.num, rhs.den).max(1);
        let g2 = gcd(rhs.num, self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(Error::Overflow("rational mul"))?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(Error::Overflow("rational mul"))?;
        Rational::new(num, den)
    }

    pub fn checked_div(self, rhs: Rational) -> Result<Rational> {
        if rhs.num == 0 {
            return Err(Error::InvalidArgs("division by zero".into()));
        }
        self.checked_mul(Rational::new(rhs.den, rhs.num)?)
    }

    pub fn checked_mul_int(self, k: i128) -> Result<Rational> {
        self.checked_mul(Rational::from_int(k))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Compares `a/b` with `c/d` (`b, d > 0`) without forming cross products,
/// by walking the continued fraction expansions.
fn cmp_fractions(mut a: i128, mut b: i128, mut c: i128, mut d: i128) -> Ordering {
    let mut flipped = false;
    loop {
        let (qa, ra) = (a.div_euclid(b), a.rem_euclid(b));
        let (qc, rc) = (c.div_euclid(d), c.rem_euclid(d));
        let ord = qa.cmp(&qc);
        if ord != Ordering::Equal {
            return if flipped { ord.reverse() } else { ord };
        }
        match (ra == 0, rc == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if flipped { Ordering::Greater } else { Ordering::Less };
            }
            (false, true) => {
                return if flipped { Ordering::Less } else { Ordering::Greater };
            }
            (false, false) => {
                // a/b = q + ra/b; compare ra/b vs rc/d  <=>  compare d/rc vs b/ra reversed.
                (a, b, c, d) = (b, ra, d, rc);
                flipped = !flipped;
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_fractions(self.num, self.den, other.num, other.den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i128>()
                .map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Ok(Rational::from_int(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Modular arithmetic on u64
// ---------------------------------------------------------------------------

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

/// Default upper bound accepted by [`factorize`].
pub const FACTOR_BOUND: u64 = 1 << 62;

const SMALL_PRIME_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// A complete prime factorization `base = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub base: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Number of solutions of `x^2 = 1` modulo `base`.
    pub fn square_roots_of_unity(&self) -> u64 {
        let mut count = 1u64;
        for &(p, e) in &self.factors {
            count *= match (p, e) {
                (2, 1) => 1,
                (2, 2) => 2,
                (2, _) => 4,
                _ => 2,
            };
        }
        count
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let gcd64 = |a: u64, b: u64| gcd(a as i128, b as i128) as u64;
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Complete factorization of `2 <= n < FACTOR_BOUND`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if !(2..FACTOR_BOUND).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "factorize expects 2 <= n < 2^62, got {n}"
        )));
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_large(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { base: n, factors })
}

// ---------------------------------------------------------------------------
// Square roots modulo composites
// ---------------------------------------------------------------------------

/// Tonelli-Shanks for an odd prime `p`; `a` must be a nonzero residue mod `p`.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square root of a unit `a` modulo `p^e`, `p` odd, by Hensel lifting.
fn sqrt_mod_odd_prime_power(a: u64, p: u64, e: u32) -> Option<u64> {
    let mut x = sqrt_mod_prime(a % p, p)?;
    let mut pk = p;
    for _ in 1..e {
        let next = pk * p;
        // x <- x - (x^2 - a) / (2x)  (mod p^{k+1})
        let fx = (mul_mod(x, x, next) + next - a % next) % next;
        let inv = mod_inverse((2 * x % next) as i128, next as i128).ok()? as u64;
        x = (x + next - mul_mod(fx, inv, next)) % next;
        pk = next;
    }
    Some(x)
}

/// Square root of an odd `a` modulo `2^e`.
fn sqrt_mod_two_power(a: u64, e: u32) -> Option<u64> {
    let m = 1u64 << e;
    let a = a % m;
    match e {
        1 => Some(1),
        2 => (a % 4 == 1).then_some(1),
        _ => {
            if a % 8 != 1 {
                return None;
            }
            let mut x = 1u64;
            for k in 3..e {
                let mk1 = 1u64 << (k + 1);
                if mul_mod(x, x, mk1) != a % mk1 {
                    x += 1u64 << (k - 1);
                }
            }
            Some(x % m)
        }
    }
}

/// Some `x` in `[0, m)` with `x^2 = a (mod m)`, or `None` if `a` is a
/// non-residue. Requires `gcd(a, m) = 1` and `2 <= m < 2^62`.
///
/// Solves per prime power (Euler's criterion, Tonelli-Shanks, Hensel lifting,
/// 2-adic conditions) and combines by CRT.
pub fn sqrt_mod(a: i128, m: i128) -> Result<Option<i128>> {
    if m < 2 || m >= FACTOR_BOUND as i128 {
        return Err(Error::OutOfRange(format!("sqrt_mod modulus {m}")));
    }
    let a_red = a.rem_euclid(m);
    if gcd(a_red, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    let fact = factorize(m as u64)?;
    let (mut x, mut modulus) = (0i128, 1i128);
    for &(p, e) in &fact.factors {
        let pe = p.pow(e);
        let local = if p == 2 {
            sqrt_mod_two_power(a_red as u64, e)
        } else {
            sqrt_mod_odd_prime_power((a_red % pe as i128) as u64, p, e)
        };
        let Some(r) = local else { return Ok(None) };
        // CRT: x = x (mod modulus), x = r (mod pe)
        let pe = pe as i128;
        let inv = mod_inverse(modulus, pe)?;
        let diff = (r as i128 - x).rem_euclid(pe);
        let t = (diff as u128 * inv as u128 % pe as u128) as i128;
        x += modulus * t;
        modulus *= pe;
    }
    Ok(Some(x.rem_euclid(m)))
}

/// Exhaustive scan over `[0, m)`; the reference for [`sqrt_mod`].
pub fn sqrt_mod_brute(a: i128, m: i128) -> Result<Option<i128>> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("sqrt_mod modulus {m}")));
    }
    let a_red = a.rem_euclid(m);
    if gcd(a_red, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok((0..m).find(|&x| x * x % m == a_red))
}
