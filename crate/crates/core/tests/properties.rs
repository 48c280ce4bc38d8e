use std::cmp::Ordering;

use num_bigint::BigInt;
use obstruct_core::algebraic::dual_length_and_sum;
use obstruct_core::exact::{gcd, sqrt_mod, sqrt_mod_brute, Rational};
use obstruct_core::floer::d_invariant;
use obstruct_core::hjcf::{dual_cf, hj_expand};
use proptest::prelude::*;
use rayon::prelude::*;

const CF_BOUND: i128 = 10_000;

fn coprime_below(p: i128) -> impl Iterator<Item = i128> {
    (1..p).filter(move |&q| gcd(p, q) == 1)
}

#[test]
fn cf_roundtrip_exhaustive() {
    let checked: u64 = (2..=CF_BOUND)
        .into_par_iter()
        .map(|p| {
            let mut n = 0;
            for q in coprime_below(p) {
                let cf = hj_expand(p, q).unwrap();
                assert!(cf.coefficients().iter().all(|&a| a >= 2), "{p}/{q}");
                assert_eq!(cf.eval().unwrap(), (p, q), "{p}/{q}");
                n += 1;
            }
            n
        })
        .sum();
    assert_eq!(checked, 30_397_485);
}

#[test]
fn dual_length_and_sum_exhaustive() {
    (2..=CF_BOUND).into_par_iter().for_each(|p| {
        for q in coprime_below(p) {
            let dual = dual_cf(p, q).unwrap();
            assert_eq!(
                dual_length_and_sum(p, q),
                (dual.len() as i128, dual.sum() as i128),
                "{p}/{q}"
            );
        }
    });
}

#[test]
fn sqrt_mod_exhaustive_small_moduli() {
    (2..=400i128).into_par_iter().for_each(|m| {
        for a in (0..m).filter(|&a| gcd(a, m) == 1) {
            let fast = sqrt_mod(a, m).unwrap();
            let slow = sqrt_mod_brute(a, m).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "a = {a}, m = {m}");
            if let Some(x) = fast {
                assert!((0..m).contains(&x));
                assert_eq!(x * x % m, a, "a = {a}, m = {m}");
            }
        }
    });
}

/// Multiset of `d(L(p,q), i)` over `0 <= i < p`, sorted.
fn d_multiset(p: i128, q: i128, negate: bool) -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..p)
        .map(|i| {
            let d = d_invariant(p, q, i).unwrap();
            if negate {
                d.checked_neg().unwrap()
            } else {
                d
            }
        })
        .collect();
    v.sort();
    v
}

#[test]
fn d_invariants_reverse_with_orientation() {
    // -L(p,q) = L(p,p-q) and d(-Y) = -d(Y).
    (2..=500i128).into_par_iter().for_each(|p| {
        for q in coprime_below(p) {
            assert_eq!(d_multiset(p, q, false), d_multiset(p, p - q, true), "L({p},{q})");
        }
    });
}

fn big(r: Rational) -> (BigInt, BigInt) {
    (BigInt::from(r.numer()), BigInt::from(r.denom()))
}

/// Checks `r == n/d` for big integers `n`, `d > 0`, and that `r` is reduced.
fn same(r: Rational, n: BigInt, d: BigInt) -> bool {
    let (rn, rd) = big(r);
    gcd(r.numer(), r.denom()) == 1 && rd > BigInt::from(0) && rn * &d == n * rd
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-1_000_000_000i128..=1_000_000_000, 1i128..=1_000_000_000)
        .prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4096))]

    #[test]
    fn sqrt_mod_matches_brute_force(m in 2i128..=100_000, a in 0i128..100_000) {
        let mut a = a % m;
        while gcd(a, m) != 1 {
            a = (a + 1) % m;
        }
        let fast = sqrt_mod(a, m).unwrap();
        let slow = sqrt_mod_brute(a, m).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(x) = fast {
            prop_assert_eq!(x * x % m, a);
        }
    }

    #[test]
    fn rational_matches_bigint(x in small_rational(), y in small_rational()) {
        let (xn, xd) = big(x);
        let (yn, yd) = big(y);
        prop_assert!(same(x.checked_add(y).unwrap(), &xn * &yd + &yn * &xd, &xd * &yd));
        prop_assert!(same(x.checked_sub(y).unwrap(), &xn * &yd - &yn * &xd, &xd * &yd));
        prop_assert!(same(x.checked_mul(y).unwrap(), &xn * &yn, &xd * &yd));
        if y.numer() != 0 {
            let (n, d) = (&xn * &yd, &xd * &yn);
            let (n, d) = if d < BigInt::from(0) { (-n, -d) } else { (n, d) };
            prop_assert!(same(x.checked_div(y).unwrap(), n, d));
        } else {
            prop_assert!(x.checked_div(y).is_err());
        }
        let expected = (&xn * &yd).cmp(&(&yn * &xd));
        prop_assert_eq!(x.cmp(&y), expected);
        prop_assert_eq!(x == y, expected == Ordering::Equal);
    }

    #[test]
    fn rational_text_roundtrip(x in small_rational()) {
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}
