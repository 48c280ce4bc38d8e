//! Algebraic and topological conditions on a singularity type: orbifold
//! Euler number, `K^2`, the orbifold BMY inequality, squareness of `D`, and
//! the linking form condition.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{gcd, is_perfect_square, sqrt_mod, Rational};
use crate::hjcf::hj_length_and_sum;
use crate::singtypes::{LensPair, SingularityType};

/// `3 - sum(1 - 1/p_i)`.
pub fn e_orb(ty: &SingularityType) -> Rational {
    let p = ty.order_product();
    // P * e_orb = 3P - sum(P - P/p_i)
    let num: i128 = 3 * p - ty.pairs().iter().map(|x| p - p / x.p).sum::<i128>();
    Rational::new(num, p).expect("nonzero order product")
}

/// Length and coefficient sum of the dual expansion of `p/q`, from the
/// expansion of `p/q` itself: `L' = sum a - 2l + 1` and
/// `sum n = 3(l + L') - 2 - sum a`.
pub fn dual_length_and_sum(p: i128, q: i128) -> (i128, i128) {
    let (l, s) = hj_length_and_sum(p, q);
    let l = l as i128;
    let dl = s - 2 * l + 1;
    (dl, 3 * (l + dl) - 2 - s)
}

/// `P * K^2` as an exact integer.
fn d_value(pairs: &[LensPair]) -> i128 {
    let big_p: i128 = pairs.iter().map(|x| x.p).product();
    let mut integral = 9i128;
    let mut frac = 0i128;
    for x in pairs {
        let (dl, dsum) = dual_length_and_sum(x.p, x.q);
        integral += dsum - 3 * dl;
        let inv = x.q_inverse();
        frac += (big_p / x.p) * (x.q + inv - 2);
    }
    big_p * integral - frac
}

/// `K^2 = 9 - 3L + sum n_ij - sum (q_i + q_i^{-1} - 2)/p_i`, where `n_ij` and
/// `L` come from the dual expansions `p_i/(p_i - q_i)`.
pub fn k_square(ty: &SingularityType) -> Rational {
    Rational::new(d_value(ty.pairs()), ty.order_product()).expect("nonzero order product")
}

/// `0 < K^2 <= 3 e_orb`.
pub fn obmy_check(ty: &SingularityType) -> bool {
    let k2 = k_square(ty);
    k2.is_positive() && k2 <= e_orb(ty).checked_mul_int(3).expect("small value")
}

/// `D = P K^2` and its square root when `D` is a positive square integer.
pub fn d_squareness(ty: &SingularityType) -> (Rational, Option<i128>) {
    let d = d_value(ty.pairs());
    let root = if d > 0 { is_perfect_square(d) } else { None };
    (Rational::from_int(d), root)
}

/// `q = sum_i q_i prod_{j != i} p_j` for the given pairs (not canonicalized).
pub fn linking_q(pairs: &[(i128, i128)]) -> i128 {
    let big_p: i128 = pairs.iter().map(|x| x.0).product();
    pairs.iter().map(|&(p, q)| q * (big_p / p)).sum()
}

/// Whether `-q` is a square modulo `P`, with a root as witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingResult {
    pub q: i128,
    pub modulus: i128,
    pub pass: bool,
    pub witness: Option<i128>,
}

pub fn linking_check(ty: &SingularityType) -> LinkingResult {
    linking_check_raw(&ty.raw()).expect("valid type has coprime data")
}

/// Linking condition for raw pairs (any representatives `q_i`).
pub fn linking_check_raw(pairs: &[(i128, i128)]) -> Result<LinkingResult> {
    let q = linking_q(pairs);
    let modulus: i128 = pairs.iter().map(|x| x.0).product();
    debug_assert_eq!(gcd(q, modulus), 1, "pairwise coprime orders force gcd(q, P) = 1");
    let witness = sqrt_mod((-q).rem_euclid(modulus), modulus)?;
    Ok(LinkingResult {
        q,
        modulus,
        pass: witness.is_some(),
        witness,
    })
}

/// Necessary condition for the linking form on `{(2,1),(3,2),(5,q3),(p4,q4)}`:
/// `p4 = 1, 19 (mod 30)` when `q3` is 1 or 4, `p4 = 7, 13 (mod 30)` when
/// `q3 = 2`. Other `q3` are not filtered.
pub fn residue_prefilter(q3: i128, p4: i128) -> bool {
    match q3 {
        1 | 4 => matches!(p4.rem_euclid(30), 1 | 19),
        2 | 3 => matches!(p4.rem_euclid(30), 7 | 13),
        _ => true,
    }
}

/// Whether [`residue_prefilter`] applies to a type (orders `2, 3, 5, p4`
/// with `q2 = 2`).
pub fn prefilter_applies(ty: &SingularityType) -> bool {
    let p = ty.pairs();
    p[0].p == 2 && p[1] == LensPair { p: 3, q: 2 } && p[2].p == 5 && gcd(p[3].p, 30) == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicReport {
    pub e_orb: Rational,
    pub k_square: Rational,
    pub obmy_pass: bool,
    /// `K^2 = 3 e_orb` exactly.
    pub obmy_equality: bool,
    pub d: Rational,
    pub d_root: Option<i128>,
    pub linking: LinkingResult,
}

impl AlgebraicReport {
    pub fn d_pass(&self) -> bool {
        self.d_root.is_some()
    }
}

pub fn algebraic_report(ty: &SingularityType) -> AlgebraicReport {
    algebraic_report_with(ty, linking_check(ty))
}

/// [`algebraic_report`] with an already computed linking result.
pub fn algebraic_report_with(ty: &SingularityType, linking: LinkingResult) -> AlgebraicReport {
    let e = e_orb(ty);
    let k2 = k_square(ty);
    let bound = e.checked_mul_int(3).expect("small value");
    let (d, d_root) = d_squareness(ty);
    AlgebraicReport {
        e_orb: e,
        k_square: k2,
        obmy_pass: k2.is_positive() && k2 <= bound,
        obmy_equality: k2 == bound,
        d,
        d_root,
        linking,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hjcf::dual_cf;

    fn ty(s: &str) -> SingularityType {
        s.parse().unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn dual_identities() {
        for p in 2..200 {
            for q in 1..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                let d = dual_cf(p, q).unwrap();
                assert_eq!(dual_length_and_sum(p, q), (d.len() as i128, d.sum() as i128));
            }
        }
    }

    #[test]
    fn e_orb_examples() {
        assert_eq!(
            e_orb(&ty("2/1,3/2,5/1,9409/5519")).checked_mul_int(3).unwrap(),
            r(3 * 9439, 282270)
        );
        assert_eq!(e_orb(&ty("2/1,3/2,5/1,7/1")), r(37, 210));
        for n in [7, 11, 49, 2599] {
            let t = normalize_235(n);
            assert_eq!(
                e_orb(&t).checked_mul_int(3).unwrap(),
                r(1, 10).checked_add(r(3, n)).unwrap()
            );
        }
    }

    fn normalize_235(n: i128) -> SingularityType {
        crate::singtypes::normalize([(2, 1), (3, 2), (5, 1), (n, 1)]).unwrap()
    }

    #[test]
    fn k_square_examples() {
        assert_eq!(k_square(&ty("2/1,3/2,5/1,9409/5519")), r(1210, 28227));
        assert_eq!(k_square(&ty("2/1,3/2,5/1,4771/634")), r(640, 14313));
        assert_eq!(k_square(&ty("2/1,3/2,5/1,3529/1880")), r(874, 10587));
    }

    #[test]
    fn obmy_examples() {
        assert!(obmy_check(&ty("2/1,3/2,5/1,9409/5519")));
        let family = |k: i128| {
            crate::singtypes::normalize([
                (2, 1),
                (3, 2),
                (5, 4),
                (9 * k * k + 17 * k + 17, 9 * k * k + 8 * k + 9),
            ])
            .unwrap()
        };
        // 21k^2 - 227k - 167 >= 0 exactly from k = 12 on; k = 5 gives
        // p4 = 327, not coprime to 3, so k = 10 (p4 = 1087) is the negative case.
        assert!(obmy_check(&family(12)));
        assert!(!obmy_check(&family(10)));
        for k in [12, 13, 16] {
            let p4 = 9 * k * k + 17 * k + 17;
            assert_eq!(k_square(&family(k)), r(3 * k * k + 139 * k + 154, 15 * p4));
        }
    }

    #[test]
    fn d_examples() {
        assert_eq!(
            d_squareness(&ty("2/1,3/2,5/1,9409/5519")),
            (Rational::from_int(12100), Some(110))
        );
        assert_eq!(
            d_squareness(&ty("2/1,3/2,5/1,3529/1880")),
            (Rational::from_int(8740), None)
        );
        assert_eq!(
            d_squareness(&ty("2/1,3/2,5/1,4771/634")),
            (Rational::from_int(6400), Some(80))
        );
    }

    #[test]
    fn linking_examples() {
        let l = linking_check(&ty("2/1,3/2,5/1,9409/5519"));
        assert_eq!((l.q, l.modulus, l.pass), (551339, 282270, true));
        let w = l.witness.unwrap();
        assert_eq!((w * w + l.q) % l.modulus, 0);
        assert_eq!((22889 * 22889 + l.q) % l.modulus, 0);

        let l = linking_check(&ty("2/1,3/2,5/1,4771/634"));
        assert_eq!(l.q, 214631);
        assert!(l.pass);
        assert_eq!((4763 * 4763 + l.q) % l.modulus, 0);

        assert!(!linking_check(&ty("2/1,3/2,5/4,7/1")).pass);
    }

    #[test]
    fn prefilter_examples() {
        assert!(residue_prefilter(1, 2599));
        assert!(residue_prefilter(2, 2623));
        assert!(!residue_prefilter(1, 2593));
        assert!(prefilter_applies(&ty("2/1,3/2,5/2,2593/1")));
        assert!(!prefilter_applies(&ty("2/1,3/1,5/2,2593/1")));
    }

    #[test]
    fn prefilter_implies_linking_failure() {
        for p4 in crate::singtypes::case1_orders(7, 499) {
            for t in crate::singtypes::case1_shard(p4, &Default::default()) {
                let q3 = t.pairs()[2].q;
                if !residue_prefilter(q3, p4) {
                    assert!(!linking_check(&t).pass, "{t}");
                }
            }
        }
    }
}
