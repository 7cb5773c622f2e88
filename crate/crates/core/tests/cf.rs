use lagmark::cf::{self, CfExpansion, Tail};
use lagmark::Quad;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn fold(a0: i64, qs: &[i64]) -> BigRational {
    let mut x = BigRational::from_integer(BigInt::from(*qs.last().unwrap_or(&a0)));
    if qs.is_empty() {
        return x;
    }
    for &a in qs[..qs.len() - 1].iter().rev() {
        x = BigRational::from_integer(BigInt::from(a)) + x.recip();
    }
    BigRational::from_integer(BigInt::from(a0)) + x.recip()
}

/// Brute-force `p/q` with `q <= bound` and `|x - p/q| < 1/(2 q^2)`.
fn legendre_brute(x: &BigRational, bound: i64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=bound {
        let qb = BigInt::from(q);
        let qx = x * BigRational::from_integer(qb.clone());
        let p = qx.round().to_integer();
        if !p.gcd(&qb).is_one() {
            continue;
        }
        let d = (qx - BigRational::from_integer(p.clone())).abs();
        if d * BigRational::from_integer(BigInt::from(2 * q)) < BigRational::one() {
            out.push(BigRational::new(p, qb));
        }
    }
    out
}

proptest! {
    #[test]
    fn last_convergent_is_the_folded_fraction(a0 in -20i64..20, mut qs in prop::collection::vec(1i64..50, 0..14), last in 2i64..50) {
        qs.push(last);
        let e = CfExpansion::from_i64(a0, &qs, Tail::Terminating).unwrap();
        let cp = e.convergent(qs.len() as i64).unwrap();
        prop_assert_eq!(cp.value(), fold(a0, &qs));
        prop_assert_eq!(cf::determinant_check(&cp).unwrap(), if qs.len() % 2 == 1 { 1 } else { -1 });
    }

    #[test]
    fn rational_expansion_round_trips(p in -5000i64..5000, q in 1i64..5000) {
        let x = BigRational::new(p.into(), q.into());
        let e = cf::cf_expand(&Quad::rational(x.clone()), 1000).unwrap();
        prop_assert_eq!(e.value().unwrap(), Quad::rational(x));
    }

    #[test]
    fn word_value_matches_folding(w in prop::collection::vec(1u64..30, 1..12)) {
        let qs: Vec<i64> = w.iter().map(|&a| a as i64).collect();
        prop_assert_eq!(cf::word_value(&w), fold(0, &qs));
        let rev: Vec<i64> = qs.iter().rev().copied().collect();
        prop_assert_eq!(cf::transpose_value(&w), fold(0, &rev));
    }

    #[test]
    fn continuant_symmetry_and_euler(w in prop::collection::vec(1u64..10, 0..12)) {
        let rev: Vec<u64> = w.iter().rev().copied().collect();
        prop_assert_eq!(cf::continuant(&w), cf::continuant(&rev));
        prop_assert_eq!(cf::euler_rule_oracle(&w).unwrap(), cf::continuant(&w));
    }

    #[test]
    fn best_approximations_match_brute_force(p in 1i64..3000, q in 1i64..3000, bound in 1i64..400) {
        let x = BigRational::new(p.into(), q.into());
        let e = cf::cf_expand(&Quad::rational(x.clone()), 1000).unwrap();
        let got = cf::best_approximations(&e, &BigInt::from(bound)).unwrap();
        prop_assert_eq!(got, legendre_brute(&x, bound));
    }
}

#[test]
fn pi_prefix_convergents() {
    let pi: CfExpansion = "pi:[3;7,15,1,292]".parse().unwrap();
    let vals: Vec<String> = pi.convergents().map(|c| format!("{}/{}", c.p, c.q)).collect();
    assert_eq!(vals, ["3/1", "22/7", "333/106", "355/113", "103993/33102"]);
    assert!(pi.convergent(5).is_err());
}

#[test]
fn golden_ratio_hurwitz_is_tight() {
    let phi = cf::cf_expand(&"(1+sqrt(5))/2".parse().unwrap(), 100).unwrap();
    for n in 1..30 {
        let k = cf::hurwitz_witness(&phi, n).unwrap();
        assert!((n - 1..=n + 1).contains(&k));
    }
    let zero = BigInt::zero();
    assert!(cf::best_approximations(&phi, &zero).is_err());
}

#[test]
fn levy_mean_is_seed_deterministic() {
    assert_eq!(cf::levy_mean(300, 20, 5), cf::levy_mean(300, 20, 5));
    assert!((cf::levy_mean(1000, 100, 1) - cf::LEVY_CONSTANT).abs() < 0.05);
}
