use lagmark::numeric::rational::rat;
use lagmark::spectrum::{self, BiSequence};
use proptest::prelude::*;

/// `[a_0; a_1, ...]` for a periodic word read from phase `k`, truncated deep, in floats.
fn float_cf(period: &[u64], start: usize, forward: bool, terms: usize) -> f64 {
    let n = period.len();
    let letter = |j: usize| {
        if forward {
            period[(start + j) % n]
        } else {
            period[(start + n * terms - j) % n]
        }
    };
    let mut x = letter(terms) as f64;
    for j in (0..terms).rev() {
        x = letter(j) as f64 + 1.0 / x;
    }
    x
}

fn float_lagrange(period: &[u64]) -> f64 {
    (0..period.len())
        .map(|k| float_cf(period, k, true, 60) + 1.0 / float_cf(period, k + period.len() - 1, false, 60))
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn periodic_lagrange_matches_float_oracle(period in prop::collection::vec(1u64..6, 1..6)) {
        let s = BiSequence::periodic(&period).unwrap();
        let l = spectrum::lagrange_value(&s, &rat(1, 1 << 30)).unwrap();
        let m = spectrum::markov_value(&s, &rat(1, 1 << 30)).unwrap();
        let f = float_lagrange(&period);
        prop_assert!(l.value.within_of(f, 1e-9), "{} vs {f}", l.value);
        prop_assert!(m.value.overlaps(&l.value));
    }

    #[test]
    fn perron_identity_is_exact(a in -10i64..10, d in 2i64..40, c in 1i64..6) {
        let root = (d as f64).sqrt() as i64;
        prop_assume!(root * root != d);
        let x = lagmark::Quad::from_parts(a.into(), 1.into(), d.into(), c.into()).unwrap();
        for n in 1..8 {
            prop_assert!(spectrum::perron_identity_check(&x, n).unwrap().is_zero());
        }
    }
}

#[test]
fn markov_exceeds_lagrange_when_core_sticks_out() {
    let s: BiSequence = "(1)* 3 (1)*".parse().unwrap();
    let tol = rat(1, 1 << 30);
    let m = spectrum::markov_value(&s, &tol).unwrap();
    let l = spectrum::lagrange_value(&s, &tol).unwrap();
    assert!(l.value.within_of(5f64.sqrt(), 1e-9));
    assert!(m.value.lo_f64() > 3.0);
}

#[test]
fn shift_supremum_of_two_letters() {
    let b = "1,2".parse().unwrap();
    let s = spectrum::sup_markov_over_shift(&b, &rat(1, 1 << 30)).unwrap();
    assert!(s.within_of(12f64.sqrt(), 1e-8));
}

#[test]
fn hall_rays_hit_their_targets() {
    for ell in [rat(6, 1), rat(31, 4), rat(97, 10)] {
        let ray = spectrum::hall_ray_alpha(&ell, 25).unwrap();
        let v = spectrum::lagrange_value(&ray.completion, &rat(1, 1 << 40)).unwrap();
        let target = lagmark::numeric::rational::to_f64(&ell);
        assert!(v.value.within_of(target, 1e-6), "{ell}: {}", v.value);
    }
    assert!(spectrum::hall_ray_alpha(&rat(5, 1), 10).is_err());
}
