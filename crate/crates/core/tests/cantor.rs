use lagmark::cantor::{self, StabOutcome, WordAlphabet};
use lagmark::numeric::rational::rat;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn known_dimensions() {
    let b2 = cantor::dimension_bracket(&WordAlphabet::letters_up_to(2), 12).unwrap();
    assert!(b2.contains(cantor::HD_C2));
    assert!(b2.width() < 1e-6);
    let b5 = cantor::dimension_bracket(&WordAlphabet::letters_up_to(5), 5).unwrap();
    let b4 = cantor::dimension_bracket(&WordAlphabet::letters_up_to(4), 6).unwrap();
    assert!(b4.upper < b5.upper + 1e-9);
}

#[test]
fn brackets_tighten_with_depth() {
    let b = WordAlphabet::letters_up_to(2);
    let mut prev = cantor::dimension_bracket(&b, 4).unwrap();
    for depth in 5..=10 {
        let cur = cantor::dimension_bracket(&b, depth).unwrap();
        assert!(cur.lower <= cantor::HD_C2 && cantor::HD_C2 <= cur.upper);
        assert!(cur.width() <= prev.width() + 1e-12);
        prev = cur;
    }
}

#[test]
fn word_alphabet_dimension_is_below_letters() {
    let w: WordAlphabet = "1.2,2.1".parse().unwrap();
    let b = cantor::dimension_bracket(&w, 8).unwrap();
    assert!(b.upper <= cantor::HD_C2 + 1e-9 && b.lower > 0.0);
}

fn hall_point() -> impl Strategy<Value = BigRational> {
    // rationals inside [sqrt2 - 1, 4 (sqrt2 - 1)] with a small margin
    (0i64..10_000).prop_map(|k| rat(4143, 10_000) + rat(12_425, 10_000) * rat(k, 10_000))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn stab_witness_really_covers_x(x in hall_point()) {
        let c4 = WordAlphabet::letters_up_to(4);
        let out = cantor::sumset_stab(&x, &c4, &c4, &rat(1, 1_000_000)).unwrap();
        let StabOutcome::Found(w) = out else { panic!("{x} not found") };
        prop_assert!(&w.beta.lo + &w.beta_prime.lo <= x && x <= &w.beta.hi + &w.beta_prime.hi);
        prop_assert!(w.beta.word.iter().chain(&w.beta_prime.word).all(|&a| (1..=4).contains(&a)));
    }
}

#[test]
fn stab_rejects_points_outside_the_sum() {
    let c4 = WordAlphabet::letters_up_to(4);
    for x in [rat(3, 10), rat(17, 10), rat(41, 100)] {
        let out = cantor::sumset_stab(&x, &c4, &c4, &rat(1, 1_000_000_000)).unwrap();
        assert!(matches!(out, StabOutcome::NotFound { .. }), "{x}");
    }
    assert!(cantor::sumset_stab_budget(&rat(1, 1), &c4, &c4, &rat(1, 1_000_000), 3).is_err());
}
