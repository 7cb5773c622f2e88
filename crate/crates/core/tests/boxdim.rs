use lagmark::boxdim::{self, Feasibility, Mode, Threshold};
use lagmark::cf;
use lagmark::Quad;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn q(s: &str) -> Quad {
    s.parse().unwrap()
}

/// `floor(ln(q (q + q')))` in floats, for words short enough to be exact in f64.
fn float_scale(w: &[u64]) -> u32 {
    let (qq, qp) = cf::continuant_pair(w);
    let qq = qq.to_f64().unwrap();
    let qp = qp.to_f64().unwrap();
    (qq * (qq + qp)).ln().floor() as u32
}

proptest! {
    #[test]
    fn scale_matches_float_logarithm(w in prop::collection::vec(1u64..6, 1..10)) {
        let (qq, qp) = cf::continuant_pair(&w);
        let prod = (&qq * (&qq + &qp)).to_f64().unwrap();
        let frac = prod.ln() - prod.ln().floor();
        prop_assume!(frac > 1e-9 && frac < 1.0 - 1e-9);
        prop_assert_eq!(boxdim::unstable_scale(&w), float_scale(&w));
    }

    #[test]
    fn scale_is_superadditive(a in prop::collection::vec(1u64..5, 1..8), b in prop::collection::vec(1u64..5, 1..8), k in 1u64..5) {
        let mut abk = a.clone();
        abk.extend(&b);
        abk.push(k);
        prop_assert!(boxdim::unstable_scale(&abk) >= boxdim::unstable_scale(&a) + boxdim::unstable_scale(&b));
    }

    #[test]
    fn words_with_three_are_excluded_below_sqrt12(w in prop::collection::vec(1u64..3, 0..6), tail in prop::collection::vec(1u64..3, 0..6)) {
        let mut word = w;
        word.push(3);
        word.extend(tail);
        prop_assert_eq!(boxdim::feasible_cylinder(&word, &q("sqrt(12)"), 20).unwrap(), Feasibility::No);
    }
}

#[test]
fn minimal_words_partition_by_scale() {
    // every long {1,2}-word has exactly one prefix that is minimal at scale r
    let r = 6;
    let words = lagmark::verify::minimal_words_12(r);
    for w in &words {
        assert!(boxdim::is_minimal(w, r));
    }
    let mut long = vec![1u64, 2, 2, 1, 1, 2, 1, 2, 2, 2, 1, 1];
    for _ in 0..3 {
        let hits = (1..=long.len()).filter(|&n| words.contains(&long[..n].to_vec())).count();
        assert_eq!(hits, 1);
        long.rotate_left(1);
    }
}

#[test]
fn counts_grow_with_threshold() {
    let mut prev = 0;
    for t in ["3", "16/5", "sqrt(12)", "18/5", "39/10"] {
        let th = Threshold::new(&q(t)).unwrap();
        let c = boxdim::count_c_plus(&th, 8).unwrap().count();
        assert!(c >= prev, "{t}");
        prev = c;
    }
}

#[test]
fn lower_mode_never_exceeds_upper() {
    let th = Threshold::new(&q("33/10")).unwrap();
    for rec in boxdim::count_c_plus_range(&th, 1, 10).unwrap() {
        assert!(rec.count_for(Mode::Lower) <= rec.count_for(Mode::Upper));
    }
}

#[test]
fn thresholds_outside_range_are_rejected() {
    assert!(Threshold::new(&q("29/10")).is_err());
    assert!(Threshold::new(&q("5")).is_err());
}
