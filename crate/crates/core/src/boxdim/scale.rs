use num_bigint::BigInt;

use crate::cf::{continuant_pair, continuant_pair_u128};
use crate::numeric::exp_table::{floor_ln, floor_ln_u128};

/// `r+(alpha) = floor(ln(1 / len I+(alpha))) = floor(ln(q (q + q')))`, exact.
///
/// Never negative: `q (q + q') >= 1`. The empty word has scale 0.
pub fn unstable_scale(word: &[u64]) -> u32 {
    if let Some((q, qp)) = continuant_pair_u128(word) {
        if let Some(n) = q.checked_add(qp).and_then(|s| s.checked_mul(q)) {
            if n <= exp_floor_u128_limit() {
                return floor_ln_u128(n);
            }
        }
    }
    let (q, qp) = continuant_pair(word);
    let n: BigInt = &q * (&q + &qp);
    floor_ln(&n)
}

fn exp_floor_u128_limit() -> u128 {
    *crate::numeric::exp_table::exp_floor_u128_table()
        .last()
        .expect("table")
}

/// `alpha` belongs to `P_r+`: its scale reaches `r` and that of its longest
/// proper prefix does not. A one-letter word has no proper prefix to test,
/// so `P_0+` is the set of single letters.
pub fn is_minimal(word: &[u64], r: u32) -> bool {
    match word.len() {
        0 => false,
        1 => unstable_scale(word) >= r,
        n => unstable_scale(word) >= r && unstable_scale(&word[..n - 1]) < r,
    }
}
