//! Unstable scales, the counts `#C+(t, r)` and the box dimension `Delta+(t)`
//! of the sets `K_t+` for `3 <= t < 5`.

mod bm;
mod count;
mod feasible;
mod scale;

pub use bm::{bm_alphabet, bm_lower_bound, BmBound, BM_DEPTH};
pub use count::{
    box_dimension, c_plus_words, count_c_plus, count_c_plus_budget, count_c_plus_range, d_estimate, BoxDimension,
    CountRecord, DEstimate, Mode, COUNT_BUDGET, MAX_SCALE,
};
pub use feasible::{feasible_cylinder, Feasibility, Threshold, YES_DEPTH};
pub use scale::{is_minimal, unstable_scale};
