//! Continued fractions: expansions, convergents, continuants, best
//! approximations and Hurwitz witnesses.

pub mod best;
pub mod continuant;
pub mod expansion;
pub mod levy;

pub use best::{best_approximations, hurwitz_counterexample_count, hurwitz_witness, Known};
pub use continuant::{
    continuant, continuant_pair, continuant_pair_u128, euler_rule_oracle, transpose_value,
    word_value,
};
pub use expansion::{cf_expand, determinant_check, pi_prefix, CfExpansion, ConvergentPair, Tail};
pub use levy::{levy_mean, LEVY_CONSTANT};
