//! Perron values `f`, `m` and `l` on eventually periodic bi-infinite sequences.

pub mod biseq;
pub mod hall;
pub mod perron;
pub mod shift_sup;

pub use biseq::BiSequence;
pub use hall::{hall_c0, hall_ray_alpha, in_hall_interval, HallRay};
pub use perron::{
    compare_markov, cylinder, enclose_to, freiman_constant, height_f, lagrange_of_surd, lagrange_value,
    markov_value, perron_identity_check, periodic_orbit_values, Attained, PerronValue,
};
pub use shift_sup::{
    sup_markov_over_shift, sup_markov_over_shift_budget, ShiftSupremum, SHIFT_SUP_BUDGET,
};
