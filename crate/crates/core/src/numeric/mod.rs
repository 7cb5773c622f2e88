//! Exact number types shared by every module.

pub mod enclosure;
pub mod exp_table;
pub mod quad;
pub mod rational;

pub use enclosure::BoundedValue;
pub use quad::Quad;
pub use rational::ExactRational;
