//! Continued fractions and the Lagrange and Markov spectra.
//!
//! Every quantity is computed exactly (rationals, quadratic surds) or as a
//! certified enclosure with rational endpoints. Floating point appears only in
//! dimension estimates and statistical checks, and is labelled as such.

pub mod boxdim;
pub mod cantor;
pub mod cf;
pub mod error;
pub mod lattice;
pub mod markov;
pub mod numeric;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{BoundedValue, ExactRational, Quad};
