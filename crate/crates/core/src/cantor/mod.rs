//! Gauss-Cantor sets `K(B)`: numbers whose continued fraction is a
//! concatenation of words from a finite alphabet `B`.

mod alphabet;
mod cylinder;
mod dimension;
mod stab;

pub use alphabet::{fmt_word, WordAlphabet};
pub use cylinder::{cylinder, generate_cover, CylinderInterval, MAX_COVER};
pub use dimension::{
    cover_denominators, dimension_bracket, hensley_asymptotic, hensley_check, hensley_depth,
    hull, transpose_dimension_check, DimensionBracket, HensleyReport, TransposeCheck,
    BISECTION_TOL, GRID, HD_C2, HD_C3, HD_C4, MAX_WORDS,
};
pub use stab::{sumset_stab, sumset_stab_budget, sumset_stab_until, StabOutcome, StabWitness, STAB_BUDGET};
