//! Verification and certification toolkit for classical and noded Schottky
//! circle markings: Möbius arithmetic on the extended plane, cross-ratio
//! certificates, limit-set enumeration and rendering, free-group word
//! checks, shoebox geometry, and the finite combinatorial searches behind
//! the genus-3 impossibility argument.

pub mod certificates;
pub mod circle;
pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod mobius;
pub mod render;
pub mod schottky;
pub mod shoebox;
pub mod words;

pub use circle::{
    apply_to_circle, circle_through, transform_circle, CircleRelation, GeneralizedCircle,
};
pub use complex::{cross_ratio, is_concyclic, ExtendedComplex, DEFAULT_TOLERANCE};
pub use error::{Error, Result};
pub use mobius::{Mobius, TransformClass};
pub use words::Word;
