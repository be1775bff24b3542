//! Discrete Morse theory on finite simplicial complexes: normalized Morse
//! functions, the alternating sum 𝔑 of their values, Morse complexes, and an
//! exact desk-scale search for optimal gradient fields with machine-checkable
//! certificates of collapsibility and non-collapsibility.

pub mod analysis;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod field;
pub mod hall;
pub mod homology;
pub mod io;
pub mod matrix;
pub mod morse_fn;
pub mod normalize;
pub mod search;

pub use complex::{CellId, SimplicialComplex};
pub use error::{Error, FieldError, Result};
pub use field::{CriticalReport, DiscreteVectorField};
pub use morse_fn::MorseFunction;
pub use normalize::{nkf, normalize, NkfValue, NormalizedFunction};
