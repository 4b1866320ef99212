//! Exact Hilbert series, torsion-exponent formulas and generating-series bounds
//! for estimating the size of stable and unstable homotopy groups of spheres.

pub mod algebra;
pub mod asymptotics;
pub mod ehp;
pub mod error;
pub mod number;
pub mod presets;
pub mod series;
pub mod torsion;
pub mod verify;

pub use algebra::{
    cumrank, hilbert, hilbert_cumulative, instantiate, oracle_hilbert, parse_spec, print_spec, tensor_bracket,
    AlgebraSpec, DegreeExpr, Generator, GeneratorFamily, GeneratorKind, IndexRange, TensorBracket,
};
pub use error::{Error, ParseError, Result};
pub use presets::{max_over_h, preset, MaxOverH, PresetId, PresetParams};
pub use series::TruncatedSeries;
