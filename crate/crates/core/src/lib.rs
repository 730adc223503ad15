//! Shattering, VC-type dimensions and forbidden configurations for k-ary
//! codes, with exact search to check the bounds on small instances.

pub mod bounds;
pub mod branching;
pub mod code;
pub mod configurations;
pub mod constructions;
pub mod error;
pub mod search;
pub mod shattering;

pub use code::{Alphabet, Code, Codeword, CoordSet, SVector, Symbol, SymbolPair};
pub use configurations::ConfigMatrix;
pub use error::{Error, Result};
pub use search::{SearchOptions, SearchResult};
pub use shattering::{DimensionKind, HlKind};
