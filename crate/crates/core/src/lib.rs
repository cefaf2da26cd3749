//! Exact computation of Hilbert functions of Kähler differential modules of
//! fat point schemes in projective space.

pub mod exactla;
pub mod formulas;
pub mod kaehler;
pub mod polyring;
pub mod schemes;

pub use exactla::{ExactMatrix, Rational};
pub use kaehler::{KaehlerEngine, KaehlerError, OmegaHF};
pub use polyring::{DegreeSlice, HomogPoly, Monomial};
pub use schemes::{FatPointScheme, HFTable, ProjPoint, SchemeError};
