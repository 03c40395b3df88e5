//! Exact computations with free complexes over complete intersection rings,
//! Koszul complexes, Lefschetz operators on exterior algebras and the Betti
//! number checks built on them.

pub mod error;
pub mod field;
pub mod exterior;
pub mod linalg;
pub mod ring;
pub mod series;
pub mod complex;
pub mod koszul;
pub mod resolution;
pub mod dg;
pub mod verify;

pub use error::{Error, Result};
