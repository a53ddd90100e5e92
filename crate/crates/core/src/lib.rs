//! Exact computations in the cohomological Hall algebra of a symmetric
//! quiver: the shuffle product, generator counts by linear algebra,
//! Donaldson–Thomas invariants by plethystic factorization, and the
//! leg-construction root test for their non-vanishing.

pub mod cblegs;
pub mod coha;
pub mod dtseries;
pub mod error;
pub mod exactalg;
pub mod freeness;
pub mod quiver;
pub mod roots;

pub use error::{Error, Result};
pub use quiver::{DimVector, Quiver, SignForm};
