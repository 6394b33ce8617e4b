//! Exact elimination for sparse polynomial systems: geometric resolutions
//! of projections of toric varieties.

pub mod algebra;
pub mod error;
pub mod io;
pub mod pade;
pub mod polytope;
pub mod projection;
pub mod resolution;
pub mod series;
pub mod supports;
pub mod zerodim;

pub use error::{Error, Result};
