//! Exact coefficient arithmetic and polynomial types.

pub mod linalg;
pub mod mgcd;
pub mod monomial;
pub mod rat;
pub mod ratfun;
pub mod ring;
pub mod sparse;
pub mod text;
pub mod upoly;

pub use monomial::ExpVec;
pub use rat::Rat;
pub use ratfun::{ratfun_normalize, RatFun};
pub use ring::Field;
pub use sparse::SparsePoly;
pub use upoly::UniPoly;
