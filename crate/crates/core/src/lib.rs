//! Exact computations in enveloping algebras of classical Lie algebras:
//! PBW normal ordering, minimal-polynomial ideals, Iwasawa and Harish-Chandra
//! reductions, and Gindikin–Karpelevich c-functions.

pub mod cfun;
pub mod error;
pub mod liedata;
pub mod linalg;
pub mod matop;
pub mod minpoly;
pub mod params;
pub mod pbw;
pub mod reduce;

pub use error::{Error, Result};
