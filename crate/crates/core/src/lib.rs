//! Exact mass formulas for Artin-Schreier curves over finite fields, and the
//! brute-force enumerations that check them.

pub mod error;
pub mod gf;
pub mod mass;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
pub mod projgeom;
pub mod ratfunc;
