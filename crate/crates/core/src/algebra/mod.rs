//! Exact arithmetic kernel.

pub mod arith;
pub mod crt;
pub mod cyclotomic;
pub mod error;
pub mod factor;
pub mod gf;
pub mod groebner;
pub mod iso;
pub mod poly;
pub mod qfactor;
pub mod resultant;
pub mod ring;
pub mod series;
pub mod upoly;

pub use error::AlgebraError;
pub use gf::{make_ext_field, GaloisField};
pub use poly::{IntPoly, Polynomial, Vars};
pub use ring::{Field, Integers, Rationals, Ring};
pub use series::{SeriesCtx, Valuation, Q64};
