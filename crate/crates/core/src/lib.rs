//! Rough functions from the functional equation `f(x) − a·f(bx) = g(x)`:
//! truncated series solutions, fractal interpolation, Weierstrass Fourier
//! bases and box-counting dimension.

// `!(x < y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dimension;
pub mod error;
pub mod function;
pub mod interp;
pub mod numerics;
pub mod operator;
pub mod wfourier;

pub use error::{Error, Result};
