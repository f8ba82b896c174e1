#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod geometry;
pub mod io;
pub mod par;
pub mod rearrange;
pub mod special_fn;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
