#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod domain;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod lojafit;
pub mod medial;
pub mod multifun;
pub mod suite;
pub mod zeroset;

pub use error::{Error, Result};
pub use exec::Exec;
