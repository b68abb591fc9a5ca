#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod acyclic;
pub mod complex;
pub mod derived;
pub mod error;
pub mod exact;
pub mod extresn;
pub mod fixtures;
pub mod functor;
pub mod heart;
pub mod linalg;
pub mod module;
pub mod quiver;
pub mod sample;
pub mod status;

pub use error::{Error, Result};
pub use linalg::{FieldSpec, Matrix, Scalar};
