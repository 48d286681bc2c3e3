#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod catalog;
pub mod corestrict;
pub mod error;
pub mod io;
pub mod k3fib;
pub mod lattice;
pub mod matrix;
pub mod numfield;
pub mod poly;
pub mod quat;
pub mod ramification;
pub mod reproduce;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use numfield::{FieldElement, Ideal, NumberField, PrimeIdeal};
