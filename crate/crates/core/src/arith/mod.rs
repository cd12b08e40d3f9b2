//! Exact arithmetic substrate: finite fields, polynomials, CRT, rational
//! reconstruction, small-group discrete logarithms and linear algebra mod p.

pub mod crt;
pub mod dlog;
pub mod field;
pub mod intpoly;
pub mod linalg;
pub mod poly;
pub mod primes;
pub mod qlinalg;

pub use crt::{crt_combine, rational_reconstruct, signed_rep};
pub use dlog::bsgs_dlog;
pub use field::{ExtField, Field, PrimeField};
pub use linalg::MatFp;
