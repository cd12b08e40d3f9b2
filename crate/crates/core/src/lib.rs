//! Trilinear maps built from the Weil pairing and the Néron–Severi module of a
//! principally polarized abelian variety over a finite field, together with the
//! discrete-logarithm attacks on the third encoding group.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] – prime and extension fields, polynomials, CRT, small discrete logs.
//! * [`varieties`] – elliptic curves, genus-2 Jacobians (Cantor arithmetic) and the
//!   synthetic module backend, all behind [`varieties::Backend`].
//! * [`model`] – the synthetic endomorphism-module backend.
//! * [`torsion`] – bases of `A[l]` and matrices of endomorphisms on them.
//! * [`pairing`] – Miller-loop Weil pairings and the derived pairings `e^Θ`, `e^D`.
//! * [`endo`] – endomorphism words, CRT characteristic polynomials, Rosati adjoints.
//! * [`trimap`] – setup, the three encodings and trilinear evaluation.
//! * [`attacks`] – the discrete-logarithm attacks and planted-instance generators.
//! * [`cli`] – the command-line driver behind the `avtri` binary.

pub mod arith;
pub mod attacks;
pub mod cli;
pub mod endo;
pub mod error;
pub mod model;
pub mod pairing;
pub mod rng;
pub mod torsion;
pub mod trimap;
pub mod varieties;

pub use error::{Error, Result};
