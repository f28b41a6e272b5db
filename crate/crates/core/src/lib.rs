//! Polynomial-time reductions between Maximum-Likelihood Decoding of binary
//! linear codes and solving multivariate quadratic systems over GF(2).
//!
//! * [`alpha`] turns a decoding instance into a quadratic system.
//! * [`beta`] turns a quadratic system into a decoding instance.
//! * [`normalize`] provides the degree reduction and standard form used by both.
//! * [`oracles`] holds exhaustive reference solvers and verifiers.

pub mod alpha;
pub mod beta;
pub mod error;
pub mod generators;
pub mod gf2;
pub mod io;
pub mod normalize;
pub mod oracles;
pub mod poly;

pub use alpha::MldInstance;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use poly::{Assignment, BooleanPolynomial, Monomial, MqInstance, Origin, VarId, VariableRegistry};
