//! Primitive sets with large counting functions.
//!
//! The crate builds the set `S = ⋃ S_k`, where `S_k` collects the integers
//! with exactly `k` prime factors (with multiplicity) that are divisible by
//! the `k`-th term of a sparse prime sequence and coprime to the earlier
//! terms. Everything is counted exactly with a segmented Ω-sieve and
//! compared against the Sathe–Selberg main terms and the predicted
//! order of magnitude of the counting function.
//!
//! Modules, bottom-up:
//!
//! * [`sieve`] – primes, `Ω(n)`, `ω(n)`, factorization.
//! * [`sum`] – compensated summation.
//! * [`logs`] – the clamped iterated logarithms `log_ℓ`.
//! * [`sathe_selberg`] – `G(z)`, `H_j(x)`, exact `σ_j(x)`.
//! * [`slow_vary`] – slowly varying functions `L` and the convergence integral.
//! * [`prime_seq`] – the prime sequence with a certified reciprocal tail.
//! * [`construct`] – membership, enumeration and counting of `S`.
//! * [`primitive`] – primitivity verification and Erdős sums.
//! * [`ablocks`] – the doubly-exponential blocks `A_j` and their primitive subsets.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ablocks;
pub mod construct;
mod error;
pub mod logs;
pub mod numfmt;
pub mod prime_seq;
pub mod primitive;
pub mod sathe_selberg;
pub mod sieve;
pub mod slow_vary;
pub mod sum;

pub use error::{Error, Result};
pub use prime_seq::PrimeSequence;
pub use slow_vary::LSpec;
