//! Quantum Wasserstein distance of order 1 between multi-qudit states and
//! between unitary operations.
//!
//! The crate computes:
//!
//! - the W1 norm of traceless Hermitian operators and the W1 distance
//!   between density matrices, with certificates bracketing the optimum
//!   ([`w1`]);
//! - the classical W1 distance with Hamming cost, which the quantum
//!   distance reproduces on diagonal states ([`w1::transport`]);
//! - the distance D(U, V) between unitary operations: an analytic catalog
//!   of common gates, a closed form for single qudits, and a multi-start
//!   ascent over pure states ([`unitary`]);
//! - W1 gate error rates under mixed-unitary, depolarizing, and unitary
//!   noise, with recovery-operation cost bounds ([`noise`]);
//! - POVM probability bounds, gate-sequence budgets, and per-gate tolerance
//!   thresholds for circuits ([`budget`]).
//!
//! Dense matrices only; the supported envelope is d^n ≤ 64 with a hard cap
//! at 256. All types are immutable after construction and safe to share
//! across threads. Every random choice is driven by an explicit seed.

pub mod budget;
pub mod cmatrix;
pub mod error;
pub mod expr;
pub mod json;
pub mod linalg;
pub mod noise;
pub mod operator;
pub mod random;
pub mod register;
pub mod report;
pub mod unitary;
pub mod w1;

pub use cmatrix::{CMatrix, C64};
pub use error::{Error, Result};
pub use operator::{DensityMatrix, HermitianOperator, UnitaryOperator};
pub use register::QuditRegister;
