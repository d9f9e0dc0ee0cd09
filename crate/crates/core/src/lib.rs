//! Exact q-series engine and verification harness for overpartitions whose
//! non-overlined parts are `l`-regular.
//!
//! The generating function of `R*_l(n)` is `f_2 f_l / f_1^2` with
//! `f_k = prod_{i>=1} (1 - q^{ki})`. This crate expands it (and the eta
//! quotients that appear in its dissections) exactly or modulo `M`, checks
//! a catalog of q-series identities at finite truncation, verifies
//! Ramanujan-type congruences `R*_l(An + B) ≡ 0 (mod M)`, and cross-checks
//! everything against independent combinatorial counts.
//!
//! Modules:
//! - [`series`]: truncated power series, sparse classical constructors, dissection
//! - [`qexpr`]: expression trees over `f_k`, `phi`, `psi`, `q`, with a parser
//! - [`enumeration`]: brute-force and dynamic-programming counting oracles
//! - [`identities`]: catalog of identities and a truncation-level verifier
//! - [`modforms`]: eta quotients, Nebentypus characters, Hecke operators
//! - [`congruence`]: progression claims, theorem instance generators, scanning

pub mod arith;
pub mod congruence;
pub mod enumeration;
pub mod identities;
pub mod modforms;
pub mod par;
pub mod qexpr;
pub mod report;
pub mod series;

pub use report::{CheckReport, Counterexample, Status};
pub use series::{Ring, Series, SeriesError};
