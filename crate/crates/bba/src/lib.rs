//! Black-box algebra toolkit.
//!
//! A *black box* is an oracle presenting a hidden finite algebraic structure
//! (a group or a field) through three capabilities only: drawing near-uniform
//! random elements, applying the declared operations, and deciding equality.
//! Elements are opaque fixed-length bitstrings; nothing about the hidden
//! structure leaks through their encoding.
//!
//! The crate provides:
//!
//! - the oracle contract and generic routines over it ([`blackbox`]),
//! - concrete enumerable structures and a deterministic encryption wrapper
//!   that turns any of them into a black box hiding a secret bijection
//!   ([`explicit`], [`encrypt`]),
//! - product replacement sampling with statistical diagnostics ([`sampling`]),
//! - constructions of new boxes from old ones: direct and semidirect
//!   products, homomorphic images, generated subgroups, morphism graphs,
//!   proto-involutions, amalgamation, reification, and augmentation
//!   ([`constructions`]),
//! - constructive recognition of black-box fields ([`recognition`]),
//! - a known-plaintext attack harness that recovers the decryption map of a
//!   deterministic homomorphic encryption scheme, plus a black-box
//!   Miller-Rabin demo ([`attack`]),
//! - a command-line front end emitting JSON reports ([`cli`]).

pub mod attack;
pub mod blackbox;
pub mod cli;
pub mod constructions;
pub mod element;
pub mod encrypt;
mod error;
pub mod explicit;
pub mod laws;
pub mod recognition;
pub mod sampling;
mod util;

pub use blackbox::{BlackBox, BoxOracle, Counters, Kind, Op, QueryBudgetReport, Signature};
pub use element::CryptoElement;
pub use error::{Error, Result};
pub use explicit::{ExplicitStructure, FieldSpec};

/// Largest structure order the desk-scale routines will enumerate.
pub const ENUMERATION_CAP: u64 = 100_000;
