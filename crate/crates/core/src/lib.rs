#![forbid(unsafe_code)]

//! Hedonic coalition-formation games with exact arithmetic.
//!
//! The crate represents games over players `1..=n` in seven preference
//! representations, evaluates utilities as exact rationals, checks five
//! stability notions with explicit witnesses, converts between
//! representations, and computes stable partitions by potential-function
//! local search, a largest-size tie-breaking greedy, and exhaustive
//! enumeration.
//!
//! Modules:
//! - [`model`]: players, coalitions, partitions, subset and partition streams.
//! - [`rational`]: exact rational values and parsing.
//! - [`games`]: the representations, the utility contract, profile predicates.
//! - [`transform`]: representation converters.
//! - [`stability`]: the five stability checkers.
//! - [`solve`]: constructive solvers and exhaustive oracles.
//! - [`fixtures`]: the built-in example games.
//! - [`generator`]: seeded random instances.
//! - [`json`]: the JSON instance format.

pub mod fixtures;
pub mod games;
pub mod generator;
pub mod json;
pub mod model;
pub mod rational;
pub mod solve;
pub mod stability;
pub mod transform;

pub use games::{GameError, GameKind, GameRepr};
pub use model::{Coalition, ModelError, Partition, PlayerId};
pub use rational::Rational;
