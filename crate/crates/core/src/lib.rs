//! Coherence-based reasoning over conditional events.
//!
//! The crate is organised bottom-up:
//!
//! * [`logic`] parses event formulas, enumerates possible worlds and groups
//!   them into constituents carrying the true/false/void tripartition of a
//!   family of conditional events.
//! * [`crq`] builds conjunction, disjunction and quasi conjunction of a
//!   family as value tables over constituents, both symbolically and after
//!   numeric instantiation.
//! * [`coherence`] checks coherence of prevision assessments by exact linear
//!   feasibility and computes coherent extension intervals.
//! * [`bounds`] holds the closed-form Fréchet-Hoeffding style results.
//! * [`entailment`] decides p-consistency and p-entailment and ships a
//!   catalog of inference rules.
//!
//! All arithmetic is exact ([`Rational`]); nothing in the crate uses floats
//! except for display helpers.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod coherence;
pub mod crq;
pub mod entailment;
pub mod logic;
pub mod rational;
mod simplex;

pub use rational::Rational;
