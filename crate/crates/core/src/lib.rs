//! A symbolic engine for the genoid substitution calculus.
//!
//! * [`term`] and [`sigma`]: two-sorted term/substitution syntax and the
//!   σ-rewriting system (explicit substitutions, de Bruijn indices, rank).
//! * [`lambda`]: β/η normalization, combinators and classical binders.
//! * [`oracle`]: an independent named lambda calculus used for differential
//!   testing.
//! * [`clone`] and [`structure`]: the finitary clone of terms and its finite
//!   left algebras.
//! * [`fol`]: formulas, the substitution action on them, finite-model
//!   semantics and bounded validity checking.
//! * [`syntax`]: the concrete text syntax shared with the command line.
//! * [`selftest`]: the law suites run by `genoid selftest`.

pub mod clone;
pub mod error;
pub mod fol;
pub mod lambda;
pub mod oracle;
pub mod random;
pub mod selftest;
pub mod sigma;
pub mod structure;
pub mod syntax;
pub mod term;

pub use error::Error;
pub use fol::{Formula, Verdict, VerdictStatus};
pub use lambda::{LambdaFlags, ClosureResult};
pub use sigma::{NormalizeReport, NormalSubst, Sigma, Status};
pub use structure::{Assignment, Signature, Structure};
pub use term::{var, Subst, Term};
