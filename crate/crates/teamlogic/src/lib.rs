//! Propositional logics of dependence under team semantics.
//!
//! The crate covers the language PT0 and its fragments PD, PDv, PID, InqL
//! and CPL: parsing and printing ([`formula`]), teams ([`team`]), exact
//! satisfaction ([`semantics`]), exhaustive decision procedures
//! ([`decide`]), normal forms and expressive completeness ([`normalform`]),
//! dependence-atom translations ([`translate`]), and a proof kernel that
//! checks Hilbert and natural deduction derivations and synthesizes natural
//! deduction proofs of valid entailments ([`proof`]).

pub mod decide;
pub mod formula;
pub mod normalform;
pub mod proof;
pub mod semantics;
pub mod team;
pub mod translate;

pub use formula::{parse, parse_any, render, Formula, Fragment, VarId};
pub use team::{IndexSet, Team, TeamFamily, Valuation};
