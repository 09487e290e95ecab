//! Inconsistency-tolerant query answering over prioritized DL-Lite_R
//! knowledge bases.
//!
//! A knowledge base is a TBox plus strata `L_1 .. L_m` of assertions, each
//! consistent on its own. Queries are answered either by repairing the raw
//! strata first, or by querying every stratum and repairing the assertions
//! that support the answers. Both pipelines share the same three strategies:
//! π (consistent prefix), ℓ (linear) and nd (non-defeated).

#![no_std]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod model;
pub mod query;
pub mod reasoner;
pub mod repair;

pub use error::{GenError, KbError, NameKind, OracleTooLarge, PrefixOutOfRange, QueryError};
pub use model::{
    Assertion, AssertionSet, BasicConcept, ConceptName, IndividualName, PrioritizedKb, Role,
    RoleName, StratifiedAssertions, Stratum, TBox, TBoxAxiom,
};
pub use query::{
    answer_profile, evaluate, rewrite, AboxIndex, AnswerProfile, AnswerTuple, Atom,
    ConjunctiveQuery, QueryKind, RewrittenQuery, SupportMode, Term, Variable,
};
pub use reasoner::{Conflict, NegativeClosure};
pub use repair::{
    cns_rank, linear_repair, linear_repair_observed, nd_prefix_table, nd_repair, pi_repair,
    repair_answers, run_strategy, Engine, Pipeline, RankOutcome, Repair, RepairOutcome, Strategy,
};
