//! Core engine for synthesizing and validating generalized plans.
//!
//! A generalized plan here is a *planning program*: a short sequence of
//! lines holding either a ground instruction, a flag-conditioned `goto`,
//! or `end`. Programs are executed against classical planning instances
//! that share a domain vocabulary but differ in object counts, initial
//! states and goals. The instruction vocabulary is made instance-agnostic
//! by extending the planning model with a small register machine: typed
//! object-index registers ("pointers") plus a zero and a carry flag.
//!
//! The crate is `no_std` (with `alloc`); anything touching files, clocks
//! or the command line lives in the companion `bfgp` crate.

#![no_std]

extern crate alloc;

pub mod domains;
pub mod evaluation;
pub mod interpreter;
pub mod model;
pub mod program;
pub mod rng;
pub mod search;

pub use evaluation::{compare, eval_performance, eval_structural, EvalFn, EvaluationVector};
pub use interpreter::{run, run_all, ExecutionConfig, ExecutionOutcome, FailReason};
pub use model::{
    build_extended_domain, goal_satisfied, make_initial_state, ActionSchema, Domain,
    ExtendedDomain, Instance, PointerDecl, State,
};
pub use program::{Feature, Line, PlanningProgram};
pub use search::{bfgp, SearchLimits, SearchOutcome, SearchStats};
