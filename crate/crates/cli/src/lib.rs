//! Command-line front end for the generalized-planning engine: program
//! synthesis (`synth`), program validation (`validate`), benchmark
//! instance generation (`gen`), and STRIPS PDDL translation
//! (`translate`), plus the text formats those commands exchange.

pub mod commands;
pub mod formats;
pub mod pddl;
pub mod report;
