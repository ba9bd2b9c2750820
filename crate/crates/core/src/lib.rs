//! Solver library for the minimum independent dominating set problem
//! (equivalently: smallest maximal independent set).
//!
//! The pieces, bottom up:
//!
//! - [`graph`]: immutable adjacency-list graphs; [`dimacs`] I/O and [`gen`]
//!   instance generators.
//! - [`state`]: the incremental solution representation — a five-section
//!   vertex ordering (solution, free, 1-, 2-, ≥3-tight) with O(deg) add/drop
//!   and the counter/stamp primitives the searches are built on.
//! - [`search`]: 2-swap and 3-swap neighborhood searches and the local
//!   search driver.
//! - [`plateau`]: exploration of equal-size neighbor solutions.
//! - [`mod@ilps`]: the iterated local & plateau search metaheuristic with
//!   penalty-guided kicks.
//! - [`oracle`]: slow exhaustive reference implementations for testing.
//! - [`harness`]: batch experiment drivers with CSV/JSON output.

pub mod dimacs;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod ilps;
pub mod oracle;
pub mod plateau;
pub mod rng;
pub mod search;
pub mod state;

pub use graph::{verify_solution, Graph, SolutionDefect};
pub use ilps::{ilps, IlpsConfig, InitKind, RunResult};
pub use search::{local_search, SwapMove};
pub use state::SolutionState;
