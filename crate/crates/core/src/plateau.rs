//! Plateau search: explore equal-size neighbor solutions.
//!
//! An exchange `(x, v)` swaps one solution vertex `x` for one non-solution
//! vertex `v` and yields another maximal independent set of the same size.
//! That holds exactly when `v` is 1-tight, `x` is its unique solution
//! neighbor, and `v` is adjacent to every other member of F({x}); all such
//! exchanges are enumerable in O(|T1| * Δ).
//!
//! The search applies each exchange, runs the local search on the neighbor,
//! and keeps the result only on strict improvement (restarting the
//! enumeration there). Equal-size outcomes are rolled back with the exact
//! inverse exchange, so on exhaustion the state holds the entry solution.
//! Recursing only on strict improvement bounds the recursion depth by the
//! entry size and needs no visited-set.

use std::time::Instant;

use crate::search::Searcher;
use crate::state::SolutionState;

/// All exchanges `(x, v)` whose application preserves solution-hood, in
/// 1-tight section order.
pub fn enumerate_plateau_moves(state: &mut SolutionState) -> Vec<(u32, u32)> {
    assert!(state.is_maximal(), "plateau enumeration needs a maximal solution");
    let mut moves = Vec::new();
    for pos in state.one_tight_range() {
        let v = state.vertex_at(pos);
        debug_assert_eq!(state.tightness(v), 1);
        let x = state
            .first_solution_neighbor(v)
            .expect("1-tight vertex has a solution neighbor");
        if state.adjacent_to_all_fd(v, &[x]) {
            moves.push((x, v));
        }
    }
    moves
}

/// Runs the plateau search; on return the state holds a solution no larger
/// than on entry (the entry solution itself if nothing improved).
pub fn plateau_search(
    state: &mut SolutionState,
    k: u8,
    searcher: &mut Searcher,
    deadline: Option<Instant>,
) {
    let expired = |d: Option<Instant>| d.is_some_and(|d| Instant::now() >= d);
    loop {
        let entry_size = state.solution_size();
        let moves = enumerate_plateau_moves(state);
        let mut improved = false;
        for (x, v) in moves {
            if expired(deadline) {
                return;
            }
            // The list was snapshotted up front; re-check before applying.
            if !still_valid(state, x, v) {
                continue;
            }
            state.drop_vertex(x);
            state.add_vertex(v);
            searcher.local_search(state, k, deadline);
            if state.solution_size() < entry_size {
                improved = true;
                break;
            }
            // No improvement means the local search applied nothing; the
            // exchange is undone by its exact inverse.
            state.drop_vertex(v);
            state.add_vertex(x);
        }
        if !improved {
            return;
        }
    }
}

fn still_valid(state: &mut SolutionState, x: u32, v: u32) -> bool {
    state.in_solution(x)
        && !state.in_solution(v)
        && state.tightness(v) == 1
        && state.first_solution_neighbor(v) == Some(x)
        && state.adjacent_to_all_fd(v, &[x])
}
