//! Brute-force ground truth for small instances.
//!
//! Everything here is written for clarity, not speed, and deliberately shares
//! no code with the incremental solver structures: tests compare the two
//! against each other, so correlated bugs would defeat the purpose.

use thiserror::Error;

use crate::graph::Graph;

/// Practical bound for the exhaustive exact search.
pub const MAX_EXACT_N: usize = 26;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} vertices, exact search refuses n > {max}", max = MAX_EXACT_N)]
    TooLarge { n: usize },
}

/// Exact minimum independent dominating set by branch and bound.
///
/// Recursion picks the lowest-id vertex not yet dominated and branches on
/// which member of its closed neighborhood joins the solution; visited
/// candidates are forbidden in later branches so no solution is enumerated
/// twice. Returns `(size, sorted vertex set)`.
pub fn exact_min_ids(graph: &Graph) -> Result<(u32, Vec<u32>), OracleError> {
    let n = graph.vertex_count();
    if n > MAX_EXACT_N {
        return Err(OracleError::TooLarge { n });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    struct Ctx<'g> {
        graph: &'g Graph,
        in_set: Vec<bool>,
        // neighbors-in-set counter; a vertex is addable iff its count is 0
        sol_neighbors: Vec<u32>,
        forbidden: Vec<bool>,
        chosen: Vec<u32>,
        best: Option<Vec<u32>>,
    }
    impl Ctx<'_> {
        fn first_undominated(&self) -> Option<u32> {
            (0..self.graph.vertex_count() as u32)
                .find(|&v| !self.in_set[v as usize] && self.sol_neighbors[v as usize] == 0)
        }
        fn recurse(&mut self) {
            if let Some(best) = &self.best {
                if self.chosen.len() + 1 >= best.len() {
                    // Any completion adds at least one more vertex.
                    if self.first_undominated().is_some() {
                        return;
                    }
                }
            }
            let Some(u) = self.first_undominated() else {
                // Independent and dominating, hence maximal independent.
                let better = self
                    .best
                    .as_ref()
                    .is_none_or(|b| self.chosen.len() < b.len());
                if better {
                    let mut sol = self.chosen.clone();
                    sol.sort_unstable();
                    self.best = Some(sol);
                }
                return;
            };
            let mut candidates: Vec<u32> = Vec::new();
            if !self.forbidden[u as usize] {
                candidates.push(u);
            }
            for &w in self.graph.neighbors(u) {
                if !self.forbidden[w as usize] && self.sol_neighbors[w as usize] == 0 {
                    candidates.push(w);
                }
            }
            let mut newly_forbidden = Vec::new();
            for &w in &candidates {
                self.in_set[w as usize] = true;
                self.chosen.push(w);
                for &x in self.graph.neighbors(w) {
                    self.sol_neighbors[x as usize] += 1;
                }
                self.recurse();
                for &x in self.graph.neighbors(w) {
                    self.sol_neighbors[x as usize] -= 1;
                }
                self.chosen.pop();
                self.in_set[w as usize] = false;
                self.forbidden[w as usize] = true;
                newly_forbidden.push(w);
            }
            for w in newly_forbidden {
                self.forbidden[w as usize] = false;
            }
        }
    }
    let mut ctx = Ctx {
        graph,
        in_set: vec![false; n],
        sol_neighbors: vec![0; n],
        forbidden: vec![false; n],
        chosen: Vec::new(),
        best: None,
    };
    ctx.recurse();
    let best = ctx.best.expect("every graph has a maximal independent set");
    Ok((best.len() as u32, best))
}

/// Direct set-comprehension form of F(D): non-solution vertices whose
/// solution neighbors all lie in `drop`.
pub fn naive_f(graph: &Graph, solution: &[u32], drop: &[u32]) -> Vec<u32> {
    let in_solution = mark(graph.vertex_count(), solution);
    let in_drop = mark(graph.vertex_count(), drop);
    graph
        .vertices()
        .filter(|&v| !in_solution[v as usize])
        .filter(|&v| {
            graph
                .neighbors(v)
                .iter()
                .all(|&u| !in_solution[u as usize] || in_drop[u as usize])
        })
        .collect()
}

/// True iff `set` is a maximal independent set of `graph`.
pub fn is_maximal_independent(graph: &Graph, set: &[u32]) -> bool {
    crate::graph::verify_solution(graph, set).is_ok()
}

/// Exhaustive k-minimality certificate: enumerates every k-subset `D` of the
/// solution and every added subset `A ⊆ F(D)` with `|A| < k`, accepting iff
/// no `(S \ D) ∪ A` is a solution.
pub fn certify_k_minimal(graph: &Graph, solution: &[u32], k: usize) -> bool {
    find_improving_k_swap(graph, solution, k).is_none()
}

/// Finds some improving k-swap `(drop, add)` by exhaustive enumeration, or
/// `None` if the solution is k-minimal.
pub fn find_improving_k_swap(
    graph: &Graph,
    solution: &[u32],
    k: usize,
) -> Option<(Vec<u32>, Vec<u32>)> {
    if solution.len() < k {
        return None;
    }
    let mut drop_buf = vec![0u32; k];
    enumerate_subsets(solution, k, &mut drop_buf, 0, 0, &mut |drop| {
        let f = naive_f(graph, solution, drop);
        for add_size in 1..k {
            let mut add_buf = vec![0u32; add_size];
            let found = enumerate_subsets(&f, add_size, &mut add_buf, 0, 0, &mut |add| {
                if swap_yields_solution(graph, solution, drop, add) {
                    Some(add.to_vec())
                } else {
                    None
                }
            });
            if let Some(add) = found {
                return Some((drop.to_vec(), add));
            }
        }
        None
    })
}

/// All equal-size exchanges `(x ∈ S, v ∉ S)` such that `(S \ {x}) ∪ {v}` is
/// again a maximal independent set.
pub fn naive_plateau(graph: &Graph, solution: &[u32]) -> Vec<(u32, u32)> {
    let in_solution = mark(graph.vertex_count(), solution);
    let mut moves = Vec::new();
    for &x in solution {
        let rest: Vec<u32> = solution.iter().copied().filter(|&s| s != x).collect();
        for v in graph.vertices() {
            if in_solution[v as usize] {
                continue;
            }
            let mut candidate = rest.clone();
            candidate.push(v);
            if is_maximal_independent(graph, &candidate) {
                moves.push((x, v));
            }
        }
    }
    moves
}

fn swap_yields_solution(graph: &Graph, solution: &[u32], drop: &[u32], add: &[u32]) -> bool {
    let mut next: Vec<u32> = solution
        .iter()
        .copied()
        .filter(|v| !drop.contains(v))
        .collect();
    next.extend_from_slice(add);
    is_maximal_independent(graph, &next)
}

fn mark(n: usize, items: &[u32]) -> Vec<bool> {
    let mut flags = vec![false; n];
    for &v in items {
        flags[v as usize] = true;
    }
    flags
}

/// Lexicographic subset enumeration with early exit through the callback.
fn enumerate_subsets<T>(
    items: &[u32],
    size: usize,
    buf: &mut [u32],
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[u32]) -> Option<T>,
) -> Option<T> {
    if depth == size {
        return visit(buf);
    }
    for i in start..items.len() {
        if items.len() - i < size - depth {
            break;
        }
        buf[depth] = items[i];
        if let Some(found) = enumerate_subsets(items, size, buf, depth + 1, i + 1, visit) {
            return Some(found);
        }
    }
    None
}
