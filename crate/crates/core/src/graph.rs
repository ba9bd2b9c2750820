//! Immutable undirected simple graphs in compressed adjacency-list form.
//!
//! Neighbor lists are sorted ascending by vertex id; every loop that scans a
//! neighborhood therefore visits vertices in a fixed order, which pins down
//! tie-breaking throughout the solver. A graph is immutable after
//! construction and safe to share read-only across concurrent solver runs.

use std::fmt;

/// Undirected simple graph. Vertices are `0..n` as `u32`.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    max_degree: u32,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are collapsed.
    ///
    /// Panics on self-loops or endpoints outside `0..n`; callers that accept
    /// untrusted input (the DIMACS reader) validate before calling.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u != v, "self-loop at vertex {u}");
            assert!(
                (u as usize) < n && (v as usize) < n,
                "edge ({u},{v}) out of range for n={n}"
            );
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut max_degree = 0u32;
        offsets.push(0);
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            max_degree = max_degree.max(list.len() as u32);
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Graph {
            offsets,
            neighbors,
            max_degree,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Adjacency test by binary search in the sorted neighbor list.
    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.vertex_count() as u32
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Fraction of vertex pairs joined by an edge.
    pub fn density(&self) -> f64 {
        let n = self.vertex_count();
        if n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (n as f64 * (n as f64 - 1.0) / 2.0)
    }

    /// Complement graph: same vertices, edges exactly between non-adjacent
    /// distinct pairs.
    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut max_degree = 0u32;
        for u in self.vertices() {
            let list = &mut adj[u as usize];
            let mut it = self.neighbors(u).iter().copied().peekable();
            for v in 0..n as u32 {
                if Some(&v) == it.peek() {
                    it.next();
                    continue;
                }
                if v != u {
                    list.push(v);
                }
            }
            max_degree = max_degree.max(list.len() as u32);
        }
        offsets.push(0);
        for list in &adj {
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Graph {
            offsets,
            neighbors,
            max_degree,
        }
    }

    /// Structural self-check used by tests: symmetry, sorted neighbor lists,
    /// no loops or duplicates, degree sum and maximum degree bookkeeping.
    pub fn check_consistency(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let n = self.vertex_count();
        if self.offsets.len() != n + 1 || self.offsets[0] != 0 {
            problems.push("offset table malformed".to_string());
            return problems;
        }
        let mut degree_sum = 0usize;
        let mut observed_max = 0u32;
        for u in self.vertices() {
            let list = self.neighbors(u);
            degree_sum += list.len();
            observed_max = observed_max.max(list.len() as u32);
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    problems.push(format!("neighbors of {u} not strictly ascending"));
                    break;
                }
            }
            for &v in list {
                if v == u {
                    problems.push(format!("self-loop at {u}"));
                } else if v as usize >= n {
                    problems.push(format!("neighbor {v} of {u} out of range"));
                } else if !self.has_edge(v, u) {
                    problems.push(format!("edge ({u},{v}) not symmetric"));
                }
            }
        }
        if degree_sum != 2 * self.edge_count() {
            problems.push("degree sum != 2m".to_string());
        }
        if observed_max != self.max_degree {
            problems.push(format!(
                "max_degree {} != observed {observed_max}",
                self.max_degree
            ));
        }
        problems
    }
}

/// First constraint violated by a claimed independent dominating set, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionDefect {
    OutOfRange { id: u32 },
    Duplicate { id: u32 },
    NotIndependent { u: u32, v: u32 },
    NotDominated { v: u32 },
}

impl fmt::Display for SolutionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionDefect::OutOfRange { id } => write!(f, "vertex id {id} out of range"),
            SolutionDefect::Duplicate { id } => write!(f, "vertex id {id} listed twice"),
            SolutionDefect::NotIndependent { u, v } => {
                write!(f, "solution vertices {u} and {v} are adjacent")
            }
            SolutionDefect::NotDominated { v } => {
                write!(f, "vertex {v} has no neighbor in the solution")
            }
        }
    }
}

/// Checks that `solution` (0-based ids) is an independent dominating set of
/// `graph`. Returns the first violated constraint.
pub fn verify_solution(graph: &Graph, solution: &[u32]) -> Result<(), SolutionDefect> {
    let n = graph.vertex_count();
    let mut in_solution = vec![false; n];
    for &v in solution {
        if v as usize >= n {
            return Err(SolutionDefect::OutOfRange { id: v });
        }
        if in_solution[v as usize] {
            return Err(SolutionDefect::Duplicate { id: v });
        }
        in_solution[v as usize] = true;
    }
    for &v in solution {
        for &u in graph.neighbors(v) {
            if in_solution[u as usize] {
                return Err(SolutionDefect::NotIndependent { u: v.min(u), v: v.max(u) });
            }
        }
    }
    for v in graph.vertices() {
        if in_solution[v as usize] {
            continue;
        }
        if !graph.neighbors(v).iter().any(|&u| in_solution[u as usize]) {
            return Err(SolutionDefect::NotDominated { v });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path a-b-c as 0-1-2.
    pub(crate) fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn builds_and_dedups() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (1, 0)]);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.max_degree(), 2);
        assert!(g.check_consistency().is_empty());
    }

    #[test]
    #[should_panic(expected = "self-loop")]
    fn rejects_self_loop() {
        Graph::from_edges(2, &[(1, 1)]);
    }

    #[test]
    fn complement_of_path() {
        let g = path(4).complement();
        // P4 complement: edges (0,2),(0,3),(1,3)
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 2) && g.has_edge(0, 3) && g.has_edge(1, 3));
        assert!(g.check_consistency().is_empty());
    }

    #[test]
    fn verify_accepts_and_rejects() {
        let g = path(3);
        assert_eq!(verify_solution(&g, &[0, 2]), Ok(()));
        assert_eq!(verify_solution(&g, &[1]), Ok(()));
        assert_eq!(
            verify_solution(&g, &[0, 1]),
            Err(SolutionDefect::NotIndependent { u: 0, v: 1 })
        );
        assert_eq!(
            verify_solution(&g, &[0]),
            Err(SolutionDefect::NotDominated { v: 2 })
        );
        assert_eq!(
            verify_solution(&g, &[5]),
            Err(SolutionDefect::OutOfRange { id: 5 })
        );
        assert_eq!(
            verify_solution(&g, &[1, 1]),
            Err(SolutionDefect::Duplicate { id: 1 })
        );
    }
}
