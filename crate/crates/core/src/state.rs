//! Incremental maximal-independent-set state.
//!
//! All vertices live in one permutation `order` (with inverse `position`)
//! split into five contiguous sections:
//!
//! ```text
//! [ solution | free (0-tight) | 1-tight | 2-tight | >=3-tight ]
//!   0..s_end   s_end..t0_end    ..t1_end  ..t2_end  ..n
//! ```
//!
//! The tightness of a non-solution vertex is its number of solution
//! neighbors. Adding or dropping a vertex relocates each affected neighbor
//! across one section boundary with a swap, so both operations cost
//! O(deg(v)). Within a section the arrangement is arbitrary but fully
//! determined by the operation history, which keeps runs reproducible.
//!
//! The scratch fields `counter` (`c`), `stamp` (`χ`) and `stamp_value` (`γ`)
//! back the three constant-size-workspace primitives used by the searches:
//! F(D) listing, the "adjacent to all of F(D)" test, and the stamp-based
//! "adjacent to all of F" test. They carry no state between calls.

use crate::graph::Graph;

/// Section a vertex currently belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Solution,
    Free,
    OneTight,
    TwoTight,
    ThreeOrMore,
}

pub struct SolutionState<'g> {
    graph: &'g Graph,
    /// position[v] = index of v in `order`; mutually inverse with `order`.
    position: Vec<u32>,
    order: Vec<u32>,
    /// tau[v] = |N(v) ∩ S|. Zero for solution vertices (S is independent).
    tau: Vec<u32>,
    s_end: usize,
    t0_end: usize,
    t1_end: usize,
    t2_end: usize,
    counter: Vec<u32>,
    stamp: Vec<u32>,
    stamp_value: u32,
    relocations: u64,
}

const STAMP_LIMIT: u32 = u32::MAX - 1;

impl<'g> SolutionState<'g> {
    /// Empty solution: every vertex is free.
    pub fn init(graph: &'g Graph) -> Self {
        let n = graph.vertex_count();
        SolutionState {
            graph,
            position: (0..n as u32).collect(),
            order: (0..n as u32).collect(),
            tau: vec![0; n],
            s_end: 0,
            t0_end: n,
            t1_end: n,
            t2_end: n,
            counter: vec![0; n],
            stamp: vec![0; n],
            stamp_value: 1,
            relocations: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn solution_size(&self) -> usize {
        self.s_end
    }

    #[inline]
    pub fn in_solution(&self, v: u32) -> bool {
        (self.position[v as usize] as usize) < self.s_end
    }

    #[inline]
    pub fn tightness(&self, v: u32) -> u32 {
        self.tau[v as usize]
    }

    pub fn section_of(&self, v: u32) -> Section {
        let p = self.position[v as usize] as usize;
        if p < self.s_end {
            Section::Solution
        } else if p < self.t0_end {
            Section::Free
        } else if p < self.t1_end {
            Section::OneTight
        } else if p < self.t2_end {
            Section::TwoTight
        } else {
            Section::ThreeOrMore
        }
    }

    /// Solution vertices in internal (arbitrary) order.
    pub fn solution(&self) -> &[u32] {
        &self.order[..self.s_end]
    }

    /// Solution vertices sorted ascending.
    pub fn solution_sorted(&self) -> Vec<u32> {
        let mut s = self.solution().to_vec();
        s.sort_unstable();
        s
    }

    pub fn free_count(&self) -> usize {
        self.t0_end - self.s_end
    }

    /// Position ranges of the tightness sections, for scan loops.
    pub fn one_tight_range(&self) -> std::ops::Range<usize> {
        self.t0_end..self.t1_end
    }

    pub fn two_tight_range(&self) -> std::ops::Range<usize> {
        self.t1_end..self.t2_end
    }

    pub fn three_plus_range(&self) -> std::ops::Range<usize> {
        self.t2_end..self.order.len()
    }

    #[inline]
    pub fn vertex_at(&self, position: usize) -> u32 {
        self.order[position]
    }

    #[inline]
    pub fn position_of(&self, v: u32) -> usize {
        self.position[v as usize] as usize
    }

    /// Some free vertex in O(1), or `None` iff the solution is maximal.
    pub fn pick_free(&self) -> Option<u32> {
        (self.s_end < self.t0_end).then(|| self.order[self.s_end])
    }

    pub fn is_maximal(&self) -> bool {
        self.s_end == self.t0_end
    }

    /// Section relocations performed so far (instrumentation for tests).
    pub fn relocation_count(&self) -> u64 {
        self.relocations
    }

    #[inline]
    fn swap_into(&mut self, v: u32, target: usize) {
        let i = self.position[v as usize] as usize;
        let w = self.order[target];
        self.order.swap(i, target);
        self.position[v as usize] = target as u32;
        self.position[w as usize] = i as u32;
        self.relocations += 1;
    }

    /// Adds a free vertex to the solution; neighbors gain one tightness.
    ///
    /// Panics if `v` is already in the solution or has a solution neighbor.
    pub fn add_vertex(&mut self, v: u32) {
        assert!(!self.in_solution(v), "add_vertex: {v} already in solution");
        assert_eq!(
            self.tau[v as usize], 0,
            "add_vertex: {v} has a solution neighbor"
        );
        let graph = self.graph;
        // v sits in the free section, adjacent to the solution section.
        self.swap_into(v, self.s_end);
        self.s_end += 1;
        for &u in graph.neighbors(v) {
            self.tau[u as usize] += 1;
            match self.tau[u as usize] {
                1 => {
                    self.swap_into(u, self.t0_end - 1);
                    self.t0_end -= 1;
                }
                2 => {
                    self.swap_into(u, self.t1_end - 1);
                    self.t1_end -= 1;
                }
                3 => {
                    self.swap_into(u, self.t2_end - 1);
                    self.t2_end -= 1;
                }
                _ => {}
            }
        }
    }

    /// Drops a solution vertex; neighbors lose one tightness and the vertex
    /// itself lands in the free section (its own tightness is zero because
    /// the solution is independent).
    ///
    /// Panics if `x` is not in the solution.
    pub fn drop_vertex(&mut self, x: u32) {
        assert!(self.in_solution(x), "drop_vertex: {x} not in solution");
        debug_assert_eq!(self.tau[x as usize], 0);
        let graph = self.graph;
        self.swap_into(x, self.s_end - 1);
        self.s_end -= 1;
        for &u in graph.neighbors(x) {
            let before = self.tau[u as usize];
            self.tau[u as usize] -= 1;
            match before {
                1 => {
                    self.swap_into(u, self.t0_end);
                    self.t0_end += 1;
                }
                2 => {
                    self.swap_into(u, self.t1_end);
                    self.t1_end += 1;
                }
                3 => {
                    self.swap_into(u, self.t2_end);
                    self.t2_end += 1;
                }
                _ => {}
            }
        }
    }

    /// Repeatedly adds the maximum-degree free vertex (ties: smallest id)
    /// until the solution is maximal.
    pub fn greedy_max_degree(&mut self) {
        while self.s_end < self.t0_end {
            let mut best = self.order[self.s_end];
            let mut best_deg = self.graph.degree(best);
            for i in self.s_end + 1..self.t0_end {
                let v = self.order[i];
                let d = self.graph.degree(v);
                if d > best_deg || (d == best_deg && v < best) {
                    best = v;
                    best_deg = d;
                }
            }
            self.add_vertex(best);
        }
    }

    /// Maximum-degree greedy fill with uniform random tie-breaking.
    ///
    /// On regular graphs (where every vertex ties) the smallest-id rule
    /// collapses all completions to one lexicographic choice; kicks rely on
    /// diverse completions, so they use this variant. Deterministic given
    /// the generator state.
    pub fn greedy_max_degree_randomized(&mut self, rng: &mut crate::rng::Rng64) {
        while self.s_end < self.t0_end {
            let mut best_deg = 0;
            let mut ties = 0u64;
            for i in self.s_end..self.t0_end {
                let d = self.graph.degree(self.order[i]);
                if d > best_deg {
                    best_deg = d;
                    ties = 0;
                }
                if d == best_deg {
                    ties += 1;
                }
            }
            let mut chosen = rng.below(ties);
            let mut pick = self.order[self.s_end];
            for i in self.s_end..self.t0_end {
                let v = self.order[i];
                if self.graph.degree(v) == best_deg {
                    if chosen == 0 {
                        pick = v;
                        break;
                    }
                    chosen -= 1;
                }
            }
            self.add_vertex(pick);
        }
    }

    /// Repeatedly adds a uniformly random free vertex until maximal.
    pub fn random_maximal(&mut self, rng: &mut crate::rng::Rng64) {
        while self.s_end < self.t0_end {
            let span = (self.t0_end - self.s_end) as u64;
            let v = self.order[self.s_end + rng.below(span) as usize];
            self.add_vertex(v);
        }
    }

    /// The unique solution neighbor of a 1-tight vertex, or the first one in
    /// adjacency order for higher tightness.
    pub fn first_solution_neighbor(&self, v: u32) -> Option<u32> {
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| self.in_solution(u))
    }

    /// Solution neighbors of `v` in adjacency order, written into `out`.
    pub fn solution_neighbors_into(&self, v: u32, out: &mut Vec<u32>) {
        out.clear();
        for &u in self.graph.neighbors(v) {
            if self.in_solution(u) {
                out.push(u);
            }
        }
    }

    /// Lists F(D) = { v ∉ S : N(v) ∩ S ⊆ D } for a set `drop` of solution
    /// vertices, by the two-scan counter method: first zero the counters of
    /// every neighbor of `drop`, then re-scan incrementing; a vertex whose
    /// counter reaches its tightness has all its solution neighbors inside
    /// `drop`. O(|drop| * Δ). Solution vertices never qualify (their tau is
    /// zero) and free vertices cannot occur while the solution is maximal.
    pub fn list_f_into(&mut self, drop: &[u32], out: &mut Vec<u32>) {
        out.clear();
        debug_assert!(drop.iter().all(|&x| self.in_solution(x)));
        debug_assert!(
            (1..drop.len()).all(|i| !drop[..i].contains(&drop[i])),
            "drop set contains duplicates"
        );
        for &x in drop {
            for &u in self.graph.neighbors(x) {
                self.counter[u as usize] = 0;
            }
        }
        for &x in drop {
            for &u in self.graph.neighbors(x) {
                self.counter[u as usize] += 1;
                if self.counter[u as usize] == self.tau[u as usize] {
                    out.push(u);
                }
            }
        }
    }

    /// Convenience allocating form of [`Self::list_f_into`].
    ///
    /// Panics if some member of `drop` is not in the solution.
    pub fn list_f(&mut self, drop: &[u32]) -> Vec<u32> {
        for &x in drop {
            assert!(self.in_solution(x), "list_f: {x} not in solution");
        }
        let mut out = Vec::new();
        self.list_f_into(drop, &mut out);
        out
    }

    /// Whether `v ∈ F(D)` is adjacent to every other member of F(D), using
    /// the counting variant: pre-zero the counters of N(v), run the F(D)
    /// scans, then count neighbors of `v` that landed in F(D) and compare
    /// with |F(D)| - 1. O(|drop| * Δ), no F(D) materialization.
    ///
    /// Panics if `v` is not in F(D).
    pub fn adjacent_to_all_fd(&mut self, v: u32, drop: &[u32]) -> bool {
        debug_assert!(!self.in_solution(v));
        let graph = self.graph;
        for &u in graph.neighbors(v) {
            self.counter[u as usize] = 0;
        }
        self.counter[v as usize] = 0;
        for &x in drop {
            debug_assert!(self.in_solution(x));
            for &u in graph.neighbors(x) {
                self.counter[u as usize] = 0;
            }
        }
        let mut f_size: usize = 0;
        for &x in drop {
            for &u in graph.neighbors(x) {
                self.counter[u as usize] += 1;
                if self.counter[u as usize] == self.tau[u as usize] {
                    f_size += 1;
                }
            }
        }
        assert_eq!(
            self.counter[v as usize], self.tau[v as usize],
            "adjacent_to_all_fd: vertex {v} is not in F(D)"
        );
        let k = drop.len() as u32;
        let mut adjacent_members = 0usize;
        for &u in self.graph.neighbors(v) {
            let t = self.tau[u as usize];
            if (1..=k).contains(&t) && self.counter[u as usize] == t {
                adjacent_members += 1;
            }
        }
        adjacent_members == f_size - 1
    }

    /// Whether `v ∈ f` is adjacent to every other member of the explicit
    /// vertex list `f`: stamp the members, count stamped neighbors of `v`,
    /// compare with |f| - 1. O(|f| + deg(v)).
    ///
    /// Panics if `v` is not in `f`.
    pub fn adjacent_to_all_in(&mut self, v: u32, f: &[u32]) -> bool {
        assert!(f.contains(&v), "adjacent_to_all_in: {v} not in the list");
        let g = self.fresh_stamp();
        for &u in f {
            self.stamp[u as usize] = g;
        }
        let adjacent = self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.stamp[u as usize] == g)
            .count();
        adjacent == f.len() - 1
    }

    /// Hands out an unused stamp value; marks made with it stay
    /// distinguishable until the value is reused after a wrap-around reset.
    pub(crate) fn fresh_stamp(&mut self) -> u32 {
        let g = self.stamp_value;
        if self.stamp_value == STAMP_LIMIT {
            self.stamp.fill(0);
            self.stamp_value = 1;
        } else {
            self.stamp_value += 1;
        }
        g
    }

    #[inline]
    pub(crate) fn set_stamp(&mut self, v: u32, g: u32) {
        self.stamp[v as usize] = g;
    }

    #[inline]
    pub(crate) fn stamp_of(&self, v: u32) -> u32 {
        self.stamp[v as usize]
    }

    /// Forces the stamp counter close to its limit (wrap-around tests).
    #[doc(hidden)]
    pub fn force_stamp_value(&mut self, value: u32) {
        self.stamp_value = value;
    }

    /// Recomputes tightness, section membership and independence from
    /// scratch; returns all violations found (empty means consistent).
    pub fn validate(&self) -> Vec<String> {
        let n = self.graph.vertex_count();
        let mut problems = Vec::new();
        if !(self.s_end <= self.t0_end && self.t0_end <= self.t1_end
            && self.t1_end <= self.t2_end && self.t2_end <= n)
        {
            problems.push("section boundaries out of order".to_string());
            return problems;
        }
        for v in 0..n as u32 {
            let p = self.position[v as usize] as usize;
            if p >= n || self.order[p] != v {
                problems.push(format!("position/order mismatch at vertex {v}"));
            }
        }
        for v in 0..n as u32 {
            let true_tau = self
                .graph
                .neighbors(v)
                .iter()
                .filter(|&&u| self.in_solution(u))
                .count() as u32;
            if self.in_solution(v) {
                if true_tau != 0 {
                    problems.push(format!("solution vertex {v} has a solution neighbor"));
                }
                if self.tau[v as usize] != 0 {
                    problems.push(format!("solution vertex {v} carries nonzero tau"));
                }
                continue;
            }
            if self.tau[v as usize] != true_tau {
                problems.push(format!(
                    "tau[{v}] = {} but |N(v) ∩ S| = {true_tau}",
                    self.tau[v as usize]
                ));
            }
            let expected = match true_tau {
                0 => Section::Free,
                1 => Section::OneTight,
                2 => Section::TwoTight,
                _ => Section::ThreeOrMore,
            };
            if self.section_of(v) != expected {
                problems.push(format!(
                    "vertex {v} with tightness {true_tau} sits in section {:?}",
                    self.section_of(v)
                ));
            }
        }
        problems
    }
}

/// Renders a solution as sorted 1-based vertex ids, one per line.
pub fn format_solution_ids(solution_sorted: &[u32]) -> String {
    let mut out = String::new();
    for &v in solution_sorted {
        out.push_str(&(v + 1).to_string());
        out.push('\n');
    }
    out
}
