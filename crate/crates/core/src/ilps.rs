//! Iterated local & plateau search.
//!
//! Each iteration drives the current solution to a k-minimal one, explores
//! its plateau, updates the incumbent (also on ties, so equal-size solutions
//! rotate in), and then kicks the incumbent into the next starting solution.
//! Kicks force in low-penalty non-solution vertices; penalties grow on
//! vertices of every adopted starting solution and are halved every `delta`
//! iterations, steering successive starts toward unexplored vertices.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::plateau::plateau_search;
use crate::rng::Rng64;
use crate::search::Searcher;
use crate::state::SolutionState;

/// Per-vertex penalties with the periodic halving rule.
#[derive(Clone, Debug)]
pub struct PenaltyState {
    rho: Vec<u32>,
    delta: u32,
    iteration: u64,
}

impl PenaltyState {
    pub fn new(n: usize, delta: u32) -> Self {
        assert!(delta >= 1, "penalty delay must be positive");
        PenaltyState {
            rho: vec![0; n],
            delta,
            iteration: 0,
        }
    }

    /// One update: bump the penalty of every vertex of the adopted starting
    /// solution, then halve (capped at `delta`) every `delta`-th call.
    pub fn update(&mut self, solution: &[u32]) {
        self.iteration += 1;
        for &v in solution {
            self.rho[v as usize] += 1;
        }
        if self.iteration.is_multiple_of(self.delta as u64) {
            for r in &mut self.rho {
                *r = (*r).min(self.delta) / 2;
            }
        }
    }

    #[inline]
    pub fn penalty(&self, v: u32) -> u32 {
        self.rho[v as usize]
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn penalties(&self) -> &[u32] {
        &self.rho
    }
}

/// How the first solution is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    Greedy,
    Random,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IlpsConfig {
    /// Neighborhood order of the local search (2 or 3).
    pub k: u8,
    /// Penalty delay: the halving period, in iterations.
    pub delta: u32,
    /// Expected number of vertices a kick forces in.
    pub nu: u32,
    pub time_limit: Option<Duration>,
    pub max_iterations: Option<u64>,
    pub seed: u64,
    pub init: InitKind,
    /// With k = 3: run the plateau search only when the current size is
    /// within this margin of the incumbent (it is costly otherwise).
    pub plateau_gate: Option<u32>,
}

impl IlpsConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k != 2 && self.k != 3 {
            return Err(format!("k must be 2 or 3, got {}", self.k));
        }
        if self.delta < 1 {
            return Err("delta must be at least 1".into());
        }
        if self.nu < 1 {
            return Err("nu must be at least 1".into());
        }
        if self.time_limit.is_none() && self.max_iterations.is_none() {
            return Err("set a time limit and/or an iteration limit".into());
        }
        Ok(())
    }
}

/// Outcome of one solver run.
#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    /// Best solution found, sorted ascending, 0-based ids.
    pub best_solution: Vec<u32>,
    pub best_size: u32,
    /// Seconds from start until the final best size was first attained.
    pub time_to_best: f64,
    /// Completed main-loop iterations.
    pub iterations: u64,
    pub seed: u64,
}

/// Per-iteration observations, e.g. for trace logs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IterationRecord {
    pub iteration: u64,
    pub after_local_search: u32,
    pub after_plateau: u32,
    pub best_size: u32,
    pub elapsed_s: f64,
}

/// One in-flight ILPS run. Driving it step by step gives callers (traces,
/// experiment instrumentation, tests) access to every loop boundary.
pub struct IlpsRun<'g> {
    state: SolutionState<'g>,
    searcher: Searcher,
    penalties: PenaltyState,
    config: IlpsConfig,
    rng: Rng64,
    best: Vec<u32>,
    best_size: u32,
    time_to_best: f64,
    iterations: u64,
    started: Instant,
    deadline: Option<Instant>,
    // kick scratch
    pool: Vec<u32>,
    picked: Vec<u32>,
    ties: Vec<u32>,
}

impl<'g> IlpsRun<'g> {
    /// Builds the initial solution and applies the pre-loop penalty update.
    pub fn new(graph: &'g Graph, config: IlpsConfig) -> Self {
        config.validate().expect("invalid ILPS configuration");
        let mut rng = Rng64::seeded(config.seed);
        let mut state = SolutionState::init(graph);
        match config.init {
            InitKind::Greedy => state.greedy_max_degree(),
            InitKind::Random => state.random_maximal(&mut rng),
        }
        let started = Instant::now();
        let deadline = config.time_limit.map(|limit| started + limit);
        let mut penalties = PenaltyState::new(graph.vertex_count(), config.delta);
        penalties.update(state.solution());
        let best = state.solution_sorted();
        let best_size = best.len() as u32;
        IlpsRun {
            state,
            searcher: Searcher::new(),
            penalties,
            config,
            rng,
            best,
            best_size,
            time_to_best: 0.0,
            iterations: 0,
            started,
            deadline,
            pool: Vec::new(),
            picked: Vec::new(),
            ties: Vec::new(),
        }
    }

    pub fn finished(&self) -> bool {
        if let Some(max) = self.config.max_iterations {
            if self.iterations >= max {
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return true;
            }
        }
        false
    }

    /// Starting solution of the upcoming iteration (the initial construction
    /// before the first step, the kicked solution afterwards).
    pub fn current_solution(&self) -> &[u32] {
        self.state.solution()
    }

    pub fn best(&self) -> (&[u32], u32) {
        (&self.best, self.best_size)
    }

    pub fn penalties(&self) -> &PenaltyState {
        &self.penalties
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// One main-loop iteration: local search, (gated) plateau search,
    /// incumbent update, kick, penalty update.
    pub fn step(&mut self) -> IterationRecord {
        self.iterations += 1;
        self.searcher
            .local_search(&mut self.state, self.config.k, self.deadline);
        let after_local_search = self.state.solution_size() as u32;
        let gate_open = match (self.config.k, self.config.plateau_gate) {
            (3, Some(gate)) => after_local_search <= self.best_size + gate,
            _ => true,
        };
        if gate_open {
            plateau_search(
                &mut self.state,
                self.config.k,
                &mut self.searcher,
                self.deadline,
            );
        }
        let after_plateau = self.state.solution_size() as u32;
        if after_plateau <= self.best_size {
            if after_plateau < self.best_size {
                self.best_size = after_plateau;
                self.time_to_best = self.started.elapsed().as_secs_f64();
            }
            self.best = self.state.solution_sorted();
        }
        let record = IterationRecord {
            iteration: self.iterations,
            after_local_search,
            after_plateau,
            best_size: self.best_size,
            elapsed_s: self.started.elapsed().as_secs_f64(),
        };
        if !self.finished() {
            self.restore_incumbent();
            self.kick();
            self.penalties.update(self.state.solution());
        }
        record
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            best_solution: self.best,
            best_size: self.best_size,
            time_to_best: self.time_to_best,
            iterations: self.iterations,
            seed: self.config.seed,
        }
    }

    /// Rebuilds the incumbent in the working state (no-op when the current
    /// solution already equals it).
    fn restore_incumbent(&mut self) {
        let current = self.state.solution_sorted();
        if current == self.best {
            return;
        }
        for &x in &current {
            if self.best.binary_search(&x).is_err() {
                self.state.drop_vertex(x);
            }
        }
        for i in 0..self.best.len() {
            let v = self.best[i];
            if current.binary_search(&v).is_err() {
                self.state.add_vertex(v);
            }
        }
        debug_assert_eq!(self.state.solution_size(), self.best.len());
    }

    /// Perturbs the incumbent: pick vertices outside it one at a time
    /// (continuing with probability (nu-1)/nu after each pick), favoring
    /// minimum penalty; then rebuild a maximal solution around the picks.
    /// Returns the number of vertices forced in.
    fn kick(&mut self) -> usize {
        let n = self.state.graph().vertex_count();
        if self.state.solution_size() == n {
            // Edgeless graph: the incumbent dominates everything by itself.
            return 0;
        }
        let graph = self.state.graph();
        self.picked.clear();
        let mark = self.state.fresh_stamp();

        // First trial: uniform among minimum-penalty non-solution vertices.
        let mut min_penalty = u32::MAX;
        for v in 0..n as u32 {
            if self.state.in_solution(v) {
                continue;
            }
            let p = self.penalties.penalty(v);
            if p < min_penalty {
                min_penalty = p;
                self.ties.clear();
            }
            if p == min_penalty {
                self.ties.push(v);
            }
        }
        let first = self.ties[self.rng.below(self.ties.len() as u64) as usize];
        self.picked.push(first);
        self.state.set_stamp(first, mark);
        for &u in graph.neighbors(first) {
            self.state.set_stamp(u, mark);
        }

        // Later trials: sample three from the untouched pool, keep the
        // lowest-penalty one; stop with probability 1/nu after each pick.
        loop {
            if self.rng.below(self.config.nu as u64) == 0 {
                break;
            }
            self.pool.clear();
            for v in 0..n as u32 {
                if !self.state.in_solution(v) && self.state.stamp_of(v) != mark {
                    self.pool.push(v);
                }
            }
            if self.pool.is_empty() {
                break;
            }
            let sample_len = self.rng.partial_shuffle(&mut self.pool, 3);
            self.ties.clear();
            let mut sample_min = u32::MAX;
            for &v in &self.pool[..sample_len] {
                let p = self.penalties.penalty(v);
                if p < sample_min {
                    sample_min = p;
                    self.ties.clear();
                }
                if p == sample_min {
                    self.ties.push(v);
                }
            }
            let pick = self.ties[self.rng.below(self.ties.len() as u64) as usize];
            self.picked.push(pick);
            self.state.set_stamp(pick, mark);
            for &u in graph.neighbors(pick) {
                self.state.set_stamp(u, mark);
            }
        }

        // S = (S* \ N(R)) ∪ R, then fill greedily to maximality. The fill
        // breaks degree ties at random: regular graphs tie everywhere, and
        // deterministic ties would hand every kick the same completion.
        for &r in &self.picked {
            for &u in graph.neighbors(r) {
                if self.state.in_solution(u) {
                    self.state.drop_vertex(u);
                }
            }
        }
        for &v in &self.picked {
            self.state.add_vertex(v);
        }
        self.state.greedy_max_degree_randomized(&mut self.rng);
        self.picked.len()
    }
}

/// Runs ILPS to completion.
pub fn ilps(graph: &Graph, config: &IlpsConfig) -> RunResult {
    let mut run = IlpsRun::new(graph, config.clone());
    while !run.finished() {
        run.step();
    }
    run.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_grid, gen_random};
    use crate::graph::{verify_solution, Graph};

    fn star(leaves: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (1..=leaves as u32).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    fn config(k: u8, delta: u32, nu: u32, seed: u64) -> IlpsConfig {
        IlpsConfig {
            k,
            delta,
            nu,
            time_limit: None,
            max_iterations: Some(100),
            seed,
            init: InitKind::Greedy,
            plateau_gate: None,
        }
    }

    #[test]
    fn penalty_single_bump() {
        let mut pen = PenaltyState::new(3, 4);
        pen.update(&[0]);
        assert_eq!(pen.penalties(), &[1, 0, 0]);
    }

    #[test]
    fn penalty_delta_one_halves_every_call() {
        let mut pen = PenaltyState::new(2, 1);
        pen.update(&[0]);
        // Bumped to 1, then floor(min(1,1)/2) = 0.
        assert_eq!(pen.penalty(0), 0);
    }

    #[test]
    fn penalty_trace_with_delta_four() {
        // Vertex in the solution for 6 consecutive iterations, delta = 4:
        // 1, 2, 3, floor(min(4,4)/2)=2, 3, 4.
        let mut pen = PenaltyState::new(1, 4);
        let mut trace = Vec::new();
        for _ in 0..6 {
            pen.update(&[0]);
            trace.push(pen.penalty(0));
        }
        assert_eq!(trace, vec![1, 2, 3, 2, 3, 4]);
    }

    #[test]
    fn config_requires_some_limit() {
        let mut cfg = config(2, 4, 1, 0);
        cfg.max_iterations = None;
        assert!(cfg.validate().is_err());
        cfg.time_limit = Some(Duration::from_secs(1));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn star_solved_at_once() {
        // Greedy init already finds the center.
        let g = star(50);
        let mut cfg = config(2, 4, 1, 7);
        cfg.max_iterations = Some(3);
        let result = ilps(&g, &cfg);
        assert_eq!(result.best_size, 1);
        assert_eq!(result.best_solution, vec![0]);
        assert!(verify_solution(&g, &result.best_solution).is_ok());
    }

    #[test]
    fn grid_10x10_reaches_24() {
        // Known optimum for the 10x10 grid with this parameter set.
        let g = gen_grid(10, 10);
        let cfg = IlpsConfig {
            k: 2,
            delta: 40,
            nu: 1,
            time_limit: None,
            max_iterations: Some(5000),
            seed: 7,
            init: InitKind::Greedy,
            plateau_gate: None,
        };
        let mut run = IlpsRun::new(&g, cfg);
        while !run.finished() && run.best().1 > 24 {
            run.step();
        }
        let result = run.into_result();
        assert_eq!(result.best_size, 24);
        assert!(verify_solution(&g, &result.best_solution).is_ok());
    }

    #[test]
    fn kick_with_nu_one_forces_exactly_one_vertex() {
        let g = gen_random(60, 0.1, 3);
        let cfg = config(2, 4, 1, 5);
        let mut run = IlpsRun::new(&g, cfg);
        for _ in 0..20 {
            run.restore_incumbent();
            let forced = run.kick();
            assert_eq!(forced, 1);
            assert!(run.state.is_maximal());
            assert!(run.state.validate().is_empty());
        }
    }

    #[test]
    fn kick_on_star_incumbent_center() {
        // S* = {center}; the kick must pick a leaf, drop the center, and the
        // greedy fill adds the remaining leaves.
        let g = star(3);
        let mut cfg = config(2, 4, 1, 11);
        cfg.init = InitKind::Greedy;
        let mut run = IlpsRun::new(&g, cfg);
        assert_eq!(run.current_solution(), &[0]);
        let forced = run.kick();
        assert_eq!(forced, 1);
        let sol = run.state.solution_sorted();
        assert_eq!(sol, vec![1, 2, 3]);
    }

    #[test]
    fn kick_count_mean_matches_geometric_nu() {
        // |R| is geometric with mean nu while the pool holds out; empirical
        // mean over many kicks from a fixed incumbent.
        let g = gen_random(400, 0.05, 21);
        let mut cfg = config(2, 8, 3, 42);
        cfg.max_iterations = Some(1);
        let mut run = IlpsRun::new(&g, cfg);
        let mut total = 0usize;
        let kicks = 10_000;
        for _ in 0..kicks {
            run.restore_incumbent();
            total += run.kick();
        }
        let mean = total as f64 / kicks as f64;
        assert!(
            (2.8..=3.2).contains(&mean),
            "kick size mean {mean} outside [2.8, 3.2]"
        );
    }

    #[test]
    fn incumbent_updates_on_ties() {
        // The incumbent adopts same-size solutions, so after a step whose
        // plateau result ties the incumbent, best equals that latest set.
        let g = gen_random(30, 0.2, 9);
        let cfg = config(2, 4, 2, 13);
        let mut run = IlpsRun::new(&g, cfg);
        for _ in 0..10 {
            let before_step_current = run.current_solution().len();
            assert!(before_step_current > 0);
            let rec = run.step();
            if rec.after_plateau == rec.best_size {
                let (best, _) = run.best();
                // best was replaced by the searched solution of this step
                // (they may be equal sets; the sizes must match).
                assert_eq!(best.len() as u32, rec.after_plateau);
            }
            if run.finished() {
                break;
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = gen_random(40, 0.25, 31);
        let cfg = config(3, 4, 2, 99);
        let a = ilps(&g, &cfg);
        let b = ilps(&g, &cfg);
        assert_eq!(a.best_solution, b.best_solution);
        assert_eq!(a.best_size, b.best_size);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn penalty_trace_matches_logged_solutions() {
        // Replay the starting solutions through a fresh PenaltyState and
        // compare with the engine's internal penalties.
        let g = gen_random(25, 0.3, 17);
        let cfg = config(2, 3, 2, 55);
        let mut run = IlpsRun::new(&g, cfg);
        let mut log: Vec<Vec<u32>> = vec![run.current_solution().to_vec()];
        for _ in 0..12 {
            run.step();
            if run.finished() {
                break;
            }
            log.push(run.current_solution().to_vec());
        }
        let mut replay = PenaltyState::new(25, 3);
        for s in &log {
            replay.update(s);
        }
        assert_eq!(replay.penalties(), run.penalties().penalties());
        assert_eq!(replay.iteration(), run.penalties().iteration());
    }

    #[test]
    fn best_size_never_increases_and_verifies() {
        let g = gen_random(50, 0.15, 77);
        let cfg = config(3, 8, 3, 3);
        let mut run = IlpsRun::new(&g, cfg);
        let mut last_best = run.best().1;
        while !run.finished() {
            let rec = run.step();
            assert!(rec.best_size <= last_best);
            last_best = rec.best_size;
            // Loop boundary: the working solution is a consistent maximal
            // independent set.
            assert!(run.state.is_maximal());
            assert!(run.state.validate().is_empty());
        }
        let result = run.into_result();
        assert!(verify_solution(&g, &result.best_solution).is_ok());
    }
}
