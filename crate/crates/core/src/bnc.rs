//! Branch-and-cut: best-bound node selection, most-fractional branching,
//! cut rounds driven by a [`strategy`](crate::strategy) plan, and a global
//! cut pool with aging.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::cuts::{Cut, CutKind, Family, SeparationConfig, SeparationContext};
use crate::instance::{CanonicalSolution, Instance, Lightpath};
use crate::lp::{LpError, LpProblem, LpSettings, LpStatus, Simplex};
use crate::model::{build_model, Dims, FractionalPoint, Model, ModelOptions};
use crate::strategy::{CallPlan, EffectivenessStats, StrategyConfig, StrategyError};
use crate::{FEAS_TOL, INT_TOL};

/// Wall-clock source in minutes since the solve started.
pub trait Clock {
    fn minutes(&self) -> f64;
}

/// A clock that never advances; only node limits stop the search.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn minutes(&self) -> f64 {
        0.0
    }
}

impl<F: Fn() -> f64> Clock for F {
    fn minutes(&self) -> f64 {
        self()
    }
}

/// Per-family ε with a shared default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpsTable {
    pub default: f64,
    pub per_family: BTreeMap<Family, f64>,
}

impl EpsTable {
    pub fn get(&self, family: Family) -> f64 {
        self.per_family.get(&family).copied().unwrap_or(self.default)
    }

    pub fn set(&mut self, family: Family, eps: f64) {
        self.per_family.insert(family, eps);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BncConfig {
    pub time_limit_minutes: f64,
    pub node_limit: Option<usize>,
    pub strategy: StrategyConfig,
    pub eps: EpsTable,
    pub families: Vec<Family>,
    /// Also separate optimality cuts and equations.
    pub use_optimality_cuts: bool,
    /// Install the no-out-from-target rows and contiguity equations in the model.
    pub static_rows: bool,
    pub separation: SeparationConfig,
    pub root_rounds: usize,
    pub node_rounds: usize,
    /// A round improving the bound by less than this (relative) ends the rounds.
    pub tailing_off: f64,
    /// Node LPs a cut may stay slack before it leaves the LP.
    pub max_inactive: usize,
    pub inactive_slack: f64,
    pub seed: u64,
    /// Emit a progress line every this many nodes (0: only at the end).
    pub log_every: usize,
}

impl Default for BncConfig {
    fn default() -> Self {
        Self {
            time_limit_minutes: f64::INFINITY,
            node_limit: None,
            strategy: StrategyConfig::default(),
            eps: EpsTable::default(),
            families: Family::ALL.to_vec(),
            use_optimality_cuts: true,
            static_rows: true,
            separation: SeparationConfig::default(),
            root_rounds: 10,
            node_rounds: 2,
            tailing_off: 1e-4,
            max_inactive: 50,
            inactive_slack: 0.1,
            seed: 0,
            log_every: 0,
        }
    }
}

impl BncConfig {
    /// Same settings with every family switched off.
    pub fn plain(&self) -> Self {
        Self { families: Vec::new(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), BncError> {
        self.strategy.validate()?;
        if self.time_limit_minutes.is_nan() || self.time_limit_minutes < 0.0 {
            return Err(BncError::Config("time limit must be non-negative"));
        }
        if self.families.iter().any(|f| !(self.eps.get(*f) >= 0.0)) {
            return Err(BncError::Config("ε must be non-negative"));
        }
        Ok(())
    }

    fn active_families(&self) -> Vec<Family> {
        let mut v: Vec<Family> = Vec::new();
        for &f in &self.families {
            if (self.use_optimality_cuts || f.kind() == CutKind::Valid) && !v.contains(&f) {
                v.push(f);
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BncError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("branching asked for on an integral point")]
    IntegralPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    /// Stopped by a limit with an incumbent.
    Feasible,
    /// Stopped by a limit without an incumbent.
    NoSolution,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::NoSolution => "no-solution",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

/// LP bounds just before and after one cut round's rows were added.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundBound {
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub incumbent: Option<FractionalPoint>,
    pub solution: Option<CanonicalSolution>,
    pub best_bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub cuts_by_family: BTreeMap<Family, usize>,
    /// Every cut that entered the LP, in order.
    pub added_cuts: Vec<Cut>,
    pub rounds: Vec<RoundBound>,
    pub pool: Vec<PoolRecord>,
    pub lp_pivots: usize,
    pub wall_minutes: f64,
    pub stats: EffectivenessStats,
}

impl SolveResult {
    pub fn total_cuts(&self) -> usize {
        self.added_cuts.len()
    }

    /// Largest bound decrease over all cut rounds (0 when none decreased).
    pub fn worst_bound_drop(&self) -> f64 {
        self.rounds.iter().map(|r| r.before - r.after).fold(0.0, f64::max)
    }
}

/// `(incumbent − bound) / max(|incumbent|, 1e-9)` clamped to `[0, 1]`.
pub fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    ((incumbent - bound) / libm::fabs(incumbent).max(1e-9)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// `(variable, value)` pairs, value 0 or 1.
    pub fixings: Vec<(usize, bool)>,
    pub parent_bound: f64,
    pub depth: usize,
    seq: usize,
}

impl Node {
    pub fn root() -> Self {
        Self { fixings: Vec::new(), parent_bound: f64::NEG_INFINITY, depth: 0, seq: 0 }
    }

    fn child(&self, var: usize, value: bool, bound: f64, seq: usize) -> Self {
        let mut fixings = self.fixings.clone();
        fixings.push((var, value));
        Self { fixings, parent_bound: bound, depth: self.depth + 1, seq }
    }

    /// No variable is fixed to both values.
    pub fn is_consistent(&self) -> bool {
        self.fixings.iter().all(|&(v, b)| !self.fixings.iter().any(|&(w, c)| w == v && c != b))
    }
}

struct Queued(Node);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // Max-heap: "greater" means "selected first".
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .parent_bound
            .total_cmp(&self.0.parent_bound)
            .then(other.0.depth.cmp(&self.0.depth))
            .then(other.0.seq.cmp(&self.0.seq))
    }
}

/// Open nodes, popped by lowest parent bound, then lowest depth, then
/// insertion order.
#[derive(Default)]
pub struct NodeQueue {
    heap: BinaryHeap<Queued>,
    next_seq: usize,
}

impl NodeQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, mut node: Node) {
        node.seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Queued(node));
    }

    pub fn select_node(&mut self) -> Option<Node> {
        self.heap.pop().map(|q| q.0)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn min_bound(&self) -> Option<f64> {
        self.heap.peek().map(|q| q.0.parent_bound)
    }
}

/// The variable whose fractional part is closest to ½, lowest index on ties.
pub fn branch_var(point: &FractionalPoint) -> Result<usize, BncError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in point.values().iter().enumerate() {
        let frac = x - libm::floor(x);
        if frac <= INT_TOL || frac >= 1.0 - INT_TOL {
            continue;
        }
        let dist = libm::fabs(frac - 0.5);
        if best.is_none_or(|(_, d)| dist < d - 1e-12) {
            best = Some((i, dist));
        }
    }
    best.map(|(i, _)| i).ok_or(BncError::IntegralPoint)
}

/// Reads a 0/1 point back as paths with one contiguous slot block each;
/// `None` when it does not have that shape.
pub fn decode_canonical(inst: &Instance, point: &FractionalPoint) -> Option<CanonicalSolution> {
    let dims = Dims::of(inst);
    let g = inst.graph();
    let mut paths = Vec::new();
    for (d, dem) in inst.demands().iter().enumerate() {
        let used = |e: usize, s: u32| point.values()[dims.var(d, e, s)] > 0.5;
        let mut arcs = Vec::new();
        let mut node = dem.source;
        let mut start = None;
        while node != dem.target {
            let next: Vec<usize> = g.out_arcs(node).iter().copied().filter(|&e| (1..=dims.slots).any(|s| used(e, s))).collect();
            if next.len() != 1 || arcs.len() > g.arc_count() {
                return None;
            }
            let e = next[0];
            let slots: Vec<u32> = (1..=dims.slots).filter(|&s| used(e, s)).collect();
            let l = slots[0];
            if slots.len() != dem.volume as usize || slots.last() != Some(&(l + dem.volume - 1)) {
                return None;
            }
            if *start.get_or_insert(l) != l {
                return None;
            }
            arcs.push(e);
            node = g.arc(e).head;
        }
        let lp = Lightpath::new(arcs, start?);
        paths.push(lp);
    }
    let sol = CanonicalSolution::new(paths);
    let back = crate::model::embed_canonical(inst, &sol).ok()?;
    (back.values() == point.values()).then_some(sol)
}

/// A progress snapshot, printed as `node=<n> bound=<b> incumbent=<i> gap=<g> cuts=<c>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub nodes: usize,
    pub bound: f64,
    pub incumbent: Option<f64>,
    pub gap: f64,
    pub cuts: usize,
}

impl fmt::Display for Progress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inc = match self.incumbent {
            Some(v) => format!("{v:.6}"),
            None => String::from("none"),
        };
        write!(f, "node={} bound={:.6} incumbent={} gap={:.6} cuts={}", self.nodes, self.bound, inc, self.gap, self.cuts)
    }
}

/// Pool metadata for one cut at the end of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoolRecord {
    pub family: Family,
    pub kind: CutKind,
    /// Times the cut entered the LP.
    pub added: usize,
    /// Last node at which the cut was tight (or added).
    pub last_active: usize,
    pub in_lp: bool,
}

struct PoolEntry {
    cut: Cut,
    in_lp: bool,
    inactive: usize,
    added: usize,
    last_active: usize,
}

struct Solver<'a, C: Clock> {
    inst: &'a Instance,
    config: &'a BncConfig,
    clock: &'a C,
    model: Model,
    lp: Simplex,
    ctx: SeparationContext<'a>,
    families: Vec<Family>,
    stats: EffectivenessStats,
    pool: Vec<PoolEntry>,
    /// Pool index of each LP row past the model rows.
    lp_cuts: Vec<usize>,
    incumbent: Option<(f64, FractionalPoint)>,
    result_rounds: Vec<RoundBound>,
    added: Vec<Cut>,
    nodes: usize,
}

enum NodeOutcome {
    Pruned,
    Integral,
    Branch(usize, f64),
}

pub fn solve_bnc(inst: &Instance, config: &BncConfig) -> Result<SolveResult, BncError> {
    solve_bnc_with(inst, config, &NoClock, &mut |_| {})
}

pub fn solve_bnc_with<C: Clock>(
    inst: &Instance,
    config: &BncConfig,
    clock: &C,
    log: &mut dyn FnMut(&Progress),
) -> Result<SolveResult, BncError> {
    config.validate()?;
    let options = if config.static_rows { ModelOptions::with_static_rows() } else { ModelOptions::default() };
    let model = build_model(inst, options);
    let prob = LpProblem::unit_box(model.objective.clone(), model.rows.clone());
    let lp = Simplex::new(&prob, LpSettings::default())?;
    let mut s = Solver {
        inst,
        config,
        clock,
        lp,
        ctx: SeparationContext::new(inst, config.separation.clone(), config.seed),
        families: config.active_families(),
        stats: EffectivenessStats::new(),
        pool: Vec::new(),
        lp_cuts: Vec::new(),
        incumbent: None,
        result_rounds: Vec::new(),
        added: Vec::new(),
        nodes: 0,
        model,
    };
    s.run(log)
}

impl<C: Clock> Solver<'_, C> {
    fn run(&mut self, log: &mut dyn FnMut(&Progress)) -> Result<SolveResult, BncError> {
        let mut queue = NodeQueue::new();
        queue.push(Node::root());
        let mut limit_hit = false;
        let mut stopped_bound = f64::INFINITY;
        while let Some(node) = queue.select_node() {
            let out_of_time = self.clock.minutes() >= self.config.time_limit_minutes;
            let out_of_nodes = self.config.node_limit.is_some_and(|k| self.nodes >= k);
            if out_of_time || out_of_nodes {
                limit_hit = true;
                stopped_bound = node.parent_bound;
                break;
            }
            if self.prunable(node.parent_bound) {
                continue;
            }
            debug_assert!(node.is_consistent());
            self.nodes += 1;
            match self.process(&node)? {
                NodeOutcome::Pruned | NodeOutcome::Integral => {}
                NodeOutcome::Branch(var, bound) => {
                    for value in [false, true] {
                        queue.push(node.child(var, value, bound, 0));
                    }
                }
            }
            if self.config.log_every > 0 && self.nodes % self.config.log_every == 0 {
                let bound = queue.min_bound().unwrap_or(f64::INFINITY);
                log(&self.progress(bound));
            }
        }

        let open_bound = if limit_hit { stopped_bound.min(queue.min_bound().unwrap_or(f64::INFINITY)) } else { f64::INFINITY };
        let (status, best_bound, gap) = match (&self.incumbent, limit_hit) {
            (Some((obj, _)), false) => (SolveStatus::Optimal, *obj, 0.0),
            (None, false) => (SolveStatus::Infeasible, f64::INFINITY, 1.0),
            (Some((obj, _)), true) => {
                let b = open_bound.min(*obj);
                (SolveStatus::Feasible, b, relative_gap(*obj, b))
            }
            (None, true) => (SolveStatus::NoSolution, open_bound, 1.0),
        };
        let progress = Progress { nodes: self.nodes, bound: best_bound, incumbent: self.incumbent.as_ref().map(|i| i.0), gap, cuts: self.added.len() };
        log(&progress);

        let mut cuts_by_family = BTreeMap::new();
        for c in &self.added {
            *cuts_by_family.entry(c.family).or_insert(0) += 1;
        }
        let incumbent = self.incumbent.take();
        let solution = incumbent.as_ref().and_then(|(_, p)| decode_canonical(self.inst, p));
        Ok(SolveResult {
            status,
            objective: incumbent.as_ref().map(|i| i.0),
            incumbent: incumbent.map(|i| i.1),
            solution,
            best_bound,
            gap,
            nodes: self.nodes,
            cuts_by_family,
            added_cuts: core::mem::take(&mut self.added),
            rounds: core::mem::take(&mut self.result_rounds),
            pool: self
                .pool
                .iter()
                .map(|p| PoolRecord {
                    family: p.cut.family,
                    kind: p.cut.kind,
                    added: p.added,
                    last_active: p.last_active,
                    in_lp: p.in_lp,
                })
                .collect(),
            lp_pivots: self.lp.total_pivots(),
            wall_minutes: self.clock.minutes(),
            stats: self.stats.clone(),
        })
    }

    fn progress(&self, open_bound: f64) -> Progress {
        let inc = self.incumbent.as_ref().map(|i| i.0);
        let bound = match inc {
            Some(v) => open_bound.min(v),
            None => open_bound,
        };
        Progress {
            nodes: self.nodes,
            bound,
            incumbent: inc,
            gap: inc.map_or(1.0, |v| relative_gap(v, bound)),
            cuts: self.added.len(),
        }
    }

    fn prunable(&self, bound: f64) -> bool {
        self.incumbent.as_ref().is_some_and(|(obj, _)| bound >= obj - 1e-6)
    }

    fn process(&mut self, node: &Node) -> Result<NodeOutcome, BncError> {
        let n = self.model.var_count();
        for v in 0..n {
            self.lp.set_bounds(v, 0.0, 1.0);
        }
        for &(v, b) in &node.fixings {
            let x = if b { 1.0 } else { 0.0 };
            self.lp.set_bounds(v, x, x);
        }
        let mut res = self.lp.solve()?;
        if res.status == LpStatus::Infeasible {
            return Ok(NodeOutcome::Pruned);
        }
        self.age_cuts();
        let rounds = if node.depth == 0 { self.config.root_rounds } else { self.config.node_rounds };
        for round in 0..rounds {
            if self.prunable(res.objective) {
                return Ok(NodeOutcome::Pruned);
            }
            let point = FractionalPoint(res.values.clone());
            if point.is_integral(INT_TOL) {
                break;
            }
            let cuts = self.separate_round(&point, round)?;
            if cuts.is_empty() {
                break;
            }
            let before = res.objective;
            res = self.lp.add_rows_resolve(cuts)?;
            if res.status == LpStatus::Infeasible {
                return Ok(NodeOutcome::Pruned);
            }
            self.result_rounds.push(RoundBound { before, after: res.objective });
            let improvement = (res.objective - before) / libm::fabs(before).max(1.0);
            if improvement < self.config.tailing_off {
                break;
            }
        }
        if self.prunable(res.objective) {
            return Ok(NodeOutcome::Pruned);
        }
        let point = FractionalPoint(res.values.clone());
        if point.is_integral(INT_TOL) {
            self.try_incumbent(&point);
            return Ok(NodeOutcome::Integral);
        }
        Ok(NodeOutcome::Branch(branch_var(&point)?, res.objective))
    }

    /// Rounds the point and accepts it if it satisfies every model row.
    fn try_incumbent(&mut self, point: &FractionalPoint) {
        let rounded = FractionalPoint(point.values().iter().map(|&x| libm::round(x)).collect());
        if self.model.rows.iter().any(|r| r.violation(rounded.values()) > FEAS_TOL) {
            return;
        }
        let obj = self.model.integral_objective(&rounded);
        if self.incumbent.as_ref().is_none_or(|(best, _)| obj < best - 1e-9) {
            self.incumbent = Some((obj, rounded));
        }
    }

    fn separate_round(&mut self, point: &FractionalPoint, round: usize) -> Result<Vec<crate::LinearRow>, BncError> {
        let round_seed = ((self.nodes as u64) << 8) ^ round as u64;
        let mut plan = CallPlan::new(&self.config.strategy, &self.stats, &self.families, round_seed);
        let mut rows = Vec::new();
        while let Some(family) = plan.next_call() {
            let eps = self.config.eps.get(family);
            let seed = self.config.seed ^ round_seed.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ family as u64;
            let found = self.ctx.separate(family, point, eps, seed);
            let mut fresh = 0;
            for cut in found {
                if let Some(k) = self.pool.iter().position(|p| p.cut.row.same_constraint(&cut.row)) {
                    if self.pool[k].in_lp {
                        continue;
                    }
                    self.pool[k].in_lp = true;
                    self.pool[k].inactive = 0;
                    self.pool[k].added += 1;
                    self.pool[k].last_active = self.nodes;
                    self.lp_cuts.push(k);
                    rows.push(cut.row.clone());
                    fresh += 1;
                    continue;
                }
                rows.push(cut.row.clone());
                self.lp_cuts.push(self.pool.len());
                self.added.push(cut.clone());
                self.pool.push(PoolEntry { cut, in_lp: true, inactive: 0, added: 1, last_active: self.nodes });
                fresh += 1;
            }
            self.stats.record_outcome(family, fresh);
            plan.report(family, fresh);
        }
        Ok(rows)
    }

    /// Cuts slack by more than `inactive_slack` for `max_inactive` node LPs
    /// in a row leave the LP (they stay in the pool).
    fn age_cuts(&mut self) {
        let base = self.model.rows.len();
        let mut drop = Vec::new();
        for (k, &p) in self.lp_cuts.iter().enumerate() {
            let row = base + k;
            let slack = self.lp.row_slack(row);
            let entry = &mut self.pool[p];
            if slack > self.config.inactive_slack {
                entry.inactive += 1;
            } else {
                entry.inactive = 0;
                entry.last_active = self.nodes;
            }
            if entry.inactive >= self.config.max_inactive && self.lp.slack_is_basic(row) {
                drop.push(k);
            }
        }
        if drop.is_empty() {
            return;
        }
        let rows: Vec<usize> = drop.iter().map(|k| base + k).collect();
        if self.lp.remove_rows(&rows) {
            for &k in drop.iter().rev() {
                let p = self.lp_cuts.remove(k);
                self.pool[p].in_lp = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;
    use alloc::vec;
    use crate::strategy::StrategyKind;

    #[test]
    fn fixtures_solve() {
        let cfg = BncConfig::default();
        let a = solve_bnc(&fixtures::inst_a(), &cfg).unwrap();
        assert_eq!(a.status, SolveStatus::Optimal);
        assert_eq!(a.objective, Some(1.0));
        assert_eq!(a.gap, 0.0);
        assert_eq!(a.solution.as_ref().unwrap().total_length(), 1);
        let b = solve_bnc(&fixtures::inst_b(), &cfg).unwrap();
        assert_eq!(b.objective, Some(2.0));
        let c = solve_bnc(&fixtures::inst_c(), &cfg).unwrap();
        assert_eq!(c.status, SolveStatus::Infeasible);
        assert_eq!(c.objective, None);
    }

    #[test]
    fn plain_branch_and_bound_agrees() {
        let cfg = BncConfig::default().plain();
        for (inst, obj) in [(fixtures::inst_a(), 1.0), (fixtures::inst_b(), 2.0)] {
            let r = solve_bnc(&inst, &cfg).unwrap();
            assert_eq!(r.objective, Some(obj));
            assert_eq!(r.total_cuts(), 0);
        }
    }

    #[test]
    fn every_strategy_solves_inst_b() {
        for kind in StrategyKind::ALL {
            let mut cfg = BncConfig::default();
            cfg.strategy.kind = kind;
            cfg.strategy.h = 2;
            assert_eq!(solve_bnc(&fixtures::inst_b(), &cfg).unwrap().objective, Some(2.0), "{kind}");
        }
    }

    #[test]
    fn node_order() {
        let mut q = NodeQueue::new();
        let mk = |b: f64, depth: usize| Node { fixings: Vec::new(), parent_bound: b, depth, seq: 0 };
        q.push(mk(1.5, 0));
        q.push(mk(1.2, 0));
        assert_eq!(q.select_node().unwrap().parent_bound, 1.2);
        let mut q = NodeQueue::new();
        q.push(mk(1.0, 3));
        q.push(mk(1.0, 2));
        assert_eq!(q.select_node().unwrap().depth, 2);
        let mut q = NodeQueue::new();
        q.push(Node { fixings: vec![(0, true)], ..mk(1.0, 1) });
        q.push(Node { fixings: vec![(1, true)], ..mk(1.0, 1) });
        assert_eq!(q.select_node().unwrap().fixings, vec![(0, true)]);
    }

    #[test]
    fn branching_rule() {
        assert_eq!(branch_var(&FractionalPoint(vec![0.9, 0.5])).unwrap(), 1);
        assert_eq!(branch_var(&FractionalPoint(vec![0.0, 0.49, 0.51])).unwrap(), 1);
        assert_eq!(branch_var(&FractionalPoint(vec![1.0, 0.0, 0.3])).unwrap(), 2);
        assert_eq!(branch_var(&FractionalPoint(vec![1.0, 0.0])), Err(BncError::IntegralPoint));
    }

    #[test]
    fn gap_formula() {
        assert_eq!(relative_gap(4.0, 3.0), 0.25);
        assert_eq!(relative_gap(4.0, 5.0), 0.0);
        assert_eq!(relative_gap(0.0, -1.0), 1.0);
    }

    #[test]
    fn node_limit_reports_timeout() {
        let cfg = BncConfig { node_limit: Some(0), ..BncConfig::default() };
        let r = solve_bnc(&fixtures::inst_b(), &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::NoSolution);
        assert_eq!(r.gap, 1.0);
    }

    #[test]
    fn huge_eps_adds_nothing() {
        let mut cfg = BncConfig::default();
        cfg.eps.default = 1e9;
        let r = solve_bnc(&fixtures::inst_a(), &cfg).unwrap();
        assert_eq!(r.total_cuts(), 0);
        let plain = solve_bnc(&fixtures::inst_a(), &cfg.plain()).unwrap();
        assert_eq!(r.nodes, plain.nodes);
    }

    #[test]
    fn progress_line() {
        let p = Progress { nodes: 3, bound: 1.5, incumbent: Some(2.0), gap: 0.25, cuts: 7 };
        assert_eq!(p.to_string(), "node=3 bound=1.500000 incumbent=2.000000 gap=0.250000 cuts=7");
    }
}
