//! Problem data: the fiber digraph, the demand list and the slot budget.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Index of a node, dense in `[0, n)`.
pub type NodeId = usize;
/// Index of an arc in the canonical arc order of a [`Digraph`].
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    SelfLoop { arc: ArcId, node: NodeId },
    DuplicateArc { arc: ArcId, tail: NodeId, head: NodeId },
    DanglingNode { node: NodeId, nodes: usize },
    EmptyGraph,
    ZeroSlots,
    SameEndpoints { demand: usize },
    ZeroVolume { demand: usize },
    VolumeExceedsSlots { demand: usize, volume: u32, slots: u32 },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SelfLoop { arc, node } => write!(f, "self-loop: arc {arc} at node {node}"),
            Self::DuplicateArc { arc, tail, head } => {
                write!(f, "duplicate arc: arc {arc} repeats ({tail},{head})")
            }
            Self::DanglingNode { node, nodes } => {
                write!(f, "dangling node-id {node} (graph has {nodes} nodes)")
            }
            Self::EmptyGraph => f.write_str("graph has no nodes"),
            Self::ZeroSlots => f.write_str("slot count must be positive"),
            Self::SameEndpoints { demand } => {
                write!(f, "demand {demand} has identical source and target")
            }
            Self::ZeroVolume { demand } => write!(f, "demand {demand} has zero volume"),
            Self::VolumeExceedsSlots { demand, volume, slots } => {
                write!(f, "volume exceeds slots: demand {demand} needs {volume} of {slots}")
            }
        }
    }
}

impl core::error::Error for InstanceError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
}

/// Simple digraph with a fixed arc order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    nodes: usize,
    arcs: Vec<Arc>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(nodes: usize, arcs: Vec<(NodeId, NodeId)>) -> Result<Self, InstanceError> {
        if nodes == 0 {
            return Err(InstanceError::EmptyGraph);
        }
        let mut out = vec![Vec::new(); nodes];
        let mut inc = vec![Vec::new(); nodes];
        let mut seen = alloc::collections::BTreeSet::new();
        let mut list = Vec::with_capacity(arcs.len());
        for (id, (tail, head)) in arcs.into_iter().enumerate() {
            for node in [tail, head] {
                if node >= nodes {
                    return Err(InstanceError::DanglingNode { node, nodes });
                }
            }
            if tail == head {
                return Err(InstanceError::SelfLoop { arc: id, node: tail });
            }
            if !seen.insert((tail, head)) {
                return Err(InstanceError::DuplicateArc { arc: id, tail, head });
            }
            out[tail].push(id);
            inc[head].push(id);
            list.push(Arc { tail, head });
        }
        Ok(Self { nodes, arcs: list, out, inc })
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id]
    }

    /// Outgoing arcs δ⁺(v), in arc order.
    pub fn out_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.out[v]
    }

    /// Incoming arcs δ⁻(v), in arc order.
    pub fn in_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.inc[v]
    }

    pub fn find_arc(&self, tail: NodeId, head: NodeId) -> Option<ArcId> {
        self.out[tail].iter().copied().find(|&e| self.arcs[e].head == head)
    }

    /// Nodes reachable from `from` (including itself).
    pub fn reachable_from(&self, from: NodeId) -> Vec<bool> {
        self.bfs(from, true)
    }

    /// Nodes that can reach `to` (including itself).
    pub fn reaching(&self, to: NodeId) -> Vec<bool> {
        self.bfs(to, false)
    }

    fn bfs(&self, start: NodeId, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let arcs = if forward { &self.out[v] } else { &self.inc[v] };
            for &e in arcs {
                let w = if forward { self.arcs[e].head } else { self.arcs[e].tail };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn has_path(&self, from: NodeId, to: NodeId) -> bool {
        self.reachable_from(from)[to]
    }

    /// All simple directed paths `from → to` as arc lists, in DFS order over
    /// the arc order. Stops and returns `None` once more than `limit` exist.
    pub fn simple_paths(&self, from: NodeId, to: NodeId, limit: usize) -> Option<Vec<Vec<ArcId>>> {
        let mut paths = Vec::new();
        let mut on_path = vec![false; self.nodes];
        let mut stack: Vec<ArcId> = Vec::new();
        on_path[from] = true;
        let ok = self.paths_rec(from, to, limit, &mut on_path, &mut stack, &mut paths);
        ok.then_some(paths)
    }

    fn paths_rec(
        &self,
        v: NodeId,
        to: NodeId,
        limit: usize,
        on_path: &mut [bool],
        stack: &mut Vec<ArcId>,
        paths: &mut Vec<Vec<ArcId>>,
    ) -> bool {
        if v == to {
            if paths.len() == limit {
                return false;
            }
            paths.push(stack.clone());
            return true;
        }
        for &e in &self.out[v] {
            let w = self.arcs[e].head;
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            stack.push(e);
            let ok = self.paths_rec(w, to, limit, on_path, stack, paths);
            stack.pop();
            on_path[w] = false;
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Demand {
    pub source: NodeId,
    pub target: NodeId,
    /// Number of contiguous slots required end to end.
    pub volume: u32,
}

impl Demand {
    pub fn new(source: NodeId, target: NodeId, volume: u32) -> Self {
        Self { source, target, volume }
    }
}

/// A validated RSA instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    graph: Digraph,
    demands: Vec<Demand>,
    slots: u32,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        graph: Digraph,
        demands: Vec<Demand>,
        slots: u32,
    ) -> Result<Self, InstanceError> {
        if slots == 0 {
            return Err(InstanceError::ZeroSlots);
        }
        let nodes = graph.node_count();
        for (i, d) in demands.iter().enumerate() {
            for node in [d.source, d.target] {
                if node >= nodes {
                    return Err(InstanceError::DanglingNode { node, nodes });
                }
            }
            if d.source == d.target {
                return Err(InstanceError::SameEndpoints { demand: i });
            }
            if d.volume == 0 {
                return Err(InstanceError::ZeroVolume { demand: i });
            }
            if d.volume > slots {
                return Err(InstanceError::VolumeExceedsSlots { demand: i, volume: d.volume, slots });
            }
        }
        Ok(Self { name: name.into(), graph, demands, slots })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn demand(&self, d: usize) -> Demand {
        self.demands[d]
    }

    /// s̄, the number of slots per arc.
    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn max_volume(&self) -> u32 {
        self.demands.iter().map(|d| d.volume).max().unwrap_or(0)
    }
}

/// Route and spectrum of one demand: a simple path plus the first slot of
/// its block of exactly `volume` slots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lightpath {
    pub arcs: Vec<ArcId>,
    /// First slot, 1-based.
    pub start: u32,
}

impl Lightpath {
    pub fn new(arcs: Vec<ArcId>, start: u32) -> Self {
        Self { arcs, start }
    }

    /// Last slot of the block for a demand of the given volume.
    pub fn end(&self, volume: u32) -> u32 {
        self.start + volume - 1
    }
}

/// One lightpath per demand, in demand order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalSolution {
    pub paths: Vec<Lightpath>,
}

impl CanonicalSolution {
    pub fn new(paths: Vec<Lightpath>) -> Self {
        Self { paths }
    }

    /// Total number of arcs over all routes, the objective of the model.
    pub fn total_length(&self) -> usize {
        self.paths.iter().map(|p| p.arcs.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongDemandCount { expected: usize, found: usize },
    UnknownArc { demand: usize, arc: ArcId },
    BrokenPath { demand: usize },
    NotSimple { demand: usize },
    SlotsOutOfRange { demand: usize, start: u32, end: u32 },
    Overlap { first: usize, second: usize, arc: ArcId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongDemandCount { expected, found } => {
                write!(f, "expected {expected} lightpaths, found {found}")
            }
            Self::UnknownArc { demand, arc } => write!(f, "demand {demand}: unknown arc {arc}"),
            Self::BrokenPath { demand } => {
                write!(f, "demand {demand}: arcs do not form a source-target path")
            }
            Self::NotSimple { demand } => write!(f, "demand {demand}: path repeats a node"),
            Self::SlotsOutOfRange { demand, start, end } => {
                write!(f, "demand {demand}: slots [{start},{end}] outside the spectrum")
            }
            Self::Overlap { first, second, arc } => {
                write!(f, "demands {first} and {second} overlap on arc {arc}")
            }
        }
    }
}

/// Outcome of [`check_canonical_feasible`]; feasible iff no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_canonical_feasible(inst: &Instance, sol: &CanonicalSolution) -> FeasibilityReport {
    let mut violations = Vec::new();
    let k = inst.demands().len();
    if sol.paths.len() != k {
        violations.push(Violation::WrongDemandCount { expected: k, found: sol.paths.len() });
        return FeasibilityReport { violations };
    }
    let g = inst.graph();
    let mut usable = vec![true; k];
    for (d, (demand, lp)) in inst.demands().iter().zip(&sol.paths).enumerate() {
        if let Some(&arc) = lp.arcs.iter().find(|&&e| e >= g.arc_count()) {
            violations.push(Violation::UnknownArc { demand: d, arc });
            usable[d] = false;
            continue;
        }
        let mut node = demand.source;
        let mut visited = vec![false; g.node_count()];
        visited[node] = true;
        let mut broken = lp.arcs.is_empty();
        let mut repeated = false;
        for &e in &lp.arcs {
            let arc = g.arc(e);
            if arc.tail != node {
                broken = true;
                break;
            }
            node = arc.head;
            if visited[node] {
                repeated = true;
            }
            visited[node] = true;
        }
        if broken || node != demand.target {
            violations.push(Violation::BrokenPath { demand: d });
        } else if repeated {
            violations.push(Violation::NotSimple { demand: d });
        }
        let end = lp.start as u64 + demand.volume as u64 - 1;
        if lp.start < 1 || end > inst.slots() as u64 {
            violations.push(Violation::SlotsOutOfRange {
                demand: d,
                start: lp.start,
                end: end as u32,
            });
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            if !usable[a] || !usable[b] {
                continue;
            }
            let (pa, pb) = (&sol.paths[a], &sol.paths[b]);
            let (ea, eb) = (pa.end(inst.demand(a).volume), pb.end(inst.demand(b).volume));
            if pa.start > eb || pb.start > ea {
                continue;
            }
            if let Some(&arc) = pa.arcs.iter().find(|e| pb.arcs.contains(e)) {
                violations.push(Violation::Overlap { first: a, second: b, arc });
            }
        }
    }
    FeasibilityReport { violations }
}

/// Parameters of the random instance generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub nodes: usize,
    /// Probability that each ordered node pair carries an arc, in (0, 1].
    pub density: f64,
    pub demands: usize,
    pub volume_min: u32,
    pub volume_max: u32,
    pub slots: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(&'static str),
    #[error("retry budget exhausted: no connected endpoints found for demand {demand}")]
    RetryBudgetExhausted { demand: usize },
}

/// Endpoint draws per demand before giving up.
pub const ENDPOINT_RETRIES: usize = 100;

/// Random digraph plus demands with uniformly distributed endpoints and
/// volumes. Deterministic in `params.seed`.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance, GeneratorError> {
    if params.nodes < 2 {
        return Err(GeneratorError::InvalidParams("need at least two nodes"));
    }
    if !(params.density > 0.0 && params.density <= 1.0) {
        return Err(GeneratorError::InvalidParams("density must lie in (0, 1]"));
    }
    if params.volume_min == 0 || params.volume_min > params.volume_max {
        return Err(GeneratorError::InvalidParams("volume range must satisfy 1 <= min <= max"));
    }
    if params.volume_max > params.slots {
        return Err(GeneratorError::InvalidParams("maximum volume exceeds the slot count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.nodes;
    let mut arcs = Vec::new();
    for tail in 0..n {
        for head in 0..n {
            if tail != head && rng.random::<f64>() < params.density {
                arcs.push((tail, head));
            }
        }
    }
    let graph = Digraph::new(n, arcs).expect("generated arcs are simple");
    let reach: Vec<Vec<bool>> = (0..n).map(|v| graph.reachable_from(v)).collect();
    let mut demands = Vec::with_capacity(params.demands);
    for demand in 0..params.demands {
        let mut found = None;
        for _ in 0..ENDPOINT_RETRIES {
            let s = rng.random_range(0..n);
            let t = rng.random_range(0..n - 1);
            let t = if t >= s { t + 1 } else { t };
            if reach[s][t] {
                found = Some((s, t));
                break;
            }
        }
        let (s, t) = found.ok_or(GeneratorError::RetryBudgetExhausted { demand })?;
        let volume = rng.random_range(params.volume_min..=params.volume_max);
        demands.push(Demand::new(s, t, volume));
    }
    let name = alloc::format!("gen-n{}-k{}-s{}-seed{}", n, params.demands, params.slots, params.seed);
    Ok(Instance::new(name, graph, demands, params.slots).expect("generated instance is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert_eq!(
            Digraph::new(2, vec![(0, 0)]),
            Err(InstanceError::SelfLoop { arc: 0, node: 0 })
        );
        assert_eq!(
            Digraph::new(2, vec![(0, 1), (0, 1)]),
            Err(InstanceError::DuplicateArc { arc: 1, tail: 0, head: 1 })
        );
        assert!(matches!(
            Digraph::new(2, vec![(0, 2)]),
            Err(InstanceError::DanglingNode { node: 2, .. })
        ));
    }

    #[test]
    fn rejects_oversized_volume() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let err = Instance::new("x", g, vec![Demand::new(0, 1, 4)], 3).unwrap_err();
        assert!(alloc::format!("{err}").contains("volume exceeds slots"));
    }

    #[test]
    fn simple_paths_of_inst_a() {
        let inst = fixtures::inst_a();
        let paths = inst.graph().simple_paths(0, 2, 10).unwrap();
        assert_eq!(paths, vec![vec![0, 1], vec![2]]);
        assert!(inst.graph().simple_paths(0, 2, 1).is_none());
    }

    #[test]
    fn canonical_feasibility_examples() {
        let a = fixtures::inst_a();
        let sol = CanonicalSolution::new(vec![Lightpath::new(vec![2], 1)]);
        assert!(check_canonical_feasible(&a, &sol).is_feasible());

        let b = fixtures::inst_b();
        let clash = CanonicalSolution::new(vec![Lightpath::new(vec![0], 1), Lightpath::new(vec![0], 2)]);
        let report = check_canonical_feasible(&b, &clash);
        assert_eq!(report.violations, vec![Violation::Overlap { first: 0, second: 1, arc: 0 }]);

        let ok = CanonicalSolution::new(vec![Lightpath::new(vec![0], 1), Lightpath::new(vec![0], 3)]);
        assert!(check_canonical_feasible(&b, &ok).is_feasible());
    }

    #[test]
    fn canonical_feasibility_reports_shape_errors() {
        let a = fixtures::inst_a();
        let broken = CanonicalSolution::new(vec![Lightpath::new(vec![1], 1)]);
        assert_eq!(
            check_canonical_feasible(&a, &broken).violations,
            vec![Violation::BrokenPath { demand: 0 }]
        );
        let high = CanonicalSolution::new(vec![Lightpath::new(vec![2], 3)]);
        assert!(matches!(
            check_canonical_feasible(&a, &high).violations[..],
            [Violation::SlotsOutOfRange { start: 3, end: 4, .. }]
        ));
        let missing = CanonicalSolution::new(vec![]);
        assert!(!check_canonical_feasible(&a, &missing).is_feasible());
    }

    fn params(seed: u64) -> GeneratorParams {
        GeneratorParams {
            nodes: 5,
            density: 0.5,
            demands: 2,
            volume_min: 1,
            volume_max: 3,
            slots: 6,
            seed,
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_instance(&params(1)).unwrap();
        let b = generate_instance(&params(1)).unwrap();
        assert_eq!(a, b);
        for d in a.demands() {
            assert!(a.graph().has_path(d.source, d.target));
            assert!((1..=3).contains(&d.volume));
        }
    }

    #[test]
    fn generator_volumes_are_uniform() {
        let p = GeneratorParams {
            nodes: 4,
            density: 1.0,
            demands: 10_000,
            volume_min: 1,
            volume_max: 4,
            slots: 4,
            seed: 7,
        };
        let inst = generate_instance(&p).unwrap();
        let mut counts = [0usize; 4];
        for d in inst.demands() {
            counts[d.volume as usize - 1] += 1;
        }
        let expected = 2500.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected) * (c as f64 - expected) / expected)
            .sum();
        // 3 degrees of freedom, 99.9% quantile.
        assert!(chi2 < 16.27, "chi2 = {chi2}");
        for c in counts {
            assert!((c as f64 / 10_000.0 - 0.25).abs() < 0.05);
        }
    }

    #[test]
    fn sparse_generator_exhausts_retries() {
        let failures = (0..20)
            .filter(|&seed| {
                let p = GeneratorParams {
                    nodes: 4,
                    density: 0.05,
                    demands: 3,
                    volume_min: 1,
                    volume_max: 2,
                    slots: 4,
                    seed,
                };
                matches!(generate_instance(&p), Err(GeneratorError::RetryBudgetExhausted { .. }))
            })
            .count();
        assert!(failures > 10, "only {failures} of 20 seeds failed");
    }

    #[test]
    fn generator_rejects_bad_params() {
        let mut p = params(0);
        p.volume_max = 9;
        assert!(matches!(generate_instance(&p), Err(GeneratorError::InvalidParams(_))));
    }
}
