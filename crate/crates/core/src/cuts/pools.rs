//! Precomputed arc structures sampled by the separators: double brooms,
//! cycles, induced arc sets, antiparallel pairs and minimal (s,t)-cuts.

use alloc::collections::BTreeSet;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SeparationConfig;
use crate::instance::{ArcId, Digraph, Instance, NodeId};

/// An arc subset together with the numbers its rows need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    /// Sorted, distinct.
    pub arcs: Vec<ArcId>,
    /// Distinct endpoints of the arcs.
    pub nodes: usize,
    /// Largest number of arcs in a set of vertex-disjoint simple paths
    /// inside `arcs`; `None` when the set was too large to search.
    pub path_arcs: Option<usize>,
}

impl ArcSet {
    pub fn new(g: &Digraph, mut arcs: Vec<ArcId>, search_limit: usize) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let mut ends = BTreeSet::new();
        for &a in &arcs {
            let arc = g.arc(a);
            ends.insert(arc.tail);
            ends.insert(arc.head);
        }
        let path_arcs = (arcs.len() <= search_limit).then(|| max_path_arcs(g, &arcs));
        Self { arcs, nodes: ends.len(), path_arcs }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Pools {
    pub in_brooms: Vec<ArcSet>,
    pub out_brooms: Vec<ArcSet>,
    pub directed_cycles: Vec<ArcSet>,
    pub undirected_cycles: Vec<ArcSet>,
    /// Arcs induced by the vertex set of a cycle.
    pub induced: Vec<ArcSet>,
    /// Pairs `(ij, ji)` with `i < j`.
    pub antiparallel: Vec<(ArcId, ArcId)>,
    /// Per demand: arc sets met exactly once by every simple source-target path.
    pub min_cuts: Vec<Vec<Vec<ArcId>>>,
}

impl Pools {
    pub fn build(inst: &Instance, config: &SeparationConfig, seed: u64) -> Self {
        let g = inst.graph();
        let limit = config.max_structure_arcs;
        let mut pools = Pools::default();

        let mut seen_in = BTreeSet::new();
        let mut seen_out = BTreeSet::new();
        for arc in g.arcs() {
            let (i, j) = (arc.tail, arc.head);
            let around_j: Vec<ArcId> = g.in_arcs(j).iter().chain(g.out_arcs(j)).copied().collect();
            let mut incoming: Vec<ArcId> = g.in_arcs(i).to_vec();
            incoming.extend(&around_j);
            let set = ArcSet::new(g, incoming, limit);
            if seen_in.insert(set.arcs.clone()) {
                pools.in_brooms.push(set);
            }
            let mut outgoing: Vec<ArcId> = g.out_arcs(i).to_vec();
            outgoing.extend(&around_j);
            let set = ArcSet::new(g, outgoing, limit);
            if seen_out.insert(set.arcs.clone()) {
                pools.out_brooms.push(set);
            }
        }

        let mut seen = BTreeSet::new();
        for cycle in directed_cycles(g, config.max_cycle_len, config.max_cycles) {
            let arcs: Vec<ArcId> = (0..cycle.len())
                .map(|k| g.find_arc(cycle[k], cycle[(k + 1) % cycle.len()]).unwrap())
                .collect();
            let set = ArcSet::new(g, arcs, limit);
            if seen.insert(set.arcs.clone()) {
                pools.directed_cycles.push(set);
                add_induced(g, &cycle, limit, &mut pools.induced);
            }
        }
        let mut seen = BTreeSet::new();
        for cycle in undirected_cycles(g, config.max_cycle_len, config.max_cycles) {
            let mut arcs = Vec::new();
            for k in 0..cycle.len() {
                let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                arcs.extend(g.find_arc(a, b));
                arcs.extend(g.find_arc(b, a));
            }
            let set = ArcSet::new(g, arcs, limit);
            if seen.insert(set.arcs.clone()) {
                pools.undirected_cycles.push(set);
                add_induced(g, &cycle, limit, &mut pools.induced);
            }
        }

        for (a, arc) in g.arcs().iter().enumerate() {
            if arc.tail < arc.head {
                if let Some(b) = g.find_arc(arc.head, arc.tail) {
                    pools.antiparallel.push((a, b));
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d69_6e63_7574);
        pools.min_cuts = inst
            .demands()
            .iter()
            .map(|d| harvest_min_cuts(g, d.source, d.target, config.min_cuts_per_demand, &mut rng))
            .collect();
        pools
    }

    /// Structures used by the maximum-path-set family.
    pub fn path_structures(&self) -> impl Iterator<Item = &ArcSet> {
        self.in_brooms
            .iter()
            .chain(&self.out_brooms)
            .chain(&self.directed_cycles)
            .chain(&self.undirected_cycles)
            .chain(&self.induced)
    }

    /// Structures used by the induced-arcs families.
    pub fn cycle_structures(&self) -> impl Iterator<Item = &ArcSet> {
        self.directed_cycles.iter().chain(&self.undirected_cycles).chain(&self.induced)
    }
}

fn add_induced(g: &Digraph, nodes: &[NodeId], limit: usize, out: &mut Vec<ArcSet>) {
    let arcs: Vec<ArcId> = g
        .arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| nodes.contains(&a.tail) && nodes.contains(&a.head))
        .map(|(i, _)| i)
        .collect();
    let set = ArcSet::new(g, arcs, limit);
    if !out.iter().any(|s| s.arcs == set.arcs) {
        out.push(set);
    }
}

/// Simple directed cycles with 3 to `max_len` nodes, each listed once
/// starting from its smallest node.
pub fn directed_cycles(g: &Digraph, max_len: usize, cap: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    for start in 0..g.node_count() {
        let mut path = vec![start];
        walk_directed(g, start, &mut path, max_len, cap, &mut out);
    }
    out
}

fn walk_directed(g: &Digraph, start: NodeId, path: &mut Vec<NodeId>, max_len: usize, cap: usize, out: &mut Vec<Vec<NodeId>>) {
    if out.len() >= cap {
        return;
    }
    let last = *path.last().unwrap();
    for &a in g.out_arcs(last) {
        let next = g.arc(a).head;
        if next == start && path.len() >= 3 {
            if out.len() < cap {
                out.push(path.clone());
            }
        } else if next > start && !path.contains(&next) && path.len() < max_len {
            path.push(next);
            walk_directed(g, start, path, max_len, cap, out);
            path.pop();
        }
    }
}

/// Simple cycles with 3 to `max_len` nodes in the underlying undirected
/// graph, each listed once.
pub fn undirected_cycles(g: &Digraph, max_len: usize, cap: usize) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    for a in g.arcs() {
        adj[a.tail].insert(a.head);
        adj[a.head].insert(a.tail);
    }
    let mut out = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        walk_undirected(&adj, start, &mut path, max_len, cap, &mut out);
    }
    out
}

fn walk_undirected(
    adj: &[BTreeSet<NodeId>],
    start: NodeId,
    path: &mut Vec<NodeId>,
    max_len: usize,
    cap: usize,
    out: &mut Vec<Vec<NodeId>>,
) {
    if out.len() >= cap {
        return;
    }
    let last = *path.last().unwrap();
    for &next in &adj[last] {
        if next == start && path.len() >= 3 {
            // Each cycle is met in both directions; keep one.
            if path[1] < path[path.len() - 1] && out.len() < cap {
                out.push(path.clone());
            }
        } else if next > start && !path.contains(&next) && path.len() < max_len {
            path.push(next);
            walk_undirected(adj, start, path, max_len, cap, out);
            path.pop();
        }
    }
}

/// Exhaustive search for the most arcs a set of vertex-disjoint simple
/// paths can take from `arcs`.
pub fn max_path_arcs(g: &Digraph, arcs: &[ArcId]) -> usize {
    struct Search<'a> {
        g: &'a Digraph,
        arcs: &'a [ArcId],
        succ: Vec<Option<NodeId>>,
        pred: Vec<Option<NodeId>>,
        best: usize,
    }
    impl Search<'_> {
        fn closes_cycle(&self, tail: NodeId, head: NodeId) -> bool {
            let mut v = head;
            while let Some(w) = self.succ[v] {
                if w == tail {
                    return true;
                }
                v = w;
            }
            false
        }
        fn go(&mut self, k: usize, taken: usize) {
            if taken + (self.arcs.len() - k) <= self.best {
                return;
            }
            if k == self.arcs.len() {
                self.best = taken;
                return;
            }
            let arc = self.g.arc(self.arcs[k]);
            let (t, h) = (arc.tail, arc.head);
            if self.succ[t].is_none() && self.pred[h].is_none() && !self.closes_cycle(t, h) {
                self.succ[t] = Some(h);
                self.pred[h] = Some(t);
                self.go(k + 1, taken + 1);
                self.succ[t] = None;
                self.pred[h] = None;
            }
            self.go(k + 1, taken);
        }
    }
    let n = g.node_count();
    let mut s = Search { g, arcs, succ: vec![None; n], pred: vec![None; n], best: 0 };
    s.go(0, 0);
    s.best
}

/// Minimal-cut candidates for one demand: the source's out-arcs, the
/// target's in-arcs, and cuts from max-flow runs with perturbed unit
/// capacities that pass [`is_single_crossing`].
pub fn harvest_min_cuts(g: &Digraph, source: NodeId, target: NodeId, cap: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<ArcId>> {
    let mut cuts: Vec<Vec<ArcId>> = Vec::new();
    if !g.has_path(source, target) {
        return cuts;
    }
    let push = |mut c: Vec<ArcId>, cuts: &mut Vec<Vec<ArcId>>| {
        c.sort_unstable();
        if !c.is_empty() && !cuts.contains(&c) && cuts.len() < cap {
            cuts.push(c);
        }
    };
    push(g.out_arcs(source).to_vec(), &mut cuts);
    push(g.in_arcs(target).to_vec(), &mut cuts);
    let from_s = g.reachable_from(source);
    let to_t = g.reaching(target);
    for _ in 0..cap * 3 {
        if cuts.len() >= cap {
            break;
        }
        let capacity: Vec<f64> = (0..g.arc_count()).map(|_| 1.0 + rng.random::<f64>()).collect();
        let side = min_cut_side(g, source, target, &capacity);
        if !is_single_crossing(g, &side, &from_s, &to_t) {
            continue;
        }
        let cut: Vec<ArcId> = (0..g.arc_count())
            .filter(|&a| {
                let arc = g.arc(a);
                side[arc.tail] && !side[arc.head] && from_s[arc.tail] && to_t[arc.head]
            })
            .collect();
        push(cut, &mut cuts);
    }
    cuts
}

/// True when no arc leads back into `side` from outside it along some
/// source-target walk, so a simple path leaves `side` exactly once.
pub fn is_single_crossing(g: &Digraph, side: &[bool], from_s: &[bool], to_t: &[bool]) -> bool {
    g.arcs().iter().all(|a| side[a.tail] || !side[a.head] || !from_s[a.tail] || !to_t[a.head])
}

/// Source side of a minimum cut (Edmonds–Karp).
fn min_cut_side(g: &Digraph, s: NodeId, t: NodeId, capacity: &[f64]) -> Vec<bool> {
    let n = g.node_count();
    let m = g.arc_count();
    let mut flow = vec![0.0; m];
    loop {
        // Residual BFS; entry = (arc, forward?)
        let mut via: Vec<Option<(ArcId, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in g.out_arcs(v) {
                let h = g.arc(a).head;
                if !seen[h] && capacity[a] - flow[a] > 1e-9 {
                    seen[h] = true;
                    via[h] = Some((a, true));
                    queue.push_back(h);
                }
            }
            for &a in g.in_arcs(v) {
                let tl = g.arc(a).tail;
                if !seen[tl] && flow[a] > 1e-9 {
                    seen[tl] = true;
                    via[tl] = Some((a, false));
                    queue.push_back(tl);
                }
            }
        }
        if !seen[t] {
            return seen;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = t;
        while let Some((a, fwd)) = via[v] {
            let arc = g.arc(a);
            if fwd {
                bottleneck = bottleneck.min(capacity[a] - flow[a]);
                v = arc.tail;
            } else {
                bottleneck = bottleneck.min(flow[a]);
                v = arc.head;
            }
        }
        let mut v = t;
        while let Some((a, fwd)) = via[v] {
            let arc = g.arc(a);
            if fwd {
                flow[a] += bottleneck;
                v = arc.tail;
            } else {
                flow[a] -= bottleneck;
                v = arc.head;
            }
        }
    }
}
