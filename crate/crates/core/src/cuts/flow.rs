//! Flow-based optimality cuts: out-slot limits at a node, branching
//! exclusions, equal arc counts across slots, path-set bounds on brooms and
//! cycles, and antiparallel exclusions.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::pools::ArcSet;
use super::{sample_indices, Emitter, SeparationContext};
use crate::model::Sense;

pub enum PathStructures {
    All,
    InBrooms,
    OutBrooms,
}

fn nodes_for(ctx: &SeparationContext<'_>, d: usize, src_only: bool) -> Vec<usize> {
    let dem = ctx.inst.demand(d);
    if src_only {
        alloc::vec![dem.source]
    } else {
        (0..ctx.inst.graph().node_count()).collect()
    }
}

/// `Σ_{e∈δ⁺(i)} u[d,e,s] ≤ 1`, for `i ≠ t(d)` (or `i = s(d)` only).
pub fn sep_one_slot_once(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, src_only: bool) {
    let g = ctx.inst.graph();
    for d in 0..ctx.dims.demands {
        let target = ctx.inst.demand(d).target;
        for i in nodes_for(ctx, d, src_only) {
            if i == target || g.out_arcs(i).len() < 2 {
                continue;
            }
            for s in 1..=ctx.dims.slots {
                for &e in g.out_arcs(i) {
                    em.term(ctx.var(d, e, s), 1.0);
                }
                em.finish(Sense::Le, 1.0);
            }
        }
    }
}

/// `Σ_{e∈δ⁺(i)} Σ_s u[d,e,s] ≤ v(d)`.
pub fn sep_exactly_vd(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, src_only: bool) {
    let g = ctx.inst.graph();
    for d in 0..ctx.dims.demands {
        let v = ctx.inst.demand(d).volume as f64;
        for i in nodes_for(ctx, d, src_only) {
            if g.out_arcs(i).is_empty() {
                continue;
            }
            for &e in g.out_arcs(i) {
                for s in 1..=ctx.dims.slots {
                    em.term(ctx.var(d, e, s), 1.0);
                }
            }
            em.finish(Sense::Le, v);
        }
    }
}

/// `Σ_{e'∈δ⁺(i)∖e} Σ_s' u[d,e',s'] + v(d)·u[d,e,s] ≤ v(d)`.
pub fn sep_not_branch(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, src_only: bool) {
    let g = ctx.inst.graph();
    for d in 0..ctx.dims.demands {
        let v = ctx.inst.demand(d).volume as f64;
        for i in nodes_for(ctx, d, src_only) {
            let out = g.out_arcs(i);
            if out.len() < 2 {
                continue;
            }
            for &e in out {
                for s in 1..=ctx.dims.slots {
                    let x = ctx.var(d, e, s);
                    if em.pruning() && em.value(x) <= 0.0 {
                        continue;
                    }
                    for &f in out.iter().filter(|&&f| f != e) {
                        for s2 in 1..=ctx.dims.slots {
                            em.term(ctx.var(d, f, s2), 1.0);
                        }
                    }
                    em.term(x, v);
                    em.finish(Sense::Le, v);
                }
            }
        }
    }
}

/// Slots used at the source are used on the same number of arcs.
///
/// Per pair `s ≠ s'`: `A(s') − A(s) + |E|·out(s) ≤ |E|` with `A(s)` the
/// number of arcs carrying `s` and `out(s)` its use on `δ⁺(s(d))`.
/// Summed: `Σ_{s'} A(s') − v(d)·A(s) + v(d)|E|·out(s) ≤ v(d)|E|`.
pub fn sep_eq_amount_arcs(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, summed: bool) {
    let g = ctx.inst.graph();
    let m = ctx.dims.arcs;
    let big = m as f64;
    for d in 0..ctx.dims.demands {
        let dem = ctx.inst.demand(d);
        let v = dem.volume as f64;
        let src_arcs = g.out_arcs(dem.source);
        for s in 1..=ctx.dims.slots {
            if em.pruning() {
                let out: f64 = src_arcs.iter().map(|&e| em.value(ctx.var(d, e, s))).sum();
                if out <= 0.0 {
                    continue;
                }
            }
            if summed {
                for e in 0..m {
                    for s2 in 1..=ctx.dims.slots {
                        em.term(ctx.var(d, e, s2), 1.0);
                    }
                    em.term(ctx.var(d, e, s), -v);
                }
                for &e in src_arcs {
                    em.term(ctx.var(d, e, s), v * big);
                }
                em.finish(Sense::Le, v * big);
            } else {
                for s2 in (1..=ctx.dims.slots).filter(|&s2| s2 != s) {
                    for e in 0..m {
                        em.term(ctx.var(d, e, s2), 1.0);
                        em.term(ctx.var(d, e, s), -1.0);
                    }
                    for &e in src_arcs {
                        em.term(ctx.var(d, e, s), big);
                    }
                    em.finish(Sense::Le, big);
                }
            }
        }
    }
}

fn sum_over_set(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, d: usize, set: &ArcSet) {
    for &e in &set.arcs {
        for s in 1..=ctx.dims.slots {
            em.term(ctx.var(d, e, s), 1.0);
        }
    }
}

/// `Σ_s Σ_{e∈E'} u[d,e,s] ≤ v(d)·k` where `k` is the most arcs a set of
/// vertex-disjoint paths can take inside `E'`.
pub fn sep_max_disjoint_paths(
    ctx: &SeparationContext<'_>,
    em: &mut Emitter<'_>,
    which: PathStructures,
    rng: Option<&mut ChaCha8Rng>,
) {
    let pools = &ctx.pools;
    let sets: Vec<&ArcSet> = match which {
        PathStructures::All => pools.path_structures().collect(),
        PathStructures::InBrooms => pools.in_brooms.iter().collect(),
        PathStructures::OutBrooms => pools.out_brooms.iter().collect(),
    };
    for k in sample_indices(sets.len(), ctx.config.pool_sample, rng) {
        let set = sets[k];
        let Some(cap) = set.path_arcs else { continue };
        for d in 0..ctx.dims.demands {
            let v = ctx.inst.demand(d).volume as f64;
            sum_over_set(ctx, em, d, set);
            em.finish(Sense::Le, v * cap as f64);
        }
    }
}

/// A simple path takes at most `|V(E')| − 1` arcs of `E'`: per slot, and
/// summed over slots with the bound scaled by `v(d)`.
pub fn sep_induced_arcs(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, summed: bool, rng: Option<&mut ChaCha8Rng>) {
    let mut sets: Vec<ArcSet> = ctx.pools.cycle_structures().cloned().collect();
    for &(a, b) in &ctx.pools.antiparallel {
        sets.push(ArcSet { arcs: alloc::vec![a, b], nodes: 2, path_arcs: Some(1) });
    }
    for k in sample_indices(sets.len(), ctx.config.pool_sample, rng) {
        let set = &sets[k];
        let bound = (set.nodes - 1) as f64;
        for d in 0..ctx.dims.demands {
            let v = ctx.inst.demand(d).volume as f64;
            if summed {
                sum_over_set(ctx, em, d, set);
                em.finish(Sense::Le, v * bound);
            } else {
                for s in 1..=ctx.dims.slots {
                    for &e in &set.arcs {
                        em.term(ctx.var(d, e, s), 1.0);
                    }
                    em.finish(Sense::Le, bound);
                }
            }
        }
    }
}

/// `u[d,ij,s] + u[d,ji,s] ≤ 1` and `Σ_s (u[d,ij,s] + u[d,ji,s]) ≤ v(d)`.
pub fn sep_antiparallel_pair(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    for &(a, b) in &ctx.pools.antiparallel {
        for d in 0..ctx.dims.demands {
            let v = ctx.inst.demand(d).volume as f64;
            for s in 1..=ctx.dims.slots {
                em.term(ctx.var(d, a, s), 1.0);
                em.term(ctx.var(d, b, s), 1.0);
                em.finish(Sense::Le, 1.0);
            }
            for s in 1..=ctx.dims.slots {
                em.term(ctx.var(d, a, s), 1.0);
                em.term(ctx.var(d, b, s), 1.0);
            }
            em.finish(Sense::Le, v);
        }
    }
}

/// `Σ_s' u[d,ji,s'] + v(d)·u[d,ij,s] ≤ v(d)`, both orientations.
pub fn sep_antiparallel_implication(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    for &(a, b) in &ctx.pools.antiparallel {
        for (used, other) in [(a, b), (b, a)] {
            for d in 0..ctx.dims.demands {
                let v = ctx.inst.demand(d).volume as f64;
                for s in 1..=ctx.dims.slots {
                    let x = ctx.var(d, used, s);
                    if em.pruning() && em.value(x) <= 0.0 {
                        continue;
                    }
                    for s2 in 1..=ctx.dims.slots {
                        em.term(ctx.var(d, other, s2), 1.0);
                    }
                    em.term(x, v);
                    em.finish(Sense::Le, v);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Family, SeparationConfig, SeparationContext};
    use crate::fixtures;
    use crate::instance::{CanonicalSolution, Demand, Lightpath};
    use crate::model::{embed_canonical, FractionalPoint};

    fn ctx(inst: &crate::Instance) -> SeparationContext<'_> {
        SeparationContext::new(inst, SeparationConfig::default(), 3)
    }

    #[test]
    fn one_slot_once_from_source() {
        // a has two out-arcs in INST-A: ab (0) and ac (2)
        let inst = fixtures::inst_a();
        let c = ctx(&inst);
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        p.0[c.var(0, 0, 1)] = 0.7;
        p.0[c.var(0, 2, 1)] = 0.7;
        let cuts = c.separate(Family::OneSlotOnceFromSrc, &p, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 0.4).abs() < 1e-12);
        assert!(c.separate(Family::OneSlotOnceFromSrc, &p, 0.5, 0).is_empty());
    }

    #[test]
    fn exactly_vd_violation() {
        let inst = fixtures::inst_a();
        let c = ctx(&inst);
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        for s in 1..=3 {
            p.0[c.var(0, 2, s)] = 1.0;
        }
        let cuts = c.separate(Family::ExactlyVdFromSrc, &p, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 1.0).abs() < 1e-12);
        let mut q = FractionalPoint::zeros(c.dims.var_count());
        q.0[c.var(0, 2, 1)] = 1.0;
        q.0[c.var(0, 2, 2)] = 0.8;
        q.0[c.var(0, 0, 2)] = 0.5;
        let cuts = c.separate(Family::ExactlyVdFromV, &q, 0.2, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 0.3).abs() < 1e-9);
    }

    #[test]
    fn not_branch_violation() {
        let inst = fixtures::inst_a();
        let c = ctx(&inst);
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        p.0[c.var(0, 2, 1)] = 1.0;
        p.0[c.var(0, 0, 2)] = 0.5;
        let cuts = c.separate(Family::NotBranchFromSrc, &p, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eq_amount_violation() {
        // s used at the source on one arc, s' on two arcs
        let inst = fixtures::inst_a();
        let c = ctx(&inst);
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        p.0[c.var(0, 2, 1)] = 1.0;
        p.0[c.var(0, 0, 2)] = 1.0;
        p.0[c.var(0, 1, 2)] = 1.0;
        let cuts = c.separate(Family::EqAmountOfAsForEachUsedS, &p, 0.0, 0);
        assert!(cuts.iter().any(|k| (k.violation - 1.0).abs() < 1e-12));
    }

    #[test]
    fn antiparallel_rows() {
        let inst = fixtures::ring(3, alloc::vec![Demand::new(0, 1, 2)], 3);
        let c = ctx(&inst);
        let (a, b) = c.pools.antiparallel[0];
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        p.0[c.var(0, a, 1)] = 0.6;
        p.0[c.var(0, b, 1)] = 0.6;
        let cuts = c.separate(Family::AntiparallelPair, &p, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 0.2).abs() < 1e-12);
        let cuts = c.separate(Family::InducedArcsPerSlot, &p, 0.0, 0);
        assert!((cuts[0].violation - 0.2).abs() < 1e-12);

        let mut q = FractionalPoint::zeros(c.dims.var_count());
        q.0[c.var(0, a, 1)] = 1.0;
        q.0[c.var(0, b, 2)] = 0.5;
        let cuts = c.separate(Family::AntiparallelImplication, &q, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert!((cuts[0].violation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn directed_triangle_per_slot() {
        let g = crate::Digraph::new(3, alloc::vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let inst = crate::Instance::new("tri", g, alloc::vec![Demand::new(0, 2, 1)], 2).unwrap();
        let c = ctx(&inst);
        let mut p = FractionalPoint::zeros(c.dims.var_count());
        for e in 0..3 {
            p.0[c.var(0, e, 1)] = 0.5;
        }
        assert!(c.separate(Family::InducedArcsPerSlot, &p, 0.0, 0).is_empty());
        for e in 0..3 {
            p.0[c.var(0, e, 1)] = 0.8;
        }
        let cuts = c.separate(Family::InducedArcsPerSlot, &p, 0.0, 0);
        assert!((cuts[0].violation - 0.4).abs() < 1e-9);
    }

    #[test]
    fn canonical_point_is_never_cut() {
        let inst = fixtures::ring(4, alloc::vec![Demand::new(0, 2, 2), Demand::new(1, 3, 1)], 4);
        let c = ctx(&inst);
        let sol = CanonicalSolution::new(alloc::vec![Lightpath::new(alloc::vec![0, 1], 1), Lightpath::new(alloc::vec![1, 2], 3)]);
        let p = embed_canonical(&inst, &sol).unwrap();
        for &f in &Family::ALL[..15] {
            assert!(c.separate(f, &p, 0.0, 0).is_empty(), "{f}");
        }
    }
}
