//! Non-overlap families: rows coupling two or three demands on one arc.

use alloc::vec::Vec;

use super::{Emitter, SeparationContext};
use crate::model::Sense;

/// Demand sets that do not fit together on one arc while every proper
/// subset does: all such pairs, plus triples when enabled.
pub fn minimal_overfull_sets(volumes: &[u32], slots: u32, triples: bool) -> Vec<Vec<usize>> {
    let k = volumes.len();
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if volumes[a] + volumes[b] > slots {
                out.push(alloc::vec![a, b]);
            }
        }
    }
    if triples {
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    let (va, vb, vc) = (volumes[a], volumes[b], volumes[c]);
                    if va + vb + vc > slots && va + vb <= slots && va + vc <= slots && vb + vc <= slots {
                        out.push(alloc::vec![a, b, c]);
                    }
                }
            }
        }
    }
    out
}

fn volumes(ctx: &SeparationContext<'_>) -> Vec<u32> {
    ctx.inst.demands().iter().map(|d| d.volume).collect()
}

/// `u[d,e,s₁] + Σ_{d'≠d} u[d',e,s₂] + u[d,e,s₂+1] ≤ 2` for `s₁ < s₂`.
pub fn sep_non_over_by_sum(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let sb = ctx.dims.slots;
    let nd = ctx.dims.demands;
    if nd < 2 || sb < 3 {
        return;
    }
    for e in 0..ctx.dims.arcs {
        for d in 0..nd {
            for s1 in 1..=sb - 2 {
                for s2 in s1 + 1..sb {
                    em.term(ctx.var(d, e, s1), 1.0);
                    for other in (0..nd).filter(|&o| o != d) {
                        em.term(ctx.var(other, e, s2), 1.0);
                    }
                    em.term(ctx.var(d, e, s2 + 1), 1.0);
                    em.finish(Sense::Le, 2.0);
                }
            }
        }
    }
}

/// `Σ_s u[d,e,s] + v(d)·Σ_{d'∈D'∖d} Σ_s u[d',e,s] ≤ v(d)·Σ_{d'∈D'∖d} v(d')`.
pub fn sep_k_demands_not_exceed(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let sets = minimal_overfull_sets(&vols, ctx.dims.slots, ctx.config.demand_triples);
    for e in 0..ctx.dims.arcs {
        for set in &sets {
            for &d in set {
                let v = vols[d] as f64;
                let mut rhs = 0.0;
                for s in 1..=ctx.dims.slots {
                    em.term(ctx.var(d, e, s), 1.0);
                }
                for &o in set.iter().filter(|&&o| o != d) {
                    rhs += v * vols[o] as f64;
                    for s in 1..=ctx.dims.slots {
                        em.term(ctx.var(o, e, s), v);
                    }
                }
                em.finish(Sense::Le, rhs);
            }
        }
    }
}

/// `Σ_{d∈D'} Σ_s u[d,e,s] ≤ Σ_{D'} v − min_{D'} v`.
pub fn sep_k_demands_by_sum(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let sets = minimal_overfull_sets(&vols, ctx.dims.slots, ctx.config.demand_triples);
    for e in 0..ctx.dims.arcs {
        for set in &sets {
            let total: u32 = set.iter().map(|&d| vols[d]).sum();
            let least = set.iter().map(|&d| vols[d]).min().unwrap_or(0);
            for &d in set {
                for s in 1..=ctx.dims.slots {
                    em.term(ctx.var(d, e, s), 1.0);
                }
            }
            em.finish(Sense::Le, (total - least) as f64);
        }
    }
}

/// `u[d₁,e,s''] + u[d₂,e,s] ≤ 1` for `s ≤ v(d₁)` and `s'' ≤ max(s, v(d₂))`.
pub fn sep_pos_fit_low_2d_by_slots(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let nd = ctx.dims.demands;
    let sb = ctx.dims.slots;
    for e in 0..ctx.dims.arcs {
        for d1 in 0..nd {
            for d2 in (0..nd).filter(|&d2| d2 != d1) {
                for s in 1..=vols[d1].min(sb) {
                    let x = ctx.var(d2, e, s);
                    if em.pruning() && em.value(x) <= 0.0 {
                        continue;
                    }
                    for s2 in 1..=s.max(vols[d2]).min(sb) {
                        em.term(ctx.var(d1, e, s2), 1.0);
                        em.term(x, 1.0);
                        em.finish(Sense::Le, 1.0);
                    }
                }
            }
        }
    }
}

/// Aggregated: `Σ_{s'≤s₁} u[d₁,e,s'] + s₂·u[d₂,e,s] ≤ s₂` with
/// `s₁ = max(s, v(d₂))`, `s₂ = min(v(d₁), s₁)`. Summed: the `d₂` term becomes
/// the sum over every demand but `d₁` and `v(d₂)` becomes their least volume.
pub fn sep_pos_fit_low_2d(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, summed: bool) {
    let vols = volumes(ctx);
    let nd = ctx.dims.demands;
    let sb = ctx.dims.slots;
    if nd < 2 {
        return;
    }
    for e in 0..ctx.dims.arcs {
        for d1 in 0..nd {
            let others: Vec<usize> = (0..nd).filter(|&d| d != d1).collect();
            let least = others.iter().map(|&d| vols[d]).min().unwrap();
            let groups: Vec<(Vec<usize>, u32)> = if summed {
                alloc::vec![(others.clone(), least)]
            } else {
                others.iter().map(|&d| (alloc::vec![d], vols[d])).collect()
            };
            for (group, vol) in &groups {
                for s in 1..=vols[d1].min(sb) {
                    let reach = s.max(*vol).min(sb);
                    let scale = vols[d1].min(reach) as f64;
                    for s2 in 1..=reach {
                        em.term(ctx.var(d1, e, s2), 1.0);
                    }
                    for &d2 in group {
                        em.term(ctx.var(d2, e, s), scale);
                    }
                    em.finish(Sense::Le, scale);
                }
            }
        }
    }
}

/// Three demands at `s₁ < s₂ < s₃` with `s₃ − s₁ ≤ v(d₂)`: the middle one
/// must overlap an outer one. Variations sum the outer terms over every
/// demand but `d₂`.
pub fn sep_pos_fit_3d(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let nd = ctx.dims.demands;
    let sb = ctx.dims.slots;
    if nd < 2 || sb < 3 {
        return;
    }
    for e in 0..ctx.dims.arcs {
        for d2 in 0..nd {
            let v2 = vols[d2];
            for s2 in 2..sb {
                let mid = ctx.var(d2, e, s2);
                if em.pruning() && em.value(mid) <= 0.0 {
                    continue;
                }
                for s1 in 1..s2 {
                    for s3 in s2 + 1..=sb {
                        if s3 - s1 > v2 {
                            break;
                        }
                        if nd >= 3 {
                            for d1 in (0..nd).filter(|&d| d != d2) {
                                if vols[d1] > s1 {
                                    continue;
                                }
                                let a = ctx.var(d1, e, s1);
                                if em.pruning() && em.value(a) <= 0.0 {
                                    continue;
                                }
                                for d3 in (0..nd).filter(|&d| d != d2 && d != d1) {
                                    if s3 + vols[d3] > sb + 1 {
                                        continue;
                                    }
                                    em.term(a, 1.0);
                                    em.term(mid, 1.0);
                                    em.term(ctx.var(d3, e, s3), 1.0);
                                    em.finish(Sense::Le, 2.0);
                                }
                            }
                        }
                        for d in (0..nd).filter(|&d| d != d2) {
                            em.term(ctx.var(d, e, s1), 1.0);
                            em.term(ctx.var(d, e, s3), 1.0);
                        }
                        em.term(mid, 1.0);
                        em.finish(Sense::Le, 2.0);
                    }
                }
            }
        }
    }
}

/// `Σ_{v(d)≥s₂} u[d,e,s₁] + Σ_{v(d)<s₂} u[d,e,s₂] ≤ 1` for `s₁ < s₂ ≤ max v`.
pub fn sep_pos_fit_two_sets(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let sb = ctx.dims.slots;
    let top = ctx.inst.max_volume().min(sb);
    for e in 0..ctx.dims.arcs {
        for s2 in 2..=top {
            for s1 in 1..s2 {
                for (d, &v) in vols.iter().enumerate() {
                    let s = if v >= s2 { s1 } else { s2 };
                    em.term(ctx.var(d, e, s), 1.0);
                }
                em.finish(Sense::Le, 1.0);
            }
        }
    }
}

/// `Σ_{γ} u[d,e,·] − |γ|·Σ_{d'≠d} u[d',e,s₂] − |γ|·u[d,e,s₁] ≥ −|γ|` with
/// `γ = [s₂ − v(d), v(d)]`, `v(d) < s₂ ≤ 2v(d)`, `s₁ < s₂`.
pub fn sep_central_between_lb(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let nd = ctx.dims.demands;
    let sb = ctx.dims.slots;
    for e in 0..ctx.dims.arcs {
        for d in 0..nd {
            let v = vols[d];
            if v < 2 {
                continue;
            }
            for s2 in v + 1..=(2 * v).min(sb) {
                let gamma = s2 - v..=v;
                let width = (2 * v - s2 + 1) as f64;
                for s1 in 1..s2 {
                    let x = ctx.var(d, e, s1);
                    if em.pruning() && em.value(x) <= 0.0 {
                        continue;
                    }
                    for s in gamma.clone() {
                        em.term(ctx.var(d, e, s), 1.0);
                    }
                    for o in (0..nd).filter(|&o| o != d) {
                        em.term(ctx.var(o, e, s2), -width);
                    }
                    em.term(x, -width);
                    em.finish(Sense::Ge, -width);
                }
            }
        }
    }
}

/// `d` at `s₂` between other demands at `s₁` and `s₃` covers
/// `γ = [s₃ − v(d), s₁ + v(d)]`.
pub fn sep_central_between_3d(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let vols = volumes(ctx);
    let nd = ctx.dims.demands;
    let sb = ctx.dims.slots;
    if nd < 2 {
        return;
    }
    for e in 0..ctx.dims.arcs {
        for d in 0..nd {
            let v = vols[d];
            if 2 * v >= sb {
                continue;
            }
            for s1 in 1..=sb - 2 * v {
                for s3 in s1 + v + 1..=s1 + 2 * v {
                    let width = (s1 + 2 * v - s3 + 1) as f64;
                    for s2 in s1 + 1..s3 {
                        let x = ctx.var(d, e, s2);
                        if em.pruning() && em.value(x) <= 0.0 {
                            continue;
                        }
                        for s in s3 - v..=s1 + v {
                            em.term(ctx.var(d, e, s), 1.0);
                        }
                        for o in (0..nd).filter(|&o| o != d) {
                            em.term(ctx.var(o, e, s1), -width);
                            em.term(ctx.var(o, e, s3), -width);
                        }
                        em.term(x, -width);
                        em.finish(Sense::Ge, -2.0 * width);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Family, SeparationConfig, SeparationContext};
    use super::*;
    use crate::fixtures;
    use crate::instance::{Demand, Digraph, Instance};
    use crate::model::FractionalPoint;

    fn one_arc(vols: &[u32], slots: u32) -> Instance {
        let g = Digraph::new(2, alloc::vec![(0, 1)]).unwrap();
        let ds = vols.iter().map(|&v| Demand::new(0, 1, v)).collect();
        Instance::new("one-arc", g, ds, slots).unwrap()
    }

    fn point(ctx: &SeparationContext<'_>, ones: &[(usize, u32)]) -> FractionalPoint {
        let mut p = FractionalPoint::zeros(ctx.dims.var_count());
        for &(d, s) in ones {
            p.0[ctx.var(d, 0, s)] = 1.0;
        }
        p
    }

    #[test]
    fn minimal_sets() {
        assert_eq!(minimal_overfull_sets(&[2, 1], 2, false), alloc::vec![alloc::vec![0, 1]]);
        assert_eq!(minimal_overfull_sets(&[2, 1], 3, true), Vec::<Vec<usize>>::new());
        assert_eq!(minimal_overfull_sets(&[2, 2, 2], 5, true), alloc::vec![alloc::vec![0, 1, 2]]);
    }

    #[test]
    fn non_over_by_sum_on_inst_b_pattern() {
        let inst = fixtures::inst_b();
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(0, 1), (0, 3), (1, 2)]);
        let cuts = ctx.separate(Family::NonOverBySum, &p, 0.0, 0);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].violation, 1.0);
        let half = FractionalPoint(alloc::vec![0.5; ctx.dims.var_count()]);
        assert!(ctx.separate(Family::NonOverBySum, &half, 0.0, 0).is_empty());
    }

    #[test]
    fn k_demands_on_inst_c() {
        let inst = fixtures::inst_c();
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(0, 1), (0, 2), (1, 1)]);
        let by_sum = ctx.separate(Family::KDemandsBySum, &p, 0.0, 0);
        assert_eq!(by_sum.len(), 1);
        assert_eq!(by_sum[0].violation, 1.0);
        assert!(!ctx.separate(Family::KDemandsNotExceed, &p, 0.0, 0).is_empty());
    }

    #[test]
    fn pos_fit_low_2d_aggregated() {
        // v(d1) = 3, v(d2) = 2, s = 1: s1 = 2, s2 = 2
        let inst = one_arc(&[3, 2], 6);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(1, 1), (0, 2)]);
        let cuts = ctx.separate(Family::PosFitLow2DAggregated, &p, 0.0, 0);
        let row = cuts.iter().find(|c| c.row.coeff(ctx.var(1, 0, 1)) == 2.0).unwrap();
        assert_eq!(row.row.rhs, 2.0);
        assert_eq!(row.violation, 1.0);
        let ok = point(&ctx, &[(1, 1), (1, 2), (0, 3), (0, 4), (0, 5)]);
        for f in [Family::PosFitLow2DAggregated, Family::PosFitLow2DSummed, Family::PosFitLow2DBySlots] {
            assert!(ctx.separate(f, &ok, 0.0, 0).is_empty(), "{f}");
        }
    }

    #[test]
    fn pos_fit_3d_example() {
        let inst = one_arc(&[2, 3, 2], 6);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(0, 2), (1, 3), (2, 4)]);
        let cuts = ctx.separate(Family::PosFit3DBySlots, &p, 0.0, 0);
        assert!(cuts.iter().any(|c| c.row.coeffs.len() == 3 && c.violation == 1.0));
        // s₃ − s₁ = 3 > v(d₂) = 2 is never generated for d₂ = 0
        let rows = ctx.all_rows(Family::PosFit3DBySlots);
        assert!(!rows.iter().any(|c| c.row.coeff(ctx.var(0, 0, 3)) == 1.0
            && c.row.coeff(ctx.var(1, 0, 2)) == 1.0
            && c.row.coeff(ctx.var(2, 0, 5)) == 1.0
            && c.row.coeffs.len() == 3));
    }

    #[test]
    fn two_sets_row() {
        let inst = one_arc(&[3, 1], 4);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let rows = ctx.all_rows(Family::PosFit2Sets);
        let first = &rows[0].row;
        assert_eq!(first.coeffs, alloc::vec![(ctx.var(0, 0, 1), 1.0), (ctx.var(1, 0, 2), 1.0)]);
        let p = point(&ctx, &[(0, 1), (1, 2)]);
        assert_eq!(ctx.separate(Family::PosFit2Sets, &p, 0.0, 0)[0].violation, 1.0);
    }

    #[test]
    fn central_slots() {
        // v = 3, s̄ = 8, s₂ = 5, s₁ = 1: γ = {2, 3}
        let inst = one_arc(&[3, 1], 8);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(0, 1), (1, 5)]);
        let cuts = ctx.separate(Family::CentralSlotsLb, &p, 0.0, 0);
        assert!(cuts.iter().any(|c| c.violation == 2.0 && c.row.coeffs.len() == 4));

        // v = 2, s̄ = 8, s₁ = 1, s₃ = 5: γ = {3}
        let inst = one_arc(&[2, 1, 1], 8);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let p = point(&ctx, &[(1, 1), (0, 4), (2, 5)]);
        let cuts = ctx.separate(Family::CentralSlots3D, &p, 0.0, 0);
        assert!(cuts.iter().any(|c| c.violation == 1.0 && c.row.coeff(ctx.var(0, 0, 3)) == 1.0));
    }
}
