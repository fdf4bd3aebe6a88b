//! Contiguity families: residue-class balance on each arc, principal slots
//! on minimal cuts, far slots and the slot-mirrored model rows.

use alloc::vec::Vec;

use super::{Emitter, SeparationContext};
use crate::instance::Instance;
use crate::model::{contiguity_row, Dims, LinearRow, Sense};
use crate::symmetry::mirror_row_slots;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpalVariant {
    AllCuts,
    FromSrc,
    ToDst,
    FirstResidue,
    Central,
}

#[inline]
fn congruent(s: u32, i: u32, v: u32) -> bool {
    (s + v - i % v) % v == 0
}

/// Per demand of volume ≥ 2, arc and residue `i ∈ 1..=v`: the slots
/// congruent to `i` and those congruent to `i − 1` carry equal mass.
pub(crate) fn contiguity_eq_rows(inst: &Instance, dims: &Dims, tag: &'static str) -> Vec<LinearRow> {
    let mut rows = Vec::new();
    for (d, dem) in inst.demands().iter().enumerate() {
        let v = dem.volume;
        if v < 2 {
            continue;
        }
        for e in 0..dims.arcs {
            for i in 1..=v {
                let terms = (1..=dims.slots).flat_map(|s| {
                    let mut t = Vec::with_capacity(2);
                    if congruent(s, i, v) {
                        t.push((dims.var(d, e, s), 1.0));
                    }
                    if congruent(s + 1, i, v) {
                        t.push((dims.var(d, e, s), -1.0));
                    }
                    t
                });
                rows.push(LinearRow::new(tag, terms, Sense::Eq, 0.0));
            }
        }
    }
    rows
}

/// `Σ_{s≤i, s≡i} u[d,e,s] ≥ Σ_{s≤i−1, s≡i−1} u[d,e,s]`, optionally with every
/// slot mirrored.
pub fn sep_contiguity_ineqs(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, mirrored: bool) {
    let sb = ctx.dims.slots;
    let map = |s: u32| if mirrored { sb + 1 - s } else { s };
    for d in 0..ctx.dims.demands {
        let v = ctx.inst.demand(d).volume;
        if v < 2 {
            continue;
        }
        for e in 0..ctx.dims.arcs {
            for i in 2..=sb {
                for s in 1..=i {
                    if congruent(s, i, v) {
                        em.term(ctx.var(d, e, map(s)), 1.0);
                    }
                    if s < i && congruent(s + 1, i, v) {
                        em.term(ctx.var(d, e, map(s)), -1.0);
                    }
                }
                em.finish(Sense::Ge, 0.0);
            }
        }
    }
}

pub fn sep_contiguity_eqs(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    for row in contiguity_eq_rows(ctx.inst, &ctx.dims, "") {
        for &(v, c) in &row.coeffs {
            em.term(v, c);
        }
        em.finish(row.sense, row.rhs);
    }
}

/// `Σ_{e∈C} Σ_{s≡i} u[d,e,s] = 1` over minimal cuts `C`; the central variant
/// fixes each always-used central slot on the source's out-arcs.
pub fn sep_ppal_slots(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>, variant: PpalVariant) {
    let g = ctx.inst.graph();
    let sb = ctx.dims.slots;
    for d in 0..ctx.dims.demands {
        let dem = ctx.inst.demand(d);
        let v = dem.volume;
        if ctx.pools.min_cuts[d].is_empty() {
            continue;
        }
        if variant == PpalVariant::Central {
            if 2 * v <= sb {
                continue;
            }
            for s in (sb - v + 1)..=v {
                for &e in g.out_arcs(dem.source) {
                    em.term(ctx.var(d, e, s), 1.0);
                }
                em.finish(Sense::Eq, 1.0);
            }
            continue;
        }
        let src_cut = {
            let mut c = g.out_arcs(dem.source).to_vec();
            c.sort_unstable();
            c
        };
        let dst_cut = {
            let mut c = g.in_arcs(dem.target).to_vec();
            c.sort_unstable();
            c
        };
        let cuts: Vec<&Vec<usize>> = match variant {
            PpalVariant::FromSrc => alloc::vec![&src_cut],
            PpalVariant::ToDst => alloc::vec![&dst_cut],
            _ => ctx.pools.min_cuts[d].iter().collect(),
        };
        let residues = if variant == PpalVariant::FirstResidue { 1..=1 } else { 1..=v };
        for cut in cuts {
            for i in residues.clone() {
                for &e in cut {
                    for s in (1..=sb).filter(|&s| congruent(s, i, v)) {
                        em.term(ctx.var(d, e, s), 1.0);
                    }
                }
                em.finish(Sense::Eq, 1.0);
            }
        }
    }
}

/// `Σ_{s'∈S'} u[d,e,s'] + M·u[d,e,s] ≤ M` with `S'` the slots at distance
/// ≥ v(d) from `s` and `M = min(|S'|, v(d))`.
pub fn sep_far_slots_off(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    let sb = ctx.dims.slots;
    for d in 0..ctx.dims.demands {
        let v = ctx.inst.demand(d).volume;
        for e in 0..ctx.dims.arcs {
            for s in 1..=sb {
                let x = ctx.var(d, e, s);
                if em.pruning() && em.value(x) <= 0.0 {
                    continue;
                }
                let far: Vec<u32> = (1..=sb).filter(|&t| t + v <= s || t >= s + v).collect();
                if far.is_empty() {
                    continue;
                }
                let big = far.len().min(v as usize) as f64;
                for t in far {
                    em.term(ctx.var(d, e, t), 1.0);
                }
                em.term(x, big);
                em.finish(Sense::Le, big);
            }
        }
    }
}

/// Slot mirrors of the model's contiguity rows.
pub fn sep_symmetrical_bf_contiguity(ctx: &SeparationContext<'_>, em: &mut Emitter<'_>) {
    for d in 0..ctx.dims.demands {
        let v = ctx.inst.demand(d).volume;
        for e in 0..ctx.dims.arcs {
            for s in 1..=ctx.dims.slots {
                let row = mirror_row_slots(&contiguity_row(&ctx.dims, d, e, s, v), &ctx.dims);
                for &(x, c) in &row.coeffs {
                    em.term(x, c);
                }
                em.finish(row.sense, row.rhs);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Family, SeparationConfig, SeparationContext};
    use super::*;
    use crate::fixtures;
    use crate::instance::{CanonicalSolution, Demand, Digraph, Lightpath};
    use crate::model::{embed_canonical, FractionalPoint};

    fn one_arc(v: u32, slots: u32) -> Instance {
        let g = Digraph::new(2, alloc::vec![(0, 1)]).unwrap();
        Instance::new("one-arc", g, alloc::vec![Demand::new(0, 1, v)], slots).unwrap()
    }

    #[test]
    fn ineq_row_shape() {
        let inst = one_arc(2, 4);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let rows = ctx.all_rows(Family::ContiguityIneqs);
        // i = 3: u1 + u3 - u2 >= 0
        let r = &rows[1];
        let dims = ctx.dims;
        assert_eq!(r.row.coeff(dims.var(0, 0, 1)), 1.0);
        assert_eq!(r.row.coeff(dims.var(0, 0, 3)), 1.0);
        assert_eq!(r.row.coeff(dims.var(0, 0, 2)), -1.0);
        assert_eq!(r.row.sense, Sense::Ge);
        let mut p = FractionalPoint::zeros(dims.var_count());
        p.0[dims.var(0, 0, 2)] = 1.0;
        let cuts = ctx.separate(Family::ContiguityIneqs, &p, 0.0, 0);
        assert!(cuts.iter().any(|c| c.row == r.row && (c.violation - 1.0).abs() < 1e-12));
    }

    #[test]
    fn eq_rows() {
        let inst = one_arc(2, 4);
        let dims = Dims::of(&inst);
        let rows = contiguity_eq_rows(&inst, &dims, "t");
        assert_eq!(rows.len(), 2);
        // i = 1: u1 + u3 - u2 - u4 = 0
        let r = &rows[0];
        assert_eq!(r.coeff(dims.var(0, 0, 1)), 1.0);
        assert_eq!(r.coeff(dims.var(0, 0, 3)), 1.0);
        assert_eq!(r.coeff(dims.var(0, 0, 2)), -1.0);
        assert_eq!(r.coeff(dims.var(0, 0, 4)), -1.0);
        for start in 1..=3 {
            let sol = CanonicalSolution::new(alloc::vec![Lightpath::new(alloc::vec![0], start)]);
            let p = embed_canonical(&inst, &sol).unwrap();
            assert!(rows.iter().all(|r| r.violation(p.values()) == 0.0));
        }
        assert!(contiguity_eq_rows(&one_arc(1, 3), &dims, "t").is_empty());
    }

    #[test]
    fn central_slot_on_inst_a() {
        let inst = fixtures::inst_a();
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let rows = ctx.all_rows(Family::PpalSlotsCentral);
        assert_eq!(rows.len(), 1);
        let r = &rows[0].row;
        assert_eq!(r.coeffs, alloc::vec![(ctx.var(0, 0, 2), 1.0), (ctx.var(0, 2, 2), 1.0)]);
        assert_eq!(r.sense, Sense::Eq);
        assert_eq!(rows[0].violation, 1.0);
    }

    #[test]
    fn far_slots() {
        let inst = one_arc(2, 5);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let mut p = FractionalPoint::zeros(ctx.dims.var_count());
        p.0[ctx.var(0, 0, 1)] = 1.0;
        p.0[ctx.var(0, 0, 4)] = 1.0;
        let cuts = ctx.separate(Family::FarSlotsOff, &p, 0.0, 0);
        let first = cuts.iter().find(|c| c.row.coeff(ctx.var(0, 0, 1)) == 2.0).unwrap();
        assert_eq!(first.row.rhs, 2.0);
        assert!((first.violation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_points_satisfy_every_row() {
        let inst = fixtures::grid(2, 2, alloc::vec![Demand::new(0, 3, 2), Demand::new(3, 0, 3)], 5);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let paths0 = inst.graph().simple_paths(0, 3, 10).unwrap();
        let paths1 = inst.graph().simple_paths(3, 0, 10).unwrap();
        let sol = CanonicalSolution::new(alloc::vec![
            Lightpath::new(paths0[0].clone(), 1),
            Lightpath::new(paths1[0].clone(), 3),
        ]);
        let p = embed_canonical(&inst, &sol).unwrap();
        for f in [
            Family::ContiguityIneqs,
            Family::SymmContiguityIneqs,
            Family::ContiguityEqs,
            Family::PpalSlots,
            Family::PpalSlotsFromSrc,
            Family::PpalSlotsToDst,
            Family::PpalSlotsFirstResidue,
            Family::PpalSlotsCentral,
            Family::FarSlotsOff,
            Family::SymmetricalBfContiguity,
        ] {
            assert!(ctx.separate(f, &p, 0.0, 0).is_empty(), "{f}");
        }
    }
}
