//! Mirrors that turn a cut into another cut of the same kind: reversing the
//! slot order, swapping the in/out coefficients around a transit node, and
//! swapping a demand's source and target coefficients.
//!
//! Mirrored cuts carry `violation = 0.0`; they have not been measured at any
//! point.

use alloc::vec;
use alloc::vec::Vec;

use crate::cuts::Cut;
use crate::instance::{ArcId, Instance, NodeId};
use crate::model::{Dims, LinearRow};

const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetryError {
    #[error("node {node} is an endpoint of demand {demand}")]
    EndpointNode { node: NodeId, demand: usize },
    #[error("coefficients of demand {demand} at slot {slot} differ on arc {arc}")]
    NotConstant { demand: usize, slot: u32, arc: ArcId },
    #[error("demand {demand} at slot {slot} has a nonzero coefficient on arc {arc}")]
    NonZero { demand: usize, slot: u32, arc: ArcId },
}

/// Coefficient of `u[d,e,s]` becomes that of `u[d,e,s̄−s+1]`.
pub fn mirror_row_slots(row: &LinearRow, dims: &Dims) -> LinearRow {
    let terms = row.coeffs.iter().map(|&(var, c)| {
        let ix = dims.decode(var);
        (dims.var(ix.demand, ix.arc, dims.slots + 1 - ix.slot), c)
    });
    LinearRow::new(row.tag, terms, row.sense, row.rhs)
}

pub fn mirror_slots(cut: &Cut, dims: &Dims) -> Cut {
    let mut out = Cut::new(mirror_row_slots(&cut.row, dims), cut.family, 0.0);
    out.kind = cut.kind;
    out
}

fn dense(row: &LinearRow, dims: &Dims) -> Vec<f64> {
    let mut a = vec![0.0; dims.var_count()];
    for &(v, c) in &row.coeffs {
        a[v] = c;
    }
    a
}

fn rebuild(cut: &Cut, a: Vec<f64>) -> Cut {
    let terms = a.into_iter().enumerate().filter(|&(_, c)| c != 0.0);
    let row = LinearRow::new(cut.row.tag, terms, cut.row.sense, cut.row.rhs);
    let mut out = Cut::new(row, cut.family, 0.0);
    out.kind = cut.kind;
    out
}

/// The common coefficient of `(d, s)` over `arcs`, or 0 when `arcs` is empty.
fn common(a: &[f64], dims: &Dims, d: usize, s: u32, arcs: &[ArcId]) -> Result<f64, SymmetryError> {
    let Some(&first) = arcs.first() else { return Ok(0.0) };
    let value = a[dims.var(d, first, s)];
    for &e in arcs {
        if (a[dims.var(d, e, s)] - value).abs() > COEFF_TOL {
            return Err(SymmetryError::NotConstant { demand: d, slot: s, arc: e });
        }
    }
    Ok(value)
}

/// Around a node `j` that no demand starts or ends at: out-arc coefficients
/// move to the in-arcs and vice versa.
pub fn mirror_node_flow(cut: &Cut, inst: &Instance, j: NodeId) -> Result<Cut, SymmetryError> {
    if let Some(demand) = inst.demands().iter().position(|d| d.source == j || d.target == j) {
        return Err(SymmetryError::EndpointNode { node: j, demand });
    }
    let dims = Dims::of(inst);
    let g = inst.graph();
    let (out, inc) = (g.out_arcs(j), g.in_arcs(j));
    let mut a = dense(&cut.row, &dims);
    for d in 0..dims.demands {
        for s in 1..=dims.slots {
            let alpha = common(&a, &dims, d, s, out)?;
            let beta = common(&a, &dims, d, s, inc)?;
            for &e in inc {
                a[dims.var(d, e, s)] = alpha;
            }
            for &e in out {
                a[dims.var(d, e, s)] = beta;
            }
        }
    }
    Ok(rebuild(cut, a))
}

/// For demand `d`: coefficients on the source's out-arcs and the target's
/// in-arcs swap places.
pub fn mirror_demand_endpoints(cut: &Cut, inst: &Instance, d: usize) -> Result<Cut, SymmetryError> {
    let dims = Dims::of(inst);
    let g = inst.graph();
    let dem = inst.demand(d);
    let (from_src, into_dst) = (g.out_arcs(dem.source), g.in_arcs(dem.target));
    let zero_arcs: Vec<ArcId> = g.in_arcs(dem.source).iter().chain(g.out_arcs(dem.target)).copied().collect();
    let mut touching: Vec<ArcId> = zero_arcs.iter().chain(from_src).chain(into_dst).copied().collect();
    touching.sort_unstable();
    touching.dedup();
    let mut a = dense(&cut.row, &dims);
    for s in 1..=dims.slots {
        for &e in &zero_arcs {
            if a[dims.var(d, e, s)].abs() > COEFF_TOL {
                return Err(SymmetryError::NonZero { demand: d, slot: s, arc: e });
            }
        }
        for other in (0..dims.demands).filter(|&o| o != d) {
            for &e in &touching {
                if a[dims.var(other, e, s)].abs() > COEFF_TOL {
                    return Err(SymmetryError::NonZero { demand: other, slot: s, arc: e });
                }
            }
        }
    }
    for s in 1..=dims.slots {
        let alpha = common(&a, &dims, d, s, from_src)?;
        let beta = common(&a, &dims, d, s, into_dst)?;
        for &e in from_src {
            a[dims.var(d, e, s)] = beta;
        }
        for &e in into_dst {
            a[dims.var(d, e, s)] = alpha;
        }
    }
    Ok(rebuild(cut, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::{Family, SeparationConfig, SeparationContext};
    use crate::fixtures;
    use crate::instance::Demand;
    use crate::model::{build_model, tags, ModelOptions, Sense};

    fn as_cut(row: LinearRow, family: Family) -> Cut {
        Cut::new(row, family, 0.0)
    }

    #[test]
    fn slot_mirror_moves_slot_one_to_last() {
        let inst = fixtures::ring(3, vec![Demand::new(0, 1, 1)], 5);
        let dims = Dims::of(&inst);
        let row = LinearRow::new("t", [(dims.var(0, 2, 1), 1.0)], Sense::Le, 0.0);
        let m = mirror_row_slots(&row, &dims);
        assert_eq!(m.coeffs, vec![(dims.var(0, 2, 5), 1.0)]);
        assert_eq!(mirror_row_slots(&m, &dims), row);
    }

    #[test]
    fn summed_clash_row_is_fixed() {
        let inst = fixtures::inst_b();
        let dims = Dims::of(&inst);
        let row = LinearRow::new(
            "t",
            (0..2).flat_map(|d| (1..=3).map(move |s| (dims.var(d, 0, s), 1.0))),
            Sense::Le,
            3.0,
        );
        assert_eq!(mirror_row_slots(&row, &dims), row);
    }

    #[test]
    fn node_flow_mirror_of_exactly_vd() {
        // transit node 1 on a 4-ring with a demand 0 -> 2 via either side
        let inst = fixtures::ring(4, vec![Demand::new(0, 2, 1)], 2);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let g = inst.graph();
        let rows = ctx.all_rows(Family::ExactlyVdFromV);
        let at_one = rows
            .iter()
            .find(|c| c.row.coeffs.iter().all(|&(v, _)| g.arc(ctx.dims.decode(v).arc).tail == 1))
            .unwrap();
        let m = mirror_node_flow(at_one, &inst, 1).unwrap();
        assert!(m.row.coeffs.iter().all(|&(v, _)| g.arc(ctx.dims.decode(v).arc).head == 1));
        assert_eq!(m.row.rhs, at_one.row.rhs);
        let back = mirror_node_flow(&m, &inst, 1).unwrap();
        assert_eq!(back.row, at_one.row);
        // rows away from node 1 are untouched
        let elsewhere = rows.iter().find(|c| c.row.coeffs.iter().all(|&(v, _)| {
            let a = g.arc(ctx.dims.decode(v).arc);
            a.tail != 1 && a.head != 1
        }));
        if let Some(c) = elsewhere {
            assert_eq!(mirror_node_flow(c, &inst, 1).unwrap().row, c.row);
        }
        assert_eq!(
            mirror_node_flow(at_one, &inst, 0).unwrap_err(),
            SymmetryError::EndpointNode { node: 0, demand: 0 }
        );
    }

    #[test]
    fn node_flow_rejects_uneven_coefficients() {
        let inst = fixtures::ring(4, vec![Demand::new(0, 2, 1)], 2);
        let dims = Dims::of(&inst);
        let out = inst.graph().out_arcs(1)[0];
        let row = LinearRow::new("t", [(dims.var(0, out, 1), 1.0)], Sense::Le, 1.0);
        let err = mirror_node_flow(&as_cut(row, Family::ExactlyVdFromV), &inst, 1).unwrap_err();
        assert!(matches!(err, SymmetryError::NotConstant { demand: 0, slot: 1, .. }));
    }

    #[test]
    fn endpoint_mirror_swaps_source_and_target() {
        let inst = fixtures::ring(4, vec![Demand::new(0, 2, 2)], 3);
        let ctx = SeparationContext::new(&inst, SeparationConfig::default(), 0);
        let g = inst.graph();
        let src = &ctx.all_rows(Family::ExactlyVdFromSrc)[0];
        let m = mirror_demand_endpoints(src, &inst, 0).unwrap();
        assert!(m.row.coeffs.iter().all(|&(v, _)| g.arc(ctx.dims.decode(v).arc).head == 2));
        let from = ctx.all_rows(Family::PpalSlotsFromSrc);
        let to = ctx.all_rows(Family::PpalSlotsToDst);
        for (f, t) in from.iter().zip(&to) {
            assert_eq!(mirror_demand_endpoints(f, &inst, 0).unwrap().row.coeffs, t.row.coeffs);
        }
    }

    #[test]
    fn endpoint_mirror_checks_pattern() {
        let inst = fixtures::inst_b();
        let model = build_model(&inst, ModelOptions::default());
        let clash = model.rows_tagged(tags::CLASH).next().unwrap().clone();
        let err = mirror_demand_endpoints(&as_cut(clash, Family::NonOverBySum), &inst, 0).unwrap_err();
        assert!(matches!(err, SymmetryError::NonZero { demand: 1, .. }));
    }
}
