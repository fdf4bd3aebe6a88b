//! The arc/slot binary program: one variable `u[d,e,s]` per demand, arc and
//! slot, objective `Σ u/v(d)`, and the flow, volume, clash and contiguity rows.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use thiserror::Error;

use crate::cuts::contiguity::contiguity_eq_rows;
use crate::instance::{check_canonical_feasible, CanonicalSolution, Instance, Violation};

pub mod tags {
    pub const FLOW_CONSERVATION: &str = "flowConservation";
    pub const SOURCE_VOLUME: &str = "sourceVolume";
    pub const SOURCE_INFLOW: &str = "sourceInflow";
    pub const CLASH: &str = "clash";
    pub const CONTIGUITY: &str = "contiguity";
    pub const NO_OUT_FROM_DST: &str = "noOutFromDst";
    pub const CONTIGUITY_EQS: &str = "contiguityEqs";
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("variable index {index} out of range (model has {len} variables)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("canonical solution is infeasible: {}", .0.first().map(|v| alloc::format!("{v}")).unwrap_or_default())]
    InfeasibleSolution(Vec<Violation>),
}

/// Shape of the variable space: `|D| × |E| × s̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub demands: usize,
    pub arcs: usize,
    pub slots: u32,
}

impl Dims {
    pub fn of(inst: &Instance) -> Self {
        Self {
            demands: inst.demands().len(),
            arcs: inst.graph().arc_count(),
            slots: inst.slots(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.demands * self.arcs * self.slots as usize
    }

    /// Linear index of `u[d,e,s]`, `s` 1-based.
    #[inline]
    pub fn var(&self, d: usize, e: usize, s: u32) -> usize {
        debug_assert!(d < self.demands && e < self.arcs && (1..=self.slots).contains(&s));
        (d * self.arcs + e) * self.slots as usize + (s as usize - 1)
    }

    pub fn decode(&self, index: usize) -> VarIndex {
        let sl = self.slots as usize;
        VarIndex {
            demand: index / (self.arcs * sl),
            arc: (index / sl) % self.arcs,
            slot: (index % sl) as u32 + 1,
        }
    }
}

/// Demand, arc and 1-based slot of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub demand: usize,
    pub arc: usize,
    pub slot: u32,
}

impl VarIndex {
    pub fn linear(&self, dims: &Dims) -> usize {
        dims.var(self.demand, self.arc, self.slot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }

    /// Amount by which `lhs` misses `rhs` under this sense.
    pub fn violation(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Sense::Le => (lhs - rhs).max(0.0),
            Sense::Eq => (lhs - rhs).abs(),
            Sense::Ge => (rhs - lhs).max(0.0),
        }
    }
}

/// Sparse row `Σ coeff·u sense rhs`, coefficients sorted by variable and
/// never zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: &'static str,
}

impl LinearRow {
    /// Builds a row, merging repeated variables and dropping zeros.
    pub fn new(
        tag: &'static str,
        terms: impl IntoIterator<Item = (usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Self {
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for (v, c) in terms {
            *acc.entry(v).or_insert(0.0) += c;
        }
        let coeffs = acc.into_iter().filter(|&(_, c)| c != 0.0).collect();
        Self { coeffs, sense, rhs, tag }
    }

    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn violation(&self, values: &[f64]) -> f64 {
        self.sense.violation(self.lhs(values), self.rhs)
    }

    pub fn coeff(&self, var: usize) -> f64 {
        match self.coeffs.binary_search_by_key(&var, |&(v, _)| v) {
            Ok(i) => self.coeffs[i].1,
            Err(_) => 0.0,
        }
    }

    /// Same hyperplane and sense, compared bitwise.
    pub fn same_constraint(&self, other: &LinearRow) -> bool {
        self.sense == other.sense
            && self.rhs.to_bits() == other.rhs.to_bits()
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
    }

    /// Renders as `tag: c·u[d,e,s] + ... sense rhs`.
    pub fn display<'a>(&'a self, dims: &'a Dims) -> impl fmt::Display + 'a {
        RowDisplay { row: self, dims }
    }
}

struct RowDisplay<'a> {
    row: &'a LinearRow,
    dims: &'a Dims,
}

impl fmt::Display for RowDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.row.tag)?;
        if self.row.coeffs.is_empty() {
            f.write_str(" 0")?;
        }
        for (i, &(v, c)) in self.row.coeffs.iter().enumerate() {
            let x = self.dims.decode(v);
            let sep = if i == 0 { " " } else { " + " };
            write!(f, "{sep}{c}·u[{},{},{}]", x.demand, x.arc, x.slot)?;
        }
        write!(f, " {} {}", self.row.sense.symbol(), self.row.rhs)
    }
}

/// Values of every `u[d,e,s]`, indexed linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint(pub Vec<f64>);

impl FractionalPoint {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self, tol: f64) -> bool {
        self.0.iter().all(|&x| (x - libm::round(x)).abs() <= tol)
    }
}

/// Left-hand side of a row at a point and how much the row is violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValue {
    pub lhs: f64,
    pub violation: f64,
}

pub fn evaluate_row(row: &LinearRow, point: &FractionalPoint) -> Result<RowValue, ModelError> {
    if let Some(&(index, _)) = row.coeffs.iter().find(|&&(v, _)| v >= point.len()) {
        return Err(ModelError::IndexOutOfRange { index, len: point.len() });
    }
    let lhs = row.lhs(&point.0);
    Ok(RowValue { lhs, violation: row.sense.violation(lhs, row.rhs) })
}

/// Which optional static rows to install at build time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelOptions {
    /// `Σ_{e∈δ⁺(t(d))} Σ_s u = 0` per demand.
    pub no_out_from_dst: bool,
    /// Residue-class balance equations per demand and arc.
    pub contiguity_eqs: bool,
}

impl ModelOptions {
    pub fn with_static_rows() -> Self {
        Self { no_out_from_dst: true, contiguity_eqs: true }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub dims: Dims,
    pub volumes: Vec<u32>,
    pub objective: Vec<f64>,
    pub rows: Vec<LinearRow>,
    pub options: ModelOptions,
}

pub fn build_model(inst: &Instance, options: ModelOptions) -> Model {
    let dims = Dims::of(inst);
    let g = inst.graph();
    let s_bar = inst.slots();
    let mut objective = vec![0.0; dims.var_count()];
    for (d, demand) in inst.demands().iter().enumerate() {
        let w = 1.0 / demand.volume as f64;
        for e in 0..dims.arcs {
            for s in 1..=s_bar {
                objective[dims.var(d, e, s)] = w;
            }
        }
    }

    let mut rows = Vec::new();
    for (d, demand) in inst.demands().iter().enumerate() {
        for j in 0..g.node_count() {
            if j == demand.source || j == demand.target {
                continue;
            }
            for s in 1..=s_bar {
                let terms = g
                    .in_arcs(j)
                    .iter()
                    .map(|&e| (dims.var(d, e, s), 1.0))
                    .chain(g.out_arcs(j).iter().map(|&e| (dims.var(d, e, s), -1.0)));
                rows.push(LinearRow::new(tags::FLOW_CONSERVATION, terms, Sense::Eq, 0.0));
            }
        }
    }
    for (d, demand) in inst.demands().iter().enumerate() {
        let terms = arc_slot_terms(&dims, d, g.out_arcs(demand.source), 1.0);
        rows.push(LinearRow::new(tags::SOURCE_VOLUME, terms, Sense::Ge, demand.volume as f64));
    }
    for (d, demand) in inst.demands().iter().enumerate() {
        let terms = arc_slot_terms(&dims, d, g.in_arcs(demand.source), 1.0);
        rows.push(LinearRow::new(tags::SOURCE_INFLOW, terms, Sense::Eq, 0.0));
    }
    for e in 0..dims.arcs {
        for s in 1..=s_bar {
            let terms = (0..dims.demands).map(|d| (dims.var(d, e, s), 1.0));
            rows.push(LinearRow::new(tags::CLASH, terms, Sense::Le, 1.0));
        }
    }
    for (d, demand) in inst.demands().iter().enumerate() {
        for e in 0..dims.arcs {
            for s in 1..=s_bar {
                rows.push(contiguity_row(&dims, d, e, s, demand.volume));
            }
        }
    }
    if options.no_out_from_dst {
        for (d, demand) in inst.demands().iter().enumerate() {
            let terms = arc_slot_terms(&dims, d, g.out_arcs(demand.target), 1.0);
            rows.push(LinearRow::new(tags::NO_OUT_FROM_DST, terms, Sense::Eq, 0.0));
        }
    }
    if options.contiguity_eqs {
        rows.extend(contiguity_eq_rows(inst, &dims, tags::CONTIGUITY_EQS));
    }

    Model {
        dims,
        volumes: inst.demands().iter().map(|d| d.volume).collect(),
        objective,
        rows,
        options,
    }
}

/// `v(u[s] − u[s+1]) − Σ_{s'=f}^{s} u[s'] ≤ 0` with `f = max(1, s−v+1)`;
/// the `u[s̄+1]` term is absent.
pub(crate) fn contiguity_row(dims: &Dims, d: usize, e: usize, s: u32, v: u32) -> LinearRow {
    let vf = v as f64;
    let first = if s > v { s - v + 1 } else { 1 };
    let mut terms = vec![(dims.var(d, e, s), vf)];
    if s < dims.slots {
        terms.push((dims.var(d, e, s + 1), -vf));
    }
    terms.extend((first..=s).map(|t| (dims.var(d, e, t), -1.0)));
    LinearRow::new(tags::CONTIGUITY, terms, Sense::Le, 0.0)
}

fn arc_slot_terms<'a>(
    dims: &'a Dims,
    d: usize,
    arcs: &'a [usize],
    coeff: f64,
) -> impl Iterator<Item = (usize, f64)> + 'a {
    arcs.iter()
        .flat_map(move |&e| (1..=dims.slots).map(move |s| (dims.var(d, e, s), coeff)))
}

impl Model {
    pub fn var_count(&self) -> usize {
        self.dims.var_count()
    }

    pub fn objective_value(&self, point: &FractionalPoint) -> f64 {
        self.objective.iter().zip(&point.0).map(|(c, x)| c * x).sum()
    }

    /// Objective of a 0/1 point, summed per demand as whole slot counts so
    /// that arc counts come out exact.
    pub fn integral_objective(&self, point: &FractionalPoint) -> f64 {
        let per_demand = self.dims.arcs * self.dims.slots as usize;
        point
            .values()
            .chunks(per_demand.max(1))
            .zip(&self.volumes)
            .map(|(block, &v)| libm::round(block.iter().sum::<f64>()) / f64::from(v))
            .sum()
    }

    pub fn rows_tagged<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a LinearRow> + 'a {
        self.rows.iter().filter(move |r| r.tag == tag)
    }

    /// Largest violation over all rows and the index of the row attaining it.
    pub fn max_violation(&self, point: &FractionalPoint) -> (f64, Option<usize>) {
        let mut worst = (0.0, None);
        for (i, row) in self.rows.iter().enumerate() {
            let v = row.violation(&point.0);
            if v > worst.0 {
                worst = (v, Some(i));
            }
        }
        worst
    }

    /// One row per line in the `tag: Σ coeff·u[d,e,s] sense rhs` format.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.display(&self.dims));
        }
        out
    }
}

/// 0/1 point with `u[d,e,s] = 1` exactly on each demand's path arcs and
/// block slots.
pub fn embed_canonical(inst: &Instance, sol: &CanonicalSolution) -> Result<FractionalPoint, ModelError> {
    let report = check_canonical_feasible(inst, sol);
    if !report.is_feasible() {
        return Err(ModelError::InfeasibleSolution(report.violations));
    }
    let dims = Dims::of(inst);
    let mut point = FractionalPoint::zeros(dims.var_count());
    for (d, lp) in sol.paths.iter().enumerate() {
        let v = inst.demand(d).volume;
        for &e in &lp.arcs {
            for s in lp.start..=lp.end(v) {
                point.0[dims.var(d, e, s)] = 1.0;
            }
        }
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::Lightpath;

    fn count(model: &Model, tag: &str) -> usize {
        model.rows_tagged(tag).count()
    }

    #[test]
    fn inst_b_row_counts() {
        let m = build_model(&fixtures::inst_b(), ModelOptions::default());
        assert_eq!(m.var_count(), 6);
        assert_eq!(count(&m, tags::CLASH), 3);
        assert_eq!(count(&m, tags::CONTIGUITY), 6);
        assert_eq!(count(&m, tags::SOURCE_VOLUME), 2);
        assert_eq!(count(&m, tags::FLOW_CONSERVATION), 0);
    }

    #[test]
    fn inst_a_row_counts_and_objective() {
        let inst = fixtures::inst_a();
        let m = build_model(&inst, ModelOptions::default());
        assert_eq!(m.var_count(), 9);
        assert_eq!(count(&m, tags::FLOW_CONSERVATION), 3);
        let sol = CanonicalSolution::new(vec![Lightpath::new(vec![2], 1)]);
        let p = embed_canonical(&inst, &sol).unwrap();
        assert_eq!(p.0.iter().filter(|&&x| x == 1.0).count(), 2);
        assert_eq!(m.objective_value(&p), 1.0);
    }

    #[test]
    fn inst_b_embedding() {
        let inst = fixtures::inst_b();
        let m = build_model(&inst, ModelOptions::with_static_rows());
        let sol = CanonicalSolution::new(vec![Lightpath::new(vec![0], 1), Lightpath::new(vec![0], 3)]);
        let p = embed_canonical(&inst, &sol).unwrap();
        assert_eq!(p.0.iter().filter(|&&x| x == 1.0).count(), 3);
        assert_eq!(m.objective_value(&p), 2.0);
        assert_eq!(m.max_violation(&p).0, 0.0);

        let bad = CanonicalSolution::new(vec![Lightpath::new(vec![0], 1), Lightpath::new(vec![0], 2)]);
        assert!(matches!(embed_canonical(&inst, &bad), Err(ModelError::InfeasibleSolution(_))));
    }

    #[test]
    fn integral_objective_is_the_arc_count() {
        let inst = fixtures::grid(2, 3, vec![crate::Demand::new(0, 5, 3), crate::Demand::new(5, 0, 3)], 6);
        let m = build_model(&inst, ModelOptions::default());
        let g = inst.graph();
        let there = [(0, 1), (1, 2), (2, 5)].map(|(a, b)| g.find_arc(a, b).unwrap());
        let back = [(5, 4), (4, 3), (3, 0)].map(|(a, b)| g.find_arc(a, b).unwrap());
        let sol = CanonicalSolution::new(vec![Lightpath::new(there.to_vec(), 1), Lightpath::new(back.to_vec(), 4)]);
        let p = embed_canonical(&inst, &sol).unwrap();
        assert_eq!(m.integral_objective(&p), sol.total_length() as f64);
    }

    #[test]
    fn contiguity_at_last_slot_drops_fictitious_variable() {
        let dims = Dims { demands: 1, arcs: 1, slots: 3 };
        let row = contiguity_row(&dims, 0, 0, 3, 2);
        // 2·u3 − u2 − u3 ≤ 0
        assert_eq!(row.coeffs, vec![(1, -1.0), (2, 1.0)]);
        let row = contiguity_row(&dims, 0, 0, 1, 2);
        // 2(u1 − u2) − u1 ≤ 0
        assert_eq!(row.coeffs, vec![(0, 1.0), (1, -2.0)]);
    }

    #[test]
    fn evaluate_row_examples() {
        let le = LinearRow::new("t", [(0, 1.0), (1, 1.0)], Sense::Le, 1.0);
        let r = evaluate_row(&le, &FractionalPoint(vec![0.7, 0.7])).unwrap();
        assert!((r.lhs - 1.4).abs() < 1e-12 && (r.violation - 0.4).abs() < 1e-12);

        let eq = LinearRow::new("t", [(0, 1.0), (1, -1.0)], Sense::Eq, 0.0);
        assert_eq!(evaluate_row(&eq, &FractionalPoint(vec![0.3, 0.3])).unwrap().violation, 0.0);

        let ge = LinearRow::new("t", [(0, 3.0)], Sense::Ge, 5.0);
        assert_eq!(evaluate_row(&ge, &FractionalPoint(vec![1.0])).unwrap().violation, 2.0);

        let oob = LinearRow::new("t", [(4, 1.0)], Sense::Le, 1.0);
        assert_eq!(
            evaluate_row(&oob, &FractionalPoint(vec![0.0])),
            Err(ModelError::IndexOutOfRange { index: 4, len: 1 })
        );
    }

    #[test]
    fn dims_roundtrip() {
        let dims = Dims { demands: 3, arcs: 4, slots: 5 };
        for i in 0..dims.var_count() {
            assert_eq!(dims.decode(i).linear(&dims), i);
        }
        assert_eq!(dims.var(1, 2, 3), (4 + 2) * 5 + 2);
    }

    #[test]
    fn dump_format() {
        let m = build_model(&fixtures::inst_b(), ModelOptions::default());
        let dump = m.dump();
        assert!(dump.lines().any(|l| l == "clash: 1·u[0,0,1] + 1·u[1,0,1] <= 1"), "{dump}");
        assert_eq!(dump.lines().count(), m.rows.len());
    }
}
