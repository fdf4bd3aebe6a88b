//! Brute-force ground truth for micro instances: every canonical solution,
//! the exact optimum, cut audits, and LP searches for points that satisfy a
//! row set but violate a target row.

use alloc::vec;
use alloc::vec::Vec;

use crate::cuts::{Cut, CutKind};
use crate::instance::{CanonicalSolution, Instance, Lightpath};
use crate::lp::{solve_lp, LpError, LpProblem, LpStatus};
use crate::model::{embed_canonical, FractionalPoint, LinearRow, Sense};

/// Audited rows may exceed their bound by at most this much.
pub const AUDIT_TOL: f64 = 1e-9;
/// A witness must violate its target by more than this.
pub const WITNESS_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_paths: usize,
    pub max_solutions: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self { max_paths: 200, max_solutions: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("demand {demand} has more than {limit} simple paths")]
    TooManyPaths { demand: usize, limit: usize },
    #[error("more than {limit} feasible solutions")]
    TooManySolutions { limit: usize },
    #[error("instance is infeasible")]
    Infeasible,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// All feasible canonical solutions, in lexicographic order of
/// (path index, start slot) per demand.
pub fn enumerate_canonical(inst: &Instance, limits: EnumLimits) -> Result<Vec<CanonicalSolution>, OracleError> {
    let g = inst.graph();
    let sb = inst.slots();
    let mut options: Vec<Vec<Lightpath>> = Vec::new();
    for (d, dem) in inst.demands().iter().enumerate() {
        let paths = g
            .simple_paths(dem.source, dem.target, limits.max_paths)
            .ok_or(OracleError::TooManyPaths { demand: d, limit: limits.max_paths })?;
        let mut opts = Vec::new();
        for p in paths {
            for start in 1..=sb + 1 - dem.volume {
                opts.push(Lightpath::new(p.clone(), start));
            }
        }
        options.push(opts);
    }

    struct Walk<'a> {
        inst: &'a Instance,
        options: &'a [Vec<Lightpath>],
        used: Vec<bool>,
        chosen: Vec<usize>,
        out: Vec<CanonicalSolution>,
        limit: usize,
    }
    impl Walk<'_> {
        fn cell(&self, arc: usize, slot: u32) -> usize {
            arc * self.inst.slots() as usize + (slot - 1) as usize
        }
        fn mark(&mut self, d: usize, lp: &Lightpath, on: bool) {
            let v = self.inst.demand(d).volume;
            for &a in &lp.arcs {
                for s in lp.start..lp.start + v {
                    let c = self.cell(a, s);
                    self.used[c] = on;
                }
            }
        }
        fn fits(&self, d: usize, lp: &Lightpath) -> bool {
            let v = self.inst.demand(d).volume;
            lp.arcs.iter().all(|&a| (lp.start..lp.start + v).all(|s| !self.used[self.cell(a, s)]))
        }
        fn go(&mut self, d: usize) -> Result<(), OracleError> {
            if d == self.options.len() {
                if self.out.len() >= self.limit {
                    return Err(OracleError::TooManySolutions { limit: self.limit });
                }
                let paths = self.chosen.iter().enumerate().map(|(k, &i)| self.options[k][i].clone()).collect();
                self.out.push(CanonicalSolution::new(paths));
                return Ok(());
            }
            for i in 0..self.options[d].len() {
                let lp = &self.options[d][i];
                if self.fits(d, lp) {
                    let lp = lp.clone();
                    self.mark(d, &lp, true);
                    self.chosen.push(i);
                    self.go(d + 1)?;
                    self.chosen.pop();
                    self.mark(d, &lp, false);
                }
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        inst,
        options: &options,
        used: vec![false; g.arc_count() * sb as usize],
        chosen: Vec::new(),
        out: Vec::new(),
        limit: limits.max_solutions,
    };
    walk.go(0)?;
    Ok(walk.out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptimum {
    /// Total number of arcs over all paths.
    pub objective: usize,
    pub optima: Vec<CanonicalSolution>,
}

pub fn oracle_optimum(inst: &Instance, limits: EnumLimits) -> Result<OracleOptimum, OracleError> {
    let sols = enumerate_canonical(inst, limits)?;
    let best = sols.iter().map(CanonicalSolution::total_length).min().ok_or(OracleError::Infeasible)?;
    let optima = sols.into_iter().filter(|s| s.total_length() == best).collect();
    Ok(OracleOptimum { objective: best, optima })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub valid_on_all: bool,
    pub holds_at_some_optimum: bool,
    /// Indices (into the enumeration) of solutions violating the row.
    pub counterexamples: Vec<usize>,
}

/// Enumerated solutions with their embeddings, reused across audits.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub solutions: Vec<CanonicalSolution>,
    pub points: Vec<FractionalPoint>,
    /// Indices of the optimal solutions.
    pub optimal: Vec<usize>,
    pub objective: Option<usize>,
}

impl Oracle {
    pub fn new(inst: &Instance, limits: EnumLimits) -> Result<Self, OracleError> {
        let solutions = enumerate_canonical(inst, limits)?;
        let points = solutions
            .iter()
            .map(|s| embed_canonical(inst, s).expect("enumerated solutions are feasible"))
            .collect();
        let objective = solutions.iter().map(CanonicalSolution::total_length).min();
        let optimal = solutions
            .iter()
            .enumerate()
            .filter(|(_, s)| Some(s.total_length()) == objective)
            .map(|(i, _)| i)
            .collect();
        Ok(Self { solutions, points, optimal, objective })
    }

    pub fn audit_row(&self, row: &LinearRow) -> AuditReport {
        let counterexamples: Vec<usize> = self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| row.violation(p.values()) > AUDIT_TOL)
            .map(|(i, _)| i)
            .collect();
        let holds_at_some_optimum = self.optimal.iter().any(|i| counterexamples.binary_search(i).is_err());
        AuditReport { valid_on_all: counterexamples.is_empty(), holds_at_some_optimum, counterexamples }
    }

    /// Whether the cut meets the promise of its kind.
    pub fn cut_passes(&self, cut: &Cut) -> bool {
        let report = self.audit_row(&cut.row);
        match cut.kind {
            CutKind::Valid | CutKind::Equation => report.valid_on_all,
            // With no feasible solution there is nothing to preserve.
            CutKind::Optimality => report.holds_at_some_optimum || self.optimal.is_empty(),
        }
    }
}

pub fn audit_cut(inst: &Instance, row: &LinearRow, limits: EnumLimits) -> Result<AuditReport, OracleError> {
    Ok(Oracle::new(inst, limits)?.audit_row(row))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessQuery {
    pub var_count: usize,
    pub base: Vec<LinearRow>,
    pub target: LinearRow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessOutcome {
    /// A point of the base region violating the target.
    Found { point: FractionalPoint, violation: f64 },
    /// The base region (within `[0,1]`) satisfies the target.
    None,
    /// The base region is empty.
    Vacuous,
}

/// Maximizes the target's violation over `{base rows, 0 ≤ u ≤ 1}`.
pub fn find_witness(query: &WitnessQuery) -> Result<WitnessOutcome, OracleError> {
    let n = query.var_count;
    let directions: &[f64] = match query.target.sense {
        // minimize -lhs, or lhs
        Sense::Le => &[-1.0],
        Sense::Ge => &[1.0],
        Sense::Eq => &[-1.0, 1.0],
    };
    let mut best: Option<(FractionalPoint, f64)> = None;
    for &dir in directions {
        let mut objective = vec![0.0; n];
        for &(v, c) in &query.target.coeffs {
            objective[v] = dir * c;
        }
        let res = solve_lp(&LpProblem::unit_box(objective, query.base.clone()), None)?;
        if res.status == LpStatus::Infeasible {
            return Ok(WitnessOutcome::Vacuous);
        }
        let violation = query.target.violation(&res.values);
        if best.as_ref().is_none_or(|(_, b)| violation > *b) {
            best = Some((FractionalPoint(res.values), violation));
        }
    }
    match best {
        Some((point, violation)) if violation > WITNESS_MIN => Ok(WitnessOutcome::Found { point, violation }),
        _ => Ok(WitnessOutcome::None),
    }
}
