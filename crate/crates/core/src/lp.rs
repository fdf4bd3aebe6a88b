//! Bounded-variable primal simplex.
//!
//! Every row `a·x (≤|=|≥) b` gets a slack `s` with `a·x + s = b`; slack bounds
//! encode the sense. The basis inverse is kept dense and updated in product
//! form, with periodic refactorization. Feasibility is restored by minimizing
//! the sum of bound violations of the basic variables (composite phase one),
//! so warm starts from any basis work after bounds change or rows are added.
//!
//! Pricing is Dantzig's rule; after a run of degenerate pivots it switches to
//! Bland's rule until the objective moves again.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::{LinearRow, Sense};
use crate::{COST_TOL, FEAS_TOL};

const PIVOT_TOL: f64 = 1e-9;
const STEP_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex stalled after {0} pivots")]
    Stalled(usize),
    #[error("internal error: unbounded ray in a box-bounded problem")]
    Unbounded,
    #[error("malformed problem: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LinearRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    /// All variables in `[0, 1]`.
    pub fn unit_box(objective: Vec<f64>, rows: Vec<LinearRow>) -> Self {
        let n = objective.len();
        Self { objective, rows, lower: vec![0.0; n], upper: vec![1.0; n] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Status of a structural or slack variable; slacks follow structurals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub status: Vec<VarStatus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    /// Structural values.
    pub values: Vec<f64>,
    /// Sum of bound violations left when phase one gave up; 0 when optimal.
    pub infeasibility: f64,
    pub pivots: usize,
    pub basis: Basis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSettings {
    pub max_pivots: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
}

impl Default for LpSettings {
    fn default() -> Self {
        Self { max_pivots: 50_000, bland_after: 200, refactor_every: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    Lower,
    Upper,
}

/// A simplex solve context that can be re-solved after bound changes and
/// row additions/removals, starting from its last basis.
#[derive(Debug, Clone)]
pub struct Simplex {
    settings: LpSettings,
    n: usize,
    cost: Vec<f64>,
    rows: Vec<LinearRow>,
    cols: Vec<Vec<(usize, f64)>>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    pivots_since_refactor: usize,
    total_pivots: usize,
}

fn slack_bounds(sense: Sense) -> (f64, f64) {
    match sense {
        Sense::Le => (0.0, f64::INFINITY),
        Sense::Ge => (f64::NEG_INFINITY, 0.0),
        Sense::Eq => (0.0, 0.0),
    }
}

pub fn solve_lp(prob: &LpProblem, warm: Option<&Basis>) -> Result<LpResult, LpError> {
    let mut simplex = Simplex::new(prob, LpSettings::default())?;
    if let Some(basis) = warm {
        simplex.load_basis(basis);
    }
    simplex.solve()
}

impl Simplex {
    pub fn new(prob: &LpProblem, settings: LpSettings) -> Result<Self, LpError> {
        let n = prob.objective.len();
        if prob.lower.len() != n || prob.upper.len() != n {
            return Err(LpError::Malformed("bound vectors do not match the objective"));
        }
        for (&l, &u) in prob.lower.iter().zip(&prob.upper) {
            if !(l.is_finite() && u.is_finite() && l <= u) {
                return Err(LpError::Malformed("variable bounds must be finite with lb <= ub"));
            }
        }
        if prob.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("objective coefficients must be finite"));
        }
        let mut lp = Self {
            settings,
            n,
            cost: prob.objective.clone(),
            rows: Vec::new(),
            cols: vec![Vec::new(); n],
            lb: prob.lower.clone(),
            ub: prob.upper.clone(),
            x: prob.lower.clone(),
            state: vec![State::Lower; n],
            basis: Vec::new(),
            binv: Vec::new(),
            pivots_since_refactor: 0,
            total_pivots: 0,
        };
        lp.append_rows(prob.rows.clone())?;
        Ok(lp)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn total_pivots(&self) -> usize {
        self.total_pivots
    }

    /// Current structural values (meaningful after a solve).
    pub fn values(&self) -> &[f64] {
        &self.x[..self.n]
    }

    /// Slack of row `i` at the current point, as `rhs − lhs` (sign by sense).
    pub fn row_slack(&self, i: usize) -> f64 {
        let row = &self.rows[i];
        let lhs = row.lhs(&self.x[..self.n]);
        match row.sense {
            Sense::Le => row.rhs - lhs,
            Sense::Ge => lhs - row.rhs,
            Sense::Eq => -(lhs - row.rhs).abs(),
        }
    }

    /// Whether row `i`'s slack is basic (the row can be removed).
    pub fn slack_is_basic(&self, i: usize) -> bool {
        matches!(self.state[self.n + i], State::Basic(_))
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        assert!(var < self.n && lower <= upper);
        self.lb[var] = lower;
        self.ub[var] = upper;
        match self.state[var] {
            State::Lower => self.x[var] = lower,
            State::Upper => self.x[var] = upper,
            State::Basic(_) => {}
        }
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lb[var], self.ub[var])
    }

    pub fn basis(&self) -> Basis {
        let status = self
            .state
            .iter()
            .map(|s| match s {
                State::Basic(_) => VarStatus::Basic,
                State::Lower => VarStatus::AtLower,
                State::Upper => VarStatus::AtUpper,
            })
            .collect();
        Basis { status }
    }

    /// Installs a basis; falls back to the slack basis if it is malformed or
    /// singular.
    pub fn load_basis(&mut self, basis: &Basis) {
        let m = self.rows.len();
        let basics = basis.status.iter().filter(|&&s| s == VarStatus::Basic).count();
        if basis.status.len() != self.n + m || basics != m {
            self.slack_basis();
            return;
        }
        self.basis.clear();
        for (j, s) in basis.status.iter().enumerate() {
            self.state[j] = match s {
                VarStatus::Basic => {
                    self.basis.push(j);
                    State::Basic(self.basis.len() - 1)
                }
                VarStatus::AtLower if self.lb[j].is_finite() => State::Lower,
                VarStatus::AtUpper if self.ub[j].is_finite() => State::Upper,
                _ if self.lb[j].is_finite() => State::Lower,
                _ => State::Upper,
            };
        }
        if !self.refactor() {
            self.slack_basis();
        }
    }

    fn slack_basis(&mut self) {
        let m = self.rows.len();
        for j in 0..self.n {
            self.state[j] = State::Lower;
        }
        self.basis = (0..m).map(|i| self.n + i).collect();
        for i in 0..m {
            self.state[self.n + i] = State::Basic(i);
        }
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = 1.0;
        }
        self.pivots_since_refactor = 0;
    }

    fn append_rows(&mut self, rows: Vec<LinearRow>) -> Result<(), LpError> {
        let m = self.rows.len();
        let k = rows.len();
        for row in &rows {
            if !row.rhs.is_finite() || row.coeffs.iter().any(|&(_, c)| !c.is_finite()) {
                return Err(LpError::Malformed("row data must be finite"));
            }
            if row.coeffs.iter().any(|&(v, _)| v >= self.n) {
                return Err(LpError::Malformed("row references an unknown variable"));
            }
        }
        // B'^{-1} = [[B^{-1}, 0], [−R_B B^{-1}, I]] for new slacks entering basic.
        let mm = m + k;
        let mut binv = vec![0.0; mm * mm];
        for p in 0..m {
            binv[p * mm..p * mm + m].copy_from_slice(&self.binv[p * m..p * m + m]);
        }
        for (i, row) in rows.iter().enumerate() {
            let target = (m + i) * mm;
            for &(j, a) in &row.coeffs {
                if let State::Basic(p) = self.state[j] {
                    for c in 0..m {
                        binv[target + c] -= a * self.binv[p * m + c];
                    }
                }
            }
            binv[target + m + i] = 1.0;
        }
        self.binv = binv;
        for (i, row) in rows.into_iter().enumerate() {
            let r = m + i;
            for &(j, a) in &row.coeffs {
                self.cols[j].push((r, a));
            }
            let (l, u) = slack_bounds(row.sense);
            self.lb.push(l);
            self.ub.push(u);
            self.x.push(0.0);
            self.state.push(State::Basic(r));
            self.basis.push(self.n + r);
            self.rows.push(row);
        }
        Ok(())
    }

    /// Appends rows without solving; their slacks enter the basis.
    pub fn add_rows(&mut self, rows: Vec<LinearRow>) -> Result<(), LpError> {
        self.append_rows(rows)
    }

    /// Appends rows and re-solves from the current basis.
    pub fn add_rows_resolve(&mut self, rows: Vec<LinearRow>) -> Result<LpResult, LpError> {
        self.append_rows(rows)?;
        self.solve()
    }

    /// Removes rows whose slack is basic. Returns `false` (and changes
    /// nothing) if some listed row has a nonbasic slack.
    pub fn remove_rows(&mut self, indices: &[usize]) -> bool {
        let m = self.rows.len();
        let mut drop = vec![false; m];
        for &i in indices {
            if !matches!(self.state[self.n + i], State::Basic(_)) {
                return false;
            }
            drop[i] = true;
        }
        let mut new_index = vec![usize::MAX; m];
        let mut rows = Vec::with_capacity(m);
        for (i, row) in core::mem::take(&mut self.rows).into_iter().enumerate() {
            if !drop[i] {
                new_index[i] = rows.len();
                rows.push(row);
            }
        }
        let n = self.n;
        let mut state: Vec<State> = self.state[..n].to_vec();
        let mut lb = self.lb[..n].to_vec();
        let mut ub = self.ub[..n].to_vec();
        let mut x = self.x[..n].to_vec();
        for i in 0..m {
            if !drop[i] {
                state.push(self.state[n + i]);
                lb.push(self.lb[n + i]);
                ub.push(self.ub[n + i]);
                x.push(self.x[n + i]);
            }
        }
        self.basis.clear();
        for (j, s) in state.iter_mut().enumerate() {
            if let State::Basic(_) = s {
                *s = State::Basic(self.basis.len());
                self.basis.push(j);
            }
        }
        self.rows = rows;
        self.state = state;
        self.lb = lb;
        self.ub = ub;
        self.x = x;
        self.cols = vec![Vec::new(); n];
        for (r, row) in self.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                self.cols[j].push((r, a));
            }
        }
        if !self.refactor() {
            self.slack_basis();
        }
        true
    }

    /// Recomputes the dense basis inverse by Gauss-Jordan elimination.
    /// Returns `false` if the basis is singular.
    fn refactor(&mut self) -> bool {
        let m = self.rows.len();
        let mut a = vec![0.0; m * m];
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                for &(r, v) in &self.cols[j] {
                    a[r * m + p] = v;
                }
            } else {
                a[(j - self.n) * m + p] = 1.0;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let mut best = c;
            let mut best_val = a[c * m + c].abs();
            for r in c + 1..m {
                let v = a[r * m + c].abs();
                if v > best_val {
                    best = r;
                    best_val = v;
                }
            }
            if best_val < SINGULAR_TOL {
                return false;
            }
            if best != c {
                for k in 0..m {
                    a.swap(best * m + k, c * m + k);
                    inv.swap(best * m + k, c * m + k);
                }
            }
            let piv = a[c * m + c];
            for k in 0..m {
                a[c * m + k] /= piv;
                inv[c * m + k] /= piv;
            }
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = a[r * m + c];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    a[r * m + k] -= f * a[c * m + k];
                    inv[r * m + k] -= f * inv[c * m + k];
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        true
    }

    fn recompute_basics(&mut self) {
        let m = self.rows.len();
        let n = self.n;
        for j in 0..n + m {
            match self.state[j] {
                State::Lower => self.x[j] = self.lb[j],
                State::Upper => self.x[j] = self.ub[j],
                State::Basic(_) => {}
            }
        }
        let mut r = vec![0.0; m];
        for (i, row) in self.rows.iter().enumerate() {
            let mut v = row.rhs;
            for &(j, a) in &row.coeffs {
                if !matches!(self.state[j], State::Basic(_)) {
                    v -= a * self.x[j];
                }
            }
            if !matches!(self.state[n + i], State::Basic(_)) {
                v -= self.x[n + i];
            }
            r[i] = v;
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let val: f64 = row.iter().zip(&r).map(|(b, v)| b * v).sum();
            self.x[self.basis[p]] = val;
        }
    }

    fn column_dot(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.n {
            self.cols[j].iter().map(|&(r, a)| a * y[r]).sum()
        } else {
            y[j - self.n]
        }
    }

    fn ftran(&self, j: usize, out: &mut [f64]) {
        let m = self.rows.len();
        out.iter_mut().for_each(|v| *v = 0.0);
        if j < self.n {
            for &(r, a) in &self.cols[j] {
                for (p, o) in out.iter_mut().enumerate() {
                    *o += self.binv[p * m + r] * a;
                }
            }
        } else {
            let r = j - self.n;
            for (p, o) in out.iter_mut().enumerate() {
                *o = self.binv[p * m + r];
            }
        }
    }

    fn infeasibility_sum(&self) -> f64 {
        self.basis
            .iter()
            .map(|&j| {
                let v = self.x[j];
                if v < self.lb[j] - FEAS_TOL {
                    self.lb[j] - v
                } else if v > self.ub[j] + FEAS_TOL {
                    v - self.ub[j]
                } else {
                    0.0
                }
            })
            .sum()
    }

    fn objective_value(&self) -> f64 {
        self.cost.iter().zip(&self.x[..self.n]).map(|(c, x)| c * x).sum()
    }

    fn result(&self, status: LpStatus, infeasibility: f64) -> LpResult {
        LpResult {
            status,
            objective: self.objective_value(),
            values: self.x[..self.n].to_vec(),
            infeasibility,
            pivots: self.total_pivots,
            basis: self.basis(),
        }
    }

    /// Runs phase one/two from the current basis.
    pub fn solve(&mut self) -> Result<LpResult, LpError> {
        let m = self.rows.len();
        let total = self.n + m;
        self.recompute_basics();
        let mut y = vec![0.0; m];
        let mut cb = vec![0.0; m];
        let mut alpha = vec![0.0; m];
        let mut limits: Vec<(usize, f64, bool)> = Vec::new();
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut pivots = 0usize;
        let mut verified_once = false;

        loop {
            if pivots >= self.settings.max_pivots {
                return Err(LpError::Stalled(pivots));
            }
            if self.pivots_since_refactor >= self.settings.refactor_every {
                if !self.refactor() {
                    self.slack_basis();
                }
                self.recompute_basics();
            }

            let mut phase_one = false;
            for p in 0..m {
                let j = self.basis[p];
                let v = self.x[j];
                cb[p] = if v < self.lb[j] - FEAS_TOL {
                    phase_one = true;
                    -1.0
                } else if v > self.ub[j] + FEAS_TOL {
                    phase_one = true;
                    1.0
                } else {
                    0.0
                };
            }
            if !phase_one {
                for p in 0..m {
                    let j = self.basis[p];
                    cb[p] = if j < self.n { self.cost[j] } else { 0.0 };
                }
            }
            y.iter_mut().for_each(|v| *v = 0.0);
            for p in 0..m {
                let c = cb[p];
                if c != 0.0 {
                    let row = &self.binv[p * m..(p + 1) * m];
                    for (yk, b) in y.iter_mut().zip(row) {
                        *yk += c * b;
                    }
                }
            }

            // Pricing.
            let mut entering: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..total {
                let st = self.state[j];
                if matches!(st, State::Basic(_)) || self.lb[j] == self.ub[j] {
                    continue;
                }
                let c = if !phase_one && j < self.n { self.cost[j] } else { 0.0 };
                let d = c - self.column_dot(j, &y);
                let dir = match st {
                    State::Lower if d < -COST_TOL => 1.0,
                    State::Upper if d > COST_TOL => -1.0,
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir));
                    break;
                }
                if d.abs() > best {
                    best = d.abs();
                    entering = Some((j, dir));
                }
            }

            let Some((q, dir)) = entering else {
                // Guard against drift before declaring the outcome.
                if !verified_once {
                    verified_once = true;
                    if self.refactor() {
                        self.recompute_basics();
                        continue;
                    }
                }
                if phase_one {
                    let inf = self.infeasibility_sum();
                    return Ok(self.result(LpStatus::Infeasible, inf));
                }
                return Ok(self.result(LpStatus::Optimal, 0.0));
            };

            self.ftran(q, &mut alpha);

            // Ratio test: smallest step at which a basic variable hits the
            // bound it is moving towards.
            limits.clear();
            let mut min_limit = f64::INFINITY;
            for p in 0..m {
                let a = alpha[p];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -dir * a;
                let j = self.basis[p];
                let v = self.x[j];
                let (l, u) = (self.lb[j], self.ub[j]);
                let (limit, to_upper) = if v < l - FEAS_TOL {
                    if rate <= 0.0 {
                        continue;
                    }
                    ((l - v) / rate, false)
                } else if v > u + FEAS_TOL {
                    if rate >= 0.0 {
                        continue;
                    }
                    ((v - u) / -rate, true)
                } else if rate > 0.0 {
                    if !u.is_finite() {
                        continue;
                    }
                    (((u - v) / rate).max(0.0), true)
                } else {
                    if !l.is_finite() {
                        continue;
                    }
                    (((v - l) / -rate).max(0.0), false)
                };
                min_limit = min_limit.min(limit);
                limits.push((p, limit, to_upper));
            }
            let flip = self.ub[q] - self.lb[q];
            let mut leave: Option<(usize, bool)> = None;
            let mut step = flip;
            if min_limit < flip {
                step = min_limit;
                let mut chosen: Option<(usize, bool)> = None;
                for &(p, limit, to_upper) in &limits {
                    if limit > min_limit + STEP_TOL {
                        continue;
                    }
                    let take = match chosen {
                        None => true,
                        Some((c, _)) if bland => self.basis[p] < self.basis[c],
                        Some((c, _)) => alpha[p].abs() > alpha[c].abs(),
                    };
                    if take {
                        chosen = Some((p, to_upper));
                    }
                }
                leave = chosen;
            }

            if !step.is_finite() {
                return Err(LpError::Unbounded);
            }
            pivots += 1;
            self.total_pivots += 1;
            if step <= STEP_TOL {
                degenerate_run += 1;
                if degenerate_run >= self.settings.bland_after {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }

            self.x[q] += dir * step;
            for p in 0..m {
                let a = alpha[p];
                if a != 0.0 {
                    let j = self.basis[p];
                    self.x[j] -= dir * a * step;
                }
            }

            match leave {
                None => {
                    // Bound flip of the entering variable.
                    if dir > 0.0 {
                        self.state[q] = State::Upper;
                        self.x[q] = self.ub[q];
                    } else {
                        self.state[q] = State::Lower;
                        self.x[q] = self.lb[q];
                    }
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    if to_upper {
                        self.state[out] = State::Upper;
                        self.x[out] = self.ub[out];
                    } else {
                        self.state[out] = State::Lower;
                        self.x[out] = self.lb[out];
                    }
                    self.basis[r] = q;
                    self.state[q] = State::Basic(r);
                    let piv = alpha[r];
                    for v in &mut self.binv[r * m..(r + 1) * m] {
                        *v /= piv;
                    }
                    for p in 0..m {
                        if p == r {
                            continue;
                        }
                        let f = alpha[p];
                        if f == 0.0 {
                            continue;
                        }
                        let (head, tail) = if p < r {
                            let (h, t) = self.binv.split_at_mut(r * m);
                            (&mut h[p * m..(p + 1) * m], &t[..m])
                        } else {
                            let (h, t) = self.binv.split_at_mut(p * m);
                            (&mut t[..m], &h[r * m..(r + 1) * m])
                        };
                        for (dst, src) in head.iter_mut().zip(tail) {
                            *dst -= f * src;
                        }
                    }
                    self.pivots_since_refactor += 1;
                }
            }
            verified_once = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LinearRow;

    fn row(terms: &[(usize, f64)], sense: Sense, rhs: f64) -> LinearRow {
        LinearRow::new("t", terms.iter().copied(), sense, rhs)
    }

    #[test]
    fn single_variable_lower_row() {
        let p = LpProblem {
            objective: vec![1.0],
            rows: vec![row(&[(0, 1.0)], Sense::Ge, 1.0)],
            lower: vec![0.0],
            upper: vec![2.0],
        };
        let r = solve_lp(&p, None).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let p = LpProblem::unit_box(
            vec![0.0],
            vec![row(&[(0, 1.0)], Sense::Le, 0.3), row(&[(0, 1.0)], Sense::Ge, 0.6)],
        );
        let r = solve_lp(&p, None).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        assert!(r.infeasibility > 0.0);
    }

    #[test]
    fn small_mixed_sense_problem() {
        // min -x - 2y s.t. x + y <= 1.5, x - y = 0  => x = y = 0.75
        let p = LpProblem::unit_box(
            vec![-1.0, -2.0],
            vec![row(&[(0, 1.0), (1, 1.0)], Sense::Le, 1.5), row(&[(0, 1.0), (1, -1.0)], Sense::Eq, 0.0)],
        );
        let r = solve_lp(&p, None).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective + 2.25).abs() < 1e-9);
        assert!((r.values[0] - 0.75).abs() < 1e-9);
    }

    #[test]
    fn added_rows_tighten_the_bound() {
        let p = LpProblem::unit_box(vec![-1.0, -1.0], vec![row(&[(0, 1.0), (1, 1.0)], Sense::Le, 1.8)]);
        let mut s = Simplex::new(&p, LpSettings::default()).unwrap();
        let first = s.solve().unwrap();
        assert!((first.objective + 1.8).abs() < 1e-9);
        // Satisfied row: unchanged.
        let same = s.add_rows_resolve(vec![row(&[(0, 1.0)], Sense::Le, 1.0)]).unwrap();
        assert!((same.objective - first.objective).abs() < 1e-9);
        // Duplicate: unchanged.
        let dup = s.add_rows_resolve(vec![row(&[(0, 1.0), (1, 1.0)], Sense::Le, 1.8)]).unwrap();
        assert!((dup.objective - first.objective).abs() < 1e-9);
        // Cutting row: strictly worse.
        let cut = s.add_rows_resolve(vec![row(&[(0, 1.0), (1, 1.0)], Sense::Le, 1.0)]).unwrap();
        assert!(cut.objective > first.objective + 1e-6);
        assert!((cut.objective + 1.0).abs() < 1e-9);
        // Infeasible addition.
        let inf = s.add_rows_resolve(vec![row(&[(0, 1.0), (1, 1.0)], Sense::Ge, 1.5)]).unwrap();
        assert_eq!(inf.status, LpStatus::Infeasible);
    }

    #[test]
    fn bound_changes_and_row_removal() {
        let p = LpProblem::unit_box(
            vec![1.0, 1.0],
            vec![row(&[(0, 1.0), (1, 1.0)], Sense::Ge, 1.0), row(&[(0, 1.0)], Sense::Le, 0.9)],
        );
        let mut s = Simplex::new(&p, LpSettings::default()).unwrap();
        let r = s.solve().unwrap();
        assert!((r.objective - 1.0).abs() < 1e-9);
        s.set_bounds(1, 0.0, 0.0);
        let r = s.solve().unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        s.set_bounds(1, 0.0, 1.0);
        s.set_bounds(0, 0.0, 0.0);
        let r = s.solve().unwrap();
        assert!((r.values[1] - 1.0).abs() < 1e-9);
        // Row 1 (x0 <= 0.9) is slack at x0 = 0 and can be removed.
        assert!(s.remove_rows(&[1]));
        assert_eq!(s.row_count(), 1);
        let r = s.solve().unwrap();
        assert!((r.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn warm_start_reuses_basis() {
        let p = LpProblem::unit_box(
            vec![-1.0, -1.0, -1.0],
            vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Le, 1.0),
                row(&[(1, 1.0), (2, 1.0)], Sense::Le, 1.0),
                row(&[(0, 1.0), (2, 1.0)], Sense::Le, 1.0),
            ],
        );
        let cold = solve_lp(&p, None).unwrap();
        assert!((cold.objective + 1.5).abs() < 1e-9);
        let warm = solve_lp(&p, Some(&cold.basis)).unwrap();
        assert!((warm.objective - cold.objective).abs() < 1e-12);
        assert!(warm.pivots <= 1);
    }

    #[test]
    fn rejects_malformed_input() {
        let p = LpProblem {
            objective: vec![1.0],
            rows: vec![],
            lower: vec![1.0],
            upper: vec![0.0],
        };
        assert!(matches!(solve_lp(&p, None), Err(LpError::Malformed(_))));
        let p = LpProblem::unit_box(vec![1.0], vec![row(&[(3, 1.0)], Sense::Le, 1.0)]);
        assert!(matches!(solve_lp(&p, None), Err(LpError::Malformed(_))));
    }

    #[test]
    fn iteration_limit_reports_stall() {
        let p = LpProblem::unit_box(
            vec![-1.0, -1.0],
            vec![row(&[(0, 1.0), (1, 2.0)], Sense::Le, 1.5), row(&[(0, 2.0), (1, 1.0)], Sense::Le, 1.5)],
        );
        let settings = LpSettings { max_pivots: 1, ..LpSettings::default() };
        let mut s = Simplex::new(&p, settings).unwrap();
        assert_eq!(s.solve(), Err(LpError::Stalled(1)));
    }
}
