//! Replayable experiments: ε calibration and strategy comparison.
//!
//! A suite file lists one instance per line, optionally followed by the
//! seeds of its runs:
//!
//! ```text
//! # instance            seeds
//! nets/ring6.rsa        1 2 3
//! INST-B
//! ```
//!
//! Relative paths are resolved against the suite file's directory.

use std::fmt::Write as _;
use std::path::Path;

use rsa_core::bench::{compute_tau, summarize, Outcome, Summary, TauInput};
use rsa_core::bnc::{BncConfig, BncError, SolveResult, SolveStatus};
use rsa_core::cuts::Family;
use rsa_core::strategy::StrategyKind;
use rsa_core::Instance;

use crate::io::{load_instance, FormatError};
use crate::run_solve;

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub instance: Instance,
    /// Empty means the caller's default seeds.
    pub seeds: Vec<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("{file} line {line}: {msg}")]
    Line { file: String, line: usize, msg: String },
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("suite is empty")]
    Empty,
}

pub fn load_suite(path: &Path) -> Result<Vec<SuiteEntry>, SuiteError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let file = path.display().to_string();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut words = raw.split('#').next().unwrap_or("").split_whitespace();
        let Some(spec) = words.next() else { continue };
        let line_err = |msg: String| SuiteError::Line { file: file.clone(), line: i + 1, msg };
        let seeds = words
            .map(|w| w.parse::<u64>().map_err(|_| line_err(format!("bad seed `{w}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let resolved = if rsa_core::fixtures::by_name(spec).is_some() || Path::new(spec).is_absolute() {
            spec.to_string()
        } else {
            dir.join(spec).display().to_string()
        };
        let instance = load_instance(&resolved).map_err(|e| line_err(e.to_string()))?;
        out.push(SuiteEntry { instance, seeds });
    }
    if out.is_empty() {
        return Err(SuiteError::Empty);
    }
    Ok(out)
}

pub fn outcome_of(result: &SolveResult) -> Outcome {
    match result.status {
        SolveStatus::Optimal | SolveStatus::Infeasible => Outcome::Solved,
        SolveStatus::Feasible => Outcome::FeasibleTimeout,
        SolveStatus::NoSolution => Outcome::NoSolutionTimeout,
    }
}

pub fn tau_of(result: &SolveResult) -> f64 {
    let outcome = outcome_of(result);
    let gap = if outcome == Outcome::FeasibleTimeout { result.gap } else { 0.0 };
    compute_tau(TauInput::new(result.wall_minutes, gap, outcome))
}

/// One solve of one instance under one configuration.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub instance: String,
    pub config: String,
    pub seed: u64,
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub nodes: usize,
    pub cuts: usize,
    pub family_cuts: usize,
    pub minutes: f64,
    pub gap: f64,
    pub tau: f64,
}

/// Short readable description of the knobs that vary between experiments.
pub fn config_digest(c: &BncConfig) -> String {
    let fams = if c.families.is_empty() {
        "none".to_string()
    } else if c.families.len() == Family::ALL.len() {
        "all".to_string()
    } else {
        c.families.iter().map(|f| f.tag()).collect::<Vec<_>>().join("+")
    };
    let eps: Vec<String> = c.families.iter().map(|f| format!("{}", c.eps.get(*f))).collect();
    let eps = if eps.windows(2).all(|w| w[0] == w[1]) { eps.first().cloned().unwrap_or_default() } else { eps.join("/") };
    format!(
        "{}/h{}/fam={}/eps={}/opt={}",
        c.strategy.kind,
        c.strategy.h,
        fams,
        eps,
        c.use_optimality_cuts
    )
}

/// Measures every run of every entry; records come back in suite order
/// then seed order.
pub fn run_suite(
    suite: &[SuiteEntry],
    config: &BncConfig,
    default_seeds: &[u64],
    counted: Option<Family>,
) -> Result<Vec<Vec<RunRecord>>, BncError> {
    let digest = config_digest(config);
    suite
        .iter()
        .map(|entry| {
            let seeds = if entry.seeds.is_empty() { default_seeds } else { &entry.seeds[..] };
            seeds
                .iter()
                .map(|&seed| {
                    let mut c = config.clone();
                    c.seed = seed;
                    c.strategy.seed = seed;
                    let r = run_solve(&entry.instance, &c, None)?;
                    Ok(RunRecord {
                        instance: entry.instance.name.clone(),
                        config: digest.clone(),
                        seed,
                        status: r.status,
                        objective: r.objective,
                        nodes: r.nodes,
                        cuts: r.total_cuts(),
                        family_cuts: counted.map_or(0, |f| r.cuts_by_family.get(&f).copied().unwrap_or(0)),
                        minutes: r.wall_minutes,
                        gap: r.gap,
                        tau: tau_of(&r),
                    })
                })
                .collect()
        })
        .collect()
}

fn best_run(runs: &[RunRecord]) -> &RunRecord {
    runs.iter().min_by(|a, b| a.tau.total_cmp(&b.tau)).expect("at least one run per instance")
}

#[derive(Debug, Clone)]
pub struct CalibrationRow {
    pub family: Family,
    pub eps: f64,
    pub sum_tau: f64,
    /// Cuts of the family added over the best run of each instance.
    pub cuts: usize,
    /// Spread of the per-instance best τ.
    pub spread: Option<Summary>,
}

pub fn default_eps_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0).collect()
}

/// Runs the suite with only `family` enabled for each ε of the grid.
pub fn calibrate_eps(
    suite: &[SuiteEntry],
    base: &BncConfig,
    family: Family,
    grid: &[f64],
    seeds: &[u64],
) -> Result<Vec<CalibrationRow>, BncError> {
    let mut rows = Vec::with_capacity(grid.len());
    for &eps in grid {
        let mut c = base.clone();
        c.families = vec![family];
        c.eps.set(family, eps);
        let records = run_suite(suite, &c, seeds, Some(family))?;
        let best: Vec<&RunRecord> = records.iter().map(|r| best_run(r)).collect();
        let taus: Vec<f64> = best.iter().map(|r| r.tau).collect();
        rows.push(CalibrationRow {
            family,
            eps,
            sum_tau: taus.iter().sum(),
            cuts: best.iter().map(|r| r.family_cuts).sum(),
            spread: summarize(&taus),
        });
    }
    Ok(rows)
}

pub fn calibration_csv(rows: &[CalibrationRow]) -> String {
    let mut out = String::from("family,eps,sum_tau,cuts,best,worst,mean,median\n");
    for r in rows {
        let s = r.spread.unwrap_or(Summary { best: 0.0, worst: 0.0, mean: 0.0, median: 0.0 });
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family.tag(),
            r.eps,
            r.sum_tau,
            r.cuts,
            s.best,
            s.worst,
            s.mean,
            s.median
        )
        .unwrap();
    }
    out
}

/// `None` is plain branch and bound.
pub type Contender = Option<StrategyKind>;

pub fn contender_name(c: Contender) -> &'static str {
    c.map_or("bb", StrategyKind::name)
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub strategy: &'static str,
    pub h: usize,
    pub sum_tau: f64,
    pub timeouts: usize,
    /// Per-instance best τ, aligned with the kept instances.
    pub taus: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// Instances every configuration failed to finish.
    pub excluded: Vec<String>,
}

/// Best-of-runs τ per instance for each (strategy, h), skipping instances
/// on which every configuration timed out. Plain B&B ignores `h` and is
/// run once.
pub fn compare_strategies(
    suite: &[SuiteEntry],
    base: &BncConfig,
    contenders: &[Contender],
    h_grid: &[usize],
    seeds: &[u64],
) -> Result<Comparison, BncError> {
    struct Raw {
        strategy: &'static str,
        h: usize,
        best: Vec<(f64, bool)>,
    }
    let mut raw = Vec::new();
    for &who in contenders {
        let hs: &[usize] = if who.is_none() { &h_grid[..h_grid.len().min(1)] } else { h_grid };
        for &h in hs {
            let mut c = match who {
                None => base.plain(),
                Some(kind) => {
                    let mut c = base.clone();
                    c.strategy.kind = kind;
                    c
                }
            };
            c.strategy.h = h;
            let records = run_suite(suite, &c, seeds, None)?;
            let best = records
                .iter()
                .map(|runs| {
                    let b = best_run(runs);
                    (b.tau, !matches!(b.status, SolveStatus::Optimal | SolveStatus::Infeasible))
                })
                .collect();
            raw.push(Raw { strategy: contender_name(who), h, best });
        }
    }
    let keep: Vec<bool> = (0..suite.len()).map(|i| raw.iter().any(|r| !r.best[i].1)).collect();
    let excluded = suite.iter().zip(&keep).filter(|(_, k)| !**k).map(|(e, _)| e.instance.name.clone()).collect();
    let rows = raw
        .into_iter()
        .map(|r| {
            let kept: Vec<(f64, bool)> = r.best.iter().zip(&keep).filter(|(_, k)| **k).map(|(b, _)| *b).collect();
            let taus: Vec<f64> = kept.iter().map(|b| b.0).collect();
            ComparisonRow {
                strategy: r.strategy,
                h: r.h,
                sum_tau: taus.iter().sum(),
                timeouts: kept.iter().filter(|b| b.1).count(),
                taus,
            }
        })
        .collect();
    Ok(Comparison { rows, excluded })
}

pub fn comparison_csv(cmp: &Comparison) -> String {
    let mut out = String::from("strategy,h,sum_tau,timeouts\n");
    for r in &cmp.rows {
        writeln!(out, "{},{},{},{}", r.strategy, r.h, r.sum_tau, r.timeouts).unwrap();
    }
    out
}

/// Minutes to two decimals, for human-facing tables only.
pub fn minutes2(m: f64) -> String {
    format!("{m:.2}")
}
