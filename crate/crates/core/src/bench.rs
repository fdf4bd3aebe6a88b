//! The τ score: run time with penalties for unfinished runs.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Solved,
    /// Time limit hit with an incumbent.
    FeasibleTimeout,
    /// Time limit hit without any solution.
    NoSolutionTimeout,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauInput {
    /// Minutes.
    pub t: f64,
    /// Optimality gap in `[0, 1]`.
    pub gap: f64,
    pub outcome: Outcome,
}

impl TauInput {
    pub fn new(t: f64, gap: f64, outcome: Outcome) -> Self {
        Self { t, gap, outcome }
    }
}

/// `t` when solved, `t + p + g·p` on a timeout with an incumbent and
/// `t + 4p` without one, where `p = t/4`.
pub fn compute_tau(input: TauInput) -> f64 {
    let t = input.t;
    let p = t / 4.0;
    match input.outcome {
        Outcome::Solved => t,
        Outcome::FeasibleTimeout => t + p + input.gap.clamp(0.0, 1.0) * p,
        Outcome::NoSolutionTimeout => t + 4.0 * p,
    }
}

/// Smallest τ among repeated runs of one instance.
pub fn best_of(taus: &[f64]) -> Option<f64> {
    taus.iter().copied().reduce(f64::min)
}

/// `Σ` over instances of the best τ among that instance's runs.
pub fn sum_best(runs_per_instance: &[Vec<f64>]) -> f64 {
    runs_per_instance.iter().filter_map(|r| best_of(r)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
    Some(Summary { best: v[0], worst: v[n - 1], mean: v.iter().sum::<f64>() / n as f64, median })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_cases() {
        assert_eq!(compute_tau(TauInput::new(2.0, 0.0, Outcome::Solved)), 2.0);
        assert_eq!(compute_tau(TauInput::new(4.0, 0.5, Outcome::FeasibleTimeout)), 5.5);
        assert_eq!(compute_tau(TauInput::new(10.0, 0.0, Outcome::NoSolutionTimeout)), 20.0);
    }

    #[test]
    fn summaries() {
        let s = summarize(&[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((s.best, s.worst, s.mean, s.median), (1.0, 10.0, 4.0, 2.5));
        assert_eq!(summarize(&[]), None);
        assert_eq!(sum_best(&[alloc::vec![3.0, 2.0], alloc::vec![1.0]]), 3.0);
    }

    proptest! {
        #[test]
        fn tau_monotone_in_time(t in 0.0f64..100.0, dt in 0.0f64..10.0, g in 0.0f64..=1.0) {
            for o in [Outcome::Solved, Outcome::FeasibleTimeout, Outcome::NoSolutionTimeout] {
                prop_assert!(compute_tau(TauInput::new(t + dt, g, o)) >= compute_tau(TauInput::new(t, g, o)));
            }
        }

        #[test]
        fn timeout_costs_more(t in 0.001f64..100.0, g in 0.001f64..=1.0) {
            let solved = compute_tau(TauInput::new(t, 0.0, Outcome::Solved));
            prop_assert!(compute_tau(TauInput::new(t, g, Outcome::FeasibleTimeout)) > solved);
        }

        #[test]
        fn more_runs_never_hurt(runs in prop::collection::vec(prop::collection::vec(0.0f64..50.0, 1..4), 1..6), extra in 0.0f64..50.0) {
            let before = sum_best(&runs);
            let mut more = runs.clone();
            more[0].push(extra);
            prop_assert!(sum_best(&more) <= before);
        }
    }
}
