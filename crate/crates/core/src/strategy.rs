//! Which separators a cut round calls, and in what order.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cuts::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Every enabled separator, every round.
    BruteForce,
    /// Seeded shuffle.
    Rnd,
    /// Most effective first.
    Eff,
    /// Most effective first, sometimes replaced by a random pick.
    EffRnd,
    /// Sorted walk, each separator called with a probability that grows
    /// with its effectiveness.
    Weighted,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] =
        [StrategyKind::BruteForce, StrategyKind::Rnd, StrategyKind::Eff, StrategyKind::EffRnd, StrategyKind::Weighted];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::BruteForce => "brute-force",
            StrategyKind::Rnd => "rnd",
            StrategyKind::Eff => "eff",
            StrategyKind::EffRnd => "eff-rnd",
            StrategyKind::Weighted => "weighted",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StrategyError {
    #[error("unknown strategy `{0}` (expected brute-force, rnd, eff, eff-rnd or weighted)")]
    UnknownStrategy(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("h must be at least 1")]
    ZeroH,
    #[error("random-call probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("line {line}: {msg}")]
    BadStats { line: usize, msg: String },
}

impl FromStr for StrategyKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase().replace('_', "-"))
            .ok_or_else(|| StrategyError::UnknownStrategy(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// A round stops once this many families produced cuts.
    pub h: usize,
    /// Fixed order replacing the live effectiveness ranking.
    pub presort: Option<Vec<Family>>,
    pub random_call_prob: f64,
    pub seed: u64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self { kind: StrategyKind::BruteForce, h: 5, presort: None, random_call_prob: 0.1, seed: 0 }
    }
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<(), StrategyError> {
        if self.h == 0 {
            return Err(StrategyError::ZeroH);
        }
        if !(0.0..=1.0).contains(&self.random_call_prob) {
            return Err(StrategyError::BadProbability(self.random_call_prob));
        }
        Ok(())
    }
}

/// Per-family call and cut counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectivenessStats {
    calls: Vec<u64>,
    cuts: Vec<u64>,
}

impl Default for EffectivenessStats {
    fn default() -> Self {
        Self { calls: alloc::vec![0; Family::ALL.len()], cuts: alloc::vec![0; Family::ALL.len()] }
    }
}

fn index(f: Family) -> usize {
    Family::ALL.iter().position(|&g| g == f).unwrap()
}

impl EffectivenessStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_outcome(&mut self, family: Family, cuts: usize) {
        let i = index(family);
        self.calls[i] += 1;
        self.cuts[i] += cuts as u64;
    }

    pub fn record_tag(&mut self, tag: &str, cuts: usize) -> Result<(), StrategyError> {
        let f = Family::from_tag(tag).ok_or_else(|| StrategyError::UnknownFamily(tag.into()))?;
        self.record_outcome(f, cuts);
        Ok(())
    }

    pub fn calls(&self, family: Family) -> u64 {
        self.calls[index(family)]
    }

    pub fn cuts(&self, family: Family) -> u64 {
        self.cuts[index(family)]
    }

    /// Cuts per call, 0 for a family never called.
    pub fn coefficient(&self, family: Family) -> f64 {
        let i = index(family);
        if self.calls[i] == 0 {
            0.0
        } else {
            self.cuts[i] as f64 / self.calls[i] as f64
        }
    }

    /// `family,calls,cuts,coefficient` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,calls,cuts,coefficient\n");
        for &f in Family::ALL {
            out.push_str(&format!("{},{},{},{}\n", f.tag(), self.calls(f), self.cuts(f), self.coefficient(f)));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, StrategyError> {
        let mut stats = Self::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("family,") {
                continue;
            }
            let bad = |msg: &str| StrategyError::BadStats { line: n + 1, msg: msg.into() };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(bad("expected family,calls,cuts"));
            }
            let f = Family::from_tag(fields[0]).ok_or_else(|| StrategyError::UnknownFamily(fields[0].into()))?;
            let calls = fields[1].parse().map_err(|_| bad("calls is not a count"))?;
            let cuts = fields[2].parse().map_err(|_| bad("cuts is not a count"))?;
            stats.calls[index(f)] = calls;
            stats.cuts[index(f)] = cuts;
        }
        Ok(stats)
    }

    /// `enabled` sorted by coefficient, highest first, ties by tag.
    pub fn ranked(&self, enabled: &[Family]) -> Vec<Family> {
        let mut v = enabled.to_vec();
        v.sort_by(|a, b| {
            self.coefficient(*b)
                .partial_cmp(&self.coefficient(*a))
                .unwrap_or(core::cmp::Ordering::Equal)
                .then_with(|| a.tag().cmp(b.tag()))
        });
        v
    }
}

/// Lazy call sequence for one cut round. Pull families with
/// [`CallPlan::next_call`], report each call's outcome with
/// [`CallPlan::report`].
#[derive(Debug, Clone)]
pub struct CallPlan {
    kind: StrategyKind,
    h: usize,
    remaining: Vec<Family>,
    weights: Vec<f64>,
    prob: f64,
    productive: BTreeSet<Family>,
    rng: ChaCha8Rng,
}

impl CallPlan {
    pub fn new(config: &StrategyConfig, stats: &EffectivenessStats, enabled: &[Family], round_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ round_seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let sorted = || match &config.presort {
            Some(order) => {
                let mut v: Vec<Family> = order.iter().copied().filter(|f| enabled.contains(f)).collect();
                v.extend(enabled.iter().filter(|f| !order.contains(f)));
                v
            }
            None => stats.ranked(enabled),
        };
        let remaining = match config.kind {
            StrategyKind::BruteForce => enabled.to_vec(),
            StrategyKind::Rnd => {
                use rand::seq::SliceRandom;
                let mut v = enabled.to_vec();
                v.shuffle(&mut rng);
                v
            }
            StrategyKind::Eff | StrategyKind::EffRnd | StrategyKind::Weighted => sorted(),
        };
        let max = enabled.iter().map(|&f| stats.coefficient(f)).fold(0.0, f64::max);
        let weights = remaining
            .iter()
            .map(|&f| if max > 0.0 { 0.1 + 0.9 * stats.coefficient(f) / max } else { 1.0 })
            .collect();
        Self {
            kind: config.kind,
            h: config.h.max(1),
            remaining,
            weights,
            prob: config.random_call_prob,
            productive: BTreeSet::new(),
            rng,
        }
    }

    /// Next family to call, or `None` when the round is over.
    pub fn next_call(&mut self) -> Option<Family> {
        if self.kind != StrategyKind::BruteForce && self.productive.len() >= self.h {
            return None;
        }
        match self.kind {
            StrategyKind::EffRnd => {
                if self.remaining.is_empty() {
                    return None;
                }
                let pick = if self.rng.random::<f64>() < self.prob {
                    self.rng.random_range(0..self.remaining.len())
                } else {
                    0
                };
                self.weights.remove(pick);
                Some(self.remaining.remove(pick))
            }
            StrategyKind::Weighted => {
                while !self.remaining.is_empty() {
                    let w = self.weights.remove(0);
                    let f = self.remaining.remove(0);
                    if self.rng.random::<f64>() < w {
                        return Some(f);
                    }
                }
                None
            }
            _ => {
                if self.remaining.is_empty() {
                    None
                } else {
                    self.weights.remove(0);
                    Some(self.remaining.remove(0))
                }
            }
        }
    }

    pub fn report(&mut self, family: Family, cuts: usize) {
        if cuts > 0 {
            self.productive.insert(family);
        }
    }

    pub fn productive_families(&self) -> usize {
        self.productive.len()
    }
}

/// The whole plan when every call yields `outcome(f)` cuts.
pub fn plan_calls(
    config: &StrategyConfig,
    stats: &EffectivenessStats,
    enabled: &[Family],
    round_seed: u64,
    mut outcome: impl FnMut(Family) -> usize,
) -> Vec<Family> {
    let mut plan = CallPlan::new(config, stats, enabled, round_seed);
    let mut out = Vec::new();
    while let Some(f) = plan.next_call() {
        plan.report(f, outcome(f));
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Family::*;

    fn cfg(kind: StrategyKind, h: usize) -> StrategyConfig {
        StrategyConfig { kind, h, ..Default::default() }
    }

    #[test]
    fn brute_force_calls_everything() {
        let stats = EffectivenessStats::new();
        let plan = plan_calls(&cfg(StrategyKind::BruteForce, 1), &stats, Family::ALL, 0, |_| 3);
        assert_eq!(plan.len(), Family::ALL.len());
    }

    #[test]
    fn eff_stops_after_h_productive() {
        let mut stats = EffectivenessStats::new();
        stats.record_outcome(FarSlotsOff, 2);
        stats.record_outcome(ContiguityIneqs, 1);
        stats.record_outcome(ContiguityIneqs, 0);
        stats.record_outcome(NonOverBySum, 0);
        let enabled = [NonOverBySum, ContiguityIneqs, FarSlotsOff];
        let plan = plan_calls(&cfg(StrategyKind::Eff, 1), &stats, &enabled, 0, |_| 1);
        assert_eq!(plan, alloc::vec![FarSlotsOff]);
        let plan = plan_calls(&cfg(StrategyKind::Eff, 1), &stats, &enabled, 0, |f| usize::from(f == NonOverBySum));
        assert_eq!(plan, alloc::vec![FarSlotsOff, ContiguityIneqs, NonOverBySum]);
    }

    #[test]
    fn rnd_is_seeded() {
        let stats = EffectivenessStats::new();
        let a = plan_calls(&cfg(StrategyKind::Rnd, 99), &stats, Family::ALL, 4, |_| 0);
        let b = plan_calls(&cfg(StrategyKind::Rnd, 99), &stats, Family::ALL, 4, |_| 0);
        let c = plan_calls(&cfg(StrategyKind::Rnd, 99), &stats, Family::ALL, 5, |_| 0);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(sorted, Family::ALL.to_vec());
    }

    #[test]
    fn eff_rnd_calls_each_family_once() {
        let stats = EffectivenessStats::new();
        let mut c = cfg(StrategyKind::EffRnd, 99);
        c.random_call_prob = 0.5;
        let plan = plan_calls(&c, &stats, Family::ALL, 1, |_| 0);
        let distinct: BTreeSet<_> = plan.iter().collect();
        assert_eq!(plan.len(), Family::ALL.len());
        assert_eq!(distinct.len(), plan.len());
        c.random_call_prob = 0.0;
        assert_eq!(plan_calls(&c, &stats, Family::ALL, 1, |_| 0), stats.ranked(Family::ALL));
    }

    #[test]
    fn weighted_always_calls_when_no_history() {
        let stats = EffectivenessStats::new();
        let plan = plan_calls(&cfg(StrategyKind::Weighted, 99), &stats, Family::ALL, 0, |_| 0);
        assert_eq!(plan.len(), Family::ALL.len());
    }

    #[test]
    fn presort_ignores_stats() {
        let mut stats = EffectivenessStats::new();
        stats.record_outcome(FarSlotsOff, 10);
        let mut c = cfg(StrategyKind::Eff, 99);
        c.presort = Some(alloc::vec![NonOverBySum, ContiguityIneqs]);
        let plan = plan_calls(&c, &stats, &[FarSlotsOff, ContiguityIneqs, NonOverBySum], 0, |_| 0);
        assert_eq!(plan, alloc::vec![NonOverBySum, ContiguityIneqs, FarSlotsOff]);
    }

    #[test]
    fn coefficients() {
        let mut stats = EffectivenessStats::new();
        assert_eq!(stats.coefficient(PosFit2Sets), 0.0);
        stats.record_outcome(PosFit2Sets, 3);
        assert_eq!(stats.coefficient(PosFit2Sets), 3.0);
        for _ in 0..3 {
            stats.record_outcome(PosFit2Sets, 0);
        }
        stats.record_tag("posFit2Sets", 0).unwrap();
        assert!((stats.coefficient(PosFit2Sets) - 0.6).abs() < 1e-12);
        assert_eq!(stats.record_tag("bogus", 1), Err(StrategyError::UnknownFamily("bogus".into())));
        let back = EffectivenessStats::from_csv(&stats.to_csv()).unwrap();
        assert_eq!(back, stats);
    }

    #[test]
    fn strategy_names() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert_eq!("EFF_RND".parse::<StrategyKind>().unwrap(), StrategyKind::EffRnd);
        assert!("greedy".parse::<StrategyKind>().is_err());
    }
}
