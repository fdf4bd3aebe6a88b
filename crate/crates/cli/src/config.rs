//! Solver settings from a `key = value` file and command-line flags.
//!
//! Recognised keys: `time_limit`, `node_limit`, `strategy`, `h`, `eps`
//! (`<family>=<value>`, repeatable; family `all` sets the default),
//! `families` (`all`, `none` or a comma list), `presort` (comma list, or a
//! statistics CSV written by `solve --stats`),
//! `seed`, `use_optimality_cuts`, `static_rows`, `random_call_prob`.

use std::collections::BTreeMap;

use rsa_core::bnc::BncConfig;
use rsa_core::cuts::Family;
use rsa_core::strategy::{EffectivenessStats, StrategyKind};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Value(String),
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError::Value(msg.into())
}

/// Partially specified settings; unset fields keep the solver defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub time_limit: Option<f64>,
    pub node_limit: Option<usize>,
    pub strategy: Option<StrategyKind>,
    pub h: Option<usize>,
    pub eps_default: Option<f64>,
    pub eps: BTreeMap<Family, f64>,
    pub families: Option<Vec<Family>>,
    pub presort: Option<Vec<Family>>,
    pub seed: Option<u64>,
    pub use_optimality_cuts: Option<bool>,
    pub static_rows: Option<bool>,
    pub random_call_prob: Option<f64>,
}

pub fn parse_families(text: &str) -> Result<Vec<Family>, ConfigError> {
    match text.trim() {
        "all" => Ok(Family::ALL.to_vec()),
        "none" | "" => Ok(Vec::new()),
        list => list.split(',').map(|t| parse_family(t.trim())).collect(),
    }
}

/// A family order: a comma list, or the ranking stored in a statistics file.
pub fn parse_presort(value: &str) -> Result<Vec<Family>, ConfigError> {
    let path = std::path::Path::new(value.trim());
    if !path.is_file() {
        return parse_families(value);
    }
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("reading {}: {e}", path.display())))?;
    let stats = EffectivenessStats::from_csv(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok(stats.ranked(Family::ALL))
}

pub fn parse_family(tag: &str) -> Result<Family, ConfigError> {
    Family::from_tag(tag).ok_or_else(|| bad(format!("unknown family `{tag}`")))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| bad(format!("bad value `{value}` for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(format!("bad value `{value}` for {key}: expected true or false"))),
    }
}

impl Settings {
    /// Applies one `key`/`value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key.trim() {
            "time_limit" | "time-limit" => {
                let t: f64 = parse_num(key, value)?;
                if !(t >= 0.0) {
                    return Err(bad("time limit must be non-negative"));
                }
                self.time_limit = Some(t);
            }
            "node_limit" | "node-limit" => self.node_limit = Some(parse_num(key, value)?),
            "strategy" => self.strategy = Some(value.trim().parse().map_err(|e| bad(format!("{e}")))?),
            "h" => self.h = Some(parse_num(key, value)?),
            "eps" => self.set_eps(value)?,
            "families" => self.families = Some(parse_families(value)?),
            "presort" => self.presort = Some(parse_presort(value)?),
            "seed" => self.seed = Some(parse_num(key, value)?),
            "use_optimality_cuts" => self.use_optimality_cuts = Some(parse_bool(key, value)?),
            "static_rows" => self.static_rows = Some(parse_bool(key, value)?),
            "random_call_prob" => self.random_call_prob = Some(parse_num(key, value)?),
            other => return Err(bad(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    /// `<family>=<value>`, or `all=<value>` for the default.
    pub fn set_eps(&mut self, spec: &str) -> Result<(), ConfigError> {
        let (fam, val) = spec.split_once('=').ok_or_else(|| bad(format!("expected <family>=<value>, found `{spec}`")))?;
        let eps: f64 = parse_num("eps", val)?;
        if !(eps >= 0.0) {
            return Err(bad("ε must be non-negative"));
        }
        match fam.trim() {
            "all" | "*" => self.eps_default = Some(eps),
            tag => {
                self.eps.insert(parse_family(tag)?, eps);
            }
        }
        Ok(())
    }

    pub fn parse_file(text: &str) -> Result<Self, ConfigError> {
        let mut s = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Line { line: i + 1, msg: "expected key = value".into() })?;
            s.set(k.trim(), v.trim()).map_err(|e| ConfigError::Line { line: i + 1, msg: e.to_string() })?;
        }
        Ok(s)
    }

    /// Fields set in `over` win.
    pub fn overlay(mut self, over: Settings) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            time_limit,
            node_limit,
            strategy,
            h,
            eps_default,
            families,
            presort,
            seed,
            use_optimality_cuts,
            static_rows,
            random_call_prob
        );
        self.eps.extend(over.eps);
        self
    }

    pub fn to_bnc(&self) -> BncConfig {
        let mut c = BncConfig::default();
        if let Some(t) = self.time_limit {
            c.time_limit_minutes = t;
        }
        c.node_limit = self.node_limit;
        if let Some(k) = self.strategy {
            c.strategy.kind = k;
        }
        if let Some(h) = self.h {
            c.strategy.h = h;
        }
        if let Some(p) = self.random_call_prob {
            c.strategy.random_call_prob = p;
        }
        c.strategy.presort = self.presort.clone();
        if let Some(e) = self.eps_default {
            c.eps.default = e;
        }
        for (&f, &e) in &self.eps {
            c.eps.set(f, e);
        }
        if let Some(f) = &self.families {
            c.families = f.clone();
        }
        if let Some(seed) = self.seed {
            c.seed = seed;
            c.strategy.seed = seed;
        }
        if let Some(b) = self.use_optimality_cuts {
            c.use_optimality_cuts = b;
        }
        if let Some(b) = self.static_rows {
            c.static_rows = b;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Settings::parse_file(
            "# base\ntime_limit = 2.5\nstrategy = eff\neps = contiguityIneqs=0.3\nfamilies = contiguityIneqs,nonOverBySum\nseed = 7\n",
        )
        .unwrap();
        let mut flags = Settings::default();
        flags.set("strategy", "weighted").unwrap();
        flags.set_eps("nonOverBySum=1.5").unwrap();
        let c = file.overlay(flags).to_bnc();
        assert_eq!(c.time_limit_minutes, 2.5);
        assert_eq!(c.strategy.kind, StrategyKind::Weighted);
        assert_eq!(c.eps.get(Family::ContiguityIneqs), 0.3);
        assert_eq!(c.eps.get(Family::NonOverBySum), 1.5);
        assert_eq!(c.eps.get(Family::FarSlotsOff), 0.0);
        assert_eq!(c.families, vec![Family::ContiguityIneqs, Family::NonOverBySum]);
        assert_eq!((c.seed, c.strategy.seed), (7, 7));
    }

    #[test]
    fn family_sets() {
        assert_eq!(parse_families("all").unwrap().len(), Family::ALL.len());
        assert!(parse_families("none").unwrap().is_empty());
        assert!(parse_families("contiguityIneqs,bogus").is_err());
    }

    #[test]
    fn errors_name_the_line() {
        let e = Settings::parse_file("seed = 1\nh = many\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: bad value `many` for h");
        assert!(Settings::parse_file("colour = red").is_err());
        assert!(Settings::parse_file("no equals sign").is_err());
        let mut s = Settings::default();
        assert!(s.set_eps("all=-1").is_err());
        s.set_eps("all=2").unwrap();
        assert_eq!(s.to_bnc().eps.default, 2.0);
    }
}
