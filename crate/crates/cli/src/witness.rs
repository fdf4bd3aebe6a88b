//! Non-implication queries: is there an LP point satisfying a set of rows
//! that still violates a row of some family?
//!
//! Query files:
//!
//! ```text
//! instance INST-A            # or a path
//! base model                 # the formulation without optional rows
//! base family exactlyVdFromV # every row the family can emit
//! target notBranchFromV      # optionally followed by a row index
//! ```
//!
//! Witness files repeat the query, then record the row index, the
//! violation and the nonzero coordinates as `u <demand> <arc> <slot> <value>`.

use std::fmt::Write as _;

use rsa_core::cuts::{Family, SeparationConfig, SeparationContext};
use rsa_core::model::{build_model, Dims, ModelOptions};
use rsa_core::oracle::{find_witness, OracleError, WitnessOutcome, WitnessQuery};
use rsa_core::{FractionalPoint, Instance, LinearRow};
use thiserror::Error;

use crate::config::parse_family;
use crate::io::{load_instance, FormatError};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("target row {index} out of range ({count} rows)")]
    RowOutOfRange { index: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseItem {
    Model,
    Family(Family),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    pub instance: String,
    pub base: Vec<BaseItem>,
    pub target: Family,
    pub row: Option<usize>,
}

fn syntax(line: usize, msg: impl Into<String>) -> WitnessError {
    WitnessError::Syntax { line, msg: msg.into() }
}

impl WitnessSpec {
    pub fn parse(text: &str) -> Result<Self, WitnessError> {
        let mut instance = None;
        let mut base = Vec::new();
        let mut target = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            let family = |w: &str| parse_family(w).map_err(|e| syntax(ln, e.to_string()));
            match words.as_slice() {
                [] => {}
                ["instance", spec] => instance = Some(spec.to_string()),
                ["base", "model"] => base.push(BaseItem::Model),
                ["base", "family", tag] => base.push(BaseItem::Family(family(tag)?)),
                ["target", tag] => target = Some((family(tag)?, None)),
                ["target", tag, idx] => {
                    let idx = idx.parse().map_err(|_| syntax(ln, format!("bad row index `{idx}`")))?;
                    target = Some((family(tag)?, Some(idx)));
                }
                // Witness-file records, ignored when reading the query back.
                ["row", ..] | ["violation", ..] | ["u", ..] => {}
                _ => return Err(syntax(ln, format!("unrecognised line `{}`", raw.trim()))),
            }
        }
        let instance = instance.ok_or_else(|| syntax(1, "missing `instance`"))?;
        let (target, row) = target.ok_or_else(|| syntax(1, "missing `target`"))?;
        Ok(Self { instance, base, target, row })
    }

    /// Makes a relative instance path relative to `dir` instead of the
    /// working directory.
    pub fn relative_to(mut self, dir: &std::path::Path) -> Self {
        let p = std::path::Path::new(&self.instance);
        if rsa_core::fixtures::by_name(&self.instance).is_none() && p.is_relative() {
            self.instance = dir.join(p).display().to_string();
        }
        self
    }

    fn header(&self) -> String {
        let mut out = format!("instance {}\n", self.instance);
        for b in &self.base {
            match b {
                BaseItem::Model => out.push_str("base model\n"),
                BaseItem::Family(f) => writeln!(out, "base family {}", f.tag()).unwrap(),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub row_index: usize,
    pub row: LinearRow,
    pub point: FractionalPoint,
    pub violation: f64,
}

/// The base rows and target rows a query refers to.
pub struct Resolved {
    pub instance: Instance,
    pub dims: Dims,
    pub base: Vec<LinearRow>,
    pub targets: Vec<LinearRow>,
}

pub fn resolve(spec: &WitnessSpec) -> Result<Resolved, WitnessError> {
    let instance = load_instance(&spec.instance)?;
    let model = build_model(&instance, ModelOptions::default());
    let ctx = SeparationContext::new(&instance, SeparationConfig::default(), 0);
    let mut base = Vec::new();
    for item in &spec.base {
        match item {
            BaseItem::Model => base.extend(model.rows.iter().cloned()),
            BaseItem::Family(f) => base.extend(ctx.all_rows(*f).into_iter().map(|c| c.row)),
        }
    }
    let targets = ctx.all_rows(spec.target).into_iter().map(|c| c.row).collect();
    Ok(Resolved { dims: model.dims, instance, base, targets })
}

/// The first target row (or the requested one) the base rows do not imply.
pub fn search(spec: &WitnessSpec) -> Result<(Resolved, Option<Witness>), WitnessError> {
    let r = resolve(spec)?;
    let indices: Vec<usize> = match spec.row {
        Some(i) if i >= r.targets.len() => return Err(WitnessError::RowOutOfRange { index: i, count: r.targets.len() }),
        Some(i) => vec![i],
        None => (0..r.targets.len()).collect(),
    };
    for i in indices {
        let q = WitnessQuery { var_count: r.dims.var_count(), base: r.base.clone(), target: r.targets[i].clone() };
        match find_witness(&q)? {
            WitnessOutcome::Found { point, violation } => {
                let w = Witness { row_index: i, row: r.targets[i].clone(), point, violation };
                return Ok((r, Some(w)));
            }
            WitnessOutcome::Vacuous => break,
            WitnessOutcome::None => {}
        }
    }
    Ok((r, None))
}

/// Coordinates within this distance of zero are not written.
const ZERO: f64 = 1e-12;

pub fn write_witness(spec: &WitnessSpec, dims: &Dims, w: &Witness) -> String {
    let mut out = spec.header();
    writeln!(out, "target {} {}", spec.target.tag(), w.row_index).unwrap();
    writeln!(out, "row {}", w.row.display(dims)).unwrap();
    writeln!(out, "violation {}", w.violation).unwrap();
    for (i, &v) in w.point.values().iter().enumerate() {
        if v.abs() > ZERO {
            let x = dims.decode(i);
            writeln!(out, "u {} {} {} {}", x.demand, x.arc, x.slot, v).unwrap();
        }
    }
    out
}

/// Reads back the point stored in a witness file.
pub fn read_point(text: &str, dims: &Dims) -> Result<FractionalPoint, WitnessError> {
    let mut values = vec![0.0; dims.var_count()];
    for (i, raw) in text.lines().enumerate() {
        let words: Vec<&str> = raw.split_whitespace().collect();
        if words.first() != Some(&"u") {
            continue;
        }
        let err = || syntax(i + 1, "expected `u <demand> <arc> <slot> <value>`");
        if words.len() != 5 {
            return Err(err());
        }
        let d: usize = words[1].parse().map_err(|_| err())?;
        let e: usize = words[2].parse().map_err(|_| err())?;
        let s: u32 = words[3].parse().map_err(|_| err())?;
        let v: f64 = words[4].parse().map_err(|_| err())?;
        if d >= dims.demands || e >= dims.arcs || s == 0 || s > dims.slots {
            return Err(syntax(i + 1, "coordinate out of range"));
        }
        values[dims.var(d, e, s)] = v;
    }
    Ok(FractionalPoint(values))
}
