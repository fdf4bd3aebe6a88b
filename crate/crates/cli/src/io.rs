//! Instance and solution text formats.
//!
//! Instance files:
//!
//! ```text
//! # comment
//! rsa <nodes> <arcs> <demands> <slots>
//! arc <tail> <head>
//! demand <source> <target> <volume>
//! ```
//!
//! Solution files hold one line per demand:
//! `d <index> path <arc> <arc> ... slots <first> <last>`.

use std::fmt::Write as _;
use std::path::Path;

use rsa_core::instance::InstanceError;
use rsa_core::{CanonicalSolution, Demand, Digraph, Instance, Lightpath};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Semantic(#[from] InstanceError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn fields(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn num<T: std::str::FromStr>(line: usize, what: &str, word: &str) -> Result<T, FormatError> {
    word.parse().map_err(|_| syntax(line, format!("expected {what}, found `{word}`")))
}

fn expect_args(line: usize, words: &[&str], n: usize) -> Result<(), FormatError> {
    if words.len() != n + 1 {
        return Err(syntax(line, format!("`{}` takes {n} values, found {}", words[0], words.len() - 1)));
    }
    Ok(())
}

pub fn parse_instance(name: &str, text: &str) -> Result<Instance, FormatError> {
    let mut lines = fields(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing `rsa` header"))?;
    if header[0] != "rsa" {
        return Err(syntax(hl, format!("expected `rsa` header, found `{}`", header[0])));
    }
    expect_args(hl, &header, 4)?;
    let n: usize = num(hl, "node count", header[1])?;
    let m: usize = num(hl, "arc count", header[2])?;
    let k: usize = num(hl, "demand count", header[3])?;
    let slots: u32 = num(hl, "slot count", header[4])?;

    let mut arcs = Vec::with_capacity(m);
    let mut demands = Vec::with_capacity(k);
    let mut last = hl;
    for (ln, words) in lines {
        last = ln;
        match words[0] {
            "arc" => {
                if !demands.is_empty() {
                    return Err(syntax(ln, "arcs must precede demands"));
                }
                if arcs.len() == m {
                    return Err(syntax(ln, format!("more than the declared {m} arcs")));
                }
                expect_args(ln, &words, 2)?;
                arcs.push((num(ln, "node id", words[1])?, num(ln, "node id", words[2])?));
            }
            "demand" => {
                if demands.len() == k {
                    return Err(syntax(ln, format!("more than the declared {k} demands")));
                }
                expect_args(ln, &words, 3)?;
                demands.push(Demand::new(
                    num(ln, "node id", words[1])?,
                    num(ln, "node id", words[2])?,
                    num(ln, "volume", words[3])?,
                ));
            }
            other => return Err(syntax(ln, format!("unknown record `{other}`"))),
        }
    }
    if arcs.len() != m {
        return Err(syntax(last, format!("declared {m} arcs, found {}", arcs.len())));
    }
    if demands.len() != k {
        return Err(syntax(last, format!("declared {k} demands, found {}", demands.len())));
    }
    let graph = Digraph::new(n, arcs)?;
    Ok(Instance::new(name, graph, demands, slots)?)
}

pub fn write_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    writeln!(out, "# {}", inst.name).unwrap();
    writeln!(out, "rsa {} {} {} {}", g.node_count(), g.arc_count(), inst.demands().len(), inst.slots()).unwrap();
    for a in g.arcs() {
        writeln!(out, "arc {} {}", a.tail, a.head).unwrap();
    }
    for d in inst.demands() {
        writeln!(out, "demand {} {} {}", d.source, d.target, d.volume).unwrap();
    }
    out
}

/// Reads an instance file, or one of the built-in names `INST-A`, `INST-B`, `INST-C`.
pub fn load_instance(spec: &str) -> Result<Instance, FormatError> {
    if let Some(inst) = rsa_core::fixtures::by_name(spec) {
        return Ok(inst);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: spec.into(), source })?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    parse_instance(name, &text)
}

pub fn write_solution(inst: &Instance, sol: &CanonicalSolution) -> String {
    let mut out = String::new();
    for (d, lp) in sol.paths.iter().enumerate() {
        write!(out, "d {d} path").unwrap();
        for a in &lp.arcs {
            write!(out, " {a}").unwrap();
        }
        writeln!(out, " slots {} {}", lp.start, lp.end(inst.demand(d).volume)).unwrap();
    }
    out
}

pub fn parse_solution(text: &str) -> Result<CanonicalSolution, FormatError> {
    let mut paths = Vec::new();
    for (ln, words) in fields(text) {
        if words.len() < 6 || words[0] != "d" || words[2] != "path" {
            return Err(syntax(ln, "expected `d <index> path <arcs> slots <first> <last>`"));
        }
        let index: usize = num(ln, "demand index", words[1])?;
        if index != paths.len() {
            return Err(syntax(ln, format!("expected demand {}, found {index}", paths.len())));
        }
        let at = words.iter().position(|w| *w == "slots").ok_or_else(|| syntax(ln, "missing `slots`"))?;
        if at + 3 != words.len() {
            return Err(syntax(ln, "`slots` takes a first and a last slot"));
        }
        let arcs = words[3..at].iter().map(|w| num(ln, "arc id", w)).collect::<Result<_, _>>()?;
        let first: u32 = num(ln, "slot", words[at + 1])?;
        let last: u32 = num(ln, "slot", words[at + 2])?;
        if last < first {
            return Err(syntax(ln, "last slot precedes first slot"));
        }
        paths.push(Lightpath::new(arcs, first));
    }
    Ok(CanonicalSolution::new(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsa_core::fixtures;

    const INST_A: &str = "# triangle\nrsa 3 3 1 3\narc 0 1\narc 1 2\narc 0 2\ndemand 0 2 2\n";

    #[test]
    fn parses_inst_a() {
        let inst = parse_instance("INST-A", INST_A).unwrap();
        assert_eq!(inst, fixtures::inst_a());
        assert_eq!(inst.graph().arc_count(), 3);
        assert_eq!(inst.demands().len(), 1);
    }

    #[test]
    fn round_trip() {
        for inst in [fixtures::inst_a(), fixtures::inst_b(), fixtures::grid(2, 3, vec![Demand::new(0, 5, 2)], 4)] {
            let back = parse_instance(&inst.name, &write_instance(&inst)).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn semantic_errors() {
        let e = parse_instance("x", "rsa 2 1 1 3\narc 0 1\ndemand 0 1 4\n").unwrap_err();
        assert!(e.to_string().contains("volume exceeds slots"), "{e}");
        let e = parse_instance("x", "rsa 2 1 1 3\narc 0 0\ndemand 0 1 1\n").unwrap_err();
        assert!(e.to_string().contains("self-loop"), "{e}");
        let e = parse_instance("x", "rsa 2 2 0 3\narc 0 1\narc 0 1\n").unwrap_err();
        assert!(e.to_string().contains("duplicate arc"), "{e}");
        let e = parse_instance("x", "rsa 2 1 1 3\narc 0 1\ndemand 0 7 1\n").unwrap_err();
        assert!(e.to_string().contains("dangling"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let e = parse_instance("x", "# c\nrsa 2 1 1 3\narc 0 one\n").unwrap_err();
        assert_eq!(e.to_string(), "line 3: expected node id, found `one`");
        let e = parse_instance("x", "rsa 2 1 1 3\narc 0 1\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2: declared 1 demands"), "{e}");
        let e = parse_instance("x", "rsa 2 1 0 3\nedge 0 1\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: unknown record `edge`");
        assert!(parse_instance("x", "").is_err());
    }

    #[test]
    fn solution_round_trip() {
        let inst = fixtures::inst_b();
        let sol = CanonicalSolution::new(vec![Lightpath::new(vec![0], 1), Lightpath::new(vec![0], 3)]);
        let text = write_solution(&inst, &sol);
        assert_eq!(text, "d 0 path 0 slots 1 2\nd 1 path 0 slots 3 3\n");
        assert_eq!(parse_solution(&text).unwrap(), sol);
    }

    proptest::proptest! {
        #[test]
        fn generated_instances_round_trip(seed in 0u64..10_000, nodes in 2usize..9, demands in 0usize..5, slots in 1u32..9) {
            let p = rsa_core::instance::GeneratorParams {
                nodes, density: 0.4, demands, volume_min: 1, volume_max: slots.min(3), slots, seed,
            };
            if let Ok(inst) = rsa_core::instance::generate_instance(&p) {
                let back = parse_instance(&inst.name, &write_instance(&inst)).unwrap();
                proptest::prop_assert_eq!(back, inst);
            }
        }
    }
}
