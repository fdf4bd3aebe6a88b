use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rsa_core::bnc::{BncConfig, Progress};
use rsa_core::instance::{generate_instance, GeneratorError, GeneratorParams};
use rsa_core::oracle::{oracle_optimum, EnumLimits, OracleError};
use rsa_core::strategy::StrategyKind;

use rsa_cli::bench::{self, Contender};
use rsa_cli::config::{parse_families, parse_family, parse_presort, Settings};
use rsa_cli::{audit, exit, exit_code, io, run_solve, witness};

#[derive(Parser)]
#[command(name = "rsa", version, about = "Branch-and-cut for routing and spectrum allocation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance file (or INST-A, INST-B, INST-C).
    Solve {
        instance: String,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the solution here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Progress line every this many nodes, on stderr.
        #[arg(long, default_value_t = 0)]
        log_every: usize,
        /// Write per-family effectiveness statistics (CSV) here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Audit separator output against brute-force enumeration.
    Audit {
        instance: String,
        #[arg(long, default_value = "all")]
        families: String,
        /// Random points at which each separator runs.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for an LP point that satisfies base rows but violates a target family.
    Witness {
        query: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep ε for one family over a suite.
    Calibrate {
        suite: PathBuf,
        #[arg(long)]
        family: String,
        /// Comma-separated ε values (default 0, 0.1, ..., 2).
        #[arg(long)]
        grid: Option<String>,
        /// Runs per instance when the suite gives no seeds.
        #[arg(long, default_value_t = 3)]
        runs: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare separation strategies (and plain B&B, `bb`) over a suite.
    Compare {
        suite: PathBuf,
        #[arg(long, default_value = "bb,brute-force,rnd,eff,eff-rnd,weighted")]
        strategies: String,
        /// Comma-separated h values.
        #[arg(long, default_value = "5,10,15,20,25,30")]
        hs: String,
        #[arg(long, default_value_t = 2)]
        runs: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum by enumeration (micro instances only).
    Oracle { instance: String },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    demands: usize,
    #[arg(long, default_value_t = 1)]
    vmin: u32,
    #[arg(long, default_value_t = 3)]
    vmax: u32,
    #[arg(long)]
    slots: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct SolverArgs {
    /// `key = value` settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Minutes.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    h: Option<usize>,
    /// `<family>=<value>`, repeatable; `all=<value>` sets the default.
    #[arg(long)]
    eps: Vec<String>,
    /// `all`, `none` or a comma-separated list of family tags.
    #[arg(long)]
    families: Option<String>,
    /// Fixed family order for the effectiveness strategies: a comma list or
    /// a file written by `solve --stats`.
    #[arg(long)]
    presort: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_optimality_cuts: bool,
    #[arg(long)]
    no_static_rows: bool,
}

impl SolverArgs {
    fn settings(&self) -> Result<BncConfig> {
        let file = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Settings::parse_file(&text).with_context(|| format!("{}", p.display()))?
            }
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        if let Some(t) = self.time_limit {
            flags.set("time_limit", &t.to_string())?;
        }
        flags.node_limit = self.node_limit;
        if let Some(s) = &self.strategy {
            flags.set("strategy", s)?;
        }
        flags.h = self.h;
        for e in &self.eps {
            flags.set_eps(e)?;
        }
        if let Some(f) = &self.families {
            flags.families = Some(parse_families(f)?);
        }
        if let Some(p) = &self.presort {
            flags.presort = Some(parse_presort(p)?);
        }
        flags.seed = self.seed;
        if self.no_optimality_cuts {
            flags.use_optimality_cuts = Some(false);
        }
        if self.no_static_rows {
            flags.static_rows = Some(false);
        }
        let config = file.overlay(flags).to_bnc();
        config.validate()?;
        Ok(config)
    }
}

/// Failures the user can fix by changing the invocation.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|w| w.trim().parse().map_err(|_| usage(format!("bad {what} `{w}`"))))
        .collect()
}

fn load(spec: &str) -> Result<rsa_core::Instance> {
    io::load_instance(spec).map_err(usage)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let p = GeneratorParams {
                nodes: a.nodes,
                density: a.density,
                demands: a.demands,
                volume_min: a.vmin,
                volume_max: a.vmax,
                slots: a.slots,
                seed: a.seed,
            };
            let inst = generate_instance(&p).map_err(|e| match e {
                GeneratorError::InvalidParams(_) => usage(e),
                other => other.into(),
            })?;
            emit(a.out.as_deref(), &io::write_instance(&inst))?;
            Ok(exit::OK)
        }
        Cmd::Solve { instance, solver, out, log_every, stats } => {
            let inst = load(&instance)?;
            let mut config = solver.settings().map_err(usage)?;
            config.log_every = log_every;
            let mut log = |p: &Progress| eprintln!("{p}");
            let r = run_solve(&inst, &config, Some(&mut log))?;
            println!("instance {}", inst.name);
            println!("status {}", r.status.as_str());
            match r.objective {
                Some(o) => println!("objective {o}"),
                None => println!("objective none"),
            }
            println!("bound {}", r.best_bound);
            println!("gap {}", r.gap);
            println!("nodes {}", r.nodes);
            println!("cuts {}", r.total_cuts());
            for (f, n) in &r.cuts_by_family {
                println!("  {} {n}", f.tag());
            }
            eprintln!("minutes {}", bench::minutes2(r.wall_minutes));
            if let (Some(path), Some(sol)) = (&out, &r.solution) {
                emit(Some(path), &io::write_solution(&inst, sol))?;
            }
            if let Some(path) = &stats {
                emit(Some(path), &r.stats.to_csv())?;
            }
            Ok(exit_code(r.status))
        }
        Cmd::Audit { instance, families, samples, seed, out } => {
            let inst = load(&instance)?;
            let fams = parse_families(&families).map_err(usage)?;
            let rows = audit::audit_instance(&inst, &fams, samples, seed)?;
            emit(out.as_deref(), &audit::audit_csv(&rows))?;
            let failures: usize = rows.iter().map(|r| r.failures).sum();
            if failures > 0 {
                eprintln!("{failures} cuts failed the audit");
                return Ok(exit::INTERNAL);
            }
            Ok(exit::OK)
        }
        Cmd::Witness { query, out } => {
            let text = fs::read_to_string(&query).with_context(|| format!("reading {}", query.display()))?;
            let spec = witness::WitnessSpec::parse(&text).map_err(usage)?;
            let dir = query.parent().unwrap_or(Path::new("."));
            let (r, w) = witness::search(&spec.clone().relative_to(dir))?;
            match w {
                Some(w) => emit(out.as_deref(), &witness::write_witness(&spec, &r.dims, &w))?,
                None => emit(out.as_deref(), "none\n")?,
            }
            Ok(exit::OK)
        }
        Cmd::Calibrate { suite, family, grid, runs, solver, out } => {
            let entries = bench::load_suite(&suite).map_err(usage)?;
            let family = parse_family(&family).map_err(usage)?;
            let grid = match grid {
                Some(g) => list(&g, "ε")?,
                None => bench::default_eps_grid(),
            };
            let config = solver.settings().map_err(usage)?;
            let seeds: Vec<u64> = (0..runs.max(1)).collect();
            let rows = bench::calibrate_eps(&entries, &config, family, &grid, &seeds)?;
            emit(out.as_deref(), &bench::calibration_csv(&rows))?;
            Ok(exit::OK)
        }
        Cmd::Compare { suite, strategies, hs, runs, solver, out } => {
            let entries = bench::load_suite(&suite).map_err(usage)?;
            let contenders = strategies
                .split(',')
                .map(|s| match s.trim() {
                    "bb" => Ok(None),
                    other => other.parse::<StrategyKind>().map(Some).map_err(usage),
                })
                .collect::<Result<Vec<Contender>>>()?;
            let hs: Vec<usize> = list(&hs, "h")?;
            if hs.is_empty() || hs.contains(&0) {
                bail!(usage("h values must be positive"));
            }
            let config = solver.settings().map_err(usage)?;
            let seeds: Vec<u64> = (0..runs.max(1)).collect();
            let cmp = bench::compare_strategies(&entries, &config, &contenders, &hs, &seeds)?;
            for name in &cmp.excluded {
                eprintln!("excluded {name}: every configuration timed out");
            }
            emit(out.as_deref(), &bench::comparison_csv(&cmp))?;
            Ok(exit::OK)
        }
        Cmd::Oracle { instance } => {
            let inst = load(&instance)?;
            match oracle_optimum(&inst, EnumLimits::default()) {
                Ok(o) => {
                    println!("objective {}", o.objective);
                    println!("optima {}", o.optima.len());
                    if let Some(best) = o.optima.first() {
                        print!("{}", io::write_solution(&inst, best));
                    }
                    Ok(exit::OK)
                }
                Err(OracleError::Infeasible) => {
                    println!("infeasible");
                    Ok(exit::INFEASIBLE)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::from(exit::INTERNAL)
            }
        }
    }
}
