//! File formats, wall-clock timing, experiment harness and command-line
//! plumbing around `rsa-core`.

pub mod audit;
pub mod bench;
pub mod config;
pub mod io;
pub mod witness;

use std::time::Instant;

use rsa_core::bnc::{solve_bnc_with, BncConfig, BncError, Clock, Progress, SolveResult, SolveStatus};
use rsa_core::Instance;

/// Minutes elapsed since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn minutes(&self) -> f64 {
        self.0.elapsed().as_secs_f64() / 60.0
    }
}

/// Solves with a wall clock; progress lines go to `log` when given.
pub fn run_solve(
    inst: &Instance,
    config: &BncConfig,
    log: Option<&mut dyn FnMut(&Progress)>,
) -> Result<SolveResult, BncError> {
    let clock = WallClock::start();
    let mut silent = |_: &Progress| {};
    let log: &mut dyn FnMut(&Progress) = match log {
        Some(l) => l,
        None => &mut silent,
    };
    let mut r = solve_bnc_with(inst, config, &clock, log)?;
    r.wall_minutes = clock.minutes();
    Ok(r)
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INFEASIBLE: u8 = 1;
    pub const TIMEOUT: u8 = 2;
    pub const USAGE: u8 = 3;
    pub const INTERNAL: u8 = 4;
}

pub fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => exit::OK,
        SolveStatus::Infeasible => exit::INFEASIBLE,
        SolveStatus::Feasible | SolveStatus::NoSolution => exit::TIMEOUT,
    }
}
