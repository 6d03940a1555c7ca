//! Library half of the `statebound` command-line tool.

mod args;
mod commands;
pub mod montecarlo;
mod render;
mod sweep;

use std::fmt;

pub use args::{AxisArg, BoundArgs, Cli, Command, DesignArgs, GlobalArgs, Method, OutputFormat, ProtocolArgs};
pub use commands::{protocol_report, run_protocol, BoundReport, DesignReport, ProtocolReport};
pub use sweep::{parse_sweep, SweepReport, SweepSpec};

use statebound::expr::OperatorExpr;
use statebound::{Error, SpinSystem};

/// ε used by `--physical`.
pub const PHYSICAL_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::InvalidSpec(_) | Error::Config(_) | Error::InvalidSystem(_) => 2,
            Error::Unreachable { .. } | Error::ZeroTarget => 3,
            Error::SolverFailure { .. } | Error::NonUniqueFixedPoint(_) => 4,
            _ => 1,
        };
        let message = match &e {
            Error::Unreachable { index: Some(k), .. } => format!("{e} (partial sum k = {k})"),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 1, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command line and returns what should be printed.
pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Bound(a) => {
            let report = commands::bound(&cli.global, a)?;
            render::render(&report, cli.global.output, None)
        }
        Command::Design(a) => {
            let report = commands::design(&cli.global, a)?;
            render::render(&report, cli.global.output, Some("entries"))
        }
        Command::Protocol(a) => match &a.sweep {
            Some(spec) => {
                let spec = parse_sweep(spec)?;
                let report = sweep::run_sweep(&cli.global, a, &spec)?;
                render::render(&report, cli.global.output, Some("rows"))
            }
            None => {
                let report = commands::protocol(&cli.global, a)?;
                render::render(&report, cli.global.output, None)
            }
        },
    }
}

/// Picks the spin system and spin count for operator expressions.
pub(crate) fn resolve_system(global: &GlobalArgs, exprs: &[&OperatorExpr]) -> CliResult<(SpinSystem, usize)> {
    let implied = exprs.iter().filter_map(|e| e.implied_spins()).max();
    let system = match &global.system {
        Some(name) => SpinSystem::load(name)?,
        None => match global.spins.or(implied) {
            Some(n) if n != 2 => SpinSystem::uniform(n)?,
            _ => SpinSystem::chcl3(),
        },
    };
    let system = with_overrides(system, global)?;
    let n = global.spins.unwrap_or(system.n);
    if n != system.n {
        return Err(CliError::usage(format!("--spins {n} disagrees with the {}-spin system '{}'", system.n, system.name)));
    }
    if let Some(k) = implied.filter(|&k| k > n) {
        return Err(CliError::usage(format!("expression needs {k} spins but the system has {n}")));
    }
    Ok((system, n))
}

pub(crate) fn with_overrides(system: SpinSystem, global: &GlobalArgs) -> CliResult<SpinSystem> {
    if global.t1.is_none() && global.t2.is_none() {
        return Ok(system);
    }
    let t1 = global.t1.clone().unwrap_or_else(|| system.t1.clone());
    let t2 = global.t2.clone().unwrap_or_else(|| system.t2.clone());
    Ok(system.with_relaxation(t1, t2)?)
}

pub(crate) fn units(global: &GlobalArgs) -> (&'static str, f64) {
    if global.physical {
        ("absolute", PHYSICAL_EPSILON)
    } else {
        ("epsilon", 1.0)
    }
}
