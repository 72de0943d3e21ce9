use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use noncomm::coulomb::{Coupling, QuantumNumbers, SolverOptions};

use crate::table::Format;

/// Hydrogenlike bound states with noncommuting two-particle operators.
///
/// Energies are in units of mu c^2, lengths in hbar/(mu c).
#[derive(Debug, Parser)]
#[command(name = "noncomm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; defaults to JSON for single results and CSV for tables.
    #[arg(long, global = true, value_enum, env = "NONCOMM_FORMAT")]
    pub format: Option<Format>,

    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, global = true, env = "NONCOMM_QUAD_TOL")]
    pub quad_tol: Option<f64>,

    /// Bracket width at which a root of the eta equation is accepted.
    #[arg(long, global = true, env = "NONCOMM_ROOT_TOL")]
    pub root_tol: Option<f64>,

    /// Resolution of the critical coupling search.
    #[arg(long, global = true, env = "NONCOMM_CRIT_TOL")]
    pub crit_tol: Option<f64>,

    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, env = "NONCOMM_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one level and report every observable.
    Solve(StateArgs),
    /// Model, Schrödinger and Klein-Gordon energies of one level over a coupling range.
    Sweep {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Sample the right-hand side g(eta) of the self-consistency equation.
    RhsCurve {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.01)]
        eta_min: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 200)]
        eta_steps: usize,
    },
    /// Noncommutativity parameter of several levels over a coupling range.
    EpsilonSweep {
        #[command(flatten)]
        range: RangeArgs,
        /// Levels as `nl` digit pairs or `n:l`, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_level, default_value = "10,20,21")]
        states: Vec<QuantumNumbers>,
    },
    /// Largest coupling at which a level exists.
    Critical(LevelArgs),
    /// Lowest existing level among 1S, 2S and 2P over a coupling range.
    GroundState {
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Compare the analytic solution with the self-consistent shooting solver.
    OracleCheck(StateArgs),
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub l: u32,
}

impl LevelArgs {
    pub fn quantum_numbers(&self) -> noncomm::Result<QuantumNumbers> {
        QuantumNumbers::new(self.n, self.l)
    }
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long = "alphaZ", allow_negative_numbers = true)]
    pub alpha_z: f64,
}

impl StateArgs {
    pub fn parse(&self) -> noncomm::Result<(QuantumNumbers, Coupling<f64>)> {
        Ok((self.level.quantum_numbers()?, Coupling::new(self.alpha_z)?))
    }
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
}

/// Uniform grid with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(format!("range needs min < max, got [{min}, {max}]"));
        }
        if steps < 2 {
            return Err(format!("range needs at least 2 steps, got {steps}"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }
}

impl RangeArgs {
    pub fn couplings(&self) -> Result<Range, String> {
        if self.min.is_nan() || self.min <= 0.0 {
            return Err(format!("couplings must be positive, got min = {}", self.min));
        }
        Range::new(self.min, self.max, self.steps)
    }
}

fn parse_level(s: &str) -> Result<QuantumNumbers, String> {
    let (n, l) = match s.split_once(':') {
        Some((n, l)) => (n.trim().parse::<u32>(), l.trim().parse::<u32>()),
        None if s.len() == 2 && s.bytes().all(|b| b.is_ascii_digit()) => (s[..1].parse(), s[1..].parse()),
        None => return Err(format!("expected `nl` or `n:l`, got `{s}`")),
    };
    match (n, l) {
        (Ok(n), Ok(l)) => QuantumNumbers::new(n, l).map_err(|e| e.to_string()),
        _ => Err(format!("expected `nl` or `n:l`, got `{s}`")),
    }
}

/// Options after flag validation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub solver: SolverOptions<f64>,
    pub threads: usize,
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig, String> {
        let mut solver = SolverOptions::<f64>::default();
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("{name} must be positive, got {v}"))
            }
        };
        if let Some(t) = self.quad_tol {
            solver.quadrature = solver.quadrature.with_tolerance(positive("--quad-tol", t)?);
        }
        if let Some(t) = self.root_tol {
            solver.root_tolerance = positive("--root-tol", t)?;
        }
        if let Some(t) = self.crit_tol {
            solver.critical_tolerance = positive("--crit-tol", t)?;
        }
        Ok(RunConfig {
            output: self.output.clone(),
            format: self.format,
            solver,
            threads: self.threads,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_codes() {
        assert_eq!(parse_level("21").unwrap(), QuantumNumbers::new(2, 1).unwrap());
        assert_eq!(parse_level("10:3").unwrap(), QuantumNumbers::new(10, 3).unwrap());
        assert!(parse_level("12").is_err());
        assert!(parse_level("x").is_err());
    }

    #[test]
    fn range_points_hit_both_ends() {
        let r = Range::new(0.01, 0.5, 50).unwrap();
        let p = r.points();
        assert_eq!(p.len(), 50);
        assert_eq!((p[0], p[49]), (0.01, 0.5));
        assert!(Range::new(0.5, 0.5, 10).is_err());
        assert!(Range::new(0.1, 0.5, 1).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
