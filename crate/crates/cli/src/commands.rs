use noncomm::coulomb::{critical_coupling, solve_eta, Coupling, EtaEquation, QuantumNumbers, SolverOptions};
use noncomm::oracle::{default_grid, self_consistent_solve, IterationOptions, PotentialSpec};
use noncomm::spectrum::{energy_klein_gordon, energy_model, energy_schrodinger, ground_state, solve_level};
use noncomm::Error;
use rayon::prelude::*;

use crate::args::{Command, Range};
use crate::table::{Cell, Format, Table};

/// Relative energy difference accepted by `oracle-check`.
pub const ENERGY_AGREEMENT: f64 = 1e-8;
/// Accepted `|delta epsilon| / eta` in `oracle-check`.
pub const EPSILON_AGREEMENT: f64 = 1e-7;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    NoBoundState { n: u32, l: u32, alpha_z: f64 },
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoBoundState { n, l, alpha_z } => Failure::NoBoundState { n, l, alpha_z },
            Error::InvalidQuantumNumbers { .. }
            | Error::InvalidCoupling(_)
            | Error::InvalidArgument(_)
            | Error::InvalidMasses { .. } => Failure::Usage(e.to_string()),
            e => Failure::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub default_format: Format,
    /// Rows reported without a model solution.
    pub missing_rows: usize,
    /// `oracle-check` found the two solvers in disagreement.
    pub disagreement: bool,
}

impl Outcome {
    fn json(table: Table) -> Self {
        Self {
            table,
            default_format: Format::Json,
            missing_rows: 0,
            disagreement: false,
        }
    }

    fn csv(table: Table, missing_rows: usize) -> Self {
        Self {
            table,
            default_format: Format::Csv,
            missing_rows,
            disagreement: false,
        }
    }
}

fn coupling(az: f64) -> Result<Coupling<f64>, Failure> {
    Coupling::new(az).map_err(Failure::from)
}

/// `Ok(None)` when the level does not exist at this coupling.
fn epsilon_if_bound(q: QuantumNumbers, c: Coupling<f64>, opts: &SolverOptions<f64>) -> Result<Option<f64>, Failure> {
    match solve_eta(q, c, opts) {
        Ok(s) => Ok(Some(s.epsilon)),
        Err(Error::NoBoundState { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn collect_rows<F>(points: &[f64], row: F) -> Result<Vec<Vec<Cell>>, Failure>
where
    F: Fn(f64) -> Result<Vec<Cell>, Failure> + Sync,
{
    // Indexed parallel collection keeps ascending order.
    points.par_iter().map(|&x| row(x)).collect()
}

pub fn run(command: &Command, opts: &SolverOptions<f64>) -> Result<Outcome, Failure> {
    match command {
        Command::Solve(state) => {
            let (q, c) = state.parse()?;
            let level = solve_level(q, c, opts)?;
            Ok(Outcome::json(Table::record([
                ("n", Cell::from(q.n())),
                ("l", q.l().into()),
                ("alphaZ", c.value().into()),
                ("epsilon", level.epsilon.into()),
                ("eta", level.eta.into()),
                ("energy_model", level.energy_model.into()),
                ("energy_schrodinger", level.energy_schrodinger.into()),
                ("energy_klein_gordon", level.energy_klein_gordon.into()),
                ("mean_radius", level.mean_radius.into()),
                ("root_count", level.root_count.into()),
                ("residual", level.residual.into()),
            ])))
        }
        Command::Sweep { level, range } => {
            let q = level.quantum_numbers()?;
            let points = range.couplings().map_err(Failure::Usage)?.points();
            let rows = collect_rows(&points, |az| {
                let c = coupling(az)?;
                let eps = epsilon_if_bound(q, c, opts)?;
                let model = eps.map(|e| energy_model(q, c, e)).transpose()?;
                let kg = match energy_klein_gordon(q, c) {
                    Ok(e) => Some(e),
                    Err(Error::BeyondCriticalCoupling { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
                Ok(vec![
                    az.into(),
                    eps.into(),
                    model.into(),
                    energy_schrodinger(q, c).into(),
                    kg.into(),
                ])
            })?;
            let missing = rows.iter().filter(|r| r[1] == Cell::Missing).count();
            let mut table = Table::new([
                "alphaZ",
                "epsilon",
                "energy_model",
                "energy_schrodinger",
                "energy_klein_gordon",
            ]);
            rows.into_iter().for_each(|r| table.push(r));
            Ok(Outcome::csv(table, missing))
        }
        Command::RhsCurve {
            state,
            eta_min,
            eta_max,
            eta_steps,
        } => {
            let (q, c) = state.parse()?;
            if !(*eta_min > 0.0 && *eta_max <= 1.0) {
                return Err(Failure::Usage(format!(
                    "eta range must lie in (0, 1], got [{eta_min}, {eta_max}]"
                )));
            }
            let points = Range::new(*eta_min, *eta_max, *eta_steps)
                .map_err(Failure::Usage)?
                .points();
            let eq = EtaEquation::new(q, c, opts.quadrature);
            let rows = collect_rows(&points, |eta| Ok(vec![eta.into(), eq.rhs(eta)?.into()]))?;
            let mut table = Table::new(["eta", "g_eta"]);
            rows.into_iter().for_each(|r| table.push(r));
            Ok(Outcome::csv(table, 0))
        }
        Command::EpsilonSweep { range, states } => {
            let points = range.couplings().map_err(Failure::Usage)?.points();
            let rows = collect_rows(&points, |az| {
                let c = coupling(az)?;
                let mut row = vec![Cell::from(az)];
                for &q in states {
                    row.push(epsilon_if_bound(q, c, opts)?.into());
                }
                Ok(row)
            })?;
            let mut columns = vec!["alphaZ".to_string()];
            columns.extend(states.iter().map(|q| format!("eps_{}{}", q.n(), q.l())));
            let mut table = Table::new(columns);
            rows.into_iter().for_each(|r| table.push(r));
            Ok(Outcome::csv(table, 0))
        }
        Command::Critical(level) => {
            let q = level.quantum_numbers()?;
            let c = critical_coupling(q, opts)?;
            Ok(Outcome::json(Table::record([
                ("n", Cell::from(q.n())),
                ("l", q.l().into()),
                ("alphaZ_c", c.value().into()),
            ])))
        }
        Command::GroundState { range } => {
            let points = range.couplings().map_err(Failure::Usage)?.points();
            let candidates = QuantumNumbers::lowest_three();
            let rows = collect_rows(&points, |az| {
                Ok(match ground_state(coupling(az)?, &candidates, opts)? {
                    Some(q) => vec![az.into(), q.n().into(), q.l().into()],
                    None => vec![az.into(), Cell::Label("none"), Cell::Label("none")],
                })
            })?;
            let mut table = Table::new(["alphaZ", "ground_n", "ground_l"]);
            rows.into_iter().for_each(|r| table.push(r));
            Ok(Outcome::csv(table, 0))
        }
        Command::OracleCheck(state) => {
            let (q, c) = state.parse()?;
            oracle_check(q, c, opts)
        }
    }
}

fn oracle_check(q: QuantumNumbers, c: Coupling<f64>, opts: &SolverOptions<f64>) -> Result<Outcome, Failure> {
    let analytic = epsilon_if_bound(q, c, opts)?
        .map(|eps| energy_model(q, c, eps).map(|e| (eps, e)))
        .transpose()?;
    let grid = default_grid(q, c, 1.0)?;
    let numeric = match self_consistent_solve(q, &PotentialSpec::coulomb(c), &grid, &IterationOptions::default()) {
        Ok(r) => Some((r.epsilon, r.eigenstate.eigenvalue)),
        Err(Error::NoBoundState { .. } | Error::IterationDiverged { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let (rel_e, rel_eps, agreement) = match (analytic, numeric) {
        (Some((ea, wa)), Some((en, wn))) => {
            let rel_e = (wn / wa - 1.0).abs();
            let rel_eps = (en - ea).abs() / (1.0 - ea);
            (
                Some(rel_e),
                Some(rel_eps),
                rel_e < ENERGY_AGREEMENT && rel_eps < EPSILON_AGREEMENT,
            )
        }
        (None, None) => (None, None, true),
        _ => (None, None, false),
    };
    let mut out = Outcome::json(Table::record([
        ("n", Cell::from(q.n())),
        ("l", q.l().into()),
        ("alphaZ", c.value().into()),
        ("epsilon_analytic", analytic.map(|a| a.0).into()),
        ("epsilon_numeric", numeric.map(|a| a.0).into()),
        ("energy_analytic", analytic.map(|a| a.1).into()),
        ("energy_numeric", numeric.map(|a| a.1).into()),
        ("rel_diff_energy", rel_e.into()),
        ("rel_diff_epsilon", rel_eps.into()),
        ("bound_analytic", analytic.is_some().into()),
        ("bound_numeric", numeric.is_some().into()),
        ("agreement", agreement.into()),
    ]));
    out.disagreement = !agreement;
    Ok(out)
}
