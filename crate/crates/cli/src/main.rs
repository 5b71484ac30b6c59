mod args;
mod output;
mod suites;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use pdm_core::coeffs::TransformMatrix;
use pdm_core::massgen::{mass_class_solution, ClassConstants, MassClass, MassClassReport, XDomain};
use pdm_core::model::{
    degeneracy, energy_level, susy_state, AnalyticState, ModelParams, QuantumNumbers,
    SeparableState, SusyLabels, ZeroMode,
};
use pdm_core::operators::grid::Grid2D;
use pdm_core::operators::probes::ProbeResolution;
use pdm_core::oracle::{layer_report, pt_report, FdConfig, OracleReport, Solver, MIN_PT_GRID};
use pdm_core::report::{csv_float, csv_table, to_json};
use pdm_core::Error;

use args::{Basis, ClassArg, Cli, Command, Format, ModelArgs, OracleMode, SolverArg};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

enum Failure {
    Usage(String),
    Verification(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn params(m: &ModelArgs) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(m.q, m.k, m.v0)?)
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("grid must look like NXxNY, got {s:?}"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn state_table(grid: &Grid2D, states: &[(Option<f64>, &dyn AnalyticState)]) -> String {
    let tagged = states.iter().any(|(s, _)| s.is_some());
    let header: &[&str] = if tagged {
        &["s", "x", "y", "value"]
    } else {
        &["x", "y", "value"]
    };
    let rows = states.iter().flat_map(|(s, st)| {
        grid.points().map(move |(x, y)| {
            let mut row = Vec::with_capacity(4);
            if let Some(s) = s {
                row.push(csv_float(*s));
            }
            row.extend([csv_float(x), csv_float(y), csv_float(st.value(x, y))]);
            row
        })
    });
    csv_table(header, rows)
}

fn spectrum(model: &ModelArgs, nmax: u32, format: Format) -> Result<String, Failure> {
    let p = params(model)?;
    let levels: Vec<(u32, f64, u32)> = (0..=nmax)
        .map(|n| (n, energy_level(&p, n), degeneracy(n)))
        .collect();
    Ok(match format {
        Format::Csv => csv_table(
            &["N", "energy", "degeneracy"],
            levels
                .iter()
                .map(|&(n, e, d)| vec![n.to_string(), csv_float(e), d.to_string()]),
        ),
        Format::Json => to_json(&json!({
            "params": p,
            "levels": levels
                .iter()
                .map(|&(n, e, d)| json!({"N": n, "energy": e, "degeneracy": d}))
                .collect::<Vec<_>>(),
        }))?,
    })
}

#[allow(clippy::too_many_arguments)]
fn wavefunction(
    model: &ModelArgs,
    basis: Basis,
    n: Option<u32>,
    l: Option<u32>,
    big_n: Option<u32>,
    n0: Option<u32>,
    grid: &str,
    x_max: f64,
) -> Result<String, Failure> {
    let p = params(model)?;
    let (nx, ny) = parse_grid(grid)?;
    let grid = Grid2D::layer(&p, x_max, nx, ny)?;
    let state: Box<dyn AnalyticState> = match basis {
        Basis::Sep => {
            if big_n.is_some() || n0.is_some() {
                return Err(Failure::Usage("--N/--N0 belong to --basis susy".into()));
            }
            let (n, l) = n
                .zip(l)
                .ok_or_else(|| Failure::Usage("--basis sep needs --n and --l".into()))?;
            Box::new(SeparableState::new(&p, QuantumNumbers::new(n, l)))
        }
        Basis::Susy => {
            if n.is_some() || l.is_some() {
                return Err(Failure::Usage("--n/--l belong to --basis sep".into()));
            }
            let (big_n, n0) = big_n
                .zip(n0)
                .ok_or_else(|| Failure::Usage("--basis susy needs --N and --N0".into()))?;
            Box::new(susy_state(&p, SusyLabels::new(big_n, n0)?)?)
        }
    };
    Ok(state_table(&grid, &[(None, state.as_ref())]))
}

fn zero_modes(
    model: &ModelArgs,
    s_list: &[f64],
    grid: &str,
    x_max: f64,
) -> Result<String, Failure> {
    let p = params(model)?;
    let (nx, ny) = parse_grid(grid)?;
    let grid = Grid2D::layer(&p, x_max, nx, ny)?;
    let modes = s_list
        .iter()
        .map(|&s| ZeroMode::new(&p, s))
        .collect::<Result<Vec<_>, _>>()?;
    let tagged: Vec<(Option<f64>, &dyn AnalyticState)> = modes
        .iter()
        .map(|m| (Some(m.s), m as &dyn AnalyticState))
        .collect();
    Ok(state_table(&grid, &tagged))
}

fn basis_transform(model: &ModelArgs, big_n: u32) -> Result<String, Failure> {
    let p = params(model)?;
    let t = TransformMatrix::build(p.k, big_n)?;
    Ok(to_json(&json!({
        "level": t.level,
        "k": t.k,
        "row_labels_n0": t.n0,
        "column_labels_n_l": t.columns,
        "entries": t.entries,
        "orthogonality_residual": t.orthogonality_residual().max(t.column_orthogonality_residual()),
    }))?)
}

fn verify(
    model: &ModelArgs,
    suite: args::Suite,
    l: f64,
    plane: usize,
    line: usize,
) -> Result<(String, bool), Failure> {
    let p = params(model)?;
    let report = suites::run(suite, &p, l, ProbeResolution { plane, line })?;
    Ok((to_json(&report)?, report.pass))
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    model: &ModelArgs,
    mode: OracleMode,
    grid: Option<&str>,
    l: u32,
    count: usize,
    x_max: Option<f64>,
    solver: SolverArg,
    timings: bool,
    format: Format,
) -> Result<String, Failure> {
    let p = params(model)?;
    let mut report: OracleReport = match mode {
        OracleMode::Pt => {
            let n = match grid {
                None => 2000,
                Some(g) => g.parse().map_err(|_| {
                    Failure::Usage(format!("pt grid must be a node count, got {g:?}"))
                })?,
            };
            if n < MIN_PT_GRID {
                return Err(Failure::Usage(format!(
                    "pt grid needs at least {MIN_PT_GRID} nodes"
                )));
            }
            pt_report(&p, l, n, count)?
        }
        OracleMode::Plane => {
            let (nx, ny) = parse_grid(grid.unwrap_or("240x96"))?;
            let solver = match solver {
                SolverArg::Dense => Solver::Dense,
                SolverArg::Lanczos => Solver::Lanczos,
                SolverArg::SineModes => Solver::SineModes,
            };
            let cfg = FdConfig::new(nx, ny, x_max.unwrap_or(5.0 / p.q), count, solver)?;
            layer_report(&p, cfg)?
        }
    };
    if !timings {
        report.runtime_seconds = 0.0;
    }
    let mut meta = report.metadata_json();
    if !timings {
        meta.as_object_mut()
            .expect("object")
            .remove("runtime_seconds");
    }
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => to_json(&json!({ "metadata": meta, "rows": report.rows }))?,
    })
}

fn mass_class(
    class: ClassArg,
    constants: &[f64],
    q: Option<f64>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    points: usize,
) -> Result<String, Failure> {
    let [a, b, c, d, g] = <[f64; 5]>::try_from(constants).map_err(|_| {
        Failure::Usage(format!(
            "--constants needs five values a,b,c,d,g, got {}",
            constants.len()
        ))
    })?;
    let class = match class {
        ClassArg::Hyperbolic => MassClass::Hyperbolic,
        ClassArg::Rational => MassClass::Rational,
        ClassArg::Trigonometric => MassClass::Trigonometric,
    };
    if class == MassClass::Rational && q.is_some() {
        return Err(Failure::Usage("the rational class takes no --q".into()));
    }
    let domain = XDomain::new(
        x_min.unwrap_or(f64::NEG_INFINITY),
        x_max.unwrap_or(f64::INFINITY),
    )?;
    let sol = mass_class_solution(class, ClassConstants { a, b, c, d, g }, q, domain)?;
    // Sample a bounded window of the domain, away from its ends.
    let span = 3.0 / q.unwrap_or(1.0);
    let (lo, hi) = match (domain.x_min.is_finite(), domain.x_max.is_finite()) {
        (true, true) => (domain.x_min, domain.x_max),
        (true, false) => (domain.x_min, domain.x_min + 2.0 * span),
        (false, true) => (domain.x_max - 2.0 * span, domain.x_max),
        (false, false) => (-span, span),
    };
    let margin = 0.02 * (hi - lo);
    let pts = suites::scatter(points, (lo + margin, hi - margin), (-1.5, 1.5));
    Ok(to_json(&MassClassReport::new(&sol, &pts))?)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Spectrum {
            model,
            nmax,
            format,
            out,
        } => {
            output::emit(out.output.as_deref(), &spectrum(&model, nmax, format)?)?;
        }
        Command::Wavefunction {
            model,
            basis,
            n,
            l,
            big_n,
            n0,
            grid,
            x_max,
            out,
        } => {
            let text = wavefunction(&model, basis, n, l, big_n, n0, &grid, x_max)?;
            output::emit(out.output.as_deref(), &text)?;
        }
        Command::ZeroModes {
            model,
            s_list,
            grid,
            x_max,
            out,
        } => {
            output::emit(
                out.output.as_deref(),
                &zero_modes(&model, &s_list, &grid, x_max)?,
            )?;
        }
        Command::BasisTransform { model, big_n, out } => {
            output::emit(out.output.as_deref(), &basis_transform(&model, big_n)?)?;
        }
        Command::Verify {
            model,
            suite,
            l,
            plane_nodes,
            line_nodes,
            out,
        } => {
            let (text, pass) = verify(&model, suite, l, plane_nodes, line_nodes)?;
            // The report is the product even when a check fails.
            output::emit(out.output.as_deref(), &text)?;
            if !pass {
                return Err(Failure::Verification("at least one check failed".into()));
            }
        }
        Command::Oracle {
            model,
            mode,
            grid,
            l,
            count,
            x_max,
            solver,
            timings,
            format,
            out,
        } => {
            let text = oracle(
                &model,
                mode,
                grid.as_deref(),
                l,
                count,
                x_max,
                solver,
                timings,
                format,
            )?;
            output::emit(out.output.as_deref(), &text)?;
        }
        Command::MassClass {
            class,
            constants,
            q,
            x_min,
            x_max,
            points,
            out,
        } => {
            let text = mass_class(class, &constants, q, x_min, x_max, points)?;
            output::emit(out.output.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
