//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a solved
//! steady state contradicts the structural expectations (see
//! [`crate::steady::classify_steady_state`]).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Tolerances;
use crate::dynamics::{
    compare_processes, default_times, evolve_ctoqw, evolve_ctqw, evolve_ctrw, linear_times, InitialState, Method,
    SiteDistribution,
};
use crate::error::{Error, Result};
use crate::format::{cmatrix_from_rows, cmatrix_rows, cvector_entries, fmt_e12, fmt_g17};
use crate::graph::{Family, Graph};
use crate::lindblad::{check_span_hermitian, check_sum_identity, commutant_dimension, LindbladSet, Liouvillian};
use crate::numerics::{random_density, random_unit_vector, ComplexVector, DensityMatrix};
use crate::steady::{classify_steady_state, coherence, predict, reference_match, solve_steady_state, spectral_gap};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FALSIFIED: u8 = 2;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "ctoqw",
    version,
    about = "Continuous-time open quantum walks on graphs",
    after_help = "Vertices are 0-indexed everywhere: the first vertex of a graph is 0."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Seed for random initial states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Evolution method (default: expm up to 20 vertices, rk above).
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    #[command(flatten)]
    pub tol: TolOverrides,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TolOverrides {
    #[arg(long, global = true)]
    pub tol_hermitian: Option<f64>,
    #[arg(long, global = true)]
    pub tol_trace: Option<f64>,
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
    #[arg(long, global = true)]
    pub tol_trajectory_psd: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, global = true)]
    pub tol_mixed: Option<f64>,
    #[arg(long, global = true)]
    pub tol_definite: Option<f64>,
    #[arg(long, global = true)]
    pub tol_stochastic: Option<f64>,
    #[arg(long, global = true)]
    pub tol_degeneracy: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rk_rel: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rk_abs: Option<f64>,
    #[arg(long, global = true)]
    pub tol_residual: Option<f64>,
}

impl TolOverrides {
    pub fn resolve(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        let slots: [(&str, Option<f64>, &mut f64); 12] = [
            ("hermitian", self.tol_hermitian, &mut t.hermitian),
            ("trace", self.tol_trace, &mut t.trace),
            ("psd", self.tol_psd, &mut t.psd),
            ("trajectory-psd", self.tol_trajectory_psd, &mut t.trajectory_psd),
            ("rank", self.tol_rank, &mut t.rank),
            ("mixed", self.tol_mixed, &mut t.mixed),
            ("definite", self.tol_definite, &mut t.definite),
            ("stochastic", self.tol_stochastic, &mut t.stochastic),
            ("degeneracy", self.tol_degeneracy, &mut t.degeneracy),
            ("rk-rel", self.tol_rk_rel, &mut t.rk_rel),
            ("rk-abs", self.tol_rk_abs, &mut t.rk_abs),
            ("residual", self.tol_residual, &mut t.residual),
        ];
        for (name, value, slot) in slots {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidArgument(format!("--tol-{name} must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Expm,
    Rk,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Expm => Method::Expm,
            MethodArg::Rk => Method::RkAdaptive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessArg {
    Ctoqw,
    Ctrw,
    Ctqw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    Cycle,
    Path,
    Star,
    Complete,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Cycle => Family::Cycle,
            FamilyArg::Path => Family::Path,
            FamilyArg::Star => Family::Star,
            FamilyArg::Complete => Family::Complete,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "command")]
pub enum Command {
    /// Write the edge list of a standard graph (star size = number of edges, hub 0).
    Gen {
        #[arg(value_enum)]
        family: FamilyArg,
        size: usize,
    },
    /// Report structural properties and the predicted steady-state type.
    Check { graph: PathBuf },
    /// Solve for, certify and classify the steady state.
    Steady { graph: PathBuf },
    /// Evolve one walk and write site distributions over time.
    Evolve {
        graph: PathBuf,
        #[arg(long, value_enum)]
        process: ProcessArg,
        /// vertex:<j> | mixed | uniform | random | file:<path>
        #[arg(long, default_value = "vertex:0")]
        initial: String,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        /// Evenly spaced samples; 64 log-spaced times when omitted.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run all three walks from one vertex and tabulate site distributions.
    Compare {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: u8,
}

/// Parses `args`, runs the command and writes the output; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|outcome| {
        write_output(&cli.global.out, &outcome.text)?;
        Ok(outcome.exit_code)
    }) {
        Ok(code) => {
            if code == EXIT_FALSIFIED {
                eprintln!("error: steady state contradicts the structural expectations; see report");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Runs a parsed command and renders its output.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = cli.global.tol.resolve()?;
    let meta = Meta::new(cli, &tol);
    match &cli.command {
        Command::Gen { family, size } => cmd_gen((*family).into(), *size, &meta),
        Command::Check { graph } => cmd_check(&load_graph(graph)?, cli, &meta, &tol),
        Command::Steady { graph } => cmd_steady(&load_graph(graph)?, cli, &meta, &tol),
        Command::Evolve { graph, process, initial, t_max, samples } => {
            let g = load_graph(graph)?;
            cmd_evolve(&g, *process, initial, *t_max, *samples, cli, &meta, &tol)
        }
        Command::Compare { graph, vertex, t_max, samples } => {
            cmd_compare(&load_graph(graph)?, *vertex, *t_max, *samples, cli, &meta, &tol)
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read graph file {}: {e}", path.display())))?;
    Graph::parse_edge_list(&text)
}

/// Header embedded in every output file.
struct Meta {
    value: Value,
}

impl Meta {
    fn new(cli: &Cli, tol: &Tolerances) -> Self {
        let value = json!({
            "tool": "ctoqw",
            "version": crate::VERSION,
            "config": cli,
            "tolerances": tol,
        });
        Self { value }
    }

    fn comment_lines(&self) -> String {
        let mut out = format!("# tool: ctoqw {}\n", crate::VERSION);
        out.push_str(&format!("# config: {}\n", self.value["config"]));
        out.push_str(&format!("# tolerances: {}\n", self.value["tolerances"]));
        out
    }
}

fn to_json(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn graph_json(g: &Graph) -> Value {
    json!({
        "n": g.vertex_count(),
        "edges": g.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

fn format_or(cli: &Cli, default: OutputFormat) -> OutputFormat {
    cli.global.format.unwrap_or(default)
}

fn cmd_gen(family: Family, size: usize, meta: &Meta) -> Result<Outcome> {
    let g = Graph::generate(family, size)?;
    Ok(Outcome { text: format!("{}{}", meta.comment_lines(), g.to_edge_list()), exit_code: EXIT_OK })
}

fn cmd_check(g: &Graph, cli: &Cli, meta: &Meta, tol: &Tolerances) -> Result<Outcome> {
    let class = g.classify_with(tol);
    let (span, sum, commutant, isolated) = match LindbladSet::from_graph(g) {
        Ok(set) => {
            (Some(check_span_hermitian(&set)), Some(check_sum_identity(&set)), Some(commutant_dimension(&set)?), None)
        }
        Err(Error::IsolatedVertex(v)) => (None, None, None, Some(v)),
        Err(e) => return Err(e),
    };
    let prediction = if isolated.is_some() { crate::steady::Prediction::Unknown } else { predict(&class) };
    let body = json!({
        "meta": meta.value,
        "graph": graph_json(g),
        "degrees": g.degrees(),
        "components": g.component_count(),
        "connected": class.connected,
        "regular": class.regular,
        "doubly_stochastic_m": class.doubly_stochastic_m,
        "isolated_vertex": isolated,
        "span_hermitian": span,
        "sum_identity": sum,
        "commutant": commutant,
        "prediction": prediction,
    });
    let text = match format_or(cli, OutputFormat::Json) {
        OutputFormat::Json => to_json(&body)?,
        OutputFormat::Csv => {
            let mut out = meta.comment_lines();
            out.push_str("key,value\n");
            for key in [
                "components",
                "connected",
                "regular",
                "doubly_stochastic_m",
                "isolated_vertex",
                "span_hermitian",
                "prediction",
            ] {
                out.push_str(&format!("{key},{}\n", scalar_csv(&body[key])));
            }
            out.push_str(&format!("sum_identity_holds,{}\n", scalar_csv(&body["sum_identity"]["holds"])));
            out.push_str(&format!(
                "sum_identity_deviation,{}\n",
                body["sum_identity"]["deviation"].as_f64().map_or("".into(), fmt_g17)
            ));
            out.push_str(&format!("commutant_dimension,{}\n", scalar_csv(&body["commutant"]["dimension"])));
            out
        }
    };
    Ok(Outcome { text, exit_code: EXIT_OK })
}

fn scalar_csv(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn cmd_steady(g: &Graph, cli: &Cli, meta: &Meta, tol: &Tolerances) -> Result<Outcome> {
    let lio = Liouvillian::from_graph(g)?;
    let report = classify_steady_state(g, solve_steady_state(&lio, tol)?, tol);
    let consistent = report.consistency.as_ref().is_none_or(|c| c.consistent);
    let exit_code = if consistent { EXIT_OK } else { EXIT_FALSIFIED };

    let text = match format_or(cli, OutputFormat::Json) {
        OutputFormat::Json => {
            let body = json!({
                "meta": meta.value,
                "graph": graph_json(g),
                "report": report,
                "coherence": report.rho_inf.as_ref().map(coherence),
                "spectral_gap": spectral_gap(&lio, tol)?,
                "reference_match": reference_match(g, &report),
            });
            to_json(&body)?
        }
        OutputFormat::Csv => {
            let mut out = meta.comment_lines();
            out.push_str(&format!(
                "# kernel_dim: {}, classification: {}, consistent: {consistent}\n",
                report.kernel_dim,
                serde_json::to_value(report.classification)?.as_str().unwrap_or_default()
            ));
            out.push_str("matrix,row,col,re,im\n");
            let mut push = |label: &str, m: &crate::numerics::ComplexMatrix| {
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        out.push_str(&format!("{label},{r},{c},{},{}\n", fmt_g17(m[(r, c)].re), fmt_g17(m[(r, c)].im)));
                    }
                }
            };
            match &report.rho_inf {
                Some(rho) => push("rho_inf", rho.matrix()),
                None => {
                    for (i, b) in report.kernel_basis.iter().enumerate() {
                        push(&format!("kernel_{i}"), b);
                    }
                }
            }
            out
        }
    };
    Ok(Outcome { text, exit_code })
}

/// Parses an initial-state argument: `vertex:<j>`, `mixed`, `uniform`,
/// `random` or `file:<path>`.
pub fn parse_initial(arg: &str, process: ProcessArg, n: usize, seed: u64) -> Result<InitialState> {
    if let Some(j) = arg.strip_prefix("vertex:") {
        let j: usize =
            j.parse().map_err(|_| Error::InvalidArgument(format!("invalid vertex in initial state '{arg}'")))?;
        return Ok(InitialState::Vertex(j));
    }
    if let Some(path) = arg.strip_prefix("file:") {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read initial state {path}: {e}")))?;
        return initial_from_json(&serde_json::from_str(&text)?);
    }
    match arg {
        "mixed" => Ok(InitialState::UniformMixed),
        "uniform" => Ok(InitialState::UniformSuperposition),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(match process {
                ProcessArg::Ctoqw => InitialState::Density(random_density(n, &mut rng)),
                ProcessArg::Ctqw => InitialState::Amplitude(random_unit_vector(n, &mut rng)),
                ProcessArg::Ctrw => {
                    let psi = random_unit_vector(n, &mut rng);
                    InitialState::Probability(DVector::from_iterator(n, psi.iter().map(|z| z.norm_sqr())))
                }
            })
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown initial state '{other}' (expected vertex:<j>, mixed, uniform, random or file:<path>)"
        ))),
    }
}

/// File initial states: a matrix of `[re, im]` pairs (density matrix), a
/// list of `[re, im]` pairs (amplitudes) or a list of numbers (probabilities).
fn initial_from_json(v: &Value) -> Result<InitialState> {
    let bad = || Error::InvalidArgument("unrecognized initial-state JSON shape".into());
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.iter().all(Value::is_number) {
        let p: Vec<f64> = arr.iter().filter_map(Value::as_f64).collect();
        return Ok(InitialState::Probability(DVector::from_vec(p)));
    }
    if let Ok(pairs) = serde_json::from_value::<Vec<[f64; 2]>>(v.clone()) {
        let psi = ComplexVector::from_iterator(pairs.len(), pairs.iter().map(|p| crate::numerics::c(p[0], p[1])));
        return Ok(InitialState::Amplitude(psi));
    }
    if let Ok(rows) = serde_json::from_value::<Vec<Vec<[f64; 2]>>>(v.clone()) {
        let m = cmatrix_from_rows(&rows).map_err(Error::InvalidArgument)?;
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        return Ok(InitialState::Density(DensityMatrix::new_unchecked(m)));
    }
    Err(bad())
}

fn sample_times(t_max: f64, samples: Option<usize>) -> Result<Vec<f64>> {
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("--t-max must be finite and >= 0, got {t_max}")));
    }
    Ok(match samples {
        Some(0) => return Err(Error::InvalidArgument("--samples must be positive".into())),
        Some(s) => linear_times(t_max, s),
        None => default_times(t_max),
    })
}

fn distribution_csv(header: &str, rows: impl Iterator<Item = (f64, Vec<f64>)>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (t, dist) in rows {
        let mut cells = vec![fmt_e12(t)];
        cells.extend(dist.into_iter().map(fmt_e12));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn site_header(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|j| format!("{prefix}{j}")).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    g: &Graph,
    process: ProcessArg,
    initial: &str,
    t_max: f64,
    samples: Option<usize>,
    cli: &Cli,
    meta: &Meta,
    tol: &Tolerances,
) -> Result<Outcome> {
    let n = g.vertex_count();
    let times = sample_times(t_max, samples)?;
    let init = parse_initial(initial, process, n, cli.global.seed)?;
    let method = cli.global.method.map(Method::from).unwrap_or_else(|| Method::default_for(n));
    let format = format_or(cli, OutputFormat::Csv);

    let (rows, states): (Vec<(f64, Vec<f64>)>, Value) = match process {
        ProcessArg::Ctoqw => {
            let lio = Liouvillian::from_graph(g)?;
            let rho0 = init.to_density(n, tol)?;
            let traj = evolve_ctoqw(&lio, &rho0, &times, method, tol)?;
            let states = traj.states.iter().map(|r| json!(cmatrix_rows(r.matrix()))).collect();
            (traj.times.iter().copied().zip(traj.states.iter().map(|s| s.site_distribution())).collect(), states)
        }
        ProcessArg::Ctrw => {
            let p0 = init.to_probability(n, tol)?;
            let traj = evolve_ctrw(g, &p0, &times, tol)?;
            let states = traj.states.iter().map(|p| json!(p.iter().collect::<Vec<_>>())).collect();
            (traj.times.iter().copied().zip(traj.states.iter().map(|s| s.site_distribution())).collect(), states)
        }
        ProcessArg::Ctqw => {
            let psi0 = init.to_amplitude(n, tol)?;
            let traj = evolve_ctqw(g, &psi0, &times, tol)?;
            let states = traj.states.iter().map(|p| json!(cvector_entries(p))).collect();
            (traj.times.iter().copied().zip(traj.states.iter().map(|s| s.site_distribution())).collect(), states)
        }
    };

    let text = match format {
        OutputFormat::Csv => {
            let mut header = vec!["time".to_string()];
            header.extend(site_header("p", n));
            format!("{}{}", meta.comment_lines(), distribution_csv(&header.join(","), rows.into_iter()))
        }
        OutputFormat::Json => to_json(&json!({
            "meta": meta.value,
            "graph": graph_json(g),
            "process": process,
            "method": method,
            "times": times,
            "distributions": rows.iter().map(|(_, d)| d.clone()).collect::<Vec<_>>(),
            "states": states,
        }))?,
    };
    Ok(Outcome { text, exit_code: EXIT_OK })
}

fn cmd_compare(
    g: &Graph,
    vertex: usize,
    t_max: f64,
    samples: usize,
    cli: &Cli,
    meta: &Meta,
    tol: &Tolerances,
) -> Result<Outcome> {
    let n = g.vertex_count();
    if vertex >= n {
        return Err(Error::InvalidArgument(format!("vertex {vertex} outside 0..{n}")));
    }
    let method = cli.global.method.map(Method::from).unwrap_or_else(|| Method::default_for(n));
    let init = InitialState::Vertex(vertex);
    let cmp = compare_processes(g, &init, t_max, samples, method, tol)?;
    let limit = &cmp.ctqw_limit;

    let text = match format_or(cli, OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut header = vec!["time".to_string()];
            header.extend(site_header("ctoqw_", n));
            header.extend(site_header("ctrw_", n));
            header.extend(site_header("ctqw_", n));
            let last = cmp.table.len() - 1;
            let rows = cmp.table.iter().enumerate().map(|(i, row)| {
                let mut d = row.ctoqw.clone();
                d.extend(&row.ctrw);
                d.extend(if i == last { limit } else { &row.ctqw });
                (row.time, d)
            });
            let mut out = meta.comment_lines();
            out.push_str("# final row: ctqw columns hold the long-time average distribution\n");
            out.push_str(&distribution_csv(&header.join(","), rows));
            out
        }
        OutputFormat::Json => to_json(&json!({
            "meta": meta.value,
            "graph": graph_json(g),
            "method": method,
            "table": cmp.table,
            "ctqw_limiting_average": limit,
        }))?,
    };
    Ok(Outcome { text, exit_code: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ctoqw").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn gen_writes_edge_list_after_header() {
        let out = execute(&parse(&["gen", "path", "3"])).unwrap();
        let body: Vec<&str> = out.text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["n 3", "0 1", "1 2"]);
        assert!(out.text.starts_with("# tool: ctoqw"));
        let g = Graph::parse_edge_list(&out.text).unwrap();
        assert_eq!(g, Graph::generate(Family::Path, 3).unwrap());
    }

    #[test]
    fn gen_cycle_2_is_rejected() {
        assert!(execute(&parse(&["gen", "cycle", "2"])).is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let cli = parse(&["--tol-mixed", "1e-6", "gen", "path", "3"]);
        assert_eq!(cli.global.tol.resolve().unwrap().mixed, 1e-6);
        let cli = parse(&["gen", "path", "3", "--tol-rank=-1"]);
        assert!(cli.global.tol.resolve().is_err());
    }

    #[test]
    fn initial_specs() {
        assert_eq!(parse_initial("vertex:2", ProcessArg::Ctoqw, 3, 0).unwrap(), InitialState::Vertex(2));
        assert_eq!(parse_initial("mixed", ProcessArg::Ctoqw, 3, 0).unwrap(), InitialState::UniformMixed);
        assert!(parse_initial("vertex:x", ProcessArg::Ctoqw, 3, 0).is_err());
        assert!(parse_initial("bogus", ProcessArg::Ctoqw, 3, 0).is_err());
        let a = parse_initial("random", ProcessArg::Ctoqw, 3, 7).unwrap();
        let b = parse_initial("random", ProcessArg::Ctoqw, 3, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn initial_json_shapes() {
        assert!(matches!(initial_from_json(&json!([0.5, 0.5])).unwrap(), InitialState::Probability(_)));
        assert!(matches!(initial_from_json(&json!([[1.0, 0.0], [0.0, 0.0]])).unwrap(), InitialState::Amplitude(_)));
        assert!(matches!(
            initial_from_json(&json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]])).unwrap(),
            InitialState::Density(_)
        ));
        assert!(initial_from_json(&json!({"a": 1})).is_err());
    }

    #[test]
    fn sample_time_rules() {
        assert_eq!(sample_times(0.0, None).unwrap(), vec![0.0]);
        assert_eq!(sample_times(0.0, Some(5)).unwrap(), vec![0.0]);
        assert_eq!(sample_times(4.0, Some(3)).unwrap(), vec![0.0, 2.0, 4.0]);
        assert_eq!(sample_times(4.0, None).unwrap().len(), 64);
        assert!(sample_times(-1.0, None).is_err());
        assert!(sample_times(1.0, Some(0)).is_err());
    }
}
