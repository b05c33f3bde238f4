//! Command-line front end: `twodist analyze|embed|sweep`.
//!
//! Stdout carries exactly one JSON document on success; diagnostics go to
//! stderr. Exit codes: 0 success, 1 sweep violations, 2 bad input or
//! arguments, 3 internal inconsistency, 4 infeasible or degenerate embedding.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::edm::Configuration;
use crate::error::Error;
use crate::graphs::{classify, encode_graph6, parse_edge_list, parse_graph6, Graph, GraphClass};
use crate::linalg::Tolerances;
use crate::oracle::{invariant_sweep, verify_two_distance, VerificationReport, CONSTRUCTIVE_TOL, SWEEP_MAX_ORDER};
use crate::representations::{GraphAnalysis, ReprReport, Side};

pub const TOOL: &str = "twodist";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "twodist", version, about = "Two-distance representations of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report dim_E, dim_S, dim_J and the feasible second distances.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long)]
        pretty: bool,
    },
    /// Write point coordinates of a representation as CSV plus a JSON sidecar.
    Embed {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        /// `lower`, `upper` or a number (euclidean mode).
        #[arg(long)]
        beta: Option<String>,
        /// Endpoint (spherical mode).
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// CSV output path; the sidecar replaces the extension with `.json`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Check every invariant on all small graphs and random larger ones.
    Sweep {
        #[arg(long = "n")]
        n_max: usize,
        /// Random graphs on 7 and 8 nodes (alternating), used when n >= 7.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Edge-list file: order on the first line, then one `u v` pair per line.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Inline graph6 string.
    #[arg(long)]
    pub g6: Option<String>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_eig: Option<f64>,
    #[arg(long)]
    pub tol_psd: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Euclidean,
    Spherical,
    Jspherical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Lower,
    Upper,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Lower => Side::Lower,
            SideArg::Upper => Side::Upper,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Analysis(Error),
    #[error(transparent)]
    Embedding(Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Analysis(e) | CliError::Embedding(e) if input_error(e) => 2,
            CliError::Embedding(e) if embedding_refused(e) => 4,
            CliError::Analysis(_) | CliError::Embedding(_) | CliError::Verification(_) => 3,
        }
    }
}

fn input_error(e: &Error) -> bool {
    matches!(e, Error::Parse { .. } | Error::Graph6(_) | Error::InvalidInput(_))
}

fn embedding_refused(e: &Error) -> bool {
    matches!(
        e,
        Error::Infeasible { .. } | Error::Degenerate | Error::MissingEndpoint(_) | Error::NotSpherical
    )
}

impl TolArgs {
    fn resolve(&self) -> Result<Tolerances, CliError> {
        let d = Tolerances::default();
        let t = Tolerances {
            eig: self.tol_eig.unwrap_or(d.eig),
            psd: self.tol_psd.unwrap_or(d.psd),
            residual: self.tol_residual.unwrap_or(d.residual),
        };
        for (name, v) in [("tol-eig", t.eig), ("tol-psd", t.psd), ("tol-residual", t.residual)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Usage(format!("--{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(t)
    }
}

impl InputArgs {
    fn read(&self) -> Result<Graph, CliError> {
        let g = match (&self.edges, &self.g6) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
                parse_edge_list(&text)
            }
            (None, Some(s)) => parse_graph6(s),
            (None, None) => return Err(CliError::Usage("one of --edges or --g6 is required".into())),
        };
        let g = g.map_err(CliError::Analysis)?;
        if g.order() < 2 {
            return Err(CliError::Usage("graphs need at least 2 nodes".into()));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub graph6: Option<String>,
    pub n: usize,
    pub edges: usize,
}

impl InputEcho {
    fn of(g: &Graph) -> Self {
        InputEcho {
            graph6: encode_graph6(g).ok(),
            n: g.order(),
            edges: g.edge_count(),
        }
    }
}

/// Output of `analyze`. `report` is null for complete and null graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub tolerances: Tolerances,
    pub input: InputEcho,
    pub class: GraphClass,
    pub degenerate: bool,
    pub report: Option<ReprReport>,
}

/// JSON sidecar written next to an embedding CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDocument {
    pub tool: String,
    pub version: String,
    pub tolerances: Tolerances,
    pub input: InputEcho,
    pub mode: Mode,
    pub alpha: f64,
    pub beta: f64,
    /// Circumradius when the points lie on a sphere.
    pub radius: Option<f64>,
    pub dim: usize,
    pub csv: String,
    pub verification: VerificationReport,
}

pub fn analyze_document(g: &Graph, tol: Tolerances) -> Result<ReportDocument, CliError> {
    let degenerate = g.is_degenerate();
    let report = if degenerate {
        None
    } else {
        let ga = GraphAnalysis::new(g, tol).map_err(CliError::Analysis)?;
        Some(ga.report().map_err(CliError::Analysis)?)
    };
    Ok(ReportDocument {
        tool: TOOL.into(),
        version: VERSION.into(),
        tolerances: tol,
        input: InputEcho::of(g),
        class: classify(g),
        degenerate,
        report,
    })
}

fn parse_beta(ga: &GraphAnalysis, beta: &str) -> Result<f64, CliError> {
    match beta {
        "lower" => ga.endpoint(Side::Lower).map_err(CliError::Embedding),
        "upper" => ga.endpoint(Side::Upper).map_err(CliError::Embedding),
        s => s
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--beta must be lower, upper or a number, got {s:?}"))),
    }
}

/// The representation for `mode` with `(α, β, radius)`.
fn build_embedding(
    ga: &GraphAnalysis,
    mode: Mode,
    beta: Option<&str>,
    side: Option<SideArg>,
) -> Result<(Configuration, f64, f64, Option<f64>), CliError> {
    let emb = CliError::Embedding;
    if ga.graph.is_degenerate() {
        return Err(emb(Error::Degenerate));
    }
    match mode {
        Mode::Euclidean => {
            let beta = beta.ok_or_else(|| CliError::Usage("euclidean mode needs --beta".into()))?;
            let beta = parse_beta(ga, beta)?;
            let rep = ga.euclidean_representation(beta).map_err(emb)?;
            let radius = ga.sphere_at(beta).map_err(CliError::Analysis)?.map(|s| s.radius);
            Ok((rep.config, 1.0, beta, radius))
        }
        Mode::Spherical => {
            let side = side.ok_or_else(|| CliError::Usage("spherical mode needs --side".into()))?;
            let rep = ga.spherical_representation(side.into()).map_err(emb)?;
            let radius = ga.sphere_at(rep.beta).map_err(CliError::Analysis)?.map(|s| s.radius);
            if radius.is_none() {
                return Err(CliError::Analysis(Error::Inconsistent(
                    "endpoint passed the eigenvector test but not the rank test".into(),
                )));
            }
            Ok((rep.config, 1.0, rep.beta, radius))
        }
        Mode::Jspherical => {
            let j = ga.j_spherical().map_err(emb)?;
            Ok((j.config, 2.0, j.beta, Some(1.0)))
        }
    }
}

/// One row per node, `{:.16e}` per coordinate.
pub fn configuration_csv(config: &Configuration) -> String {
    let mut s = String::new();
    for row in config.points.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Parses coordinates written by [`configuration_csv`].
pub fn parse_configuration_csv(text: &str) -> Result<nalgebra::DMatrix<f64>, Error> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    Ok(nalgebra::DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    s.expect("report types serialize")
}

/// JSON document for stdout and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub json: String,
    pub code: i32,
}

impl From<String> for Output {
    fn from(json: String) -> Self {
        Output { json, code: 0 }
    }
}

/// Runs one command. A sweep with violations still yields its summary, with
/// exit code 1.
pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze { input, tol, pretty } => {
            let tol = tol.resolve()?;
            let g = input.read()?;
            Ok(to_json(&analyze_document(&g, tol)?, pretty).into())
        }
        Command::Embed {
            input,
            tol,
            mode,
            beta,
            side,
            out,
            pretty,
        } => {
            let tol = tol.resolve()?;
            let g = input.read()?;
            let ga = GraphAnalysis::new(&g, tol).map_err(CliError::Analysis)?;
            let (config, alpha, beta, radius) = build_embedding(&ga, mode, beta.as_deref(), side)?;
            let verification = verify_two_distance(&config, &g, alpha, beta, CONSTRUCTIVE_TOL);
            if !verification.pass {
                return Err(CliError::Verification(format!("{verification:?}")));
            }
            let doc = EmbeddingDocument {
                tool: TOOL.into(),
                version: VERSION.into(),
                tolerances: tol,
                input: InputEcho::of(&g),
                mode,
                alpha,
                beta,
                radius,
                dim: config.dim(),
                csv: out.display().to_string(),
                verification,
            };
            write_file(&out, &configuration_csv(&config))?;
            let json = to_json(&doc, pretty);
            write_file(&sidecar_path(&out), &json)?;
            Ok(json.into())
        }
        Command::Sweep {
            n_max,
            samples,
            seed,
            tol,
            out,
            pretty,
        } => {
            let tol = tol.resolve()?;
            if n_max > SWEEP_MAX_ORDER {
                return Err(CliError::Usage(format!("n_max too large: {n_max} > {SWEEP_MAX_ORDER}")));
            }
            let summary = invariant_sweep(n_max, samples, seed, tol).map_err(CliError::Analysis)?;
            let json = to_json(&summary, pretty);
            if let Some(out) = out {
                write_file(&out, &json)?;
            }
            let code = if summary.pass { 0 } else { 1 };
            Ok(Output { json, code })
        }
    }
}

/// Parses `args`, runs the command and writes to `out` / `err`. Returns the
/// process exit code.
pub fn main_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match run(cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.json);
            if o.code != 0 {
                let _ = writeln!(err, "sweep found violations");
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
