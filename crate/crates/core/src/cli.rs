//! Command-line front end. Every subcommand is deterministic in its inputs and seed.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classical::{
    boxcar_window, dft, dominant_bins, dstft, piecewise_cosine, spectrogram,
};
use crate::error::{Error, Result};
use crate::gabor::{gstft, inverse_gstft, tightness_sweep, validate_grid};
use crate::graph::{
    complete_graph, hypercube_graph, petersen_graph, random_regular_graph, ring_graph,
    shrikhande_graph, Graph,
};
use crate::heat::heat_kernel;
use crate::io::{
    fmt_real, metadata_line, read_gstft_csv, read_signal_csv, write_atomic,
    write_decomposition_csv, write_frame_reports_csv, write_gamma_trajectories_csv,
    write_gstft_csv, write_heat_csv, write_real_matrix_csv, write_signal_csv,
};
use crate::spectral::{decompose_graph, Signal, SpectralDecomposition};

pub const DEFAULT_T_GRID: &str = "0:10:0.1";

#[derive(Debug, Parser)]
#[command(name = "gstft", version, about = "Graph short-time Fourier transform toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as JSON.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Laplacian eigendecomposition; prints the Fiedler value.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Heat kernel matrix at time t.
    Heat {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Forward transform of a signal file.
    Gstft {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        t: f64,
        /// Signal CSV, one `re,im` (or `re`) per line.
        #[arg(long)]
        signal: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invert a coefficient file back to a signal.
    Reconstruct {
        #[command(flatten)]
        graph: GraphArgs,
        /// Must agree with the `t` recorded in the coefficient file.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        coeffs: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Frame bounds over a time grid, plus per-vertex γ trajectories.
    FrameReport {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        time: TimeArgs,
        /// Companion file for γ_j(t); defaults to `<out>.gammas.csv`.
        #[arg(long)]
        gammas_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gap decay of random regular graphs over a time grid.
    SweepDecay {
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Comma-separated degrees.
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5, 7])]
        k: Vec<usize>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_values_t = [42u64])]
        seeds: Vec<u64>,
        #[arg(long, default_value = DEFAULT_T_GRID)]
        t_grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spectrogram |V_g f|² and DFT power |f̂|² of a signal.
    Spectrogram {
        /// Signal CSV; defaults to the built-in piecewise cosine.
        #[arg(long)]
        signal: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Frequency bins of the built-in signal before and after the midpoint.
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 32])]
        bins: Vec<usize>,
        #[arg(long, value_enum, default_value_t = WindowKind::Boxcar)]
        window: WindowKind,
        #[arg(long, default_value_t = 32)]
        width: usize,
        /// Where to write |f̂|²; defaults to `<out>.dft.csv`.
        #[arg(long)]
        dft_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print the built-in piecewise-cosine test signal.
    Signal {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 32])]
        bins: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ring,
    Complete,
    Hypercube,
    Petersen,
    Shrikhande,
    RandomRegular,
    FromEdgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowKind {
    Delta,
    Boxcar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list text file for `from-edgelist`.
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph JSON (or edge-list text) file.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    #[arg(long, conflicts_with = "t_grid")]
    pub t: Option<f64>,
    /// `start:stop:step`, inclusive of `stop`.
    #[arg(long)]
    pub t_grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn require<T>(v: Option<T>, what: &str, family: Family) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{what} is required for {family:?}")))
}

pub fn build_family(
    family: Family,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<u32>,
    seed: u64,
    edges: Option<&Path>,
) -> Result<Graph> {
    match family {
        Family::Ring => ring_graph(require(n, "n", family)?),
        Family::Complete => complete_graph(require(n, "n", family)?),
        Family::Hypercube => hypercube_graph(require(d, "d", family)?),
        Family::Petersen => Ok(petersen_graph()),
        Family::Shrikhande => Ok(shrikhande_graph()),
        Family::RandomRegular => {
            random_regular_graph(require(n, "n", family)?, require(k, "k", family)?, seed)
        }
        Family::FromEdgelist => {
            let path = require(edges, "edges", family)?;
            Graph::from_edge_list_text(&fs::read_to_string(path)?, n)
        }
    }
}

/// JSON when the content starts with `{`, edge-list text otherwise.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Graph::from_json(&text)
    } else {
        Graph::from_edge_list_text(&text, None)
    }
}

impl GraphArgs {
    pub fn load(&self) -> Result<Graph> {
        match (&self.graph, self.family) {
            (Some(path), None) => read_graph_file(path),
            (None, Some(f)) => build_family(f, self.n, self.k, self.d, self.seed, self.edges.as_deref()),
            _ => Err(Error::InvalidParameter(
                "exactly one of --graph or --family is required".into(),
            )),
        }
    }
}

/// Parses `start:stop:step` into an ascending grid including `stop` (within rounding).
pub fn parse_t_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(Error::Parse(format!("time grid {spec:?} is not start:stop:step")));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid grid value {s:?}")))
    };
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    let valid = a.is_finite() && b.is_finite() && step.is_finite() && step > 0.0 && b >= a;
    if !valid {
        return Err(Error::InvalidParameter(format!(
            "time grid {spec:?} needs start <= stop and step > 0"
        )));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| a + i as f64 * step).collect();
    validate_grid(&grid)?;
    Ok(grid)
}

impl TimeArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        match (self.t, &self.t_grid) {
            (Some(t), None) => {
                validate_grid(&[t])?;
                Ok(vec![t])
            }
            (None, Some(spec)) => parse_t_grid(spec),
            (None, None) => parse_t_grid(DEFAULT_T_GRID),
            _ => Err(Error::InvalidParameter("use either --t or --t-grid".into())),
        }
    }
}

fn emit(out: &OutArgs, contents: &str) -> Result<()> {
    match &out.out {
        Some(path) => write_atomic(path, contents),
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn companion(out: &OutArgs, explicit: &Option<PathBuf>, suffix: &str) -> Option<PathBuf> {
    explicit.clone().or_else(|| {
        out.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        })
    })
}

fn to_json(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

fn decompose(g: &Graph) -> Result<SpectralDecomposition<f64>> {
    decompose_graph::<f64>(g)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { family, out } => {
            let g = build_family(
                family.family,
                family.n,
                family.k,
                family.d,
                family.seed,
                family.edges.as_deref(),
            )?;
            let mut text = g.to_json();
            text.push('\n');
            emit(&out, &text)
        }
        Command::Spectrum { graph, out } => {
            let g = graph.load()?;
            let dec = decompose(&g)?;
            let text = match out.format {
                Format::Csv => write_decomposition_csv(&dec),
                Format::Json => to_json(json!({
                    "graph": g.content_hash(),
                    "n": g.n(),
                    "eigenvalues": dec.eigenvalues().to_vec(),
                    "eigenvectors": dec.eigenvectors().columns().into_iter().map(|c| c.to_vec()).collect::<Vec<_>>(),
                    "fiedler_value": dec.fiedler_value(),
                })),
            };
            emit(&out, &text)?;
            let fiedler = dec.fiedler_value().map_or("none".to_string(), fmt_real);
            println!("fiedler_value={fiedler}");
            Ok(())
        }
        Command::Heat { graph, t, out } => {
            let g = graph.load()?;
            let hk = heat_kernel(&decompose(&g)?, t)?;
            let text = match out.format {
                Format::Csv => write_heat_csv(&hk),
                Format::Json => to_json(json!({
                    "graph": g.content_hash(),
                    "t": t,
                    "matrix": hk.matrix().rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                })),
            };
            emit(&out, &text)
        }
        Command::Gstft {
            graph,
            t,
            signal,
            out,
        } => {
            let g = graph.load()?;
            let dec = decompose(&g)?;
            let hk = heat_kernel(&dec, t)?;
            let f = read_signal_csv(&fs::read_to_string(signal)?)?;
            let coeffs = gstft(&dec, &hk, &f)?;
            let text = match out.format {
                Format::Csv => write_gstft_csv(&coeffs, Some(&g.content_hash())),
                Format::Json => to_json(json!({
                    "graph": g.content_hash(),
                    "t": t,
                    "re": coeffs.matrix().rows().into_iter().map(|r| r.iter().map(|z| z.re).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "im": coeffs.matrix().rows().into_iter().map(|r| r.iter().map(|z| z.im).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
            };
            emit(&out, &text)
        }
        Command::Reconstruct {
            graph,
            t,
            coeffs,
            out,
        } => {
            let g = graph.load()?;
            let (coeffs, meta) = read_gstft_csv(&fs::read_to_string(coeffs)?)?;
            if let Some(t) = t {
                if (t - coeffs.t()).abs() > 1e-12 * t.abs().max(1.0) {
                    return Err(Error::TimeMismatch {
                        expected: t,
                        found: coeffs.t(),
                    });
                }
            }
            if let Some(hash) = meta.get("graph") {
                if *hash != g.content_hash() {
                    return Err(Error::InvalidParameter(format!(
                        "coefficients were computed on graph {hash}, not {}",
                        g.content_hash()
                    )));
                }
            }
            let dec = decompose(&g)?;
            let hk = heat_kernel(&dec, coeffs.t())?;
            let f = inverse_gstft(&dec, &hk, &coeffs)?;
            let text = match out.format {
                Format::Csv => write_signal_csv(&f),
                Format::Json => to_json(json!({
                    "graph": g.content_hash(),
                    "t": coeffs.t(),
                    "re": f.values().iter().map(|z| z.re).collect::<Vec<_>>(),
                    "im": f.values().iter().map(|z| z.im).collect::<Vec<_>>(),
                })),
            };
            emit(&out, &text)
        }
        Command::FrameReport {
            graph,
            time,
            gammas_out,
            out,
        } => {
            let g = graph.load()?;
            let grid = time.grid()?;
            let sweep = tightness_sweep(&decompose(&g)?, &grid)?;
            let text = match out.format {
                Format::Csv => {
                    let mut s = metadata_line(&[("graph", g.content_hash()), ("n", g.n().to_string())]);
                    s.push_str(&write_frame_reports_csv(&sweep.reports));
                    s
                }
                Format::Json => to_json(json!({
                    "graph": g.content_hash(),
                    "fiedler_value": sweep.fiedler_value,
                    "rows": sweep.reports.iter().map(|r| json!({
                        "t": r.t, "A": r.bound_a, "B": r.bound_b, "gap": r.gap,
                        "ratio": r.ratio, "tight": r.tight,
                    })).collect::<Vec<_>>(),
                })),
            };
            emit(&out, &text)?;
            if let Some(path) = companion(&out, &gammas_out, ".gammas.csv") {
                write_atomic(&path, &write_gamma_trajectories_csv(&sweep.reports))?;
            }
            Ok(())
        }
        Command::SweepDecay {
            n,
            k,
            seeds,
            t_grid,
            out,
        } => {
            if k.is_empty() {
                return Err(Error::InvalidParameter("--k list is empty".into()));
            }
            if seeds.is_empty() {
                return Err(Error::InvalidParameter("--seeds list is empty".into()));
            }
            let grid = parse_t_grid(&t_grid)?;
            let mut rows = Vec::new();
            let mut csv = metadata_line(&[("n", n.to_string()), ("t_grid", t_grid.clone())]);
            csv.push_str("graph,k,seed,lambda2,t,gap\n");
            for &degree in &k {
                for &seed in &seeds {
                    let g = random_regular_graph(n, degree, seed)?;
                    let sweep = tightness_sweep(&decompose(&g)?, &grid)?;
                    let hash = g.content_hash();
                    for r in &sweep.reports {
                        csv.push_str(&format!(
                            "{hash},{degree},{seed},{},{},{}\n",
                            fmt_real(sweep.fiedler_value),
                            fmt_real(r.t),
                            fmt_real(r.gap)
                        ));
                    }
                    rows.push(json!({
                        "graph": hash, "k": degree, "seed": seed,
                        "lambda2": sweep.fiedler_value,
                        "t": sweep.times(), "gap": sweep.gaps(),
                    }));
                }
            }
            let text = match out.format {
                Format::Csv => csv,
                Format::Json => to_json(json!({ "n": n, "graphs": rows })),
            };
            emit(&out, &text)
        }
        Command::Spectrogram {
            signal,
            n,
            bins,
            window,
            width,
            dft_out,
            out,
        } => {
            let f = match &signal {
                Some(path) => read_signal_csv(&fs::read_to_string(path)?)?,
                None => builtin_signal(n, &bins)?,
            };
            let len = f.len();
            let g = match window {
                WindowKind::Delta => Signal::delta(len, 0),
                WindowKind::Boxcar => boxcar_window(len, width)?,
            };
            let power = spectrogram(&dstft(&f, &g)?);
            let fhat = dft(&f)?;
            let dft_power: Vec<f64> = fhat.values().iter().map(|z| z.norm_sqr()).collect();
            let text = match out.format {
                Format::Csv => write_real_matrix_csv(&power),
                Format::Json => to_json(json!({
                    "n": len,
                    "spectrogram": power.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                    "dominant_bins": dominant_bins(&power, len / 2),
                    "dft_power": dft_power,
                })),
            };
            emit(&out, &text)?;
            if let Some(path) = companion(&out, &dft_out, ".dft.csv") {
                let mut s = String::new();
                for p in &dft_power {
                    s.push_str(&fmt_real(*p));
                    s.push('\n');
                }
                write_atomic(&path, &s)?;
            }
            Ok(())
        }
        Command::Signal { n, bins, out } => {
            let f = builtin_signal(n, &bins)?;
            emit(&out, &write_signal_csv(&f))
        }
    }
}

fn builtin_signal(n: usize, bins: &[usize]) -> Result<Signal<f64>> {
    let [first, second] = bins else {
        return Err(Error::InvalidParameter("--bins takes exactly two values".into()));
    };
    if n == 0 {
        return Err(Error::InvalidParameter("--n must be positive".into()));
    }
    Ok(Signal::from_real(&piecewise_cosine(n, *first, *second, n / 2)))
}
