//! Command-line harness for planted-graph generation, spectral bisection,
//! EMA phase queries, parameter sweeps, and phase-diagram grids.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use specphase::dist::DegreeDistribution;
use specphase::ema::{self, PhaseQuery};
use specphase::ensembles;
use specphase::error::Error;
use specphase::graph::{Graph, PlantedKind, PlantedSpec};
use specphase::spectral::{self, LanczosConfig};
use specphase::sweep::{self, PhaseGridSpec, SweepEnsemble, PHASE_HEADER, SWEEP_HEADER};

#[derive(Parser)]
#[command(
    name = "specphase",
    about = "Spectral bisection with the modularity matrix on planted ensembles, \
             with EMA phase-diagram predictions",
    version
)]
struct Cli {
    /// Worker threads for sweeps and grids (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output path (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a planted graph and write it as an edge list.
    Gen(GenArgs),
    /// Leading modularity eigenpair and sign partition of a graph file.
    Spectral(SpectralArgs),
    /// Solve the EMA phase equations at one (distribution, Γ, θ) point.
    Ema(EmaArgs),
    /// Run a sweep described by a key = value config file.
    Sweep(SweepArgs),
    /// EMA phase label over a (structure, θ) grid.
    PhaseDiagram(PhaseDiagramArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Random c-regular ensemble with planted cross edges.
    #[arg(long, conflicts_with = "sbm")]
    regular: bool,
    /// Sparse two-block SBM (requires --cin/--cout).
    #[arg(long)]
    sbm: bool,
    #[arg(short = 'N', long = "nodes")]
    n: usize,
    /// Degree for --regular.
    #[arg(short, long)]
    c: Option<u32>,
    #[arg(long, default_value_t = 0.5)]
    p1: f64,
    /// Structure strength Γ (for --regular, and for --sbm when --cin/--cout
    /// are omitted).
    #[arg(long)]
    gamma_struct: Option<f64>,
    /// Within-block mean degree c_in (--sbm).
    #[arg(long)]
    cin: Option<f64>,
    /// Between-block mean degree c_out (--sbm).
    #[arg(long)]
    cout: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectralArgs {
    /// Edge-list file.
    graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also dump the eigenvector to this path.
    #[arg(long)]
    eigenvector: Option<PathBuf>,
}

#[derive(Args)]
struct EmaArgs {
    /// Regular distribution with this degree.
    #[arg(long, conflicts_with = "poisson")]
    regular: Option<u32>,
    /// Truncated Poisson distribution with this mean degree.
    #[arg(long)]
    poisson: Option<f64>,
    /// Tail-mass truncation for --poisson.
    #[arg(long, default_value_t = 1e-12)]
    trunc_eps: f64,
    #[arg(long)]
    gamma_struct: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.5)]
    p1: f64,
    /// Report phase-boundary thresholds instead of / alongside the solution.
    #[arg(long)]
    thresholds: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Config file: flat `key = value`, repeated keys form lists.
    spec: PathBuf,
    /// Wall-clock budget per grid cell in seconds (overrides the config).
    #[arg(long)]
    max_cell_seconds: Option<f64>,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    #[arg(long, conflicts_with = "cbar")]
    regular: Option<u32>,
    /// SBM mean degree.
    #[arg(long)]
    cbar: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    p1: f64,
    #[arg(long, default_value_t = 0.01)]
    theta_min: f64,
    #[arg(long, default_value_t = 2.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 40)]
    theta_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    diff_min: f64,
    /// c_in − c_out axis maximum (default: 2c̄, i.e. Γ = 1).
    #[arg(long)]
    diff_max: Option<f64>,
    #[arg(long, default_value_t = 30)]
    diff_steps: usize,
    /// Monte Carlo overlap samples per cell (0 disables).
    #[arg(long, default_value_t = 0)]
    mc_samples: usize,
    #[arg(long, default_value_t = 2000)]
    mc_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add the sampled-instance Cheeger lower-bound column.
    #[arg(long)]
    cheeger: bool,
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    if cli.threads > 0 {
        // ignore failure if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(cli, a),
        Cmd::Spectral(a) => cmd_spectral(cli, a),
        Cmd::Ema(a) => cmd_ema(cli, a),
        Cmd::Sweep(a) => cmd_sweep(cli, a),
        Cmd::PhaseDiagram(a) => cmd_phase_diagram(cli, a),
    }
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<(), Error> {
    let (spec, graph) = if a.regular {
        let c = a
            .c
            .ok_or_else(|| Error::Parameter("--regular requires -c".into()))?;
        let gamma = a
            .gamma_struct
            .ok_or_else(|| Error::Parameter("--regular requires --gamma-struct".into()))?;
        let spec = PlantedSpec {
            n_nodes: a.n,
            p1: a.p1,
            kind: PlantedKind::Regular { c },
            gamma_struct: gamma,
            seed: a.seed,
        };
        let g = ensembles::gen_planted_regular(&spec)?;
        (spec, g)
    } else if a.sbm {
        let (c_in, c_out, gamma) = match (a.cin, a.cout) {
            (Some(ci), Some(co)) => {
                let c_bar = (ci + co) / 2.0;
                let s = ensembles::from_cin_minus_cout(c_bar, a.p1, ci - co)?;
                (ci, co, s.gamma_struct)
            }
            _ => {
                let gamma = a.gamma_struct.ok_or_else(|| {
                    Error::Parameter("--sbm requires --cin/--cout or --gamma-struct with -c".into())
                })?;
                let c_bar = a
                    .c
                    .ok_or_else(|| Error::Parameter("--sbm with --gamma-struct requires -c".into()))?
                    as f64;
                let s = ensembles::from_gamma_struct(c_bar, a.p1, gamma)?;
                (c_bar + s.cin_minus_cout / 2.0, c_bar - s.cin_minus_cout / 2.0, gamma)
            }
        };
        let spec = PlantedSpec {
            n_nodes: a.n,
            p1: a.p1,
            kind: PlantedKind::Sbm { c_in, c_out },
            gamma_struct: gamma,
            seed: a.seed,
        };
        let g = ensembles::gen_sbm(&spec)?;
        (spec, g)
    } else {
        return Err(Error::Parameter("choose --regular or --sbm".into()));
    };

    let path = a.output.clone().or_else(|| cli.out.clone());
    match &path {
        Some(p) => graph.write_edge_list_file(p)?,
        None => graph.write_edge_list(io::stdout().lock())?,
    }
    eprintln!(
        "N={} K={} cross_edges={} seed={}",
        graph.n_nodes(),
        graph.total_degree(),
        graph.cross_edge_count().map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
        spec.seed,
    );
    Ok(())
}

fn cmd_spectral(cli: &Cli, a: &SpectralArgs) -> Result<(), Error> {
    let g = Graph::read_edge_list_file(&a.graph)?;
    let cfg = LanczosConfig { tol: a.tol, seed: a.seed, ..Default::default() };
    let out = spectral::spectral_outcome(&g, a.theta, &cfg)?;
    if let Some(p) = &a.eigenvector {
        let f = File::create(p)?;
        spectral::write_eigenvector(BufWriter::new(f), &out)?;
    }
    let doc = json!({
        "lambda1": out.lambda1,
        "residual": out.residual,
        "theta": a.theta,
        "unpartitioned": out.unpartitioned,
        "overlap": out.overlap,
        "ipr": out.ipr,
        "ones_alignment": out.ones_alignment,
        "degenerate": out.degenerate,
        "eigenvector_path": a.eigenvector.as_ref().map(|p| p.display().to_string()),
    });
    let mut w = open_out(&cli.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn cmd_ema(cli: &Cli, a: &EmaArgs) -> Result<(), Error> {
    let (dist, regular_c) = match (a.regular, a.poisson) {
        (Some(c), None) => (DegreeDistribution::regular(c)?, Some(c)),
        (None, Some(cb)) => (DegreeDistribution::poisson_truncated(cb, a.trunc_eps)?, None),
        _ => return Err(Error::Parameter("choose --regular C or --poisson CBAR".into())),
    };

    let mut doc = serde_json::Map::new();
    doc.insert("mean_degree".into(), json!(dist.mean_degree()));
    doc.insert("theta".into(), json!(a.theta));

    if let Some(gamma) = a.gamma_struct {
        let q = PhaseQuery { dist: dist.clone(), gamma_struct: gamma, theta: a.theta, p1: a.p1 };
        let sol = ema::classify_phase(&q, 1e-12)?;
        doc.insert("gamma_struct".into(), json!(gamma));
        doc.insert("phase".into(), json!(sol.phase.code().to_string()));
        doc.insert("phi".into(), json!(sol.phi));
        doc.insert("lambda1".into(), json!(sol.lambda1));
        doc.insert("a_hat".into(), json!(sol.a_hat));
        doc.insert("m_hat_sq".into(), json!(sol.m_hat_sq));
        doc.insert("omega_hat_zero".into(), json!(sol.omega_hat_zero));
        if let Some(c) = regular_c {
            if (a.p1 - 0.5).abs() < 1e-12 {
                doc.insert(
                    "predicted_overlap".into(),
                    json!(ema::predicted_overlap_regular(c, gamma, a.p1).ok()),
                );
            }
        }
    }

    if a.thresholds {
        let gamma_star = ema::detectability_threshold(&dist, 1e-12)?;
        doc.insert("gamma_star".into(), json!(gamma_star));
        doc.insert(
            "dense_approximation_gamma".into(),
            json!(ema::dense_approximation_threshold(dist.mean_degree())),
        );
        if let Some(c) = regular_c {
            let forms = ema::regular_closed_forms(c, 0.5_f64.max(1e-9), a.theta, a.p1)?;
            doc.insert("theta_max".into(), json!(forms.theta_max));
            doc.insert("gamma_un".into(), json!(forms.gamma_un));
        }
    }

    if a.gamma_struct.is_none() && !a.thresholds {
        return Err(Error::Parameter("provide --gamma-struct and/or --thresholds".into()));
    }

    let mut w = open_out(&cli.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(&serde_json::Value::Object(doc))?)?;
    Ok(())
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&a.spec)?;
    let mut spec = sweep::parse_sweep_config(&text)?;
    if let Some(b) = a.max_cell_seconds {
        spec.max_cell_seconds = b;
    }
    let records = sweep::run_sweep(&spec)?;
    let mut w = open_out(&cli.out)?;
    match cli.format {
        Format::Csv => sweep::write_sweep_csv(&mut w, &records)?,
        Format::Json => {
            // rows as objects keyed by the CSV header
            let keys: Vec<&str> = SWEEP_HEADER.split(',').collect();
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    let row = r.to_csv_row();
                    let cells: Vec<&str> = row.split(',').collect();
                    keys.iter()
                        .zip(cells)
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
    }
    Ok(())
}

fn cmd_phase_diagram(cli: &Cli, a: &PhaseDiagramArgs) -> Result<(), Error> {
    let (ensemble, c_bar) = match (a.regular, a.cbar) {
        (Some(c), None) => (SweepEnsemble::Regular { c }, c as f64),
        (None, Some(cb)) => (SweepEnsemble::Sbm { c_bar: cb }, cb),
        _ => return Err(Error::Parameter("choose --regular C or --cbar CBAR".into())),
    };
    let spec = PhaseGridSpec {
        ensemble,
        p1: a.p1,
        theta_min: a.theta_min,
        theta_max: a.theta_max,
        theta_steps: a.theta_steps,
        diff_min: a.diff_min,
        diff_max: a.diff_max.unwrap_or(2.0 * c_bar),
        diff_steps: a.diff_steps,
        mc_samples: a.mc_samples,
        mc_n: a.mc_n,
        base_seed: a.seed,
        cheeger: a.cheeger,
    };
    let cells = sweep::run_phase_grid(&spec)?;
    let mut w = open_out(&cli.out)?;
    match cli.format {
        Format::Csv => {
            if a.cheeger {
                // the dashed Cheeger line is computed on sampled instances,
                // not from an EMA value
                writeln!(w, "# cheeger_lower_bound_theta: sampled-instance bound")?;
            }
            writeln!(w, "{PHASE_HEADER}")?;
            for c in &cells {
                writeln!(w, "{}", sweep::phase_cell_csv_row(c))?;
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = cells
                .iter()
                .map(|c| {
                    json!({
                        "gamma_struct": c.gamma_struct,
                        "cin_minus_cout": c.cin_minus_cout,
                        "theta": c.theta,
                        "phase": c.phase.map(|p| p.code().to_string()),
                        "phi": c.phi,
                        "lambda1": c.phi,
                        "a_hat": c.a_hat,
                        "m_hat_sq": c.m_hat_sq,
                        "overlap_mc": c.overlap_mc,
                        "cheeger_lower_bound_theta": c.cheeger_lower_bound_theta,
                    })
                })
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
