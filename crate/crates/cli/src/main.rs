//! Command-line front end: generate networks, compute centralities, compare
//! distributions, differentiate Katz centrality, and run the study suite.
//!
//! Exit codes: 0 success, 1 a check or numerical run failed, 2 usage or
//! configuration error.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use netcentral::experiments::{run_study, Overrides, StudyConfig, StudyId};
use netcentral::inequality::{compare_curves, lorenz_curve, Dominance};
use netcentral::io::{read_edge_list, read_scores, write_edge_list, write_lorenz, write_phi_scan, write_scores, ScanRow};
use netcentral::netmodel::{Model, Network, NetworkConfig};
use netcentral::spectral::{diagnostics, katz_bonacich_with_lambda1, top_eigenpair, SolverOptions};
use netcentral::statics::{derivative_report, katz_derivative_closed, LinkParam};
use netcentral::Error;

#[derive(Parser)]
#[command(name = "netcentral", version, about = "Centrality on random networks")]
struct Cli {
    /// Worker threads for parallel replications and sampling.
    #[arg(long, global = true, env = "NETCENTRAL_THREADS")]
    threads: Option<usize>,
    /// Suppress progress and summaries on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a network from a model config and write it as an edge list.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Eigenvector or Katz centrality of a model's expected matrix, a
    /// sampled network, or an edge-list file.
    Centrality {
        #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
        config: Option<PathBuf>,
        /// Edge list with header `i,j,weight`.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Sample a network from the config instead of using its expected matrix.
        #[arg(long, requires = "config")]
        sample: bool,
        #[arg(long, value_enum, default_value = "eig")]
        kind: Kind,
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Lorenz comparison of two score files; prints DOMINATES when the
    /// first is more equal than the second.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Derivative of a group's Katz centrality with respect to a link
    /// probability of a block model, computed three ways.
    Derivative {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        phi: f64,
        /// Group whose members' centrality is differentiated.
        #[arg(long, default_value_t = 0)]
        target: usize,
        /// `within`, `between`, or a group pair `i,j`.
        #[arg(long, value_parser = parse_link_param)]
        wrt: LinkParam,
        /// Also scan this many decay factors in `(0, phi]` for every group.
        #[arg(long)]
        scan: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run one study and write its JSON summary and CSV rows.
    Study {
        /// One of convergence, rate, counterexamples, spatial, kronecker,
        /// dominance, statics.
        id: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        phi: Option<f64>,
        /// Spatial grid side parameter.
        #[arg(long)]
        k: Option<usize>,
        /// Print the resolved config as TOML instead of running.
        #[arg(long)]
        print_config: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Eig,
    Katz,
}

fn parse_link_param(s: &str) -> Result<LinkParam, String> {
    match s {
        "within" => Ok(LinkParam::Within),
        "between" => Ok(LinkParam::Between),
        _ => {
            let (i, j) = s.split_once(',').ok_or("expected `within`, `between` or `i,j`")?;
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad group `{x}`: {e}"));
            Ok(LinkParam::Pair(parse(i)?, parse(j)?))
        }
    }
}

/// Failure of a run that parsed and validated: exit code 1.
#[derive(Debug)]
struct RunFailure(String);

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RunFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<RunFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. } | Error::DerivativeDisagreement { .. }) => 1,
        _ => 2,
    }
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn load_config(path: &Path, seed: Option<u64>, n: Option<usize>) -> anyhow::Result<(NetworkConfig, Model, usize)> {
    let mut cfg = NetworkConfig::load(path).map_err(anyhow::Error::from).with_context(|| format!("config {}", path.display()))?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if n.is_some() {
        cfg.n = n;
    }
    let model = cfg.model.resolve()?;
    let n = cfg.population(&model)?;
    Ok((cfg, model, n))
}

fn cmd_generate(config: &Path, out: &Path, seed: Option<u64>, n: Option<usize>) -> anyhow::Result<()> {
    let (cfg, model, n) = load_config(config, seed, n)?;
    let g = model.sample(n, cfg.seed)?;
    let mut w = create(out, "network.csv")?;
    write_edge_list(&mut w, &g)?;
    w.flush()?;
    write_json(
        out,
        "network.json",
        &json!({ "model": cfg.model, "n": n, "seed": cfg.seed, "edges": g.edges().len() }),
    )
}

struct CentralityArgs<'a> {
    config: Option<&'a Path>,
    edges: Option<&'a Path>,
    sample: bool,
    kind: Kind,
    phi: Option<f64>,
    seed: Option<u64>,
    n: Option<usize>,
    out: &'a Path,
}

fn scores_of<N: Network + ?Sized>(
    m: &N,
    kind: Kind,
    phi: Option<f64>,
    opts: &SolverOptions,
) -> anyhow::Result<(Vec<f64>, serde_json::Value)> {
    let top = top_eigenpair(m, opts.tol, opts.max_iter)?;
    match kind {
        Kind::Eig => {
            let info = json!({
                "kind": "eig",
                "lambda1": top.value,
                "residual": top.residual,
                "iterations": top.iterations,
            });
            Ok((top.vector, info))
        }
        Kind::Katz => {
            let phi = phi.ok_or_else(|| anyhow::anyhow!("--phi is required for katz centrality"))?;
            let k = katz_bonacich_with_lambda1(m, phi, top.value, opts)?;
            let info = json!({
                "kind": "katz",
                "lambda1": top.value,
                "phi": k.phi,
                "residual": k.residual,
                "terms": k.terms,
            });
            Ok((k.scores, info))
        }
    }
}

fn cmd_centrality(a: CentralityArgs<'_>) -> anyhow::Result<()> {
    let opts = SolverOptions::default();
    let (scores, groups, info) = match (a.config, a.edges) {
        (_, Some(path)) => {
            let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
            let g = read_edge_list(BufReader::new(file), a.n, 0)
                .map_err(anyhow::Error::from)
                .with_context(|| format!("edge list {}", path.display()))?;
            let (scores, info) = scores_of(&g, a.kind, a.phi, &opts)?;
            (scores, None, json!({ "source": "edges", "n": g.n(), "info": info }))
        }
        (Some(path), None) => {
            let (cfg, model, n) = load_config(path, a.seed, a.n)?;
            let expected = model.expected(n)?;
            let groups = expected.group_of().map(<[usize]>::to_vec);
            if a.sample {
                let g = model.sample(n, cfg.seed)?;
                let (scores, info) = scores_of(&g, a.kind, a.phi, &opts)?;
                (scores, groups, json!({ "source": "sample", "n": n, "seed": cfg.seed, "info": info }))
            } else {
                let (scores, info) = scores_of(&expected, a.kind, a.phi, &opts)?;
                let spectral = diagnostics(&expected, &opts)?;
                (
                    scores,
                    groups,
                    json!({ "source": "expected", "n": n, "info": info, "spectral": spectral }),
                )
            }
        }
        (None, None) => anyhow::bail!("either --config or --edges is required"),
    };
    let mut w = create(a.out, "scores.csv")?;
    write_scores(&mut w, &scores, groups.as_deref())?;
    w.flush()?;
    write_json(a.out, "diagnostics.json", &info)
}

fn read_score_file(path: &Path) -> anyhow::Result<Vec<f64>> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    read_scores(BufReader::new(file))
        .map_err(anyhow::Error::from)
        .with_context(|| format!("scores {}", path.display()))
}

fn cmd_compare(first: &Path, second: &Path, out: &Path) -> anyhow::Result<&'static str> {
    let x = read_score_file(first)?;
    let y = read_score_file(second)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        }
        .into());
    }
    let (lx, ly) = (lorenz_curve(&x)?, lorenz_curve(&y)?);
    for (name, curve) in [("lorenz_first.csv", &lx), ("lorenz_second.csv", &ly)] {
        let mut w = create(out, name)?;
        write_lorenz(&mut w, &curve.points)?;
        w.flush()?;
    }
    Ok(match compare_curves(&lx, &ly) {
        Dominance::XDominates => "DOMINATES",
        Dominance::YDominates => "DOMINATED",
        Dominance::Equal => "EQUAL",
        Dominance::Incomparable => "INCOMPARABLE",
    })
}

struct DerivativeArgs<'a> {
    config: &'a Path,
    n: Option<usize>,
    phi: f64,
    target: usize,
    wrt: LinkParam,
    scan: Option<usize>,
    out: &'a Path,
}

fn cmd_derivative(a: DerivativeArgs<'_>) -> anyhow::Result<()> {
    let (_, model, n) = load_config(a.config, None, a.n)?;
    let Model::Block(model) = model else {
        anyhow::bail!("derivatives need a block model (erdos_renyi, homophily or sbm)");
    };
    let report = derivative_report(&model, n, a.target, a.wrt, a.phi)?;
    write_json(a.out, "derivative.json", &json!({ "n": n, "report": report }))?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(points) = a.scan {
        // the report already checked feasibility at the top of the scan
        let mut rows = Vec::new();
        for k in 1..=points {
            let phi = a.phi * k as f64 / points as f64;
            for group in 0..model.groups() {
                let derivative = katz_derivative_closed(&model, n, group, a.wrt, phi)?;
                rows.push(ScanRow { phi, group, derivative });
            }
        }
        let mut w = create(a.out, "phi_scan.csv")?;
        write_phi_scan(&mut w, &rows)?;
        w.flush()?;
    }
    Ok(())
}

struct StudyArgs<'a> {
    id: &'a str,
    config: Option<&'a Path>,
    out: &'a Path,
    overrides: Overrides,
    print_config: bool,
    quiet: bool,
}

fn cmd_study(a: StudyArgs<'_>) -> anyhow::Result<()> {
    let StudyArgs {
        id,
        config,
        out,
        overrides,
        print_config,
        quiet,
    } = a;
    let id: StudyId = id.parse()?;
    let mut cfg = match config {
        Some(path) => StudyConfig::load(path)
            .map_err(anyhow::Error::from)
            .with_context(|| format!("config {}", path.display()))?,
        None => StudyConfig::default_for(id),
    };
    if cfg.id() != id {
        return Err(Error::Config(format!("config describes study `{}`, not `{id}`", cfg.id())).into());
    }
    cfg.apply(&overrides);
    cfg.validate()?;
    if print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let result = run_study(&cfg)?;
    let mut w = create(out, &format!("{id}.json"))?;
    writeln!(w, "{}", result.to_json()?)?;
    w.flush()?;
    let mut w = create(out, &format!("{id}.csv"))?;
    result.write_csv(&mut w)?;
    w.flush()?;
    if !quiet {
        for c in &result.checks {
            eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        eprintln!("{id}: {:.1}s", result.wall_clock_secs);
    }
    let failed: Vec<&str> = result.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(RunFailure(format!("{id}: failed checks {}", failed.join(", "))).into())
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    match cli.command {
        Command::Generate { config, out, seed, n } => cmd_generate(&config, &out, seed, n),
        Command::Centrality {
            config,
            edges,
            sample,
            kind,
            phi,
            seed,
            n,
            out,
        } => cmd_centrality(CentralityArgs {
            config: config.as_deref(),
            edges: edges.as_deref(),
            sample,
            kind,
            phi,
            seed,
            n,
            out: &out,
        }),
        Command::Compare { first, second, out } => {
            let verdict = cmd_compare(&first, &second, &out)?;
            println!("{verdict}");
            Ok(())
        }
        Command::Derivative {
            config,
            n,
            phi,
            target,
            wrt,
            scan,
            out,
        } => cmd_derivative(DerivativeArgs {
            config: &config,
            n,
            phi,
            target,
            wrt,
            scan,
            out: &out,
        }),
        Command::Study {
            id,
            config,
            out,
            seed,
            n,
            reps,
            phi,
            k,
            print_config,
        } => cmd_study(StudyArgs {
            id: &id,
            config: config.as_deref(),
            out: &out,
            overrides: Overrides { seed, n, reps, phi, k },
            print_config,
            quiet: cli.quiet,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
