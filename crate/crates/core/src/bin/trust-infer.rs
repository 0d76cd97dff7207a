use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use trust_infer::data::{self, Dataset};
use trust_infer::enumerate::Method;
use trust_infer::pipeline::{self, DatasetSource, OracleCache, RunConfig};
use trust_infer::recommend::{evaluate_loo_with, EvalRow};
use trust_infer::sweep::{self, SweepSpec};
use trust_infer::weights::{WeightConfig, WeightKind};
use trust_infer::Exec;

#[derive(Parser)]
#[command(name = "trust-infer", version, about = "Path-based trust inference and evaluation")]
struct Cli {
    /// Run every phase on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Filter raw trust and rating files and write them back as TSV.
    Ingest {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate paths and write the inferred graph as an edge list.
    Infer {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Edge-list output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a heuristic against exhaustive enumeration; prints CSV rows.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave-one-out rating prediction over an inferred graph.
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Use a stored edge list instead of running inference.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value = "dataset")]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a grid of configurations from a TOML file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded synthetic graph and rating table.
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 200)]
        items: usize,
        #[arg(long, default_value_t = 8)]
        ratings_per_user: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    trust: PathBuf,
    #[arg(long)]
    ratings: PathBuf,
    #[arg(long)]
    user_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `filmtrust`, `epinions` or `min:max`; inferred when absent.
    #[arg(long)]
    scale: Option<String>,
}

impl DataArgs {
    fn source(&self) -> anyhow::Result<DatasetSource> {
        Ok(DatasetSource::Files {
            trust: self.trust.clone(),
            ratings: self.ratings.clone(),
            user_cap: self.user_cap,
            scale: self.scale.as_deref().map(sweep::parse_scale).transpose()?,
        })
    }

    fn load(&self) -> anyhow::Result<Dataset> {
        Ok(self.source()?.load(self.seed)?)
    }
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, default_value = "h2")]
    method: Method,
    #[arg(long, default_value = "indeg")]
    weight: WeightKind,
    #[arg(long, default_value_t = 3)]
    lmax: usize,
    /// Cutoff scale; defaults to 1 for indeg and 10 * lmax otherwise.
    #[arg(long)]
    cth: Option<f64>,
    /// Percentile cutoff instead of the scaled mean.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = WeightConfig::DEFAULT_HEAVY_MIN)]
    heavy_min: usize,
    #[arg(long, default_value_t = WeightConfig::DEFAULT_COLD_MAX)]
    cold_max: usize,
    /// Abort once enumeration stores more paths than this.
    #[arg(long)]
    max_paths: Option<usize>,
}

impl AlgoArgs {
    fn run_config(&self, name: &str, data: &DataArgs) -> anyhow::Result<RunConfig> {
        let cfg = RunConfig {
            dataset: name.to_string(),
            source: data.source()?,
            seed: data.seed,
            l_max: self.lmax,
            method: self.method,
            weights: WeightConfig {
                kind: self.weight,
                q: self.q,
                epsilon: self.eps,
                heavy_min_count: self.heavy_min,
                cold_max_count: self.cold_max,
            },
            c_th: self.cth,
            alpha: self.alpha,
            evaluate: false,
            max_paths: self.max_paths,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn csv_rows<T: serde::Serialize>(rows: &[T], out: Option<&Path>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(output(out)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };

    match cli.cmd {
        Cmd::Ingest { data, out } => {
            let ds = data.load()?;
            data::write_dataset(&ds, &out)?;
            eprintln!(
                "{} users, {} items, {} ratings, {} ties -> {}",
                ds.users.len(),
                ds.items.len(),
                ds.ratings.len(),
                ds.graph.edge_count(),
                out.display()
            );
        }
        Cmd::Infer { data, algo, out } => {
            let cfg = algo.run_config("dataset", &data)?;
            let ds = data.load()?;
            let run = pipeline::infer(&ds, &cfg, exec)?;
            let mut w = output(out.as_deref())?;
            data::write_edge_list(&run.inferred, Some(&ds.users), &mut w)?;
            w.flush()?;
            let row = pipeline::report(&ds, &cfg, &run, None)?;
            eprintln!(
                "{}: {} paths, {} inferred edges, density {:.6}, {:.3}s",
                cfg.label(),
                row.path_count,
                run.inferred.inferred_count(),
                row.density,
                row.duration_s
            );
        }
        Cmd::Compare {
            data,
            algo,
            cache_dir,
            out,
        } => {
            if algo.method == Method::All {
                bail!("compare needs a heuristic method (h1 or h2)");
            }
            let cfg = algo.run_config("dataset", &data)?;
            let ds = data.load()?;
            let mut cache = OracleCache::new(cache_dir);
            let (oracle, row) = pipeline::compare(&ds, &cfg, &mut cache, exec)?;
            csv_rows(&[oracle, row], out.as_deref())?;
        }
        Cmd::Evaluate {
            data,
            algo,
            graph,
            name,
            out,
        } => {
            let ds = data.load()?;
            let (label, inferred) = match graph {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let ids = ds.user_index();
                    let g = data::read_edge_list(&text, &path, ds.users.len(), Some(&ids))?;
                    if g.graph().edges().filter(|&(s, d, _)| g.inferred_weight(s, d).is_none()).count()
                        != ds.graph.edge_count()
                    {
                        bail!("{} does not match the dataset's trust edges", path.display());
                    }
                    (path.display().to_string(), g)
                }
                None => {
                    let cfg = algo.run_config(&name, &data)?;
                    (cfg.label(), pipeline::infer(&ds, &cfg, exec)?.inferred)
                }
            };
            let report = evaluate_loo_with(&inferred, &ds.ratings, exec)?;
            csv_rows(&[EvalRow::new(name, label, &report)], out.as_deref())?;
        }
        Cmd::Sweep { config, out } => {
            let spec = SweepSpec::load(&config).with_context(|| format!("loading {}", config.display()))?;
            let base = config.parent().unwrap_or(Path::new("."));
            let runs = spec.expand(base)?;
            let out_dir = match (out, &spec.out_dir) {
                (Some(o), _) => o,
                (None, Some(o)) => base.join(o),
                (None, None) => PathBuf::from("results"),
            };
            let cache = spec.cache_dir.as_ref().map(|c| base.join(c));
            let res = sweep::run_sweep(&runs, &out_dir, cache, exec)?;
            eprintln!(
                "{} comparison, {} eval, {} alpha rows -> {}",
                res.comparison.len(),
                res.eval.len(),
                res.alpha.len(),
                out_dir.display()
            );
        }
        Cmd::Generate {
            nodes,
            m,
            items,
            ratings_per_user,
            seed,
            out,
        } => {
            let ds = DatasetSource::Synthetic {
                nodes,
                m,
                items,
                ratings_per_user,
            }
            .load(seed)?;
            data::write_raw(&ds.graph, &ds.ratings, &out)?;
            eprintln!("{} nodes, {} edges, {} ratings -> {}", nodes, ds.graph.edge_count(), ds.ratings.len(), out.display());
        }
    }
    Ok(())
}
