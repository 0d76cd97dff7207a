//! One configured run: load data, enumerate, build the inferred graph,
//! compare against the exhaustive oracle, evaluate recommendations.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::data::{self, Dataset, IngestOptions};
use crate::enumerate::{enumerate, Cutoff, EnumConfig, Method};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{InferredGraph, NodeWeights};
use crate::inference::{build_inferred_with, Benefit, ScoringConfig};
use crate::metrics::{density, edges_missed_pct, score_and_mean_error, ComparisonReport};
use crate::ratings::RatingScale;
use crate::weights::{node_weights, WeightConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Files {
        trust: PathBuf,
        ratings: PathBuf,
        user_cap: Option<usize>,
        scale: Option<RatingScale>,
    },
    Synthetic {
        nodes: usize,
        m: usize,
        items: usize,
        ratings_per_user: usize,
    },
}

impl DatasetSource {
    /// Loads the dataset; synthetic sources derive graph and ratings from `seed`.
    pub fn load(&self, seed: u64) -> Result<Dataset> {
        match self {
            DatasetSource::Files {
                trust,
                ratings,
                user_cap,
                scale,
            } => data::ingest(
                trust,
                ratings,
                &IngestOptions {
                    user_cap: *user_cap,
                    seed,
                    scale: *scale,
                },
            ),
            DatasetSource::Synthetic {
                nodes,
                m,
                items,
                ratings_per_user,
            } => {
                let graph = data::generate_powerlaw(*nodes, *m, seed)?;
                let ratings = data::generate_ratings(*nodes, *items, *ratings_per_user, seed ^ 0x5eed)?;
                Ok(Dataset {
                    graph,
                    ratings,
                    users: (0..*nodes).map(|i| i.to_string()).collect(),
                    items: (0..*items).map(|i| i.to_string()).collect(),
                })
            }
        }
    }
}

/// Full configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset: String,
    pub source: DatasetSource,
    pub seed: u64,
    pub l_max: usize,
    pub method: Method,
    pub weights: WeightConfig,
    /// Cutoff scale; defaults per weight kind.
    pub c_th: Option<f64>,
    /// Switches the cutoff to the alpha percentile.
    pub alpha: Option<f64>,
    pub evaluate: bool,
    pub max_paths: Option<usize>,
}

impl RunConfig {
    pub fn cutoff(&self) -> Cutoff {
        match self.alpha {
            Some(alpha) => Cutoff::AlphaPercentile { alpha },
            None => Cutoff::MeanScaled {
                c_th: self.c_th.unwrap_or_else(|| self.weights.kind.default_cth(self.l_max)),
            },
        }
    }

    pub fn enum_config(&self, exec: Exec) -> EnumConfig {
        EnumConfig {
            l_max: self.l_max,
            method: self.method,
            cutoff: self.cutoff(),
            exec,
            max_paths: self.max_paths,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.weights.validate(self.l_max)?;
        self.enum_config(Exec::Sequential).validate()
    }

    /// Label such as `h1-indeg` or `all-gamma`.
    pub fn label(&self) -> String {
        match self.alpha {
            Some(a) => format!("{}-{}-alpha{a}", self.method, self.weights.kind),
            None => format!("{}-{}", self.method, self.weights.kind),
        }
    }
}

/// Result of enumeration plus graph construction.
#[derive(Debug, Clone)]
pub struct Inference {
    pub path_count: usize,
    pub inferred: InferredGraph,
    pub duration: Duration,
}

/// Threshold weights and scoring for `cfg` on `ds`.
pub fn prepare(ds: &Dataset, cfg: &RunConfig) -> Result<(NodeWeights, ScoringConfig)> {
    cfg.validate()?;
    let theta = node_weights(&ds.graph, &ds.ratings, &cfg.weights, cfg.l_max)?;
    let scoring = ScoringConfig::for_weights(&ds.graph, &ds.ratings, &cfg.weights, cfg.l_max)?;
    Ok((theta, scoring))
}

/// Enumerates with `enum_cfg` and builds the inferred graph, timing both.
pub fn infer_with(
    ds: &Dataset,
    theta: &NodeWeights,
    scoring: &ScoringConfig,
    enum_cfg: &EnumConfig,
) -> Result<Inference> {
    let start = Instant::now();
    let index = enumerate(&ds.graph, theta, enum_cfg)?;
    let inferred = build_inferred_with(&ds.graph, &index, scoring, enum_cfg.exec)?;
    Ok(Inference {
        path_count: index.path_count(),
        inferred,
        duration: start.elapsed(),
    })
}

pub fn infer(ds: &Dataset, cfg: &RunConfig, exec: Exec) -> Result<Inference> {
    let (theta, scoring) = prepare(ds, cfg)?;
    infer_with(ds, &theta, &scoring, &cfg.enum_config(exec))
}

/// Report row for `run`; comparison columns are filled when `oracle` is given.
pub fn report(
    ds: &Dataset,
    cfg: &RunConfig,
    run: &Inference,
    oracle: Option<&Inference>,
) -> Result<ComparisonReport> {
    let n = ds.graph.node_count();
    let edges = run.inferred.edge_count();
    let (missed, score, err) = match oracle {
        Some(o) => {
            let s = score_and_mean_error(&o.inferred, &run.inferred)?;
            (
                Some(edges_missed_pct(o.inferred.edge_count(), edges)),
                Some(s.score_pct),
                Some(s.mean_error),
            )
        }
        None => (None, None, None),
    };
    Ok(ComparisonReport {
        method: cfg.method.label().to_string(),
        weight: cfg.weights.kind.label().to_string(),
        l_max: cfg.l_max,
        duration_s: run.duration.as_secs_f64(),
        path_count: run.path_count,
        edges,
        density: density(edges, n)?,
        edges_missed_pct: missed,
        score_pct: score,
        mean_error: err,
    })
}

/// Exhaustive-enumeration results, memoized in memory and optionally on disk.
///
/// The key hashes the graph, `l_max` and the benefit weights, which fully
/// determine the oracle's inferred graph.
#[derive(Debug, Default)]
pub struct OracleCache {
    dir: Option<PathBuf>,
    mem: HashMap<String, Arc<Inference>>,
}

impl OracleCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            mem: HashMap::new(),
        }
    }

    fn key(ds: &Dataset, scoring: &ScoringConfig) -> String {
        let mut h = Sha256::new();
        h.update((ds.graph.node_count() as u64).to_le_bytes());
        for (s, d, w) in ds.graph.edges() {
            h.update((s as u64).to_le_bytes());
            h.update((d as u64).to_le_bytes());
            h.update(w.to_bits().to_le_bytes());
        }
        h.update((scoring.l_max as u64).to_le_bytes());
        let (tag, weights): (u8, &[f64]) = match &scoring.benefit {
            Benefit::DeltaSum(w) => (1, w.as_slice()),
            Benefit::GammaSigmoid(w) => (2, w.as_slice()),
            Benefit::Zero => (0, &[]),
        };
        h.update([tag]);
        for w in weights {
            h.update(w.to_bits().to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Returns the oracle for `scoring`, computing it on first request.
    pub fn get(&mut self, ds: &Dataset, scoring: &ScoringConfig, exec: Exec) -> Result<Arc<Inference>> {
        let key = Self::key(ds, scoring);
        if let Some(hit) = self.mem.get(&key) {
            return Ok(hit.clone());
        }
        if let Some(found) = self.load(&key, ds.graph.node_count())? {
            let found = Arc::new(found);
            self.mem.insert(key, found.clone());
            return Ok(found);
        }
        let theta = NodeWeights::zeros(ds.graph.node_count());
        let run = infer_with(ds, &theta, scoring, &EnumConfig::all(scoring.l_max).with_exec(exec))?;
        self.store(&key, &run)?;
        let run = Arc::new(run);
        self.mem.insert(key, run.clone());
        Ok(run)
    }

    fn file(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("oracle-{key}.tsv")))
    }

    fn load(&self, key: &str, n: usize) -> Result<Option<Inference>> {
        let Some(path) = self.file(key) else {
            return Ok(None);
        };
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let (header, body) = text.split_once('\n').unwrap_or((&text, ""));
        let bad = |reason: &str| Error::Parse {
            path: path.clone(),
            line: 1,
            reason: reason.into(),
        };
        let mut path_count = None;
        let mut duration = None;
        for field in header.trim_start_matches('#').split_whitespace() {
            match field.split_once('=') {
                Some(("path_count", v)) => path_count = v.parse::<usize>().ok(),
                Some(("duration_s", v)) => duration = v.parse::<f64>().ok(),
                _ => {}
            }
        }
        let (Some(path_count), Some(duration)) = (path_count, duration) else {
            return Err(bad("missing oracle cache header"));
        };
        let inferred = data::read_edge_list(body, &path, n, None)?;
        log::info!("loaded cached oracle {}", path.display());
        Ok(Some(Inference {
            path_count,
            inferred,
            duration: Duration::from_secs_f64(duration),
        }))
    }

    fn store(&self, key: &str, run: &Inference) -> Result<()> {
        let Some(path) = self.file(key) else {
            return Ok(());
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut buf = format!(
            "# path_count={} duration_s={}\n",
            run.path_count,
            run.duration.as_secs_f64()
        )
        .into_bytes();
        data::write_edge_list(&run.inferred, None, &mut buf)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, buf)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Runs the exhaustive oracle and `cfg`'s method; rows for both.
pub fn compare(
    ds: &Dataset,
    cfg: &RunConfig,
    cache: &mut OracleCache,
    exec: Exec,
) -> Result<(ComparisonReport, ComparisonReport)> {
    let (theta, scoring) = prepare(ds, cfg)?;
    let oracle = cache.get(ds, &scoring, exec)?;
    let all_cfg = RunConfig {
        method: Method::All,
        ..cfg.clone()
    };
    let oracle_row = report(ds, &all_cfg, &oracle, None)?;
    let run = infer_with(ds, &theta, &scoring, &cfg.enum_config(exec))?;
    let row = report(ds, cfg, &run, Some(&oracle))?;
    Ok((oracle_row, row))
}
