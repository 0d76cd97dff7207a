//! Parameter sweeps driven by a TOML file, with CSV output flushed per row.

use std::collections::HashMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::enumerate::Method;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::metrics::{density, ComparisonReport};
use crate::pipeline::{self, DatasetSource, OracleCache, RunConfig};
use crate::ratings::RatingScale;
use crate::recommend::{evaluate_loo_with, EvalRow};
use crate::weights::{WeightConfig, WeightKind};

/// Row of the alpha sensitivity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub alpha: f64,
    #[serde(rename = "L_max")]
    pub l_max: usize,
    pub path_count: usize,
    pub edges: usize,
    pub density: f64,
}

/// CSV file created on the first row and flushed after every row, so an
/// aborted sweep keeps the rows already finished.
struct Sink<T> {
    path: PathBuf,
    writer: Option<csv::Writer<File>>,
    _row: std::marker::PhantomData<T>,
}

impl<T: Serialize> Sink<T> {
    fn new(path: PathBuf) -> Self {
        Self {
            path,
            writer: None,
            _row: std::marker::PhantomData,
        }
    }

    fn push(&mut self, row: &T) -> Result<()> {
        if self.writer.is_none() {
            self.writer = Some(csv::Writer::from_path(&self.path)?);
        }
        let w = self.writer.as_mut().expect("writer just created");
        w.serialize(row)?;
        w.flush()?;
        Ok(())
    }
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutput {
    pub comparison: Vec<ComparisonReport>,
    pub eval: Vec<EvalRow>,
    pub alpha: Vec<AlphaRow>,
}

pub const COMPARISON_CSV: &str = "comparison.csv";
pub const EVAL_CSV: &str = "eval.csv";
pub const ALPHA_CSV: &str = "alpha_density.csv";

/// Runs every configuration in order and appends its rows to
/// `comparison.csv`, `eval.csv` and `alpha_density.csv` under `out_dir`.
/// Files are only created once they receive a row.
pub fn run_sweep(runs: &[RunConfig], out_dir: &Path, cache_dir: Option<PathBuf>, exec: Exec) -> Result<SweepOutput> {
    let mut out = SweepOutput::default();
    if runs.is_empty() {
        return Ok(out);
    }
    for r in runs {
        r.validate()?;
    }
    fs::create_dir_all(out_dir)?;
    let mut comparison = Sink::new(out_dir.join(COMPARISON_CSV));
    let mut eval = Sink::new(out_dir.join(EVAL_CSV));
    let mut alpha = Sink::new(out_dir.join(ALPHA_CSV));
    let mut cache = OracleCache::new(cache_dir);
    let mut datasets: HashMap<String, Dataset> = HashMap::new();

    for cfg in runs {
        let key = format!("{:?}/{}", cfg.source, cfg.seed);
        if !datasets.contains_key(&key) {
            datasets.insert(key.clone(), cfg.source.load(cfg.seed)?);
        }
        let ds = &datasets[&key];
        log::info!("running {} l_max={} on {}", cfg.label(), cfg.l_max, cfg.dataset);

        let (theta, scoring) = pipeline::prepare(ds, cfg)?;
        let run = if cfg.method == Method::All && cfg.alpha.is_none() {
            (*cache.get(ds, &scoring, exec)?).clone()
        } else {
            pipeline::infer_with(ds, &theta, &scoring, &cfg.enum_config(exec))?
        };

        if let Some(a) = cfg.alpha {
            let edges = run.inferred.edge_count();
            let row = AlphaRow {
                alpha: a,
                l_max: cfg.l_max,
                path_count: run.path_count,
                edges,
                density: density(edges, ds.graph.node_count())?,
            };
            alpha.push(&row)?;
            out.alpha.push(row);
        } else {
            let oracle = match cfg.method {
                Method::All => None,
                _ => Some(cache.get(ds, &scoring, exec)?),
            };
            let row = pipeline::report(ds, cfg, &run, oracle.as_deref())?;
            row.check()?;
            comparison.push(&row)?;
            out.comparison.push(row);
        }

        if cfg.evaluate {
            let report = evaluate_loo_with(&run.inferred, &ds.ratings, exec)?;
            let row = EvalRow::new(&cfg.dataset, cfg.label(), &report);
            eval.push(&row)?;
            out.eval.push(row);
        }
    }
    Ok(out)
}

/// Rating scale as written in a sweep file: a preset name or `[min, max]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ScaleSpec {
    Named(String),
    Range([f64; 2]),
}

impl ScaleSpec {
    pub fn resolve(&self) -> Result<RatingScale> {
        match self {
            ScaleSpec::Named(n) => parse_scale(n),
            ScaleSpec::Range([lo, hi]) => RatingScale::new(*lo, *hi),
        }
    }
}

/// Accepts `filmtrust`, `epinions` or `min:max`.
pub fn parse_scale(s: &str) -> Result<RatingScale> {
    match s {
        "filmtrust" => Ok(RatingScale::FILMTRUST),
        "epinions" => Ok(RatingScale::EPINIONS),
        other => {
            let (lo, hi) = other
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("unknown rating scale {other:?}")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad rating scale bound {v:?}: {e}")))
            };
            RatingScale::new(num(lo)?, num(hi)?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub nodes: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_items")]
    pub items: usize,
    #[serde(default = "default_rpu")]
    pub ratings_per_user: usize,
}

fn default_m() -> usize {
    3
}
fn default_items() -> usize {
    200
}
fn default_rpu() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub name: String,
    pub trust: Option<PathBuf>,
    pub ratings: Option<PathBuf>,
    pub user_cap: Option<usize>,
    pub scale: Option<ScaleSpec>,
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default)]
    pub seed: u64,
}

impl DatasetSpec {
    /// Relative file paths are resolved against `base`.
    pub fn source(&self, base: &Path) -> Result<DatasetSource> {
        match (&self.trust, &self.ratings, &self.synthetic) {
            (Some(t), Some(r), None) => Ok(DatasetSource::Files {
                trust: base.join(t),
                ratings: base.join(r),
                user_cap: self.user_cap,
                scale: self.scale.as_ref().map(ScaleSpec::resolve).transpose()?,
            }),
            (None, None, Some(s)) => Ok(DatasetSource::Synthetic {
                nodes: s.nodes,
                m: s.m,
                items: s.items,
                ratings_per_user: s.ratings_per_user,
            }),
            _ => Err(Error::Config(format!(
                "dataset {:?} needs either trust and ratings files or a synthetic table",
                self.name
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub methods: Vec<String>,
    #[serde(default)]
    pub weights: Vec<String>,
    #[serde(default)]
    pub l_max: Vec<usize>,
    pub c_th: Option<f64>,
    pub q: Option<f64>,
    pub epsilon: Option<f64>,
    pub heavy_min_count: Option<usize>,
    pub cold_max_count: Option<usize>,
    #[serde(default)]
    pub evaluate: bool,
    pub max_paths: Option<usize>,
    /// Alpha values for the H1 indegree sensitivity sweep.
    #[serde(default)]
    pub alpha: Vec<f64>,
    pub alpha_l_max: Option<usize>,
}

/// Contents of a sweep file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub out_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub datasets: Vec<DatasetSpec>,
    pub grid: GridSpec,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    /// Expands the grid: per dataset and `l_max`, each weight kind, each
    /// method; then the alpha runs.
    pub fn expand(&self, base: &Path) -> Result<Vec<RunConfig>> {
        let g = &self.grid;
        let methods = g
            .methods
            .iter()
            .map(|m| m.parse::<Method>())
            .collect::<Result<Vec<_>>>()?;
        let kinds = g
            .weights
            .iter()
            .map(|w| w.parse::<WeightKind>())
            .collect::<Result<Vec<_>>>()?;
        let weights = |kind| {
            let mut w = WeightConfig::new(kind);
            w.q = g.q;
            w.epsilon = g.epsilon.unwrap_or(w.epsilon);
            w.heavy_min_count = g.heavy_min_count.unwrap_or(w.heavy_min_count);
            w.cold_max_count = g.cold_max_count.unwrap_or(w.cold_max_count);
            w
        };
        let mut runs = Vec::new();
        for d in &self.datasets {
            let source = d.source(base)?;
            let base_run = |l_max, method, kind| RunConfig {
                dataset: d.name.clone(),
                source: source.clone(),
                seed: d.seed,
                l_max,
                method,
                weights: weights(kind),
                c_th: g.c_th,
                alpha: None,
                evaluate: g.evaluate,
                max_paths: g.max_paths,
            };
            for &l in &g.l_max {
                for &k in &kinds {
                    for &m in &methods {
                        runs.push(base_run(l, m, k));
                    }
                }
            }
            if !g.alpha.is_empty() {
                let l = g
                    .alpha_l_max
                    .or_else(|| g.l_max.first().copied())
                    .ok_or_else(|| Error::Config("alpha sweep needs alpha_l_max or l_max".into()))?;
                for &a in &g.alpha {
                    let mut r = base_run(l, Method::H1, WeightKind::Indegree);
                    r.alpha = Some(a);
                    r.evaluate = false;
                    runs.push(r);
                }
            }
        }
        for r in &runs {
            r.validate()?;
        }
        Ok(runs)
    }
}
