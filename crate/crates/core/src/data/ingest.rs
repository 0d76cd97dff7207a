use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::TrustGraph;
use crate::ratings::{RatingScale, RatingTable};

/// Trust statement `truster -> trustee`, weight defaulting to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustRecord {
    pub truster: String,
    pub trustee: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatingRecord {
    pub user: String,
    pub item: String,
    pub rating: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestOptions {
    /// Uniform random subsample of this many users before filtering.
    pub user_cap: Option<usize>,
    pub seed: u64,
    /// Declared rating scale; inferred from the data when absent.
    pub scale: Option<RatingScale>,
}

/// Filtered dataset over dense ids, with the raw id of every user and item.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub graph: TrustGraph,
    pub ratings: RatingTable,
    pub users: Vec<String>,
    pub items: Vec<String>,
}

impl Dataset {
    pub fn user_index(&self) -> HashMap<&str, usize> {
        self.users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect()
    }
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn skip(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

pub fn parse_trust(text: &str, path: &Path) -> Result<Vec<TrustRecord>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if skip(line) {
            continue;
        }
        let err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: no + 1,
            reason,
        };
        let cols: Vec<&str> = fields(line).collect();
        if cols.len() < 2 {
            return Err(err(format!("expected truster and trustee, got {line:?}")));
        }
        let weight = match cols.get(2) {
            None => 1.0,
            Some(w) => w
                .parse::<f64>()
                .map_err(|e| err(format!("bad trust weight {w:?}: {e}")))?,
        };
        if !(0.0..=1.0).contains(&weight) {
            return Err(err(format!("trust weight {weight} outside [0, 1]")));
        }
        out.push(TrustRecord {
            truster: cols[0].to_string(),
            trustee: cols[1].to_string(),
            weight,
        });
    }
    Ok(out)
}

pub fn parse_ratings(text: &str, path: &Path, scale: Option<RatingScale>) -> Result<Vec<RatingRecord>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if skip(line) {
            continue;
        }
        let err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: no + 1,
            reason,
        };
        let cols: Vec<&str> = fields(line).collect();
        if cols.len() < 3 {
            return Err(err(format!("expected user, item and rating, got {line:?}")));
        }
        let rating = cols[2]
            .parse::<f64>()
            .map_err(|e| err(format!("bad rating {:?}: {e}", cols[2])))?;
        if !rating.is_finite() || scale.is_some_and(|s| !s.contains(rating)) {
            return Err(err(format!("rating {rating} outside the declared scale")));
        }
        out.push(RatingRecord {
            user: cols[0].to_string(),
            item: cols[1].to_string(),
            rating,
        });
    }
    Ok(out)
}

/// Reads and filters a trust file and a rating file.
pub fn ingest(trust_file: &Path, rating_file: &Path, opts: &IngestOptions) -> Result<Dataset> {
    let trust = parse_trust(&fs::read_to_string(trust_file)?, trust_file)?;
    let ratings = parse_ratings(&fs::read_to_string(rating_file)?, rating_file, opts.scale)?;
    build_dataset(&trust, &ratings, opts)
}

/// Sorts ids numerically when they all parse as integers, else lexically.
pub(crate) fn sort_ids(ids: &mut [String]) {
    if ids.iter().all(|s| s.parse::<u64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<u64>().unwrap_or(0));
    } else {
        ids.sort();
    }
}

/// Applies the user subsample, then alternates "users present in both the
/// trust and the rating data" with "items rated by at least two users"
/// until neither removes anything.
pub fn build_dataset(trust: &[TrustRecord], ratings: &[RatingRecord], opts: &IngestOptions) -> Result<Dataset> {
    let mut universe: Vec<String> = trust
        .iter()
        .flat_map(|t| [t.truster.clone(), t.trustee.clone()])
        .chain(ratings.iter().map(|r| r.user.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    sort_ids(&mut universe);

    let mut users: HashSet<&str> = match opts.user_cap {
        Some(cap) if cap < universe.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            universe.choose_multiple(&mut rng, cap).map(String::as_str).collect()
        }
        _ => universe.iter().map(String::as_str).collect(),
    };
    let mut items: HashSet<&str> = ratings.iter().map(|r| r.item.as_str()).collect();

    loop {
        let in_trust: HashSet<&str> = trust
            .iter()
            .filter(|t| t.truster != t.trustee)
            .filter(|t| users.contains(t.truster.as_str()) && users.contains(t.trustee.as_str()))
            .flat_map(|t| [t.truster.as_str(), t.trustee.as_str()])
            .collect();
        let in_ratings: HashSet<&str> = ratings
            .iter()
            .filter(|r| items.contains(r.item.as_str()))
            .map(|r| r.user.as_str())
            .collect();
        let kept_users: HashSet<&str> = users
            .iter()
            .copied()
            .filter(|u| in_trust.contains(u) && in_ratings.contains(u))
            .collect();

        let mut raters: HashMap<&str, HashSet<&str>> = HashMap::new();
        for r in ratings {
            if kept_users.contains(r.user.as_str()) && items.contains(r.item.as_str()) {
                raters.entry(r.item.as_str()).or_default().insert(r.user.as_str());
            }
        }
        let kept_items: HashSet<&str> = raters
            .into_iter()
            .filter(|(_, who)| who.len() >= 2)
            .map(|(i, _)| i)
            .collect();

        let stable = kept_users.len() == users.len() && kept_items.len() == items.len();
        users = kept_users;
        items = kept_items;
        if stable {
            break;
        }
    }
    if users.is_empty() || items.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut user_ids: Vec<String> = users.iter().map(|s| s.to_string()).collect();
    sort_ids(&mut user_ids);
    let mut item_ids: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    sort_ids(&mut item_ids);
    let uidx: HashMap<&str, usize> = user_ids.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let iidx: HashMap<&str, usize> = item_ids.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();

    let mut graph = TrustGraph::new(user_ids.len());
    for t in trust {
        if let (Some(&s), Some(&d)) = (uidx.get(t.truster.as_str()), uidx.get(t.trustee.as_str())) {
            if s != d {
                graph.add_edge(s, d, t.weight)?;
            }
        }
    }

    let kept: Vec<&RatingRecord> = ratings
        .iter()
        .filter(|r| uidx.contains_key(r.user.as_str()) && iidx.contains_key(r.item.as_str()))
        .collect();
    let scale = match opts.scale {
        Some(s) => s,
        None => {
            let lo = kept.iter().map(|r| r.rating).fold(f64::INFINITY, f64::min);
            let hi = kept.iter().map(|r| r.rating).fold(f64::NEG_INFINITY, f64::max);
            RatingScale::new(lo, hi)?
        }
    };
    let mut table = RatingTable::new(user_ids.len(), item_ids.len(), scale);
    for r in kept {
        table.insert(uidx[r.user.as_str()], iidx[r.item.as_str()], r.rating)?;
    }

    log::info!(
        "ingested {} users, {} items, {} ratings, {} ties",
        user_ids.len(),
        item_ids.len(),
        table.len(),
        graph.edge_count()
    );
    Ok(Dataset {
        graph,
        ratings: table,
        users: user_ids,
        items: item_ids,
    })
}
