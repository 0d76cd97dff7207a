//! Seeded synthetic social graphs and ratings.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::TrustGraph;
use crate::ratings::{RatingScale, RatingTable};

/// Directed preferential-attachment graph.
///
/// Node `v` (for `v >= 1`) links to `min(m, v)` distinct earlier nodes
/// picked with probability proportional to their degree plus one; each link
/// points `v -> t` or `t -> v` with equal odds. All weights are 1.
pub fn generate_powerlaw(n: usize, m: usize, seed: u64) -> Result<TrustGraph> {
    if n < 2 || m < 1 {
        return Err(Error::Config(format!("need n >= 2 and m >= 1, got n = {n}, m = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TrustGraph::new(n);
    // every node appears once per incident edge plus once for itself
    let mut pool: Vec<usize> = vec![0];
    let mut picked: Vec<usize> = Vec::with_capacity(m);
    for v in 1..n {
        picked.clear();
        let k = m.min(v);
        while picked.len() < k {
            let t = pool[rng.random_range(0..pool.len())];
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            if rng.random_bool(0.5) {
                g.add_edge(v, t, 1.0)?;
            } else {
                g.add_edge(t, v, 1.0)?;
            }
            pool.push(t);
            pool.push(v);
        }
        pool.push(v);
    }
    Ok(g)
}

/// Ratings on a 1..5 integer scale with Zipf-like item popularity.
///
/// Each user rates between 1 and `2 * mean_per_user - 1` distinct items;
/// values come from a per-user and per-item bias plus noise, rounded.
pub fn generate_ratings(users: usize, items: usize, mean_per_user: usize, seed: u64) -> Result<RatingTable> {
    if items == 0 || mean_per_user == 0 {
        return Err(Error::Config("need items >= 1 and mean_per_user >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let popularity = WeightedIndex::new((0..items).map(|i| 1.0 / (i as f64 + 1.0)))
        .map_err(|e| Error::Config(e.to_string()))?;
    let item_bias: Vec<f64> = (0..items).map(|_| rng.random_range(-1.0..1.0)).collect();
    let scale = RatingScale::EPINIONS;
    let mut table = RatingTable::new(users, items, scale);
    let max_per_user = (2 * mean_per_user - 1).min(items);
    for u in 0..users {
        let bias = rng.random_range(-0.8..0.8);
        let want = rng.random_range(1..=max_per_user);
        let mut rated = 0;
        let mut tries = 0;
        while rated < want && tries < 20 * want {
            tries += 1;
            let i = popularity.sample(&mut rng);
            if table.rating(u, i).is_some() {
                continue;
            }
            let raw = 3.3 + bias + item_bias[i] + rng.random_range(-1.0..1.0);
            table.insert(u, i, scale.clamp(raw.round()))?;
            rated += 1;
        }
    }
    Ok(table)
}
