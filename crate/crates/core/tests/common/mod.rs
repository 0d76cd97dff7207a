//! Reference implementations for the integration tests.
//!
//! Everything here works on a dense adjacency matrix and recomputes
//! penalties, weights and scores from scratch; nothing calls into the
//! crate's traversal or scoring code.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trust_infer::TrustGraph;

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn from_graph(g: &TrustGraph) -> Self {
        let n = g.node_count();
        let mut adj = vec![vec![false; n]; n];
        for (s, d, _) in g.edges() {
            adj[s][d] = true;
        }
        Self { n, adj }
    }

    pub fn indegree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.adj[u][v]).count()
    }

    /// δ with q = 1 / l_max and ε = 0.
    pub fn delta(&self, l_max: usize) -> Vec<f64> {
        let deg: Vec<usize> = (0..self.n).map(|v| self.indegree(v)).collect();
        let max = *deg.iter().max().unwrap_or(&0) as f64;
        deg.iter().map(|&d| d as f64 / (l_max as f64 * max)).collect()
    }

    /// Hop distances from `s`.
    pub fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                if self.adj[u][v] && dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

#[derive(Clone)]
pub enum RefBenefit {
    Zero,
    Delta(Vec<f64>),
    Gamma(Vec<f64>),
}

/// Score of a path with `hops` edges through `inner`.
pub fn ref_score(hops: usize, inner: &[usize], b: &RefBenefit, l_max: usize) -> f64 {
    let l = l_max as f64;
    let base = 1.0 - (hops as f64 - 1.0) / l;
    match b {
        RefBenefit::Zero => base,
        RefBenefit::Delta(d) => base + inner.iter().map(|&v| d[v]).sum::<f64>(),
        RefBenefit::Gamma(g) => {
            let z: f64 = inner.iter().map(|&v| g[v]).sum();
            base + 1.0 / (1.0 + (-z).exp()) / l
        }
    }
}

pub struct RefResult {
    /// Best score per non-adjacent pair with a path of 2..=l_max hops.
    pub best: BTreeMap<(usize, usize), f64>,
    pub paths: usize,
}

/// Exhaustive recursion over all simple paths.
pub fn brute_force(d: &Dense, l_max: usize, b: &RefBenefit) -> RefResult {
    let mut out = RefResult {
        best: BTreeMap::new(),
        paths: 0,
    };
    for s in 0..d.n {
        let mut on_path = vec![false; d.n];
        on_path[s] = true;
        let mut path = vec![s];
        walk(d, l_max, b, &mut path, &mut on_path, &mut out);
    }
    out
}

fn walk(d: &Dense, l_max: usize, b: &RefBenefit, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut RefResult) {
    let hops = path.len() - 1;
    if hops == l_max {
        return;
    }
    let u = *path.last().unwrap();
    let s = path[0];
    for v in 0..d.n {
        if !d.adj[u][v] || on_path[v] {
            continue;
        }
        path.push(v);
        on_path[v] = true;
        if path.len() >= 3 && !d.adj[s][v] {
            out.paths += 1;
            let t = ref_score(path.len() - 1, &path[1..path.len() - 1], b, l_max);
            let e = out.best.entry((s, v)).or_insert(f64::NEG_INFINITY);
            if t > *e {
                *e = t;
            }
        }
        walk(d, l_max, b, path, on_path, out);
        on_path[v] = false;
        path.pop();
    }
}

/// Erdős–Rényi style digraph with the given expected out-degree.
pub fn random_graph(seed: u64, n: usize, mean_out: f64) -> TrustGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (mean_out / (n as f64 - 1.0)).min(1.0);
    let mut g = TrustGraph::new(n);
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                g.add_edge(s, t, rng.random_range(0.05..=1.0)).unwrap();
            }
        }
    }
    g
}

/// Parameters of the i-th graph in the seeded random family:
/// `(seed, n, mean out-degree, l_max)` with n <= 60, degree <= 5.
pub fn family(i: u64) -> (u64, usize, f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0000 + i);
    let n = rng.random_range(2..=60);
    let deg = rng.random_range(0.5..=5.0);
    let l_max = [2, 3, 4][(i % 3) as usize];
    (i, n, deg, l_max)
}

pub fn random_gamma(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a99a);
    (0..n).map(|_| rng.random_range(0.0..=4.0)).collect()
}
