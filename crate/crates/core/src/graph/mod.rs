//! Directed, edge- and vertex-weighted social graph.

mod inferred;
mod path_index;

pub use inferred::{InferredGraph, Provenance};
pub use path_index::{Path, PathIndex};

use crate::error::{Error, Result};

/// Dense node id in `0..n`.
pub type NodeId = usize;

/// Directed trust graph over dense node ids.
///
/// Out-neighbors are kept sorted ascending by id; every traversal in the
/// crate derives its order from that, so enumeration is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustGraph {
    succ: Vec<Vec<NodeId>>,
    succ_weight: Vec<Vec<f64>>,
    indeg: Vec<usize>,
    theta: Vec<f64>,
    edges: usize,
}

impl TrustGraph {
    pub fn new(n: usize) -> Self {
        Self {
            succ: vec![Vec::new(); n],
            succ_weight: vec![Vec::new(); n],
            indeg: vec![0; n],
            theta: vec![0.0; n],
            edges: 0,
        }
    }

    /// Builds a graph from `(src, dst, weight)` triples. Later duplicates
    /// overwrite earlier ones.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut g = Self::new(n);
        for (s, d, w) in edges {
            g.add_edge(s, d, w)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode {
                node,
                n: self.node_count(),
            })
        }
    }

    /// Inserts or overwrites the edge `src -> dst`.
    pub fn add_edge(&mut self, src: NodeId, dst: NodeId, weight: f64) -> Result<()> {
        self.check_node(src)?;
        self.check_node(dst)?;
        if src == dst {
            return Err(Error::SelfLoop(src));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::EdgeWeight { src, dst, weight });
        }
        match self.succ[src].binary_search(&dst) {
            Ok(pos) => self.succ_weight[src][pos] = weight,
            Err(pos) => {
                self.succ[src].insert(pos, dst);
                self.succ_weight[src].insert(pos, weight);
                self.indeg[dst] += 1;
                self.edges += 1;
            }
        }
        Ok(())
    }

    /// Removes `src -> dst`, returning its weight if it existed.
    pub fn remove_edge(&mut self, src: NodeId, dst: NodeId) -> Option<f64> {
        if src >= self.node_count() {
            return None;
        }
        let pos = self.succ[src].binary_search(&dst).ok()?;
        self.succ[src].remove(pos);
        self.indeg[dst] -= 1;
        self.edges -= 1;
        Some(self.succ_weight[src].remove(pos))
    }

    /// Out-neighbors of `u`, ascending by id.
    pub fn successors(&self, u: NodeId) -> Result<&[NodeId]> {
        self.check_node(u)?;
        Ok(&self.succ[u])
    }

    /// Unchecked variant for hot loops; panics on an out-of-range id.
    #[inline]
    pub(crate) fn succ(&self, u: NodeId) -> &[NodeId] {
        &self.succ[u]
    }

    /// Out-neighbors of `u` paired with their edge weights.
    pub fn out_edges(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.succ[u]
            .iter()
            .copied()
            .zip(self.succ_weight[u].iter().copied())
    }

    #[inline]
    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.succ
            .get(src)
            .is_some_and(|s| s.binary_search(&dst).is_ok())
    }

    pub fn weight(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        let list = self.succ.get(src)?;
        list.binary_search(&dst)
            .ok()
            .map(|pos| self.succ_weight[src][pos])
    }

    pub fn indegree(&self, u: NodeId) -> usize {
        self.indeg[u]
    }

    pub fn indegrees(&self) -> &[usize] {
        &self.indeg
    }

    pub fn max_indegree(&self) -> usize {
        self.indeg.iter().copied().max().unwrap_or(0)
    }

    /// All edges in `(src, dst, weight)` order, ascending by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.out_edges(u).map(move |(v, w)| (u, v, w)))
    }

    /// Per-node influence weight stored with the graph.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn set_theta(&mut self, weights: &NodeWeights) -> Result<()> {
        if weights.len() != self.node_count() {
            return Err(Error::UniverseMismatch {
                left: self.node_count(),
                right: weights.len(),
            });
        }
        self.theta.copy_from_slice(weights.as_slice());
        Ok(())
    }

    /// Checks every structural invariant from scratch.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        let mut indeg = vec![0usize; n];
        let mut edges = 0;
        for u in 0..n {
            let list = &self.succ[u];
            if list.len() != self.succ_weight[u].len() {
                return Err(Error::Invariant(format!("weight list of {u} out of sync")));
            }
            for (k, (&v, &w)) in list.iter().zip(&self.succ_weight[u]).enumerate() {
                if v >= n {
                    return Err(Error::UnknownNode { node: v, n });
                }
                if v == u {
                    return Err(Error::SelfLoop(u));
                }
                if k > 0 && list[k - 1] >= v {
                    return Err(Error::Invariant(format!(
                        "successors of {u} not strictly ascending"
                    )));
                }
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::EdgeWeight {
                        src: u,
                        dst: v,
                        weight: w,
                    });
                }
                indeg[v] += 1;
                edges += 1;
            }
        }
        if indeg != self.indeg {
            return Err(Error::Invariant("cached indegrees are stale".into()));
        }
        if edges != self.edges {
            return Err(Error::Invariant("cached edge count is stale".into()));
        }
        for (node, &w) in self.theta.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::NodeWeight { node, weight: w });
            }
        }
        Ok(())
    }
}

/// Influence weight per node (indegree, δ or γ).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights(Vec<f64>);

impl NodeWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (node, &w) in values.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::NodeWeight { node, weight: w });
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    #[inline]
    pub fn get(&self, node: NodeId) -> f64 {
        self.0[node]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}
