use std::collections::BTreeMap;

use super::{NodeId, TrustGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Original,
    Inferred,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Original => "original",
            Provenance::Inferred => "inferred",
        }
    }
}

/// Source graph extended with inferred edges.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredGraph {
    graph: TrustGraph,
    inferred: BTreeMap<(NodeId, NodeId), f64>,
}

impl InferredGraph {
    pub fn from_original(graph: TrustGraph) -> Self {
        Self {
            graph,
            inferred: BTreeMap::new(),
        }
    }

    /// Adds an inferred edge; the pair must not already carry an edge and
    /// the weight must lie in (0, 1].
    pub fn add_inferred(&mut self, src: NodeId, dst: NodeId, weight: f64) -> Result<()> {
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(Error::EdgeWeight { src, dst, weight });
        }
        if self.graph.has_edge(src, dst) {
            return Err(Error::Invariant(format!(
                "inferred edge {src}->{dst} would overwrite an existing edge"
            )));
        }
        self.graph.add_edge(src, dst, weight)?;
        self.inferred.insert((src, dst), weight);
        Ok(())
    }

    /// Drops an edge of either provenance.
    pub fn remove_edge(&mut self, src: NodeId, dst: NodeId) -> Option<f64> {
        self.inferred.remove(&(src, dst));
        self.graph.remove_edge(src, dst)
    }

    pub fn graph(&self) -> &TrustGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Total edges, original plus inferred.
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn inferred_count(&self) -> usize {
        self.inferred.len()
    }

    pub fn inferred_edges(&self) -> impl Iterator<Item = ((NodeId, NodeId), f64)> + '_ {
        self.inferred.iter().map(|(&k, &w)| (k, w))
    }

    pub fn inferred_weight(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        self.inferred.get(&(src, dst)).copied()
    }

    pub fn provenance(&self, src: NodeId, dst: NodeId) -> Option<Provenance> {
        if self.inferred.contains_key(&(src, dst)) {
            Some(Provenance::Inferred)
        } else if self.graph.has_edge(src, dst) {
            Some(Provenance::Original)
        } else {
            None
        }
    }

    /// All edges with provenance, ascending by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64, Provenance)> + '_ {
        self.graph.edges().map(|(s, d, w)| {
            let p = if self.inferred.contains_key(&(s, d)) {
                Provenance::Inferred
            } else {
                Provenance::Original
            };
            (s, d, w, p)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inferred_edges_never_touch_originals() {
        let g = TrustGraph::from_edges(3, [(0, 1, 0.4), (1, 2, 1.0)]).unwrap();
        let mut ig = InferredGraph::from_original(g);
        ig.add_inferred(0, 2, 0.7).unwrap();
        assert!(ig.add_inferred(0, 1, 0.9).is_err());
        assert!(ig.add_inferred(2, 0, 0.0).is_err());
        assert_eq!(ig.graph().weight(0, 1), Some(0.4));
        assert_eq!(ig.provenance(0, 2), Some(Provenance::Inferred));
        assert_eq!(ig.provenance(0, 1), Some(Provenance::Original));
        assert_eq!(ig.provenance(2, 1), None);
        assert_eq!(ig.edge_count(), 3);
        assert_eq!(ig.inferred_count(), 1);
    }
}
