use std::collections::BTreeMap;
use std::io::Write;

use super::{NodeId, TrustGraph};
use crate::error::{Error, Result};

/// Node sequence `<src, ..., dst>`.
pub type Path = Vec<NodeId>;

/// Discovered simple paths keyed by ordered, non-adjacent node pair.
///
/// Iteration is ascending by `(src, dst)`; each key's list keeps discovery
/// order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathIndex {
    entries: BTreeMap<(NodeId, NodeId), Vec<Path>>,
}

impl PathIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, path: Path) {
        debug_assert!(path.len() >= 2);
        let key = (path[0], path[path.len() - 1]);
        self.entries.entry(key).or_default().push(path);
    }

    pub(crate) fn insert_list(&mut self, key: (NodeId, NodeId), paths: Vec<Path>) {
        self.entries.entry(key).or_default().extend(paths);
    }

    pub fn get(&self, src: NodeId, dst: NodeId) -> Option<&[Path]> {
        self.entries.get(&(src, dst)).map(Vec::as_slice)
    }

    pub fn contains_key(&self, src: NodeId, dst: NodeId) -> bool {
        self.entries.contains_key(&(src, dst))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &Vec<Path>)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.entries.keys().copied()
    }

    pub(crate) fn entries(&self) -> &BTreeMap<(NodeId, NodeId), Vec<Path>> {
        &self.entries
    }

    /// Number of distinct pairs.
    pub fn pair_count(&self) -> usize {
        self.entries.len()
    }

    /// Total number of stored paths over all pairs.
    pub fn path_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks one key's path against `graph`: simple, length in
    /// `[2, l_max]`, every hop an edge, endpoints match a non-adjacent key.
    pub fn check_path(
        graph: &TrustGraph,
        key: (NodeId, NodeId),
        path: &[NodeId],
        l_max: usize,
    ) -> Result<()> {
        let (src, dst) = key;
        let corrupt = |reason: String| Error::CorruptIndex { src, dst, reason };
        if src == dst {
            return Err(corrupt("source equals destination".into()));
        }
        if graph.has_edge(src, dst) {
            return Err(corrupt("pair is directly connected".into()));
        }
        let len = path.len().saturating_sub(1);
        if !(2..=l_max).contains(&len) {
            return Err(corrupt(format!("length {len} outside [2, {l_max}]")));
        }
        if path[0] != src || path[path.len() - 1] != dst {
            return Err(corrupt("endpoints do not match key".into()));
        }
        for (i, &u) in path.iter().enumerate() {
            if path[..i].contains(&u) {
                return Err(corrupt(format!("node {u} repeated")));
            }
        }
        for hop in path.windows(2) {
            if !graph.has_edge(hop[0], hop[1]) {
                return Err(corrupt(format!("missing edge {}->{}", hop[0], hop[1])));
            }
        }
        Ok(())
    }

    /// Verifies every stored path edge-by-edge against `graph`.
    pub fn validate(&self, graph: &TrustGraph, l_max: usize) -> Result<()> {
        for (&key, paths) in &self.entries {
            if paths.is_empty() {
                return Err(Error::CorruptIndex {
                    src: key.0,
                    dst: key.1,
                    reason: "empty path list".into(),
                });
            }
            for p in paths {
                Self::check_path(graph, key, p, l_max)?;
            }
        }
        Ok(())
    }

    /// Writes one line per path: `src<TAB>dst<TAB>n0,n1,...`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for (&(s, d), paths) in &self.entries {
            for p in paths {
                write!(out, "{s}\t{d}\t")?;
                for (i, n) in p.iter().enumerate() {
                    if i > 0 {
                        out.write_all(b",")?;
                    }
                    write!(out, "{n}")?;
                }
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }
}
