//! Text formats: trust and rating files, inferred edge lists.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::data::ingest::Dataset;
use crate::error::{Error, Result};
use crate::graph::{InferredGraph, NodeId, TrustGraph};

/// Writes `src<TAB>dst<TAB>weight<TAB>provenance` per edge. Node labels
/// default to the dense ids.
pub fn write_edge_list<W: Write>(graph: &InferredGraph, labels: Option<&[String]>, mut out: W) -> Result<()> {
    for (s, d, w, p) in graph.edges() {
        match labels {
            Some(l) => writeln!(out, "{}\t{}\t{}\t{}", l[s], l[d], w, p.as_str())?,
            None => writeln!(out, "{s}\t{d}\t{w}\t{}", p.as_str())?,
        }
    }
    Ok(())
}

/// Parses an edge list written by [`write_edge_list`]. `ids` maps labels to
/// dense ids; `None` means labels are the dense ids themselves.
pub fn read_edge_list(text: &str, path: &Path, n: usize, ids: Option<&HashMap<&str, NodeId>>) -> Result<InferredGraph> {
    let mut original = Vec::new();
    let mut inferred = Vec::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: no + 1,
            reason,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(err(format!("expected 4 tab-separated columns, got {}", cols.len())));
        }
        let node = |label: &str| -> Result<NodeId> {
            match ids {
                Some(map) => map
                    .get(label)
                    .copied()
                    .ok_or_else(|| err(format!("unknown node label {label:?}"))),
                None => label
                    .parse::<NodeId>()
                    .map_err(|e| err(format!("bad node id {label:?}: {e}"))),
            }
        };
        let s = node(cols[0])?;
        let d = node(cols[1])?;
        let w: f64 = cols[2]
            .parse()
            .map_err(|e| err(format!("bad weight {:?}: {e}", cols[2])))?;
        match cols[3] {
            "original" => original.push((s, d, w)),
            "inferred" => inferred.push((s, d, w)),
            other => return Err(err(format!("unknown provenance {other:?}"))),
        }
    }
    let mut out = InferredGraph::from_original(TrustGraph::from_edges(n, original)?);
    for (s, d, w) in inferred {
        out.add_inferred(s, d, w)?;
    }
    Ok(out)
}

/// Writes `trust.tsv` and `ratings.tsv` with raw ids into `dir`.
pub fn write_dataset(ds: &Dataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut t = BufWriter::new(File::create(dir.join("trust.tsv"))?);
    for (s, d, w) in ds.graph.edges() {
        writeln!(t, "{}\t{}\t{}", ds.users[s], ds.users[d], w)?;
    }
    t.flush()?;
    let mut r = BufWriter::new(File::create(dir.join("ratings.tsv"))?);
    for (u, i, v) in ds.ratings.iter() {
        writeln!(r, "{}\t{}\t{}", ds.users[u], ds.items[i], v)?;
    }
    r.flush()?;
    Ok(())
}

/// Writes a synthetic graph and rating table as plain dense-id files.
pub fn write_raw(graph: &TrustGraph, ratings: &crate::ratings::RatingTable, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut t = BufWriter::new(File::create(dir.join("trust.tsv"))?);
    for (s, d, w) in graph.edges() {
        writeln!(t, "{s}\t{d}\t{w}")?;
    }
    t.flush()?;
    let mut r = BufWriter::new(File::create(dir.join("ratings.tsv"))?);
    for (u, i, v) in ratings.iter() {
        writeln!(r, "{u}\t{i}\t{v}")?;
    }
    r.flush()?;
    Ok(())
}
