//! Dataset ingestion, synthetic fixtures and file formats.

mod ingest;
mod io;
mod synth;

pub use ingest::{
    build_dataset, ingest, parse_ratings, parse_trust, Dataset, IngestOptions, RatingRecord, TrustRecord,
};
pub use io::{read_edge_list, write_dataset, write_edge_list, write_raw};
pub use synth::{generate_powerlaw, generate_ratings};
