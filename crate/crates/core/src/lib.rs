//! Trust inference over directed social graphs.
//!
//! Pairs of users without a direct trust edge get an inferred weight from
//! the best bounded-length path between them. Exhaustive enumeration is
//! exponential in the path length, so two pruned variants expand only
//! through influential intermediate users. The inferred graphs feed a
//! trust-weighted rating predictor evaluated by leave-one-out.
//!
//! ```
//! use trust_infer::{enumerate, build_inferred, EnumConfig, NodeWeights, ScoringConfig, Benefit, TrustGraph};
//!
//! let g = TrustGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
//! let index = enumerate(&g, &NodeWeights::zeros(3), &EnumConfig::all(2)).unwrap();
//! let inferred = build_inferred(&g, &index, &ScoringConfig::new(2, Benefit::Zero)).unwrap();
//! assert_eq!(inferred.inferred_weight(0, 2), Some(0.5));
//! ```

pub mod data;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod graph;
pub mod inference;
pub mod metrics;
pub mod pipeline;
pub mod ratings;
pub mod recommend;
pub mod sweep;
pub mod weights;

pub use enumerate::{enumerate, Cutoff, EnumConfig, Method};
pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{InferredGraph, NodeId, NodeWeights, PathIndex, Provenance, TrustGraph};
pub use inference::{build_inferred, build_inferred_with, Benefit, ScoringConfig};
pub use ratings::{ItemId, RatingScale, RatingTable};
pub use recommend::{evaluate_loo, predict_rating, EvalReport, Prediction};
pub use weights::{WeightConfig, WeightKind};
