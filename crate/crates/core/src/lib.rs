//! Rank oracles for lift and frame matroids of biased graphs, the surgeries
//! that relate them on the graphs `G_n`, and the query game showing that
//! lift and frame matroids cannot be told apart with few rank queries.

pub mod adversary;
pub mod biased;
pub mod edgeset;
pub mod error;
pub mod framework;
pub mod gn;
pub mod graph;
pub mod lemmas;
pub mod limits;
pub mod matroid;
pub mod surgery;

pub use biased::BiasedGraph;
pub use edgeset::{EdgeId, EdgeSet};
pub use error::{Error, Result};
pub use gn::{build_gn, GnGraph};
pub use graph::{Cycle, Multigraph};
pub use limits::Limits;
pub use matroid::{FrameMatroid, LiftMatroid, RankOracle};
