//! Graph analysis over a compact, 64-bit indexed edge-list core.
//!
//! The [`Graph`] type stores an immutable-after-build multigraph; the
//! algorithm modules read it without mutation, so a built graph can be
//! shared across threads.

mod adjacency;
pub mod attributes;
pub mod centrality;
pub mod community;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod layout;
pub mod paths;
pub mod patterns;
pub mod rng;
pub mod svg;
mod weights;

pub use attributes::{AttrType, AttributeTable, Column, Scope};
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Mode, VertexId};
