//! Pants graphs of punctured surfaces: validation, moves, canonical forms,
//! exact distances in the cubical pants graph, constructive reductions with
//! batched move schedules, and numerical checks of diameter bounds.

pub mod bounds;
pub mod canonical;
pub mod cycles;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod graph;
pub mod moves;
pub mod oracle;
pub mod random;
pub mod reduction;
pub mod treeview;

pub use canonical::{canonicalize, is_isomorphic, CanonicalKey};
pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{PantsGraph, RawGraph};
pub use moves::{Disjointness, Move, MoveBatch, MoveSchedule};
