//! Handle-structured vp-compressionbodies.

mod assemble;
mod classify;
mod handle;

pub use assemble::{assemble, n_value, AssemblyError, Edge, EdgeClass, EdgeEnd, VpCompressionbody};
pub use classify::{
    classify_exceptional, ghost_arc_graph, is_trivial, reduce, ExceptionalClass, GhostArcGraph,
    GhostVertex, Triviality,
};
pub use handle::{OneHandle, Site, ZeroHandle};
