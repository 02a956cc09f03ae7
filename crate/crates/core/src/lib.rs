//! Exhaustive search over simple 2-plane drawings of small graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graphs`]: labeled graphs and the generators for every family used
//!   (cycles, the gadget `X`, `G_k`, `G_k^-`, `K_9` minus edges).
//! * [`dcel`]: planarized spherical drawings, canonical forms and cleanup.
//! * [`enumerate`]: backtracking enumeration of drawings edge by edge.
//! * [`pipeline`]: iterative extension of nested ten-cycles with flow pruning.
//! * [`saturation`]: saturated drawings and maximal graphs.
//! * [`audit`]: vertex classes, the charging scheme and density checks.

pub mod audit;
pub mod dcel;
pub mod enumerate;
pub mod error;
pub mod graphs;
pub mod pipeline;
pub mod saturation;

pub use dcel::{init_drawing, Drawing, Face, Landing, NodeKind, Route};
pub use enumerate::{enumerate_drawings, is_k_planar, Decision, Dedup, EnumerateOptions, Outcome};
pub use error::{Error, Result};
pub use graphs::{EdgeId, EdgeTag, LabeledGraph, VertexId};
