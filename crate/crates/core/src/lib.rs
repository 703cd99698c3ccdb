//! Growth synthesis for finite graphs and finitely generated subgroups of free groups.
//!
//! The crate is organised around four layers:
//!
//! * [`graph`]: finite multigraphs with a half-edge ("side") involution, subdivision,
//!   permutation lifts, girth and a JSON/DOT document format.
//! * [`spectral`]: the non-backtracking operator and a Collatz–Wielandt enclosure of its
//!   Perron root, plus exact non-backtracking walk counts as an independent growth oracle.
//! * [`synthesis`]: parameter selection, high-girth covers and the single-edge subdivision
//!   sweep that drives the Perron root into a target window, producing a [`synthesis::Certificate`].
//! * [`stallings`]: loop augmentation, 2-factorisation and labelling that turn a graph with
//!   even degrees into a folded core graph of a subgroup of `F_r`, with free basis and ball counts.

pub mod graph;
pub mod spectral;
pub mod stallings;
pub mod synthesis;

pub use graph::{EdgeSubset, GraphDocument, GraphError, Multigraph};
pub use spectral::{NbOperator, SpectralError, SpectralEstimate};
pub use stallings::{LabeledGraph, Letter, StallingsError, SubgroupReport, Word};
pub use synthesis::{Certificate, Limits, SynthesisError, SynthesisParams};
