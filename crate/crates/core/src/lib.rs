//! Exact resistance distances and resistance spectra of small graphs, with
//! exhaustive experiments on which graphs their spectrum determines.

mod bareiss;
pub mod cache;
pub mod canon;
pub mod drs;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod lemmas;
pub mod network;
pub mod rational;
pub mod resistance;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId};
pub use graph6::{parse_graph6, to_graph6};
pub use rational::ExactRational;
pub use resistance::{
    kmn_spectrum_closed_form, laplacian, resistance, resistance_diameter, resistance_matrix,
    resistance_spectrum, spanning_tree_count, ResistanceMatrix, ResistanceSpectrum,
};
