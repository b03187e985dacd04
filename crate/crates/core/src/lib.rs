//! Mapping and simplification of Clifford+T circuits for processors whose
//! CNOTs are restricted to the directed edges of a coupling graph.
//!
//! The pipeline is: parse a circuit ([`qasm`]), pick a device ([`topology`]),
//! build its CNOT realization table once ([`realization`]), search every
//! logical-to-physical placement ([`placement`]) and clean up each candidate
//! with local rewrites ([`peephole`]). Results are checked against a dense
//! simulator ([`simulator`]), which also drives the Mermin/fidelity analyses
//! in [`nonclassicality`]. [`bench`] ties it together for whole directories.

pub mod bench;
pub mod circuit;
pub mod error;
pub mod nonclassicality;
pub mod peephole;
pub mod placement;
pub mod qasm;
pub mod realization;
pub mod simulator;
pub mod topology;

pub use circuit::{Circuit, CostReport, Gate, GateKind, Placement};
pub use error::{Error, Result};
pub use topology::CouplingGraph;
