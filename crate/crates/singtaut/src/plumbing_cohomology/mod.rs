//! Tangent-sheaf cohomology of the plumbing scheme attached to a weighted dual graph.

pub mod cech;
pub mod charts;
pub mod obstruction;
pub mod tables;
pub mod verdict;

pub use cech::{cech_h1_rank, cech_h1_rank_with, CechRank, Coord, Cover};
pub use charts::*;
pub use obstruction::{dtilde_obstruction, dtilde_obstruction_with, DTildeObstruction, FunctionalTerm};
pub use tables::*;
pub use verdict::{star_certificate, taut_certificate, taut_certificate_with, TautMethod, TautOptions, TautnessVerdict};
