//! Classification and tautness certificates for weighted dual graphs of surface singularities.

pub mod arith;
pub mod corpus;
pub mod cycle_engine;
pub mod error;
pub mod f_classify;
pub mod fedder_lab;
pub mod graph_core;
pub mod plumbing_cohomology;
pub mod report;

pub use error::{Error, Result};
