//! Classification engine for commuting Landau-Zener families.
//!
//! The pipeline enumerates triangle-free candidate graphs, filters them
//! through structural properties and two no-go rules, decides sign
//! level solvability per edge orientation, and numerically constructs
//! explicit model families where possible.

pub mod canon;
pub mod catalog;
pub mod family;
pub mod forms;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod optim;
pub mod orient;
pub mod rules;
pub mod scalar;
pub mod signs;

// double-precision aliases for the scalar-generic numeric types
pub type LinearForm64 = forms::LinearForm<f64>;
pub type QuadraticForm64 = forms::QuadraticForm<f64>;
pub type MTLZFamily64 = family::MTLZFamily<f64>;
pub type SearchOutcome64 = family::SearchOutcome<f64>;
