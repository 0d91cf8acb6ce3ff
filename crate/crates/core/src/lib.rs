//! Exact graph parameters, Kneser-graph homomorphism search, local reductions
//! with lift recipes, and a discharging simulator, all audited by independent
//! checkers.

pub mod bits;
pub mod discharging;
pub mod error;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod hom;
pub mod kneser;
pub mod params;
pub mod pipeline;
pub mod rational;
pub mod reductions;

mod flow;

pub use error::{Error, Result};
pub use graph::Graph;
pub use params::{classify, longest_induced_path_upto, mad, odd_girth, ClassLabel, GraphClass, OddGirth};
pub use rational::Rational;
