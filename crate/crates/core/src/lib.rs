//! Heuristics for the axial multidimensional assignment problem (s-AP).
//!
//! An instance assigns a weight to every vector of `{0..n-1}^s`; a feasible
//! assignment picks `n` vectors that use every coordinate of every dimension
//! exactly once. This crate provides instance generators, construction
//! heuristics, dimensionwise and vectorwise local searches with their
//! combinations, Chain/Multichain metaheuristics, closed-form neighbourhood
//! sizes, and an experiment runner.
//!
//! Coordinates are 0-based in the API and 1-based in files and display.

pub mod analysis;
pub mod ap2;
pub mod assignment;
pub mod construction;
pub mod dims;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod instance;
pub mod io;
pub mod local_search;
pub mod meta;
pub mod rng;

pub use ap2::{solve_ap2, Ap2Solution, SquareMatrix};
pub use assignment::{swap_vectors, Assignment};
pub use construction::Constructor;
pub use dims::DimSet;
pub use error::{MapError, Result};
pub use generate::{generate, parse_instance_name, FamilySpec};
pub use instance::{Family, Instance, Weight, WeightModel};
pub use local_search::{DvVariant, LocalSearch, LocalSearchReport, VOptVariant, Vectorwise};
pub use meta::{Budget, MetaConfig, MetaKind, MetaOutcome};
pub use rng::SplitMix64;
