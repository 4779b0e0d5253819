//! Grid circuit routing with a trainable net ordering and per-net cost maps.
//!
//! The router connects two-pin nets on a rectangular grid with vertex-disjoint
//! paths. Nets are routed sequentially by A*; the routing order and a set of
//! per-net cost maps (extra traversal cost per grid vertex) are free parameters
//! trained per instance by a parallel evolution-strategies optimizer, so that
//! early-routed nets learn to leave room for later ones.
//!
//! Modules:
//! - [`grid`]: grid model, instances, random generation, solution validation
//! - [`format`]: instance and solution file formats (canonical JSON)
//! - [`astar`]: deterministic A* over a non-negative vertex cost field, plus
//!   BFS/Dijkstra test oracles
//! - [`es`]: generic evolution-strategies optimizer
//! - [`solver`]: the ranking + cost-map solver and its post-processing pass
//! - [`bench`]: baselines, metrics and the benchmark runner
//! - [`render`]: ASCII and SVG rendering of instances and solutions

pub mod astar;
pub mod bench;
pub mod es;
pub mod format;
pub mod grid;
pub mod render;
pub mod solver;

pub use astar::{bfs_oracle, dijkstra_oracle, route, CostField, RouteRequest};
pub use grid::{
    generate_instance, manhattan, neighbors, validate_outcome, GridError, GridMap, Net, Path,
    ProblemInstance, RoutingOutcome, ValidationReport, Vertex,
};
pub use solver::{solve, SolveResult, SolverConfig, SolverMode};
