//! Grid-graph model: maps, nets, instances, random generation and solution
//! validation.
//!
//! Coordinates are 0-based with `x` the column and `y` the row, origin at the
//! top-left. The grid is 4-connected; paths may not enter obstacle vertices.
//! All types here are immutable after construction and safe to share across
//! threads.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation and construction errors for grid-level types.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: u32, height: u32 },
    #[error("vertex ({0}, {1}) is out of bounds for a {2}x{3} grid", .vertex.x, .vertex.y, .width, .height)]
    OutOfBounds {
        vertex: Vertex,
        width: u32,
        height: u32,
    },
    #[error("net start and end coincide at {0}")]
    DegenerateNet(Vertex),
    #[error("pin {0} is used by more than one net terminal")]
    DuplicatePin(Vertex),
    #[error("pin {0} lies on an obstacle")]
    PinOnObstacle(Vertex),
    #[error("instance has no nets")]
    NoNets,
    #[error("cannot place {pins} distinct pins on {free} free cells")]
    InfeasiblePlacement { pins: usize, free: usize },
    #[error("no feasible obstacle layout found after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}

/// A grid intersection. `x` is the column, `y` the row, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: u32,
    pub y: u32,
}

impl Vertex {
    pub const fn new(x: u32, y: u32) -> Self {
        Vertex { x, y }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Manhattan distance between two vertices.
pub fn manhattan(a: Vertex, b: Vertex) -> u32 {
    a.x.abs_diff(b.x) + a.y.abs_diff(b.y)
}

/// A rectangular 4-connected grid with an obstacle set.
///
/// Obstacles are stored as a dense row-major mask so membership tests are O(1)
/// in the routing hot path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    obstacle_mask: Vec<bool>,
    obstacle_count: usize,
}

impl GridMap {
    /// Builds a grid, validating that every obstacle is in bounds.
    /// Duplicate obstacles are collapsed.
    pub fn new(
        width: u32,
        height: u32,
        obstacles: impl IntoIterator<Item = Vertex>,
    ) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::ZeroDimension { width, height });
        }
        let m = width as usize * height as usize;
        let mut mask = vec![false; m];
        let mut count = 0;
        for v in obstacles {
            if v.x >= width || v.y >= height {
                return Err(GridError::OutOfBounds {
                    vertex: v,
                    width,
                    height,
                });
            }
            let idx = (v.y * width + v.x) as usize;
            if !mask[idx] {
                mask[idx] = true;
                count += 1;
            }
        }
        Ok(GridMap {
            width,
            height,
            obstacle_mask: mask,
            obstacle_count: count,
        })
    }

    /// Grid with no obstacles.
    pub fn empty(width: u32, height: u32) -> Result<Self, GridError> {
        GridMap::new(width, height, std::iter::empty())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Number of vertices `m = width * height`; cost maps have one entry per
    /// vertex in row-major order.
    pub fn vertex_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacle_count
    }

    /// Row-major index of an in-bounds vertex.
    pub fn index(&self, v: Vertex) -> usize {
        debug_assert!(self.in_bounds(v));
        (v.y * self.width + v.x) as usize
    }

    /// Vertex at a row-major index.
    pub fn vertex_at(&self, idx: usize) -> Vertex {
        debug_assert!(idx < self.vertex_count());
        Vertex::new(idx as u32 % self.width, idx as u32 / self.width)
    }

    pub fn in_bounds(&self, v: Vertex) -> bool {
        v.x < self.width && v.y < self.height
    }

    pub fn is_obstacle(&self, v: Vertex) -> bool {
        self.in_bounds(v) && self.obstacle_mask[self.index(v)]
    }

    /// In-bounds and not an obstacle.
    pub fn is_free(&self, v: Vertex) -> bool {
        self.in_bounds(v) && !self.obstacle_mask[self.index(v)]
    }

    pub(crate) fn obstacle_mask(&self) -> &[bool] {
        &self.obstacle_mask
    }

    /// All obstacle vertices, sorted lexicographically by (x, y).
    pub fn obstacles(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..self.vertex_count())
            .filter(|&i| self.obstacle_mask[i])
            .map(|i| self.vertex_at(i))
            .collect();
        out.sort();
        out
    }
}

/// The in-bounds, non-obstacle 4-neighbors of `v`, in fixed (up, down, left,
/// right) order. Errors if `v` itself is out of bounds.
pub fn neighbors(grid: &GridMap, v: Vertex) -> Result<Vec<Vertex>, GridError> {
    if !grid.in_bounds(v) {
        return Err(GridError::OutOfBounds {
            vertex: v,
            width: grid.width(),
            height: grid.height(),
        });
    }
    let mut out = Vec::with_capacity(4);
    if v.y > 0 {
        out.push(Vertex::new(v.x, v.y - 1));
    }
    if v.y + 1 < grid.height() {
        out.push(Vertex::new(v.x, v.y + 1));
    }
    if v.x > 0 {
        out.push(Vertex::new(v.x - 1, v.y));
    }
    if v.x + 1 < grid.width() {
        out.push(Vertex::new(v.x + 1, v.y));
    }
    out.retain(|&n| !grid.is_obstacle(n));
    Ok(out)
}

/// A two-pin net: an unordered electrical connection requirement between a
/// start and an end vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Net {
    pub start: Vertex,
    pub end: Vertex,
}

impl Net {
    pub fn new(start: Vertex, end: Vertex) -> Result<Self, GridError> {
        if start == end {
            return Err(GridError::DegenerateNet(start));
        }
        Ok(Net { start, end })
    }
}

/// A grid plus an ordered list of nets to connect.
///
/// Invariant: all 2k pins are in bounds, pairwise distinct and not on
/// obstacles.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    grid: GridMap,
    nets: Vec<Net>,
}

impl ProblemInstance {
    pub fn new(grid: GridMap, nets: Vec<Net>) -> Result<Self, GridError> {
        if nets.is_empty() {
            return Err(GridError::NoNets);
        }
        let mut seen = HashSet::with_capacity(nets.len() * 2);
        for net in &nets {
            for pin in [net.start, net.end] {
                if !grid.in_bounds(pin) {
                    return Err(GridError::OutOfBounds {
                        vertex: pin,
                        width: grid.width(),
                        height: grid.height(),
                    });
                }
                if grid.is_obstacle(pin) {
                    return Err(GridError::PinOnObstacle(pin));
                }
                if !seen.insert(pin) {
                    return Err(GridError::DuplicatePin(pin));
                }
            }
        }
        Ok(ProblemInstance { grid, nets })
    }

    pub fn grid(&self) -> &GridMap {
        &self.grid
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    /// Number of nets `k`.
    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    /// All 2k pin vertices in net order (start, end, start, end, ...).
    pub fn pins(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.nets.iter().flat_map(|n| [n.start, n.end])
    }
}

/// An ordered vertex sequence. Length is counted in edges, so a path over
/// `n` vertices has length `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    /// Wraps a vertex sequence. Structural validity against a grid is checked
    /// by [`validate_outcome`], not here.
    pub fn new(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        Path { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edge count (segments), not vertex count.
    pub fn edge_count(&self) -> u64 {
        self.vertices.len() as u64 - 1
    }
}

/// Per-net routing results: which nets connected, with which paths, and the
/// total wire length when everything connected.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingOutcome {
    paths: Vec<Option<Path>>,
    connected_count: usize,
    total_length: Option<u64>,
}

impl RoutingOutcome {
    /// Builds an outcome from per-net optional paths, deriving the connected
    /// count and, when every net connected, the total length.
    pub fn from_paths(paths: Vec<Option<Path>>) -> Self {
        let connected_count = paths.iter().filter(|p| p.is_some()).count();
        let total_length = if connected_count == paths.len() {
            Some(paths.iter().flatten().map(Path::edge_count).sum())
        } else {
            None
        };
        RoutingOutcome {
            paths,
            connected_count,
            total_length,
        }
    }

    pub fn paths(&self) -> &[Option<Path>] {
        &self.paths
    }

    pub fn connected_count(&self) -> usize {
        self.connected_count
    }

    pub fn fully_connected(&self) -> bool {
        self.connected_count == self.paths.len()
    }

    /// Total edge count over all paths; defined only when fully connected.
    pub fn total_length(&self) -> Option<u64> {
        self.total_length
    }

    /// Edge count summed over the nets that did connect.
    pub fn connected_length(&self) -> u64 {
        self.paths.iter().flatten().map(Path::edge_count).sum()
    }
}

/// A structural defect found in one routed path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathViolation {
    /// Path endpoints do not equal the net's (start, end) pins.
    EndpointMismatch,
    /// Two consecutive vertices are not 4-neighbors.
    NotAdjacent(Vertex, Vertex),
    /// A vertex occurs more than once within the path.
    RepeatedVertex(Vertex),
    /// The path enters an obstacle.
    OnObstacle(Vertex),
    /// The path leaves the grid.
    OutOfBounds(Vertex),
}

/// Validation verdict for one net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetCheck {
    pub connected: bool,
    pub violations: Vec<PathViolation>,
}

/// Full validation report for an outcome against its instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub nets: Vec<NetCheck>,
    /// Vertices shared by two or more paths (empty iff pairwise disjoint).
    pub shared_vertices: Vec<Vertex>,
    pub fully_connected: bool,
    /// Sum of edge counts over present paths, recomputed from scratch.
    pub recomputed_length: u64,
    /// Whether the outcome's own counters match the recomputation.
    pub metadata_consistent: bool,
    pub valid: bool,
}

impl ValidationReport {
    pub fn disjoint(&self) -> bool {
        self.shared_vertices.is_empty()
    }
}

/// Checks an outcome against an instance: per-net connectivity (endpoints
/// equal the net pins), path structure (adjacency, no repeats, no obstacles,
/// in bounds), pairwise vertex-disjointness including endpoints, and length
/// bookkeeping. `valid` is true iff every check passes and all nets connected.
pub fn validate_outcome(instance: &ProblemInstance, outcome: &RoutingOutcome) -> ValidationReport {
    let grid = instance.grid();
    let mut nets = Vec::with_capacity(instance.net_count());
    let mut occupied: HashSet<Vertex> = HashSet::new();
    let mut shared: Vec<Vertex> = Vec::new();
    let mut recomputed_length = 0u64;

    let path_slots = outcome.paths();
    for (i, net) in instance.nets().iter().enumerate() {
        let slot = path_slots.get(i).and_then(|p| p.as_ref());
        let mut violations = Vec::new();
        let connected = match slot {
            None => false,
            Some(path) => {
                let vs = path.vertices();
                if vs.first() != Some(&net.start) || vs.last() != Some(&net.end) {
                    violations.push(PathViolation::EndpointMismatch);
                }
                let mut seen_in_path = HashSet::with_capacity(vs.len());
                for (j, &v) in vs.iter().enumerate() {
                    if !grid.in_bounds(v) {
                        violations.push(PathViolation::OutOfBounds(v));
                        continue;
                    }
                    if grid.is_obstacle(v) {
                        violations.push(PathViolation::OnObstacle(v));
                    }
                    if !seen_in_path.insert(v) {
                        violations.push(PathViolation::RepeatedVertex(v));
                    }
                    if j > 0 && manhattan(vs[j - 1], v) != 1 {
                        violations.push(PathViolation::NotAdjacent(vs[j - 1], v));
                    }
                    if !occupied.insert(v) {
                        shared.push(v);
                    }
                }
                recomputed_length += path.edge_count();
                violations.is_empty()
            }
        };
        nets.push(NetCheck {
            connected,
            violations,
        });
    }

    shared.sort();
    shared.dedup();

    let fully_connected =
        path_slots.len() == instance.net_count() && nets.iter().all(|c| c.connected);
    let metadata_consistent = outcome.connected_count()
        == path_slots.iter().filter(|p| p.is_some()).count()
        && outcome.total_length()
            == if path_slots.iter().all(|p| p.is_some()) {
                Some(recomputed_length)
            } else {
                None
            };
    let valid = fully_connected
        && shared.is_empty()
        && metadata_consistent
        && nets.iter().all(|c| c.violations.is_empty());

    ValidationReport {
        nets,
        shared_vertices: shared,
        fully_connected,
        recomputed_length,
        metadata_consistent,
        valid,
    }
}

/// Generates a random instance: each cell becomes an obstacle independently
/// with probability `obstacle_density`, then `2 * num_nets` distinct pins are
/// drawn uniformly from the free cells. Deterministic in `seed`. If the
/// obstacle draw leaves too few free cells the layout is resampled a bounded
/// number of times before giving up.
pub fn generate_instance(
    width: u32,
    height: u32,
    num_nets: usize,
    obstacle_density: f64,
    seed: u64,
) -> Result<ProblemInstance, GridError> {
    if width == 0 || height == 0 {
        return Err(GridError::ZeroDimension { width, height });
    }
    if num_nets == 0 {
        return Err(GridError::NoNets);
    }
    assert!(
        (0.0..1.0).contains(&obstacle_density),
        "obstacle density must be in [0, 1)"
    );
    let m = width as usize * height as usize;
    let pins_needed = 2 * num_nets;
    if pins_needed > m {
        return Err(GridError::InfeasiblePlacement {
            pins: pins_needed,
            free: m,
        });
    }

    const MAX_ATTEMPTS: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut obstacles = Vec::new();
        for idx in 0..m {
            if obstacle_density > 0.0 && rng.random::<f64>() < obstacle_density {
                let v = Vertex::new(idx as u32 % width, idx as u32 / width);
                obstacles.push(v);
            }
        }
        let grid = GridMap::new(width, height, obstacles.iter().copied())?;
        let free: Vec<Vertex> = (0..m)
            .map(|i| grid.vertex_at(i))
            .filter(|&v| !grid.is_obstacle(v))
            .collect();
        if free.len() < pins_needed {
            continue;
        }
        let chosen = sample_indices(&mut rng, free.len(), pins_needed);
        let pins: Vec<Vertex> = chosen.iter().map(|i| free[i]).collect();
        let nets = pins
            .chunks_exact(2)
            .map(|pair| Net::new(pair[0], pair[1]).expect("sampled pins are distinct"))
            .collect();
        return ProblemInstance::new(grid, nets);
    }
    Err(GridError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}
