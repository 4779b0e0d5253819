//! Deterministic A* on a grid with an additive non-negative vertex cost
//! field, plus independent BFS and uniform-cost oracles used by tests.
//!
//! Stepping into a vertex `v` costs `1 + cost_field[v]`; the start vertex
//! contributes nothing. With a non-negative field the Manhattan heuristic
//! stays consistent, so the search is optimal and never reopens vertices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::grid::{manhattan, GridMap, Net, Path, Vertex};

#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error("cost field has {got} entries, expected {expected}")]
    FieldSizeMismatch { got: usize, expected: usize },
    #[error("cost field entry {index} is {value}, must be finite and non-negative")]
    NegativeCost { index: usize, value: f64 },
    #[error("blocked mask has {got} entries, expected {expected}")]
    MaskSizeMismatch { got: usize, expected: usize },
    #[error("pin {0} is out of bounds")]
    PinOutOfBounds(Vertex),
    #[error("pin {0} is an obstacle")]
    PinOnObstacle(Vertex),
    #[error("pin {0} is blocked")]
    PinBlocked(Vertex),
}

/// One non-negative real per grid vertex, row-major. Added to the unit step
/// cost when a path enters the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CostField {
    values: Vec<f64>,
}

impl CostField {
    /// Validates that every entry is finite and non-negative.
    pub fn new(values: Vec<f64>) -> Result<Self, RouteError> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(RouteError::NegativeCost { index, value });
            }
        }
        Ok(CostField { values })
    }

    pub fn zeros(len: usize) -> Self {
        CostField {
            values: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn add_assign(&mut self, other: &CostField) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += *b;
        }
    }
}

/// A validated routing query: grid, net, extra blocked vertices (beyond
/// obstacles) and the cost field to accumulate.
#[derive(Debug)]
pub struct RouteRequest<'a> {
    grid: &'a GridMap,
    net: Net,
    blocked: &'a [bool],
    cost_field: &'a CostField,
}

impl<'a> RouteRequest<'a> {
    /// Validates sizes and that neither pin is an obstacle or blocked.
    /// `blocked` is a dense row-major mask with one entry per vertex.
    pub fn new(
        grid: &'a GridMap,
        net: Net,
        blocked: &'a [bool],
        cost_field: &'a CostField,
    ) -> Result<Self, RouteError> {
        let m = grid.vertex_count();
        if cost_field.len() != m {
            return Err(RouteError::FieldSizeMismatch {
                got: cost_field.len(),
                expected: m,
            });
        }
        if blocked.len() != m {
            return Err(RouteError::MaskSizeMismatch {
                got: blocked.len(),
                expected: m,
            });
        }
        for pin in [net.start, net.end] {
            if !grid.in_bounds(pin) {
                return Err(RouteError::PinOutOfBounds(pin));
            }
            if grid.is_obstacle(pin) {
                return Err(RouteError::PinOnObstacle(pin));
            }
            if blocked[grid.index(pin)] {
                return Err(RouteError::PinBlocked(pin));
            }
        }
        Ok(RouteRequest {
            grid,
            net,
            blocked,
            cost_field,
        })
    }

    pub fn grid(&self) -> &GridMap {
        self.grid
    }

    pub fn net(&self) -> Net {
        self.net
    }
}

/// Builds a dense blocked mask for a grid from a list of vertices.
/// Out-of-bounds vertices are ignored.
pub fn blocked_mask(grid: &GridMap, blocked: impl IntoIterator<Item = Vertex>) -> Vec<bool> {
    let mut mask = vec![false; grid.vertex_count()];
    for v in blocked {
        if grid.in_bounds(v) {
            mask[grid.index(v)] = true;
        }
    }
    mask
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    priority: f64,
    cost: f64,
    seq: u32,
    idx: u32,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap is a max-heap: order so the popped maximum is the entry with
    // the smallest priority, then the largest accumulated cost (deeper nodes
    // first), then the earliest insertion.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then(self.cost.total_cmp(&other.cost))
            .then(other.seq.cmp(&self.seq))
    }
}

const NO_PARENT: u32 = u32::MAX;

/// Neighbor indices in fixed (up, down, left, right) order. Returns the count
/// and fills `out`.
#[inline]
fn neighbor_indices(width: u32, height: u32, idx: u32, out: &mut [u32; 4]) -> usize {
    let x = idx % width;
    let y = idx / width;
    let mut n = 0;
    if y > 0 {
        out[n] = idx - width;
        n += 1;
    }
    if y + 1 < height {
        out[n] = idx + width;
        n += 1;
    }
    if x > 0 {
        out[n] = idx - 1;
        n += 1;
    }
    if x + 1 < width {
        out[n] = idx + 1;
        n += 1;
    }
    n
}

/// A* search. Returns the minimum-cost path from the net start to its end and
/// the accumulated cost `g(end)`, or `None` when the end is unreachable.
///
/// Ties in the priority `g + h` are broken toward larger `g`, then by
/// insertion order, so identical requests always yield identical paths.
pub fn route(request: &RouteRequest<'_>) -> Option<(Path, f64)> {
    let grid = request.grid;
    let width = grid.width();
    let height = grid.height();
    let m = grid.vertex_count();
    let field = request.cost_field.values();
    let obstacles = grid.obstacle_mask();
    let blocked = request.blocked;

    let start = grid.index(request.net.start) as u32;
    let goal = grid.index(request.net.end) as u32;
    let goal_v = request.net.end;

    let mut best_cost = vec![f64::INFINITY; m];
    let mut parent = vec![NO_PARENT; m];
    let mut heap = BinaryHeap::new();
    let mut seq: u32 = 0;

    best_cost[start as usize] = 0.0;
    heap.push(OpenEntry {
        priority: manhattan(request.net.start, goal_v) as f64,
        cost: 0.0,
        seq,
        idx: start,
    });

    let mut nbrs = [0u32; 4];
    while let Some(entry) = heap.pop() {
        let u = entry.idx;
        if entry.cost > best_cost[u as usize] {
            continue; // stale entry
        }
        if u == goal {
            let mut rev = Vec::new();
            let mut cur = u;
            loop {
                rev.push(grid.vertex_at(cur as usize));
                if cur == start {
                    break;
                }
                cur = parent[cur as usize];
            }
            rev.reverse();
            return Some((Path::new(rev), entry.cost));
        }
        let n = neighbor_indices(width, height, u, &mut nbrs);
        for &v in &nbrs[..n] {
            let vi = v as usize;
            if obstacles[vi] || blocked[vi] {
                continue;
            }
            let step = 1.0 + field[vi];
            let cost = entry.cost + step;
            if cost < best_cost[vi] {
                best_cost[vi] = cost;
                parent[vi] = u;
                seq += 1;
                let h = manhattan(grid.vertex_at(vi), goal_v) as f64;
                heap.push(OpenEntry {
                    priority: cost + h,
                    cost,
                    seq,
                    idx: v,
                });
            }
        }
    }
    None
}

/// Breadth-first shortest-path oracle: exact unweighted edge count from the
/// net start to its end avoiding obstacles and `blocked`, or `None`.
///
/// Kept independent of [`route`] so the two can check each other.
pub fn bfs_oracle(grid: &GridMap, net: Net, blocked: &[bool]) -> Option<u64> {
    assert_eq!(blocked.len(), grid.vertex_count());
    let width = grid.width();
    let height = grid.height();
    let obstacles = grid.obstacle_mask();
    let start = grid.index(net.start) as u32;
    let goal = grid.index(net.end) as u32;

    let mut dist = vec![u32::MAX; grid.vertex_count()];
    let mut queue = VecDeque::new();
    dist[start as usize] = 0;
    queue.push_back(start);
    let mut nbrs = [0u32; 4];
    while let Some(u) = queue.pop_front() {
        if u == goal {
            return Some(dist[u as usize] as u64);
        }
        let n = neighbor_indices(width, height, u, &mut nbrs);
        for &v in &nbrs[..n] {
            let vi = v as usize;
            if obstacles[vi] || blocked[vi] || dist[vi] != u32::MAX {
                continue;
            }
            dist[vi] = dist[u as usize] + 1;
            queue.push_back(v);
        }
    }
    None
}

/// Uniform-cost (Dijkstra) oracle: exact minimal accumulated cost under the
/// same step-cost rule as [`route`], without a heuristic. Returns only the
/// cost.
pub fn dijkstra_oracle(grid: &GridMap, request: &RouteRequest<'_>) -> Option<f64> {
    let width = grid.width();
    let height = grid.height();
    let m = grid.vertex_count();
    let field = request.cost_field.values();
    let obstacles = grid.obstacle_mask();
    let blocked = request.blocked;
    let start = grid.index(request.net.start) as u32;
    let goal = grid.index(request.net.end) as u32;

    let mut dist = vec![f64::INFINITY; m];
    let mut heap: BinaryHeap<std::cmp::Reverse<(ordered::F64, u32)>> = BinaryHeap::new();
    dist[start as usize] = 0.0;
    heap.push(std::cmp::Reverse((ordered::F64(0.0), start)));
    let mut nbrs = [0u32; 4];
    while let Some(std::cmp::Reverse((ordered::F64(d), u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == goal {
            return Some(d);
        }
        let n = neighbor_indices(width, height, u, &mut nbrs);
        for &v in &nbrs[..n] {
            let vi = v as usize;
            if obstacles[vi] || blocked[vi] {
                continue;
            }
            let nd = d + 1.0 + field[vi];
            if nd < dist[vi] {
                dist[vi] = nd;
                heap.push(std::cmp::Reverse((ordered::F64(nd), v)));
            }
        }
    }
    None
}

mod ordered {
    use std::cmp::Ordering;

    /// Total-order wrapper for finite f64 keys.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct F64(pub f64);

    impl Eq for F64 {}

    impl PartialOrd for F64 {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    impl Ord for F64 {
        fn cmp(&self, other: &Self) -> Ordering {
            self.0.total_cmp(&other.0)
        }
    }
}
