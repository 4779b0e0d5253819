//! Canonical instance and solution file formats.
//!
//! Both are versioned JSON documents. Saving is canonical: fixed key order,
//! obstacles sorted lexicographically by `[x, y]`, two-space indentation and
//! a trailing newline, so identical data always serializes to identical
//! bytes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridError, GridMap, Net, Path, ProblemInstance, RoutingOutcome, Vertex};

pub const INSTANCE_VERSION: u32 = 1;
pub const SOLUTION_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Invalid(#[from] GridError),
    #[error("solution does not match instance: {0}")]
    SolutionMismatch(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    version: u32,
    width: u32,
    height: u32,
    obstacles: Vec<[u32; 2]>,
    nets: Vec<NetDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetDoc {
    start: [u32; 2],
    end: [u32; 2],
}

fn to_pair(v: Vertex) -> [u32; 2] {
    [v.x, v.y]
}

fn from_pair(p: [u32; 2]) -> Vertex {
    Vertex::new(p[0], p[1])
}

/// Parses and validates an instance document.
pub fn load_instance(bytes: &[u8]) -> Result<ProblemInstance, FormatError> {
    let doc: InstanceDoc = serde_json::from_slice(bytes)?;
    if doc.version != INSTANCE_VERSION {
        return Err(FormatError::UnsupportedVersion(doc.version));
    }
    let grid = GridMap::new(
        doc.width,
        doc.height,
        doc.obstacles.iter().copied().map(from_pair),
    )?;
    let nets = doc
        .nets
        .iter()
        .map(|n| Net::new(from_pair(n.start), from_pair(n.end)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProblemInstance::new(grid, nets)?)
}

/// Serializes an instance canonically.
pub fn save_instance(instance: &ProblemInstance) -> Vec<u8> {
    let grid = instance.grid();
    let doc = InstanceDoc {
        version: INSTANCE_VERSION,
        width: grid.width(),
        height: grid.height(),
        obstacles: grid.obstacles().into_iter().map(to_pair).collect(),
        nets: instance
            .nets()
            .iter()
            .map(|n| NetDoc {
                start: to_pair(n.start),
                end: to_pair(n.end),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("instance serialization cannot fail");
    out.push(b'\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDoc {
    version: u32,
    /// Net indices (0-based) in the order they were routed.
    order: Vec<usize>,
    nets: Vec<SolutionNetDoc>,
    connected_count: usize,
    total_length: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionNetDoc {
    connected: bool,
    path: Option<Vec<[u32; 2]>>,
}

/// A solved routing: the outcome plus the order the nets were routed in.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub order: Vec<usize>,
    pub outcome: RoutingOutcome,
}

/// Serializes a solution canonically.
pub fn save_solution(solution: &Solution) -> Vec<u8> {
    let doc = SolutionDoc {
        version: SOLUTION_VERSION,
        order: solution.order.clone(),
        nets: solution
            .outcome
            .paths()
            .iter()
            .map(|p| SolutionNetDoc {
                connected: p.is_some(),
                path: p
                    .as_ref()
                    .map(|path| path.vertices().iter().copied().map(to_pair).collect()),
            })
            .collect(),
        connected_count: solution.outcome.connected_count(),
        total_length: solution.outcome.total_length(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("solution serialization cannot fail");
    out.push(b'\n');
    out
}

/// Parses a solution document. Structural validity against a concrete
/// instance is the caller's concern (see [`crate::grid::validate_outcome`]);
/// this checks internal consistency only.
pub fn load_solution(bytes: &[u8]) -> Result<Solution, FormatError> {
    let doc: SolutionDoc = serde_json::from_slice(bytes)?;
    if doc.version != SOLUTION_VERSION {
        return Err(FormatError::UnsupportedVersion(doc.version));
    }
    let paths: Vec<Option<Path>> = doc
        .nets
        .iter()
        .map(|n| {
            n.path
                .as_ref()
                .map(|vs| Path::new(vs.iter().copied().map(from_pair).collect()))
        })
        .collect();
    for (i, n) in doc.nets.iter().enumerate() {
        if n.connected != n.path.is_some() {
            return Err(FormatError::SolutionMismatch(format!(
                "net {i}: connected flag disagrees with path presence"
            )));
        }
        if n.path.as_ref().is_some_and(|p| p.is_empty()) {
            return Err(FormatError::SolutionMismatch(format!("net {i}: empty path")));
        }
    }
    let outcome = RoutingOutcome::from_paths(paths);
    if outcome.connected_count() != doc.connected_count {
        return Err(FormatError::SolutionMismatch(format!(
            "connected_count {} disagrees with paths ({} connected)",
            doc.connected_count,
            outcome.connected_count()
        )));
    }
    if outcome.total_length() != doc.total_length {
        return Err(FormatError::SolutionMismatch(format!(
            "total_length {:?} disagrees with recomputed {:?}",
            doc.total_length,
            outcome.total_length()
        )));
    }
    let mut sorted = doc.order.clone();
    sorted.sort_unstable();
    if sorted != (0..doc.nets.len()).collect::<Vec<_>>() {
        return Err(FormatError::SolutionMismatch(
            "order is not a permutation of the net indices".into(),
        ));
    }
    Ok(Solution {
        order: doc.order,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::generate_instance;

    #[test]
    fn minimal_document_loads() {
        let doc = br#"{
  "version": 1,
  "width": 2,
  "height": 2,
  "obstacles": [],
  "nets": [{"start": [0, 0], "end": [1, 1]}]
}"#;
        let inst = load_instance(doc).unwrap();
        assert_eq!(inst.net_count(), 1);
        assert_eq!(inst.grid().width(), 2);
    }

    #[test]
    fn distinct_errors_per_defect() {
        let syntax = load_instance(b"{");
        assert!(matches!(syntax, Err(FormatError::Malformed(_))));

        let oob = br#"{"version":1,"width":2,"height":2,"obstacles":[[5,0]],"nets":[{"start":[0,0],"end":[1,1]}]}"#;
        assert!(matches!(
            load_instance(oob),
            Err(FormatError::Invalid(GridError::OutOfBounds { .. }))
        ));

        let dup = br#"{"version":1,"width":3,"height":3,"obstacles":[],"nets":[{"start":[0,0],"end":[1,1]},{"start":[1,1],"end":[2,2]}]}"#;
        assert!(matches!(
            load_instance(dup),
            Err(FormatError::Invalid(GridError::DuplicatePin(_)))
        ));

        let on_obs = br#"{"version":1,"width":3,"height":3,"obstacles":[[0,0]],"nets":[{"start":[0,0],"end":[1,1]}]}"#;
        assert!(matches!(
            load_instance(on_obs),
            Err(FormatError::Invalid(GridError::PinOnObstacle(_)))
        ));

        let version = br#"{"version":9,"width":2,"height":2,"obstacles":[],"nets":[{"start":[0,0],"end":[1,1]}]}"#;
        assert!(matches!(
            load_instance(version),
            Err(FormatError::UnsupportedVersion(9))
        ));
    }

    #[test]
    fn save_is_deterministic_and_canonical_round_trips() {
        let inst = generate_instance(8, 6, 3, 0.2, 17).unwrap();
        let a = save_instance(&inst);
        let b = save_instance(&inst);
        assert_eq!(a, b);
        let reloaded = load_instance(&a).unwrap();
        assert_eq!(reloaded, inst);
        assert_eq!(save_instance(&reloaded), a);
    }

    #[test]
    fn round_trip_over_random_instances() {
        for seed in 0..100u64 {
            let inst = generate_instance(10, 7, 2, 0.25, seed).unwrap();
            let bytes = save_instance(&inst);
            let back = load_instance(&bytes).unwrap();
            assert_eq!(back, inst, "seed {seed}");
            assert_eq!(save_instance(&back), bytes, "seed {seed}");
        }
    }

    #[test]
    fn empty_obstacles_serialize_as_empty_list() {
        let inst = generate_instance(4, 4, 1, 0.0, 1).unwrap();
        let text = String::from_utf8(save_instance(&inst)).unwrap();
        assert!(text.contains("\"obstacles\": []"));
    }

    #[test]
    fn solution_round_trip_and_consistency_checks() {
        use crate::grid::Path;
        let outcome = RoutingOutcome::from_paths(vec![
            Some(Path::new(vec![
                Vertex::new(0, 0),
                Vertex::new(1, 0),
                Vertex::new(1, 1),
            ])),
            None,
        ]);
        let sol = Solution {
            order: vec![1, 0],
            outcome,
        };
        let bytes = save_solution(&sol);
        let back = load_solution(&bytes).unwrap();
        assert_eq!(back, sol);

        let lying = bytes
            .iter()
            .map(|&b| b)
            .collect::<Vec<u8>>();
        let text = String::from_utf8(lying)
            .unwrap()
            .replace("\"connected_count\": 1", "\"connected_count\": 2");
        assert!(matches!(
            load_solution(text.as_bytes()),
            Err(FormatError::SolutionMismatch(_))
        ));
    }
}
