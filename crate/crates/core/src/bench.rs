//! Baselines, metrics and the benchmark runner.
//!
//! A benchmark evaluates every (algorithm, instance, seed) cell, records one
//! [`AlgoResult`] per cell, and aggregates success rates (mean and std over
//! seeds) plus the common average length: lengths are only compared over
//! instances that every algorithm solved in every seed. Reports regenerate
//! bit-identically from stored records.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::astar::CostField;
use crate::grid::{ProblemInstance, RoutingOutcome};
use crate::solver::{sequential_route, solve, SolveError, SolverConfig, SolverMode};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no results to aggregate")]
    EmptyResults,
    #[error("unknown algorithm spec '{0}'")]
    UnknownAlgorithm(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// One benchmark cell: algorithm x instance x seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoResult {
    pub algorithm: String,
    /// Instance identifier (file stem for on-disk suites).
    pub instance: String,
    /// Group label used for report columns, e.g. "16x16/4n/plain".
    pub group: String,
    pub seed: u64,
    pub nets: usize,
    pub connected: usize,
    pub success: bool,
    pub total_length: Option<u64>,
    pub wallclock_secs: f64,
}

/// A configured algorithm under benchmark.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    /// Sequential A* over `orders` random ranking orders, best outcome kept.
    SeqAstar { orders: usize },
    /// The trainable solver in a given mode.
    Solver {
        mode: SolverMode,
        post_process: bool,
    },
}

impl AlgorithmSpec {
    /// Parses one algorithm id: `seq-astar:<n>`, `cml`, `rl`, `rc`, `rc-pp`.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        if let Some(rest) = text.strip_prefix("seq-astar:") {
            let orders: usize = rest
                .parse()
                .map_err(|_| BenchError::UnknownAlgorithm(text.to_string()))?;
            if orders == 0 {
                return Err(BenchError::UnknownAlgorithm(text.to_string()));
            }
            return Ok(AlgorithmSpec::SeqAstar { orders });
        }
        match text {
            "cml" => Ok(AlgorithmSpec::Solver {
                mode: SolverMode::CostOnly,
                post_process: false,
            }),
            "rl" => Ok(AlgorithmSpec::Solver {
                mode: SolverMode::RankingOnly,
                post_process: false,
            }),
            "rc" => Ok(AlgorithmSpec::Solver {
                mode: SolverMode::Full,
                post_process: false,
            }),
            "rc-pp" => Ok(AlgorithmSpec::Solver {
                mode: SolverMode::Full,
                post_process: true,
            }),
            other => Err(BenchError::UnknownAlgorithm(other.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::SeqAstar { orders } => format!("seq-astar:{orders}"),
            AlgorithmSpec::Solver {
                mode: SolverMode::CostOnly,
                ..
            } => "cml".into(),
            AlgorithmSpec::Solver {
                mode: SolverMode::RankingOnly,
                ..
            } => "rl".into(),
            AlgorithmSpec::Solver {
                mode: SolverMode::Full,
                post_process: false,
            } => "rc".into(),
            AlgorithmSpec::Solver {
                mode: SolverMode::Full,
                post_process: true,
            } => "rc-pp".into(),
        }
    }
}

/// Routes with `num_orders` uniformly random ranking orders (deterministic in
/// `seed`, sampled from one stream so larger `num_orders` extends smaller
/// ones) and keeps the best outcome: most nets connected, then smaller
/// connected wire length. Ties keep the earlier order.
pub fn seq_astar_baseline(
    instance: &ProblemInstance,
    num_orders: usize,
    seed: u64,
) -> RoutingOutcome {
    assert!(num_orders > 0, "need at least one order");
    let k = instance.net_count();
    let zero_maps = vec![CostField::zeros(instance.grid().vertex_count()); k];
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[24..32].copy_from_slice(b"seqorder");
    let mut rng = ChaCha8Rng::from_seed(key);

    let mut best: Option<RoutingOutcome> = None;
    for _ in 0..num_orders {
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let outcome = sequential_route(instance, &order, &zero_maps);
        let better = match &best {
            None => true,
            Some(prev) => {
                outcome.connected_count() > prev.connected_count()
                    || (outcome.connected_count() == prev.connected_count()
                        && outcome.connected_length() < prev.connected_length())
            }
        };
        if better {
            best = Some(outcome);
        }
    }
    best.expect("at least one order was evaluated")
}

/// Fraction of successful results. Errors on empty input.
pub fn success_rate(results: &[AlgoResult]) -> Result<f64, BenchError> {
    if results.is_empty() {
        return Err(BenchError::EmptyResults);
    }
    Ok(results.iter().filter(|r| r.success).count() as f64 / results.len() as f64)
}

/// Mean total length per algorithm, restricted to the instances every
/// algorithm solved. `None` when no instance is common to all.
pub fn common_average_length(results_by_algo: &[&[AlgoResult]]) -> Option<Vec<f64>> {
    if results_by_algo.is_empty() {
        return None;
    }
    let mut common: Option<std::collections::BTreeSet<&str>> = None;
    for results in results_by_algo {
        let solved: std::collections::BTreeSet<&str> = results
            .iter()
            .filter(|r| r.success)
            .map(|r| r.instance.as_str())
            .collect();
        common = Some(match common {
            None => solved,
            Some(acc) => acc.intersection(&solved).copied().collect(),
        });
    }
    let common = common.unwrap();
    if common.is_empty() {
        return None;
    }
    Some(
        results_by_algo
            .iter()
            .map(|results| {
                let lengths: Vec<f64> = results
                    .iter()
                    .filter(|r| common.contains(r.instance.as_str()))
                    .filter_map(|r| r.total_length)
                    .map(|l| l as f64)
                    .collect();
                lengths.iter().sum::<f64>() / lengths.len() as f64
            })
            .collect(),
    )
}

/// Aggregated row for one algorithm within one instance group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoSummary {
    pub algorithm: String,
    pub success_rate_mean: f64,
    pub success_rate_std: f64,
    pub common_length_mean: Option<f64>,
    pub common_length_std: Option<f64>,
    pub mean_wallclock_secs: f64,
}

/// Aggregates for one instance group (same size and net count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub group: String,
    pub instance_count: usize,
    pub seeds: Vec<u64>,
    /// Instances solved by every algorithm in every seed.
    pub common_instances: usize,
    pub rows: Vec<AlgoSummary>,
}

/// Whole-benchmark report: one column group per instance group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub groups: Vec<GroupReport>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Group label for an instance, used for report columns.
pub fn group_label(instance: &ProblemInstance) -> String {
    format!(
        "{}x{}/{}n/{}",
        instance.grid().width(),
        instance.grid().height(),
        instance.net_count(),
        if instance.grid().obstacle_count() == 0 {
            "plain"
        } else {
            "obs"
        }
    )
}

/// Builds the aggregate report from raw records. Deterministic: identical
/// records produce an identical report.
pub fn report_from_records(records: &[AlgoResult]) -> BenchReport {
    // Preserve first-appearance order for groups and algorithms.
    let mut group_names: Vec<&str> = Vec::new();
    for r in records {
        if !group_names.contains(&r.group.as_str()) {
            group_names.push(&r.group);
        }
    }
    let mut groups = Vec::new();
    for group in group_names {
        let of_group: Vec<&AlgoResult> = records.iter().filter(|r| r.group == group).collect();
        let mut algorithms: Vec<&str> = Vec::new();
        for r in &of_group {
            if !algorithms.contains(&r.algorithm.as_str()) {
                algorithms.push(&r.algorithm);
            }
        }
        let mut seeds: Vec<u64> = of_group.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        let mut instances: Vec<&str> = of_group.iter().map(|r| r.instance.as_str()).collect();
        instances.sort_unstable();
        instances.dedup();

        // Common set: solved by every algorithm in every seed.
        let common: Vec<&str> = instances
            .iter()
            .copied()
            .filter(|inst| {
                algorithms.iter().all(|algo| {
                    seeds.iter().all(|&seed| {
                        of_group.iter().any(|r| {
                            r.instance == *inst
                                && r.algorithm == *algo
                                && r.seed == seed
                                && r.success
                        })
                    })
                })
            })
            .collect();

        let mut rows = Vec::new();
        for algo in &algorithms {
            let mut rates = Vec::new();
            let mut lengths = Vec::new();
            for &seed in &seeds {
                let cell: Vec<&&AlgoResult> = of_group
                    .iter()
                    .filter(|r| r.algorithm == *algo && r.seed == seed)
                    .collect();
                if cell.is_empty() {
                    continue;
                }
                rates.push(
                    cell.iter().filter(|r| r.success).count() as f64 / cell.len() as f64,
                );
                if !common.is_empty() {
                    let ls: Vec<f64> = cell
                        .iter()
                        .filter(|r| common.contains(&r.instance.as_str()))
                        .filter_map(|r| r.total_length)
                        .map(|l| l as f64)
                        .collect();
                    if !ls.is_empty() {
                        lengths.push(ls.iter().sum::<f64>() / ls.len() as f64);
                    }
                }
            }
            let (rate_mean, rate_std) = mean_std(&rates);
            let (len_mean, len_std) = if lengths.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_std(&lengths);
                (Some(m), Some(s))
            };
            let clocks: Vec<f64> = of_group
                .iter()
                .filter(|r| r.algorithm == *algo)
                .map(|r| r.wallclock_secs)
                .collect();
            rows.push(AlgoSummary {
                algorithm: algo.to_string(),
                success_rate_mean: rate_mean,
                success_rate_std: rate_std,
                common_length_mean: len_mean,
                common_length_std: len_std,
                mean_wallclock_secs: clocks.iter().sum::<f64>() / clocks.len() as f64,
            });
        }
        groups.push(GroupReport {
            group: group.to_string(),
            instance_count: instances.len(),
            seeds,
            common_instances: common.len(),
            rows,
        });
    }
    BenchReport { groups }
}

/// Runs every (algorithm, instance, seed) cell. Cells evaluate concurrently;
/// record order is fixed by construction, so output is deterministic apart
/// from the recorded wallclock.
pub fn run_benchmark(
    instances: &[(String, ProblemInstance)],
    algorithms: &[AlgorithmSpec],
    seeds: &[u64],
    base_config: &SolverConfig,
) -> Result<(Vec<AlgoResult>, BenchReport), BenchError> {
    if instances.is_empty() || algorithms.is_empty() || seeds.is_empty() {
        return Err(BenchError::EmptyResults);
    }
    struct Cell<'a> {
        spec: &'a AlgorithmSpec,
        name: &'a str,
        instance: &'a ProblemInstance,
        seed: u64,
    }
    let mut cells = Vec::new();
    for spec in algorithms {
        for (name, instance) in instances {
            for &seed in seeds {
                cells.push(Cell {
                    spec,
                    name,
                    instance,
                    seed,
                });
            }
        }
    }
    let records: Result<Vec<AlgoResult>, BenchError> = cells
        .par_iter()
        .map(|cell| {
            let started = std::time::Instant::now();
            let outcome = match cell.spec {
                AlgorithmSpec::SeqAstar { orders } => {
                    seq_astar_baseline(cell.instance, *orders, cell.seed)
                }
                AlgorithmSpec::Solver { mode, post_process } => {
                    let config = SolverConfig {
                        mode: *mode,
                        post_process: *post_process,
                        seed: cell.seed,
                        ..base_config.clone()
                    };
                    solve(cell.instance, &config)?.outcome
                }
            };
            Ok(AlgoResult {
                algorithm: cell.spec.label(),
                instance: cell.name.to_string(),
                group: group_label(cell.instance),
                seed: cell.seed,
                nets: cell.instance.net_count(),
                connected: outcome.connected_count(),
                success: outcome.fully_connected(),
                total_length: outcome.total_length(),
                wallclock_secs: started.elapsed().as_secs_f64(),
            })
        })
        .collect();
    let records = records?;
    let report = report_from_records(&records);
    Ok((records, report))
}

fn format_cell(row: &AlgoSummary) -> String {
    let rate = format!("{:.2}±{:.2}", row.success_rate_mean, row.success_rate_std);
    match (row.common_length_mean, row.common_length_std) {
        (Some(m), Some(s)) => format!("{rate}({m:.1}±{s:.2})"),
        _ => format!("{rate}(-)"),
    }
}

/// Renders the report as an aligned plain-text table with one
/// "rate±std(length±std)" cell per group, plus a timing column.
pub fn render_table(report: &BenchReport) -> String {
    let mut algorithms: Vec<&str> = Vec::new();
    for g in &report.groups {
        for row in &g.rows {
            if !algorithms.contains(&row.algorithm.as_str()) {
                algorithms.push(&row.algorithm);
            }
        }
    }
    let mut header: Vec<String> = vec!["algorithm".to_string()];
    for g in &report.groups {
        header.push(format!(
            "{} [{} maps, {} common]",
            g.group, g.instance_count, g.common_instances
        ));
    }
    header.push("sec/map".to_string());

    let mut rows_text: Vec<Vec<String>> = vec![header];
    for algo in &algorithms {
        let mut line = vec![algo.to_string()];
        let mut clocks = Vec::new();
        for g in &report.groups {
            match g.rows.iter().find(|r| r.algorithm == *algo) {
                Some(row) => {
                    line.push(format_cell(row));
                    clocks.push(row.mean_wallclock_secs);
                }
                None => line.push("-".to_string()),
            }
        }
        let mean_clock = if clocks.is_empty() {
            0.0
        } else {
            clocks.iter().sum::<f64>() / clocks.len() as f64
        };
        line.push(format!("{mean_clock:.2}"));
        rows_text.push(line);
    }

    let cols = rows_text[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows_text.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows_text {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if c + 1 < cols {
                line.push_str(&" ".repeat(widths[c] - cell.len() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::generate_instance;

    fn result(algo: &str, instance: &str, seed: u64, success: bool, len: Option<u64>) -> AlgoResult {
        AlgoResult {
            algorithm: algo.into(),
            instance: instance.into(),
            group: "g".into(),
            seed,
            nets: 2,
            connected: if success { 2 } else { 1 },
            success,
            total_length: len,
            wallclock_secs: 0.0,
        }
    }

    #[test]
    fn success_rate_basics() {
        let all: Vec<AlgoResult> = (0..4)
            .map(|i| result("a", &format!("i{i}"), 0, true, Some(10)))
            .collect();
        assert_eq!(success_rate(&all).unwrap(), 1.0);
        let none: Vec<AlgoResult> = (0..4)
            .map(|i| result("a", &format!("i{i}"), 0, false, None))
            .collect();
        assert_eq!(success_rate(&none).unwrap(), 0.0);
        let mixed: Vec<AlgoResult> = (0..50)
            .map(|i| result("a", &format!("i{i}"), 0, i < 46, (i < 46).then_some(10)))
            .collect();
        assert!((success_rate(&mixed).unwrap() - 0.92).abs() < 1e-12);
        assert!(matches!(success_rate(&[]), Err(BenchError::EmptyResults)));
    }

    #[test]
    fn common_average_restricts_to_intersection() {
        let a = vec![
            result("a", "1", 0, true, Some(10)),
            result("a", "2", 0, true, Some(20)),
            result("a", "3", 0, false, None),
        ];
        let b = vec![
            result("b", "1", 0, false, None),
            result("b", "2", 0, true, Some(30)),
            result("b", "3", 0, true, Some(5)),
        ];
        // Only instance 2 is common.
        let means = common_average_length(&[&a, &b]).unwrap();
        assert_eq!(means, vec![20.0, 30.0]);

        // Single algorithm: its own successes.
        let solo = common_average_length(&[&a[..]]).unwrap();
        assert_eq!(solo, vec![15.0]);

        // Disjoint successes: explicit no-common result.
        let c = vec![result("c", "3", 0, true, Some(7))];
        assert_eq!(common_average_length(&[&a, &c]), None);
    }

    #[test]
    fn baseline_single_net_ignores_order_count() {
        let inst = generate_instance(8, 8, 1, 0.1, 21).unwrap();
        let one = seq_astar_baseline(&inst, 1, 0);
        let many = seq_astar_baseline(&inst, 50, 0);
        assert_eq!(one, many);
    }

    #[test]
    fn baseline_nested_orders_dominate() {
        for seed in 0..10u64 {
            let inst = generate_instance(12, 12, 4, 0.2, seed).unwrap();
            let few = seq_astar_baseline(&inst, 3, seed);
            let more = seq_astar_baseline(&inst, 24, seed);
            assert!(
                more.connected_count() >= few.connected_count(),
                "seed {seed}"
            );
            if more.connected_count() == few.connected_count() {
                assert!(more.connected_length() <= few.connected_length());
            }
        }
    }

    #[test]
    fn baseline_with_enough_samples_matches_exhaustive_search() {
        // k=3 has 6 orders; 200 seeded samples cover all of them.
        let inst = generate_instance(9, 9, 3, 0.25, 77).unwrap();
        let sampled = seq_astar_baseline(&inst, 200, 5);

        let k = inst.net_count();
        let zero_maps = vec![CostField::zeros(inst.grid().vertex_count()); k];
        let mut best: Option<RoutingOutcome> = None;
        let mut perm: Vec<usize> = (0..k).collect();
        // Heap's algorithm over the 6 permutations.
        fn permutations(perm: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if n <= 1 {
                out.push(perm.clone());
                return;
            }
            for i in 0..n {
                permutations(perm, n - 1, out);
                if n % 2 == 0 {
                    perm.swap(i, n - 1);
                } else {
                    perm.swap(0, n - 1);
                }
            }
        }
        let mut all = Vec::new();
        permutations(&mut perm, k, &mut all);
        assert_eq!(all.len(), 6);
        for order in all {
            let outcome = sequential_route(&inst, &order, &zero_maps);
            let better = match &best {
                None => true,
                Some(prev) => {
                    outcome.connected_count() > prev.connected_count()
                        || (outcome.connected_count() == prev.connected_count()
                            && outcome.connected_length() < prev.connected_length())
                }
            };
            if better {
                best = Some(outcome);
            }
        }
        let exhaustive = best.unwrap();
        assert_eq!(sampled.connected_count(), exhaustive.connected_count());
        assert_eq!(sampled.connected_length(), exhaustive.connected_length());
    }

    #[test]
    fn run_benchmark_single_cell_and_regeneration() {
        let inst = generate_instance(8, 8, 2, 0.0, 3).unwrap();
        let specs = vec![AlgorithmSpec::SeqAstar { orders: 2 }];
        let config = SolverConfig::default();
        let (records, report) =
            run_benchmark(&[("map0".into(), inst)], &specs, &[1], &config).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.groups.len(), 1);
        let again = report_from_records(&records);
        assert_eq!(report, again);
        let table_a = render_table(&report);
        let table_b = render_table(&again);
        assert_eq!(table_a, table_b);
    }

    #[test]
    fn spec_parsing_round_trips() {
        for id in ["seq-astar:5", "seq-astar:200", "cml", "rl", "rc", "rc-pp"] {
            let spec = AlgorithmSpec::parse(id).unwrap();
            assert_eq!(spec.label(), id);
        }
        assert!(AlgorithmSpec::parse("nope").is_err());
        assert!(AlgorithmSpec::parse("seq-astar:0").is_err());
    }
}
