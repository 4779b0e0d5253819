//! Parallel evolution-strategies optimizer.
//!
//! Each generation samples Gaussian perturbations of a flat parameter vector,
//! evaluates them concurrently, normalizes the rewards to zero mean and unit
//! variance, and applies the score-function update
//! `theta += alpha / (n * sigma) * sum_j rbar_j * eps_j` per noise segment.
//!
//! Determinism contract: evaluator `i` of generation `t` draws its noise from
//! a stream keyed by `(seed, t, i)`, and the update reduces rewards in
//! evaluator-index order, so results are identical regardless of how many
//! threads evaluate the population.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Error type objectives may raise; it is propagated with generation and
/// evaluator context.
pub type ObjectiveError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, Error)]
pub enum EsError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("parameter vector has {got} entries, segments cover {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reward normalization needs at least 2 rewards, got {0}")]
    TooFewRewards(usize),
    #[error("objective failed at generation {generation}, evaluator {evaluator}: {source}")]
    Objective {
        generation: usize,
        evaluator: usize,
        source: ObjectiveError,
    },
}

/// A contiguous block of the flat parameter vector sharing one noise scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub len: usize,
    pub sigma: f64,
}

/// Optimizer settings. `noise_scales` must partition the parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ESConfig {
    pub population_size: usize,
    pub learning_rate: f64,
    pub noise_scales: Vec<Segment>,
    pub max_generations: usize,
    pub seed: u64,
    /// Antithetic sampling (evaluator 2j+1 uses the negated noise of 2j).
    /// Off by default; the plain estimator is the reference behavior.
    pub mirrored: bool,
}

impl ESConfig {
    pub fn dim(&self) -> usize {
        self.noise_scales.iter().map(|s| s.len).sum()
    }

    fn validate(&self, dim: usize) -> Result<(), EsError> {
        if self.population_size < 2 {
            return Err(EsError::InvalidConfig(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if self.mirrored && self.population_size % 2 != 0 {
            return Err(EsError::InvalidConfig(
                "mirrored sampling needs an even population".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(EsError::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        for s in &self.noise_scales {
            if !(s.sigma > 0.0 && s.sigma.is_finite()) {
                return Err(EsError::InvalidConfig(format!(
                    "noise sigma must be positive, got {}",
                    s.sigma
                )));
            }
        }
        if self.dim() != dim {
            return Err(EsError::DimensionMismatch {
                expected: self.dim(),
                got: dim,
            });
        }
        Ok(())
    }
}

/// One generation's raw material: per-evaluator noise, raw rewards and their
/// normalized form.
#[derive(Debug, Clone)]
pub struct Generation {
    pub noises: Vec<Vec<f64>>,
    pub rewards: Vec<f64>,
    pub normalized_rewards: Vec<f64>,
}

/// Per-generation summary, recorded in the training history. Contains only
/// deterministic quantities so that histories from runs with the same seed
/// compare byte-equal; wallclock is reported separately via the callback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_reward: f64,
    pub mean_reward: f64,
    pub min_reward: f64,
}

/// Optimization result: final mean parameter, best-ever perturbed candidate
/// by raw reward, and the per-generation history.
#[derive(Debug, Clone)]
pub struct EsResult {
    pub theta: Vec<f64>,
    pub best_theta: Vec<f64>,
    pub best_reward: f64,
    pub history: Vec<GenerationStats>,
}

/// Noise stream for evaluator `evaluator` in generation `generation`.
fn noise_rng(seed: u64, generation: u64, evaluator: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&generation.to_le_bytes());
    key[16..24].copy_from_slice(&evaluator.to_le_bytes());
    key[24..32].copy_from_slice(b"es-noise");
    ChaCha8Rng::from_seed(key)
}

fn draw_noise(dim: usize, seed: u64, generation: u64, evaluator: u64) -> Vec<f64> {
    let mut rng = noise_rng(seed, generation, evaluator);
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Samples `n` independent standard-normal vectors of length `dim`, one per
/// evaluator index. Deterministic in `(seed, generation, evaluator index)`.
pub fn sample_noise(dim: usize, n: usize, seed: u64, generation: u64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| draw_noise(dim, seed, generation, i as u64))
        .collect()
}

/// `theta + sigma_s * noise` per segment.
pub fn perturb(theta: &[f64], noise: &[f64], config: &ESConfig) -> Result<Vec<f64>, EsError> {
    if theta.len() != config.dim() || noise.len() != theta.len() {
        return Err(EsError::DimensionMismatch {
            expected: config.dim(),
            got: theta.len().max(noise.len()),
        });
    }
    let mut out = theta.to_vec();
    let mut offset = 0;
    for seg in &config.noise_scales {
        for d in offset..offset + seg.len {
            out[d] += seg.sigma * noise[d];
        }
        offset += seg.len;
    }
    Ok(out)
}

/// Standardizes rewards to zero mean and unit variance (population standard
/// deviation). A zero standard deviation yields all zeros, which makes the
/// subsequent update a no-op.
pub fn normalize_rewards(rewards: &[f64]) -> Result<Vec<f64>, EsError> {
    let n = rewards.len();
    if n < 2 {
        return Err(EsError::TooFewRewards(n));
    }
    let mean = rewards.iter().sum::<f64>() / n as f64;
    let var = rewards.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n as f64;
    let std = var.sqrt();
    if std == 0.0 {
        return Ok(vec![0.0; n]);
    }
    Ok(rewards.iter().map(|r| (r - mean) / std).collect())
}

/// Applies the score-function update per segment, reducing evaluator
/// contributions in index order so the sum is independent of scheduling.
pub fn update(theta: &[f64], generation: &Generation, config: &ESConfig) -> Result<Vec<f64>, EsError> {
    let dim = config.dim();
    if theta.len() != dim {
        return Err(EsError::DimensionMismatch {
            expected: dim,
            got: theta.len(),
        });
    }
    let n = generation.noises.len();
    if n != generation.normalized_rewards.len() || n == 0 {
        return Err(EsError::InvalidConfig(
            "generation noise and reward counts disagree".into(),
        ));
    }
    let mut acc = vec![0.0; dim];
    for (noise, &rbar) in generation
        .noises
        .iter()
        .zip(&generation.normalized_rewards)
    {
        if noise.len() != dim {
            return Err(EsError::DimensionMismatch {
                expected: dim,
                got: noise.len(),
            });
        }
        for (a, &e) in acc.iter_mut().zip(noise) {
            *a += rbar * e;
        }
    }
    let mut out = theta.to_vec();
    let mut offset = 0;
    for seg in &config.noise_scales {
        let scale = config.learning_rate / (n as f64 * seg.sigma);
        for d in offset..offset + seg.len {
            out[d] += scale * acc[d];
        }
        offset += seg.len;
    }
    Ok(out)
}

/// Runs the optimizer: sample, evaluate concurrently, normalize, update, for
/// `max_generations` iterations. The initial parameter is evaluated once so
/// the best-ever candidate is defined even for zero generations.
///
/// `on_generation` receives each generation's stats plus its wallclock, for
/// progress logging; the returned history holds only the deterministic stats.
pub fn optimize<F, C>(
    initial: Vec<f64>,
    objective: F,
    config: &ESConfig,
    mut on_generation: C,
) -> Result<EsResult, EsError>
where
    F: Fn(&[f64]) -> Result<f64, ObjectiveError> + Sync,
    C: FnMut(&GenerationStats, Duration),
{
    let dim = initial.len();
    config.validate(dim)?;
    let n = config.population_size;

    let mut theta = initial;
    let mut best_theta = theta.clone();
    let mut best_reward = objective(&theta).map_err(|source| EsError::Objective {
        generation: 0,
        evaluator: usize::MAX,
        source,
    })?;

    let mut history = Vec::with_capacity(config.max_generations);
    for gen in 0..config.max_generations {
        let started = Instant::now();
        let evaluated: Result<Vec<(Vec<f64>, f64)>, EsError> = (0..n)
            .into_par_iter()
            .map(|i| {
                let noise = if config.mirrored && i % 2 == 1 {
                    let mut mirror = draw_noise(dim, config.seed, gen as u64, (i - 1) as u64);
                    for e in &mut mirror {
                        *e = -*e;
                    }
                    mirror
                } else {
                    draw_noise(dim, config.seed, gen as u64, i as u64)
                };
                let candidate = perturb(&theta, &noise, config)?;
                let reward = objective(&candidate).map_err(|source| EsError::Objective {
                    generation: gen,
                    evaluator: i,
                    source,
                })?;
                Ok((noise, reward))
            })
            .collect();
        let evaluated = evaluated?;

        let rewards: Vec<f64> = evaluated.iter().map(|(_, r)| *r).collect();
        let mut gen_best = f64::NEG_INFINITY;
        let mut gen_best_idx = 0usize;
        let mut gen_min = f64::INFINITY;
        let mut sum = 0.0;
        for (i, &r) in rewards.iter().enumerate() {
            if r > gen_best {
                gen_best = r;
                gen_best_idx = i;
            }
            if r < gen_min {
                gen_min = r;
            }
            sum += r;
        }
        if gen_best > best_reward {
            best_reward = gen_best;
            best_theta = perturb(&theta, &evaluated[gen_best_idx].0, config)?;
        }

        let normalized = normalize_rewards(&rewards)?;
        let generation = Generation {
            noises: evaluated.into_iter().map(|(e, _)| e).collect(),
            rewards,
            normalized_rewards: normalized,
        };
        theta = update(&theta, &generation, config)?;

        let stats = GenerationStats {
            generation: gen,
            best_reward: gen_best,
            mean_reward: sum / n as f64,
            min_reward: gen_min,
        };
        on_generation(&stats, started.elapsed());
        history.push(stats);
    }

    Ok(EsResult {
        theta,
        best_theta,
        best_reward,
        history,
    })
}
