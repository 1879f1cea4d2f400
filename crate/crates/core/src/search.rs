//! Minimizing the mutual information of a diagonal arrangement over regular tableaux.
//!
//! Small shapes are searched exhaustively. Larger shapes use a two-phase heuristic:
//! a breadth-first phase samples `N1` random regular tableaux and keeps the `N2` best
//! distinct ones, then a depth-first phase walks `N_D` steps from each, always moving to
//! the best neighbor (even when it is worse than the current tableau) and remembering
//! the best tableau seen.
//!
//! All parallel work is split into index-addressed tasks with their own derived seeds and
//! reduced in index order, so every result is bitwise identical for any worker count.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::qstate::{shannon_entropy, BipartiteDims};
use crate::rng::task_rng;
use crate::tableau::{
    arrange, canonicalize_decreasing, count_regular, neighbors, random_regular_with, subtree_roots,
    RegularTableaux, YoungTableau,
};

/// Default refusal threshold for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: u64 = 10_000_000;

/// Exhaustive enumeration is split into at least this many subtrees.
const MIN_SUBTREES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Breadth-first samples.
    pub n1: usize,
    /// Seeds retained for the depth-first phase.
    pub n2: usize,
    /// Depth-first iterations per seed.
    pub n_d: usize,
    pub seed: u64,
    pub exhaustive_threshold: BigUint,
    /// Worker threads; 1 runs sequentially.
    pub parallelism: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n1: 20_000,
            n2: 12,
            n_d: 200,
            seed: 0,
            exhaustive_threshold: BigUint::from(DEFAULT_EXHAUSTIVE_THRESHOLD),
            parallelism: par::default_jobs(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.n1 == 0 || self.n2 == 0 || self.n_d == 0 {
            return bad("N1, N2 and N_D must be positive");
        }
        if self.n2 > self.n1 {
            return bad("N2 must not exceed N1");
        }
        if self.exhaustive_threshold < BigUint::from(1u32) {
            return bad("exhaustive threshold must be at least 1");
        }
        if self.parallelism == 0 {
            return bad("parallelism must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Heuristic,
}

/// Where the winning tableau came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedProvenance {
    /// Position in the exhaustive enumeration stream.
    Enumeration { index: u64 },
    /// Descent started from the `seed_index`-th seed; `draw_index` is its breadth-first draw.
    Descent {
        seed_index: usize,
        draw_index: Option<usize>,
    },
    /// No search result beat the canonicalized row-major arrangement.
    CanonicalStart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_tableau: YoungTableau,
    /// Mutual information in nats.
    pub best_mi: f64,
    pub method: Method,
    pub evaluations: u64,
    /// Best mutual information seen so far, per depth-first iteration (heuristic) or
    /// per enumeration subtree (exhaustive). Non-increasing.
    pub trajectory: Vec<f64>,
    pub provenance: SeedProvenance,
    /// Mutual information of the canonicalized starting arrangement.
    pub initial_mi: f64,
}

/// Mutual information of `probs` arranged by a tableau, with the joint entropy cached.
#[derive(Debug, Clone)]
pub struct Objective {
    probs: Vec<f64>,
    dims: BipartiteDims,
    joint_entropy: f64,
}

impl Objective {
    pub fn new(probs: &[f64], dims: BipartiteDims) -> Result<Self> {
        if probs.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: probs.len(),
            });
        }
        Ok(Self {
            probs: probs.to_vec(),
            dims,
            joint_entropy: shannon_entropy(probs),
        })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mutual_information(&self, t: &YoungTableau) -> f64 {
        let d_b = self.dims.d_b;
        let mut rows = vec![0.0; self.dims.d_a];
        let mut cols = vec![0.0; d_b];
        for (cell, &v) in t.cells().iter().enumerate() {
            let p = self.probs[v as usize - 1];
            rows[cell / d_b] += p;
            cols[cell % d_b] += p;
        }
        shannon_entropy(&rows) + shannon_entropy(&cols) - self.joint_entropy
    }
}

/// Checks that `probs` is a non-increasing probability vector of the right length.
pub fn validate_distribution(probs: &[f64], dims: BipartiteDims) -> Result<()> {
    if probs.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: probs.len(),
        });
    }
    if probs.iter().any(|p| !p.is_finite() || *p < -1e-12) {
        return Err(Error::InvalidDistribution(
            "entries must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}, expected 1"
        )));
    }
    if probs.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidDistribution(
            "entries must be sorted non-increasing".into(),
        ));
    }
    Ok(())
}

struct SubtreeBest {
    tableau: Option<YoungTableau>,
    mi: f64,
    offset: u64,
    count: u64,
}

/// Minimizes over every regular tableau (half of them on square grids, using the
/// transpose symmetry). Ties go to the earliest tableau in enumeration order.
pub fn exhaustive_search(
    probs: &[f64],
    dims: BipartiteDims,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    let count = count_regular(dims);
    if count > config.exhaustive_threshold {
        return Err(Error::ExhaustiveRefused {
            count: count.to_string(),
            threshold: config.exhaustive_threshold.to_string(),
        });
    }
    let objective = Objective::new(probs, dims)?;
    let symmetric = dims.is_square();

    // The split depends only on the shape, never on the worker count.
    let mut depth = 0;
    let mut roots = subtree_roots(dims, symmetric, depth);
    while roots.len() < MIN_SUBTREES && depth < dims.total() {
        depth += 1;
        roots = subtree_roots(dims, symmetric, depth);
    }

    let results = par::map_indexed(config.parallelism, roots.len(), |k| {
        let mut best = SubtreeBest {
            tableau: None,
            mi: f64::INFINITY,
            offset: 0,
            count: 0,
        };
        for (i, t) in RegularTableaux::from_prefix(roots[k].clone()).enumerate() {
            let mi = objective.mutual_information(&t);
            if best.tableau.is_none() || mi < best.mi {
                best = SubtreeBest {
                    tableau: Some(t),
                    mi,
                    offset: i as u64,
                    count: 0,
                };
            }
            best.count = i as u64 + 1;
        }
        best
    });

    let mut winner: Option<(YoungTableau, f64, u64)> = None;
    let mut seen = 0u64;
    let mut trajectory = Vec::with_capacity(results.len());
    for sub in results {
        if let Some(t) = sub.tableau {
            if winner.as_ref().is_none_or(|(_, mi, _)| sub.mi < *mi) {
                winner = Some((t, sub.mi, seen + sub.offset));
            }
        }
        seen += sub.count;
        if let Some((_, mi, _)) = &winner {
            trajectory.push(*mi);
        }
    }
    let (best_tableau, best_mi, index) =
        winner.expect("every shape has at least one regular tableau");
    let initial_mi = canonical_start(&objective)?.1;
    Ok(OptimizationResult {
        best_tableau,
        best_mi,
        method: Method::Exhaustive,
        evaluations: seen,
        trajectory,
        provenance: SeedProvenance::Enumeration { index },
        initial_mi,
    })
}

/// A scored tableau from the breadth-first phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub tableau: YoungTableau,
    pub mi: f64,
    pub draw_index: usize,
}

/// Samples `N1` tableaux and returns up to `N2` distinct ones with the lowest mutual
/// information, ascending (ties in draw order).
pub fn breadth_first(
    probs: &[f64],
    dims: BipartiteDims,
    config: &SearchConfig,
) -> Result<Vec<Candidate>> {
    config.validate()?;
    let objective = Objective::new(probs, dims)?;
    Ok(breadth_first_with(&objective, config))
}

fn breadth_first_with(objective: &Objective, config: &SearchConfig) -> Vec<Candidate> {
    let dims = objective.dims();
    let mut draws = par::map_indexed(config.parallelism, config.n1, |i| {
        let tableau = random_regular_with(dims, &mut task_rng(config.seed, i as u64));
        let mi = objective.mutual_information(&tableau);
        Candidate {
            tableau,
            mi,
            draw_index: i,
        }
    });
    draws.sort_by(|a, b| a.mi.total_cmp(&b.mi));
    let mut seen = HashSet::new();
    draws
        .into_iter()
        .filter(|c| seen.insert(c.tableau.cells().to_vec()))
        .take(config.n2)
        .collect()
}

struct Descent {
    best: YoungTableau,
    best_mi: f64,
    best_seen: Vec<f64>,
    evaluations: u64,
}

fn descend(objective: &Objective, seed: &YoungTableau, steps: usize) -> Descent {
    let mut current = seed.clone();
    let mut best_mi = objective.mutual_information(seed);
    let mut best = seed.clone();
    let mut best_seen = vec![best_mi];
    let mut evaluations = 1;
    for _ in 0..steps {
        let mut step: Option<(YoungTableau, f64)> = None;
        for t in neighbors(&current) {
            let mi = objective.mutual_information(&t);
            evaluations += 1;
            if step.as_ref().is_none_or(|(_, m)| mi < *m) {
                step = Some((t, mi));
            }
        }
        let Some((next, mi)) = step else { break };
        if mi < best_mi {
            best_mi = mi;
            best = next.clone();
        }
        current = next;
        best_seen.push(best_mi);
    }
    Descent {
        best,
        best_mi,
        best_seen,
        evaluations,
    }
}

/// Runs `N_D` best-neighbor moves from every seed and returns the best tableau seen.
pub fn depth_first(
    probs: &[f64],
    dims: BipartiteDims,
    seeds: &[YoungTableau],
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    let objective = Objective::new(probs, dims)?;
    if seeds.iter().any(|s| s.dims() != dims || !s.is_regular()) {
        return Err(Error::InvalidTableau(
            "seeds must be regular tableaux of the given shape".into(),
        ));
    }
    let mut result = depth_first_with(&objective, seeds, config)?;
    result.initial_mi = canonical_start(&objective)?.1;
    Ok(result)
}

fn depth_first_with(
    objective: &Objective,
    seeds: &[YoungTableau],
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    if seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    let descents = par::map_indexed(config.parallelism, seeds.len(), |k| {
        descend(objective, &seeds[k], config.n_d)
    });

    let longest = descents
        .iter()
        .map(|d| d.best_seen.len())
        .max()
        .unwrap_or(1);
    let trajectory = (0..longest)
        .map(|step| {
            descents
                .iter()
                .map(|d| d.best_seen[step.min(d.best_seen.len() - 1)])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let evaluations = descents.iter().map(|d| d.evaluations).sum();
    let (seed_index, winner) = descents
        .into_iter()
        .enumerate()
        .reduce(|acc, cur| {
            if cur.1.best_mi < acc.1.best_mi {
                cur
            } else {
                acc
            }
        })
        .expect("seeds are non-empty");
    Ok(OptimizationResult {
        best_tableau: winner.best,
        best_mi: winner.best_mi,
        method: Method::Heuristic,
        evaluations,
        trajectory,
        provenance: SeedProvenance::Descent {
            seed_index,
            draw_index: None,
        },
        initial_mi: f64::NAN,
    })
}

/// The row-major arrangement after column/row sorting, and its mutual information.
fn canonical_start(objective: &Objective) -> Result<(YoungTableau, f64)> {
    let dims = objective.dims();
    let start = YoungTableau::row_major(dims);
    let canon = canonicalize_decreasing(&arrange(objective.probs(), &start)?)?;
    let mut cells = vec![0u32; dims.total()];
    for (old, &v) in start.cells().iter().enumerate() {
        cells[canon.permutation.image(old)] = v;
    }
    let tableau = YoungTableau::new(dims, cells)?;
    let mi = objective.mutual_information(&tableau);
    Ok((tableau, mi))
}

/// Routes to exhaustive search when the tableau count is within the threshold and to the
/// breadth/depth-first heuristic otherwise. The result never exceeds the mutual
/// information of the canonicalized starting arrangement.
pub fn optimize(
    probs: &[f64],
    dims: BipartiteDims,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    validate_distribution(probs, dims)?;
    if count_regular(dims) <= config.exhaustive_threshold {
        return exhaustive_search(probs, dims, config);
    }
    let objective = Objective::new(probs, dims)?;
    let (start, start_mi) = canonical_start(&objective)?;
    let candidates = breadth_first_with(&objective, config);
    let seeds: Vec<YoungTableau> = candidates.iter().map(|c| c.tableau.clone()).collect();
    let mut result = depth_first_with(&objective, &seeds, config)?;
    result.evaluations += config.n1 as u64;
    result.initial_mi = start_mi;
    if let SeedProvenance::Descent { seed_index, .. } = result.provenance {
        result.provenance = SeedProvenance::Descent {
            seed_index,
            draw_index: Some(candidates[seed_index].draw_index),
        };
    }
    for v in &mut result.trajectory {
        *v = v.min(start_mi);
    }
    if start_mi < result.best_mi {
        result.best_tableau = start;
        result.best_mi = start_mi;
        result.provenance = SeedProvenance::CanonicalStart;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(a: usize, b: usize) -> BipartiteDims {
        BipartiteDims::new(a, b).unwrap()
    }

    fn config() -> SearchConfig {
        SearchConfig {
            n1: 50,
            n2: 4,
            n_d: 10,
            parallelism: 1,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig { n2: 60, ..config() }.validate().is_err());
        assert!(SearchConfig { n1: 0, ..config() }.validate().is_err());
        assert!(SearchConfig {
            exhaustive_threshold: BigUint::from(0u32),
            ..config()
        }
        .validate()
        .is_err());
        assert!(config().validate().is_ok());
    }

    #[test]
    fn pure_state_has_zero_mi() {
        let r = exhaustive_search(&[1.0, 0.0, 0.0, 0.0], dims(2, 2), &config()).unwrap();
        assert_eq!(r.best_mi, 0.0);
        assert_eq!(r.method, Method::Exhaustive);
    }

    #[test]
    fn refuses_large_exhaustive() {
        let d = dims(8, 8);
        let probs = vec![1.0 / 64.0; 64];
        assert!(matches!(
            exhaustive_search(&probs, d, &config()),
            Err(Error::ExhaustiveRefused { .. })
        ));
    }

    #[test]
    fn routes_by_count() {
        let probs = [0.4, 0.3, 0.2, 0.1];
        assert_eq!(
            optimize(&probs, dims(2, 2), &config()).unwrap().method,
            Method::Exhaustive
        );
        let forced = SearchConfig {
            exhaustive_threshold: BigUint::from(1u32),
            ..config()
        };
        assert_eq!(
            optimize(&probs, dims(2, 2), &forced).unwrap().method,
            Method::Heuristic
        );
    }

    #[test]
    fn rejects_bad_distribution() {
        assert!(optimize(&[0.1, 0.2, 0.3, 0.4], dims(2, 2), &config()).is_err());
        assert!(optimize(&[0.5, 0.3, 0.1, 0.0], dims(2, 2), &config()).is_err());
        assert!(optimize(&[0.5, 0.5], dims(2, 2), &config()).is_err());
    }

    #[test]
    fn empty_seed_list() {
        let probs = [0.4, 0.3, 0.2, 0.1];
        assert_eq!(
            depth_first(&probs, dims(2, 2), &[], &config()).unwrap_err(),
            Error::NoSeeds
        );
    }

    #[test]
    fn single_row_seed_halts() {
        let d = dims(1, 4);
        let seed = YoungTableau::row_major(d);
        let r = depth_first(
            &[0.4, 0.3, 0.2, 0.1],
            d,
            std::slice::from_ref(&seed),
            &config(),
        )
        .unwrap();
        assert_eq!(r.best_tableau, seed);
        assert_eq!(r.trajectory.len(), 1);
    }

    #[test]
    fn single_breadth_sample() {
        let probs = [0.4, 0.3, 0.2, 0.1];
        let c = SearchConfig {
            n1: 1,
            n2: 1,
            ..config()
        };
        let out = breadth_first(&probs, dims(2, 2), &c).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].draw_index, 0);
    }
}
