//! Partitioning heuristic for variable-length sequences, analogous to
//! k-means: assign every sequence to its nearest centroid under the edit
//! distance, then rebuild each centroid by a per-coordinate majority vote
//! over the cluster's members expanded to the length of its longest member.
//!
//! Expansion works through optimal edit sequences: transforming the longest
//! member into each other member yields a second row of the longest member's
//! length, with gap markers where symbols were deleted. The vote runs over
//! those rows coordinate by coordinate (the gap marker counts as a votable
//! symbol); gaps are stripped from the winning row to form the new centroid.
//!
//! The loop stops when a reassignment reproduces the previous partition, or
//! after `max_iters` rounds (partition cycles of period greater than one are
//! possible, so the cap is load-bearing). Several independent restarts are
//! run and the result with the smallest sum-of-squares objective is kept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{AlignedSymbol, Seq};
use crate::cost::CostModel;
use crate::editdist::{backtrack, distance_sym, dp_matrix};
use crate::error::{Error, Result};
use crate::exec;

/// Rule applied at a centroid coordinate when no symbol strictly prevails.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TiePolicy {
    /// Uniform draw among the tied symbols (gap included).
    Random,
    /// The tied symbol whose alphabet position is closest to the first
    /// symbol of the alphabet; the gap marker never wins under this rule.
    NearestToFirst,
    /// As above, closest to the last symbol of the alphabet.
    NearestToLast,
    /// The gap marker if it is among the tied symbols, otherwise a uniform
    /// draw. Favors shorter centroids.
    PreferEmpty,
}

/// Knobs for one clustering run.
#[derive(Clone, Debug)]
pub struct ClusterConfig {
    pub k: usize,
    pub tie_policy: TiePolicy,
    pub max_iters: usize,
    pub restarts: usize,
    pub rng_seed: u64,
    pub cost: CostModel,
}

impl ClusterConfig {
    pub fn new(k: usize, cost: CostModel) -> Self {
        ClusterConfig {
            k,
            tie_policy: TiePolicy::Random,
            max_iters: 100,
            restarts: 5,
            rng_seed: 0,
            cost,
        }
    }

    pub fn with_tie_policy(mut self, tie_policy: TiePolicy) -> Self {
        self.tie_policy = tie_policy;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, rng_seed: u64) -> Self {
        self.rng_seed = rng_seed;
        self
    }
}

/// Result of a clustering run.
#[derive(Clone, Debug)]
pub struct Clustering {
    /// Cluster index in `[0, k)` for every input, in input order.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Seq>,
    /// Number of centroid-recomputation rounds executed.
    pub iterations: usize,
    /// Whether the run stopped because a reassignment reproduced the
    /// previous partition (as opposed to hitting `max_iters`).
    pub converged: bool,
    /// Sum-of-squares objective of the final partition.
    pub objective: f64,
}

impl Clustering {
    pub fn cluster_sizes(&self, k: usize) -> Vec<usize> {
        let mut sizes = vec![0; k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Seed for restart `index` of a run with base seed `base`.
///
/// Index 0 is the base seed itself and later indices are mixed, so restart
/// `i` of a multi-restart run behaves exactly like a single-restart run
/// seeded with `restart_seed(base, i)`.
pub fn restart_seed(base: u64, index: usize) -> u64 {
    if index == 0 {
        return base;
    }
    // splitmix64 of base + index * golden ratio
    let mut z = base.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Picks `k` distinct input sequences as the initial centroids.
pub fn init_centroids<R: Rng>(seqs: &[Seq], k: usize, rng: &mut R) -> Result<Vec<Seq>> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    if k > seqs.len() {
        return Err(Error::TooFewSequences { k, m: seqs.len() });
    }
    let picked = rand::seq::index::sample(rng, seqs.len(), k);
    Ok(picked.into_iter().map(|i| seqs[i].clone()).collect())
}

fn nearest_centroid(seq: &Seq, centroids: &[Seq], cost: &CostModel) -> usize {
    let mut best = 0;
    let mut best_d = distance_sym(seq, &centroids[0], cost);
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = distance_sym(seq, c, cost);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Maps every sequence to the index of its nearest centroid; ties go to the
/// lowest centroid index.
pub fn assign(seqs: &[Seq], centroids: &[Seq], cost: &CostModel) -> Vec<usize> {
    exec::map_slice(seqs, |s| nearest_centroid(s, centroids, cost))
}

/// Sequential variant of [`assign`], the single-thread baseline used by the
/// benchmarks. Output is identical.
pub fn assign_serial(seqs: &[Seq], centroids: &[Seq], cost: &CostModel) -> Vec<usize> {
    exec::map_slice_serial(seqs, |s| nearest_centroid(s, centroids, cost))
}

// Candidates tied at the maximum count, in id order with the gap marker last.
fn tied_candidates(counts: &[usize]) -> Vec<usize> {
    let max = *counts.iter().max().expect("non-empty counts");
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == max && c > 0)
        .map(|(i, _)| i)
        .collect()
}

fn break_tie<R: Rng>(
    candidates: &[usize],
    gap_slot: usize,
    policy: TiePolicy,
    rng: &mut R,
) -> usize {
    debug_assert!(candidates.len() >= 2);
    match policy {
        TiePolicy::Random => candidates[rng.gen_range(0..candidates.len())],
        TiePolicy::NearestToFirst | TiePolicy::NearestToLast => {
            let anchor = if policy == TiePolicy::NearestToFirst {
                0
            } else {
                gap_slot - 1
            };
            // gap has no alphabet position and never wins here; a tie always
            // contains at least one real symbol
            candidates
                .iter()
                .copied()
                .filter(|&c| c != gap_slot)
                .min_by_key(|&c| (c.abs_diff(anchor), c))
                .expect("tie contains a non-gap symbol")
        }
        TiePolicy::PreferEmpty => {
            if candidates.contains(&gap_slot) {
                gap_slot
            } else {
                candidates[rng.gen_range(0..candidates.len())]
            }
        }
    }
}

/// Builds a cluster's new centroid by majority vote over its expanded
/// members.
///
/// The longest member is the expansion reference (ties go to the earliest
/// member in the slice, i.e. the lowest input index when members are passed
/// in input order) and does not vote itself. A singleton cluster keeps its
/// sole member as centroid, and if every coordinate votes for the gap marker
/// the reference member is kept instead of producing an empty centroid.
pub fn compute_centroid<R: Rng>(
    members: &[&Seq],
    cost: &CostModel,
    tie_policy: TiePolicy,
    rng: &mut R,
) -> Result<Seq> {
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut longest = 0;
    for (i, m) in members.iter().enumerate() {
        if m.len() > members[longest].len() {
            longest = i;
        }
    }
    let reference = members[longest];
    if members.len() == 1 {
        return Ok(reference.clone());
    }

    let voters: Vec<&Seq> = members
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != longest)
        .map(|(_, &m)| m)
        .collect();
    let rows = exec::map_slice(&voters, |m| {
        let w = dp_matrix(reference, m, cost).expect("reference is the longest member");
        backtrack(reference, m, &w, cost)
            .expect("matrix was built for this pair")
            .beta()
            .to_vec()
    });

    let gap_slot = cost.alphabet_size();
    let mut expanded = Vec::with_capacity(reference.len());
    let mut counts = vec![0usize; gap_slot + 1];
    for coord in 0..reference.len() {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &rows {
            match row[coord] {
                AlignedSymbol::Sym(s) => counts[s.id()] += 1,
                AlignedSymbol::Gap => counts[gap_slot] += 1,
            }
        }
        let tied = tied_candidates(&counts);
        let winner = if tied.len() == 1 {
            tied[0]
        } else {
            break_tie(&tied, gap_slot, tie_policy, rng)
        };
        if winner != gap_slot {
            expanded.push(crate::alphabet::Symbol::from_id(winner));
        }
    }

    if expanded.is_empty() {
        return Ok(reference.clone());
    }
    Seq::new(expanded)
}

/// Sum-of-squares objective: over every cluster, the squared distance of all
/// ordered member pairs. Each unordered pair contributes twice, and under an
/// asymmetric substitution matrix the two orders may differ.
pub fn sum_of_squares(seqs: &[Seq], assignment: &[usize], cost: &CostModel) -> f64 {
    let indices: Vec<usize> = (0..seqs.len()).collect();
    let row_sums = exec::map_slice(&indices, |&r| pair_row_sum(seqs, assignment, cost, r));
    row_sums.iter().sum()
}

/// Sequential variant of [`sum_of_squares`], the benchmark baseline.
pub fn sum_of_squares_serial(seqs: &[Seq], assignment: &[usize], cost: &CostModel) -> f64 {
    (0..seqs.len())
        .map(|r| pair_row_sum(seqs, assignment, cost, r))
        .sum()
}

fn pair_row_sum(seqs: &[Seq], assignment: &[usize], cost: &CostModel, r: usize) -> f64 {
    let mut total = 0.0;
    for s in 0..seqs.len() {
        if s != r && assignment[s] == assignment[r] {
            let d = distance_sym(&seqs[r], &seqs[s], cost);
            total += d * d;
        }
    }
    total
}

/// Runs the heuristic: `restarts` independent seeded starts, keeping the
/// result with the smallest objective (earliest restart wins a tie).
pub fn run(seqs: &[Seq], config: &ClusterConfig) -> Result<Clustering> {
    if config.k == 0 {
        return Err(Error::ZeroClusters);
    }
    if config.k > seqs.len() {
        return Err(Error::TooFewSequences {
            k: config.k,
            m: seqs.len(),
        });
    }
    let mut best: Option<Clustering> = None;
    for r in 0..config.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(config.rng_seed, r));
        let candidate = run_once(seqs, config, &mut rng)?;
        let better = match &best {
            None => true,
            Some(b) => candidate.objective < b.objective,
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn run_once<R: Rng>(seqs: &[Seq], config: &ClusterConfig, rng: &mut R) -> Result<Clustering> {
    let cost = &config.cost;
    let mut centroids = init_centroids(seqs, config.k, rng)?;
    let mut assignment = assign(seqs, &centroids, cost);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iters {
        iterations += 1;
        for (cluster, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<&Seq> = assignment
                .iter()
                .zip(seqs)
                .filter(|&(&a, _)| a == cluster)
                .map(|(_, s)| s)
                .collect();
            // an emptied cluster keeps its previous centroid
            if !members.is_empty() {
                *centroid = compute_centroid(&members, cost, config.tie_policy, rng)?;
            }
        }
        let new_assignment = assign(seqs, &centroids, cost);
        if new_assignment == assignment {
            converged = true;
            break;
        }
        assignment = new_assignment;
    }

    let objective = sum_of_squares(seqs, &assignment, cost);
    Ok(Clustering {
        assignment,
        centroids,
        iterations,
        converged,
        objective,
    })
}
