//! Scoring clusterings against ground-truth labels, and the batch experiment
//! driver that repeats generate -> cluster -> score over many samples and
//! bins the misclustered counts.
//!
//! Predicted cluster ids carry no meaning on their own, so the misclustered
//! count is minimized over all bijections between predicted ids and true
//! labels. The search is exhaustive over the k! bijections, which is why k is
//! capped at 8 (the datasets of interest use k between 2 and 4).

use std::io::Write;

use itertools::Itertools;

use crate::cluster::{self, ClusterConfig};
use crate::datagen::{self, GenSpec};
use crate::error::{Error, Result};
use crate::exec;

/// Largest k supported by the exhaustive bijection search.
pub const MAX_MATCH_K: usize = 8;

/// Misclustered-count bins, as inclusive upper bounds plus an implicit
/// overflow bin. The default is `{0, 1-5, 6-20, 21-100, >100}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramBins {
    uppers: Vec<usize>,
}

impl Default for HistogramBins {
    fn default() -> Self {
        HistogramBins {
            uppers: vec![0, 5, 20, 100],
        }
    }
}

impl HistogramBins {
    pub fn new(uppers: Vec<usize>) -> Result<Self> {
        if uppers.is_empty() || uppers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadEvalInput(
                "histogram bounds must be strictly increasing and non-empty".into(),
            ));
        }
        Ok(HistogramBins { uppers })
    }

    /// Number of bins including the overflow bin.
    pub fn len(&self) -> usize {
        self.uppers.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bin_index(&self, count: usize) -> usize {
        self.uppers
            .iter()
            .position(|&u| count <= u)
            .unwrap_or(self.uppers.len())
    }

    pub fn label(&self, bin: usize) -> String {
        if bin == self.uppers.len() {
            return format!(">{}", self.uppers[self.uppers.len() - 1]);
        }
        let lo = if bin == 0 { 0 } else { self.uppers[bin - 1] + 1 };
        let hi = self.uppers[bin];
        if lo == hi {
            format!("{lo}")
        } else {
            format!("{lo}-{hi}")
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|b| self.label(b)).collect()
    }
}

/// Minimum disagreement count between a predicted assignment and true labels
/// over all bijections of the k cluster ids, together with the best bijection
/// (predicted id -> true label).
pub fn mismatch_count(
    predicted: &[usize],
    truth: &[usize],
    k: usize,
) -> Result<(usize, Vec<usize>)> {
    if k == 0 {
        return Err(Error::BadEvalInput("k must be positive".into()));
    }
    if k > MAX_MATCH_K {
        return Err(Error::TooManyClusters {
            k,
            max: MAX_MATCH_K,
        });
    }
    if predicted.len() != truth.len() {
        return Err(Error::BadEvalInput(format!(
            "prediction has {} entries, truth has {}",
            predicted.len(),
            truth.len()
        )));
    }
    if let Some(&bad) = predicted.iter().chain(truth).find(|&&v| v >= k) {
        return Err(Error::BadEvalInput(format!(
            "label {bad} is outside [0, {k})"
        )));
    }

    let mut confusion = vec![vec![0usize; k]; k];
    for (&p, &t) in predicted.iter().zip(truth) {
        confusion[p][t] += 1;
    }

    let mut best_agreement = 0;
    let mut best_map: Vec<usize> = (0..k).collect();
    for perm in (0..k).permutations(k) {
        let agreement: usize = (0..k).map(|p| confusion[p][perm[p]]).sum();
        if agreement > best_agreement {
            best_agreement = agreement;
            best_map = perm;
        }
    }
    Ok((predicted.len() - best_agreement, best_map))
}

/// Report for a single clustering against ground truth.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub misclustered: usize,
    pub accuracy: f64,
    /// Bin label -> number of samples in the bin (a single sample here).
    pub per_category_histogram: Vec<(String, usize)>,
    /// Predicted cluster id -> true label under the best bijection.
    pub best_label_map: Vec<usize>,
}

pub fn evaluate(
    predicted: &[usize],
    truth: &[usize],
    k: usize,
    bins: &HistogramBins,
) -> Result<EvalReport> {
    let (misclustered, best_label_map) = mismatch_count(predicted, truth, k)?;
    let m = predicted.len();
    let hit = bins.bin_index(misclustered);
    let per_category_histogram = (0..bins.len())
        .map(|b| (bins.label(b), usize::from(b == hit)))
        .collect();
    Ok(EvalReport {
        misclustered,
        accuracy: 1.0 - misclustered as f64 / m as f64,
        per_category_histogram,
        best_label_map,
    })
}

/// One generate -> cluster -> score sample of a batch experiment.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub spec_id: usize,
    pub sample: usize,
    pub misclustered: usize,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

/// All samples of a batch experiment plus the binning used to report them.
#[derive(Clone, Debug)]
pub struct ExperimentTable {
    pub records: Vec<ExperimentRecord>,
    pub bins: HistogramBins,
    spec_count: usize,
}

impl ExperimentTable {
    /// `(spec_id, bin label, count)` rows, every bin of every spec.
    pub fn histogram_rows(&self) -> Vec<(usize, String, usize)> {
        let mut rows = Vec::with_capacity(self.spec_count * self.bins.len());
        for spec_id in 0..self.spec_count {
            let mut counts = vec![0usize; self.bins.len()];
            for r in self.records.iter().filter(|r| r.spec_id == spec_id) {
                counts[self.bins.bin_index(r.misclustered)] += 1;
            }
            for (bin, &count) in counts.iter().enumerate() {
                rows.push((spec_id, self.bins.label(bin), count));
            }
        }
        rows
    }

    pub fn mean_misclustered(&self, spec_id: usize) -> f64 {
        let (sum, n) = self
            .records
            .iter()
            .filter(|r| r.spec_id == spec_id)
            .fold((0usize, 0usize), |(s, n), r| (s + r.misclustered, n + 1));
        sum as f64 / n as f64
    }

    pub fn write_histogram_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "spec_id,bin,count")?;
        for (spec_id, bin, count) in self.histogram_rows() {
            writeln!(out, "{spec_id},{bin},{count}")?;
        }
        Ok(())
    }

    pub fn write_detail_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "spec_id,sample,misclustered,iterations,converged,objective")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.spec_id, r.sample, r.misclustered, r.iterations, r.converged, r.objective
            )?;
        }
        Ok(())
    }
}

/// Runs `samples` independent generate -> cluster -> score rounds for every
/// spec. Sample `i` uses `rng_seed + i` for generation and clustering seed
/// `cluster_config.rng_seed + i`, so samples are reproducible in isolation
/// and independent of execution order.
pub fn batch_experiment(
    specs: &[GenSpec],
    cluster_config: &ClusterConfig,
    samples: usize,
    bins: HistogramBins,
) -> Result<ExperimentTable> {
    if samples == 0 {
        return Err(Error::BadEvalInput("samples must be positive".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..specs.len())
        .cartesian_product(0..samples)
        .collect();
    let outcomes = exec::map_slice(&jobs, |&(spec_id, sample)| {
        run_sample(&specs[spec_id], cluster_config, spec_id, sample)
    });
    let records = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ExperimentTable {
        records,
        bins,
        spec_count: specs.len(),
    })
}

fn run_sample(
    spec: &GenSpec,
    cluster_config: &ClusterConfig,
    spec_id: usize,
    sample: usize,
) -> Result<ExperimentRecord> {
    let mut gen_spec = spec.clone();
    gen_spec.rng_seed = spec.rng_seed.wrapping_add(sample as u64);
    let data = datagen::generate(&gen_spec)?;

    let mut config = cluster_config.clone();
    config.rng_seed = cluster_config.rng_seed.wrapping_add(sample as u64);
    let clustering = cluster::run(&data.sequences, &config)?;

    let k_eval = config.k.max(spec.k_true);
    let (misclustered, _) = mismatch_count(&clustering.assignment, &data.labels, k_eval)?;
    Ok(ExperimentRecord {
        spec_id,
        sample,
        misclustered,
        iterations: clustering.iterations,
        converged: clustering.converged,
        objective: clustering.objective,
    })
}
