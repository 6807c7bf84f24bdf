//! Labeled synthetic datasets: `k_true` well-separated prototype sequences,
//! each member a noisy copy of its prototype, with a controllable fraction of
//! members deliberately placed into the overlap region between clusters.
//!
//! A member counts as overlapping when its unit-cost distance to some foreign
//! prototype is no larger than the distance to its own. Overlapping members
//! are produced by perturbing the prototype as usual and then walking the
//! candidate toward the nearest foreign prototype one optimal edit operation
//! at a time until the condition holds, which makes the realized overlap
//! fraction exact and recomputable from the output alone.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::{AlignedSymbol, Alphabet, Seq, Symbol};
use crate::cost::CostModel;
use crate::editdist::{backtrack, distance_sym, dp_matrix};
use crate::error::{Error, Result};

const SET_TRIALS: usize = 50;
const PROTO_TRIALS: usize = 400;
const MEMBER_TRIALS: usize = 500;

/// Parameters of one synthetic dataset.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    /// Number of sequences to generate.
    pub m: usize,
    /// Number of planted clusters.
    pub k_true: usize,
    pub alphabet_size: usize,
    pub len_min: usize,
    pub len_max: usize,
    /// Fraction of members placed into the overlap region, in [0, 1].
    pub overlap_fraction: f64,
    /// Expected number of substituted coordinates per member.
    pub expected_subs: f64,
    /// Expected number of deleted coordinates per member.
    pub expected_dels: f64,
    pub rng_seed: u64,
    /// Minimum pairwise prototype distance; defaults to `len_max / 2`.
    #[serde(default)]
    pub separation: Option<f64>,
}

impl GenSpec {
    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::BadGenSpec(msg));
        if self.m == 0 {
            return fail("m must be positive".into());
        }
        if self.k_true == 0 {
            return fail("k_true must be positive".into());
        }
        if self.m < self.k_true {
            return fail(format!("m = {} is smaller than k_true = {}", self.m, self.k_true));
        }
        if self.alphabet_size == 0 {
            return fail("alphabet_size must be positive".into());
        }
        if self.len_min < 1 {
            return fail("len_min must be at least 1".into());
        }
        if self.len_max < self.len_min {
            return fail(format!(
                "len_max = {} is smaller than len_min = {}",
                self.len_max, self.len_min
            ));
        }
        if !(0.0..=1.0).contains(&self.overlap_fraction) {
            return fail(format!(
                "overlap_fraction = {} is outside [0, 1]",
                self.overlap_fraction
            ));
        }
        for (name, v) in [
            ("expected_subs", self.expected_subs),
            ("expected_dels", self.expected_dels),
        ] {
            if !v.is_finite() || v < 0.0 {
                return fail(format!("{name} = {v} must be a nonnegative finite value"));
            }
        }
        if let Some(sep) = self.separation {
            if !sep.is_finite() || sep < 0.0 {
                return fail(format!("separation = {sep} must be a nonnegative finite value"));
            }
        }
        let target = self.overlap_target();
        if target > 0 && self.k_true < 2 {
            return fail("overlap requires at least two planted clusters".into());
        }
        Ok(())
    }

    fn overlap_target(&self) -> usize {
        (self.overlap_fraction * self.m as f64).round() as usize
    }

    fn separation_threshold(&self) -> f64 {
        self.separation.unwrap_or(self.len_max as f64 / 2.0)
    }
}

/// A generated dataset together with its planted structure.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub alphabet: Alphabet,
    pub sequences: Vec<Seq>,
    /// Planted cluster index per sequence.
    pub labels: Vec<usize>,
    pub prototypes: Vec<Seq>,
}

impl LabeledDataset {
    /// Recounts the overlapping members from scratch.
    pub fn count_overlapping(&self, cost: &CostModel) -> usize {
        self.sequences
            .iter()
            .zip(&self.labels)
            .filter(|&(seq, &label)| is_overlapping(seq, label, &self.prototypes, cost))
            .count()
    }
}

fn is_overlapping(seq: &Seq, label: usize, prototypes: &[Seq], cost: &CostModel) -> bool {
    let own = distance_sym(seq, &prototypes[label], cost);
    prototypes
        .iter()
        .enumerate()
        .any(|(i, p)| i != label && distance_sym(seq, p, cost) <= own)
}

/// Generates a labeled dataset. Same spec, same output, bit for bit.
pub fn generate(spec: &GenSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let alphabet = Alphabet::numeric(spec.alphabet_size)?;
    let cost = CostModel::unit(&alphabet)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);

    let prototypes = draw_prototypes(spec, &cost, &mut rng)?;

    let target = spec.overlap_target();
    let overlap_set: HashSet<usize> = rand::seq::index::sample(&mut rng, spec.m, target)
        .into_iter()
        .collect();

    let mut sequences = Vec::with_capacity(spec.m);
    let mut labels = Vec::with_capacity(spec.m);
    for i in 0..spec.m {
        let label = i % spec.k_true;
        let member = if overlap_set.contains(&i) {
            let candidate = perturb(&prototypes[label], spec, &mut rng);
            walk_into_overlap(candidate, label, &prototypes, &cost)
        } else {
            draw_plain_member(spec, label, &prototypes, &cost, &mut rng)?
        };
        sequences.push(member);
        labels.push(label);
    }

    Ok(LabeledDataset {
        alphabet,
        sequences,
        labels,
        prototypes,
    })
}

fn draw_prototypes(spec: &GenSpec, cost: &CostModel, rng: &mut ChaCha8Rng) -> Result<Vec<Seq>> {
    let sep = spec.separation_threshold();
    for _ in 0..SET_TRIALS {
        let mut protos: Vec<Seq> = Vec::with_capacity(spec.k_true);
        'next_proto: while protos.len() < spec.k_true {
            for _ in 0..PROTO_TRIALS {
                let candidate = random_seq(spec, rng);
                if protos
                    .iter()
                    .all(|p| distance_sym(&candidate, p, cost) >= sep)
                {
                    protos.push(candidate);
                    continue 'next_proto;
                }
            }
            break 'next_proto; // could not extend this set; redraw from scratch
        }
        if protos.len() == spec.k_true {
            return Ok(protos);
        }
    }
    Err(Error::GenerationFailed(format!(
        "could not draw {} prototypes with pairwise distance >= {} \
         (alphabet {}, lengths {}..={})",
        spec.k_true, sep, spec.alphabet_size, spec.len_min, spec.len_max
    )))
}

fn random_seq(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Seq {
    let len = rng.gen_range(spec.len_min..=spec.len_max);
    let symbols = (0..len)
        .map(|_| Symbol::from_id(rng.gen_range(0..spec.alphabet_size)))
        .collect();
    Seq::new(symbols).expect("len >= 1")
}

fn draw_plain_member(
    spec: &GenSpec,
    label: usize,
    prototypes: &[Seq],
    cost: &CostModel,
    rng: &mut ChaCha8Rng,
) -> Result<Seq> {
    for _ in 0..MEMBER_TRIALS {
        let candidate = perturb(&prototypes[label], spec, rng);
        if !is_overlapping(&candidate, label, prototypes, cost) {
            return Ok(candidate);
        }
    }
    Err(Error::GenerationFailed(format!(
        "could not draw a non-overlapping member of cluster {label}; \
         edit noise is too large for the prototype separation"
    )))
}

// Substitutions first (each coordinate independently, always to a different
// symbol), then a binomially distributed number of deletions, capped so the
// member stays non-empty.
fn perturb(prototype: &Seq, spec: &GenSpec, rng: &mut ChaCha8Rng) -> Seq {
    let len = prototype.len();
    let p_sub = (spec.expected_subs / len as f64).min(1.0);
    let p_del = (spec.expected_dels / len as f64).min(1.0);

    let mut symbols: Vec<Symbol> = prototype.symbols().to_vec();
    if spec.alphabet_size > 1 && p_sub > 0.0 {
        for sym in symbols.iter_mut() {
            if rng.gen_bool(p_sub) {
                let offset = rng.gen_range(0..spec.alphabet_size - 1);
                let id = if offset >= sym.id() { offset + 1 } else { offset };
                *sym = Symbol::from_id(id);
            }
        }
    }

    let mut deletions = 0;
    if p_del > 0.0 {
        for _ in 0..len {
            if rng.gen_bool(p_del) {
                deletions += 1;
            }
        }
    }
    let deletions = deletions.min(len - 1);
    for _ in 0..deletions {
        let pos = rng.gen_range(0..symbols.len());
        symbols.remove(pos);
    }

    Seq::new(symbols).expect("at least one symbol survives")
}

// Moves the candidate one optimal edit operation at a time toward its
// nearest foreign prototype until it is no longer strictly closer to its own.
fn walk_into_overlap(
    mut candidate: Seq,
    label: usize,
    prototypes: &[Seq],
    cost: &CostModel,
) -> Seq {
    let foreign = prototypes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label)
        .min_by(|(_, a), (_, b)| {
            distance_sym(&candidate, a, cost)
                .partial_cmp(&distance_sym(&candidate, b, cost))
                .expect("finite distances")
        })
        .map(|(i, _)| i)
        .expect("at least two prototypes");
    let target = &prototypes[foreign];
    while !is_overlapping(&candidate, label, prototypes, cost) {
        candidate = step_toward(&candidate, target, cost);
    }
    candidate
}

// One optimal edit operation closer to `target`: apply the first costed
// operation of an optimal edit sequence when the candidate is the longer
// side, or undo one when it is the shorter side (re-inserting a deleted
// symbol or reverting a substitution). Either way the distance to `target`
// strictly decreases, so the overlap walk terminates.
fn step_toward(current: &Seq, target: &Seq, cost: &CostModel) -> Seq {
    if current.len() >= target.len() {
        let w = dp_matrix(current, target, cost).expect("current is not shorter");
        let es = backtrack(current, target, &w, cost).expect("fresh matrix");
        let mut out = Vec::with_capacity(current.len());
        let mut applied = false;
        for (&a, &b) in es.alpha().iter().zip(es.beta()) {
            if !applied && cost.aligned_cost(a, b) > 0.0 {
                applied = true;
                if let AlignedSymbol::Sym(s) = b {
                    out.push(s);
                }
                // a gap means this position is deleted: emit nothing
            } else {
                out.push(a);
            }
        }
        Seq::new(out).expect("deletions only occur when current is strictly longer")
    } else {
        let w = dp_matrix(target, current, cost).expect("target is longer");
        let es = backtrack(target, current, &w, cost).expect("fresh matrix");
        let mut out = Vec::with_capacity(current.len() + 1);
        let mut applied = false;
        for (&a, &b) in es.alpha().iter().zip(es.beta()) {
            match b {
                AlignedSymbol::Gap => {
                    if !applied {
                        out.push(a); // undo the deletion
                        applied = true;
                    }
                }
                AlignedSymbol::Sym(s) => {
                    if !applied && cost.sub_cost(a, s) > 0.0 {
                        out.push(a); // revert the substitution
                        applied = true;
                    } else {
                        out.push(s);
                    }
                }
            }
        }
        Seq::new(out).expect("shorter side is non-empty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> GenSpec {
        GenSpec {
            m: 60,
            k_true: 2,
            alphabet_size: 4,
            len_min: 8,
            len_max: 16,
            overlap_fraction: 0.0,
            expected_subs: 1.0,
            expected_dels: 0.5,
            rng_seed: 42,
            separation: None,
        }
    }

    #[test]
    fn zero_overlap_means_every_member_is_strictly_closer_to_its_own() {
        let data = generate(&base_spec()).unwrap();
        let cost = CostModel::unit(&data.alphabet).unwrap();
        assert_eq!(data.count_overlapping(&cost), 0);
        assert_eq!(data.sequences.len(), 60);
        assert_eq!(data.labels.len(), 60);
    }

    #[test]
    fn noiseless_spec_reproduces_the_prototypes() {
        let spec = GenSpec {
            m: 2,
            k_true: 2,
            expected_subs: 0.0,
            expected_dels: 0.0,
            ..base_spec()
        };
        let data = generate(&spec).unwrap();
        assert_eq!(data.sequences, data.prototypes);
        assert_eq!(data.labels, vec![0, 1]);
    }

    #[test]
    fn overlap_count_matches_the_requested_fraction() {
        let spec = GenSpec {
            m: 200,
            overlap_fraction: 0.10,
            ..base_spec()
        };
        let data = generate(&spec).unwrap();
        let cost = CostModel::unit(&data.alphabet).unwrap();
        let realized = data.count_overlapping(&cost) as i64;
        assert!((realized - 20).abs() <= 1, "realized overlap {realized}");
    }

    #[test]
    fn lengths_stay_within_bounds() {
        let spec = GenSpec {
            m: 120,
            overlap_fraction: 0.2,
            expected_dels: 2.0,
            ..base_spec()
        };
        let data = generate(&spec).unwrap();
        for s in &data.sequences {
            assert!((1..=spec.len_max).contains(&s.len()));
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let spec = GenSpec {
            m: 80,
            overlap_fraction: 0.15,
            ..base_spec()
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.sequences, b.sequences);
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.prototypes, b.prototypes);
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        // single-symbol alphabet cannot reach the requested separation
        let impossible = GenSpec {
            alphabet_size: 1,
            len_min: 4,
            len_max: 6,
            separation: Some(50.0),
            expected_subs: 0.0,
            ..base_spec()
        };
        assert!(matches!(
            generate(&impossible),
            Err(Error::GenerationFailed(_))
        ));

        let overlap_without_foreign = GenSpec {
            k_true: 1,
            m: 10,
            overlap_fraction: 0.5,
            ..base_spec()
        };
        assert!(matches!(
            generate(&overlap_without_foreign),
            Err(Error::BadGenSpec(_))
        ));

        let bad_lengths = GenSpec {
            len_min: 9,
            len_max: 3,
            ..base_spec()
        };
        assert!(matches!(generate(&bad_lengths), Err(Error::BadGenSpec(_))));
    }

    #[test]
    fn walk_lands_exactly_on_the_overlap_boundary_or_past_it() {
        let spec = GenSpec {
            m: 40,
            overlap_fraction: 0.25,
            ..base_spec()
        };
        let data = generate(&spec).unwrap();
        let cost = CostModel::unit(&data.alphabet).unwrap();
        let mut seen = 0;
        for (seq, &label) in data.sequences.iter().zip(&data.labels) {
            if is_overlapping(seq, label, &data.prototypes, &cost) {
                seen += 1;
            }
        }
        assert_eq!(seen, 10);
    }
}
