//! Shared test support: a brute-force reference for the deletion+substitution
//! edit distance, independent of the dynamic-programming implementation.

#![allow(dead_code)]

use edclust::{CostModel, Seq};
use rand::Rng;

/// Reference distance by exhaustive enumeration.
///
/// Transforming `x` (len N) into `y` (len M <= N) with deletions and
/// substitutions only means choosing the N - M positions of `x` to delete and
/// substituting the rest position by position. The minimum over all
/// C(N, N - M) deletion subsets is the distance by definition; no recurrence
/// is involved.
pub fn brute_force_distance(x: &Seq, y: &Seq, cost: &CostModel) -> f64 {
    let n = x.len();
    let m = y.len();
    assert!(n >= m, "oracle requires |x| >= |y|");
    let keep = m;

    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(keep);
    enumerate_kept(x, y, cost, 0, keep, &mut chosen, &mut best);
    best
}

// Recursively chooses which positions of x survive, accumulating the
// substitution cost of each complete choice.
fn enumerate_kept(
    x: &Seq,
    y: &Seq,
    cost: &CostModel,
    start: usize,
    keep: usize,
    chosen: &mut Vec<usize>,
    best: &mut f64,
) {
    if chosen.len() == keep {
        let sub: f64 = chosen
            .iter()
            .enumerate()
            .map(|(j, &i)| cost.sub_cost(x.get(i), y.get(j)))
            .sum();
        let total = (x.len() - y.len()) as f64 * cost.del_cost() + sub;
        if total < *best {
            *best = total;
        }
        return;
    }
    let remaining = keep - chosen.len();
    // enough positions left to complete the choice
    for i in start..=(x.len() - remaining) {
        chosen.push(i);
        enumerate_kept(x, y, cost, i + 1, keep, chosen, best);
        chosen.pop();
    }
}

/// Oracle oriented like `distance_sym`: longer sequence first.
pub fn brute_force_sym(a: &Seq, b: &Seq, cost: &CostModel) -> f64 {
    if a.len() >= b.len() {
        brute_force_distance(a, b, cost)
    } else {
        brute_force_distance(b, a, cost)
    }
}

/// True iff `y` is a subsequence of `x`.
pub fn is_subsequence(x: &Seq, y: &Seq) -> bool {
    let mut yi = 0;
    for &s in x.symbols() {
        if yi < y.len() && s == y.get(yi) {
            yi += 1;
        }
    }
    yi == y.len()
}

/// Random sequence with symbols drawn from `0..alphabet_size`.
pub fn random_seq<R: Rng>(rng: &mut R, len: usize, alphabet_size: usize) -> Seq {
    let ids: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet_size)).collect();
    Seq::from_ids(&ids).unwrap()
}

/// Random pair with 1 <= |y| <= |x| <= max_len.
pub fn random_pair<R: Rng>(rng: &mut R, max_len: usize, alphabet_size: usize) -> (Seq, Seq) {
    let n = rng.gen_range(1..=max_len);
    let m = rng.gen_range(1..=n);
    (
        random_seq(rng, n, alphabet_size),
        random_seq(rng, m, alphabet_size),
    )
}

/// The worked example pair used throughout the tests.
pub fn example_pair() -> (Seq, Seq) {
    (
        Seq::from_ids(&[1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap(),
        Seq::from_ids(&[1, 0, 1, 1, 1, 1, 0]).unwrap(),
    )
}
