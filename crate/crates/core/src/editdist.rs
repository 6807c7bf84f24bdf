//! Unconstrained edit distance between a longer sequence `X` (length N) and a
//! shorter one `Y` (length M), where the only elementary operations are
//! deleting a symbol of `X` (cost `d_e`) and substituting a symbol of `X` by
//! one of `Y` (cost `d(x, y)`).
//!
//! The distance is computed over a grid of partial distances `W[e][s]`: the
//! cheapest transformation of the first `e + s` symbols of `X` into the first
//! `s` symbols of `Y` using exactly `e` deletions. The recurrence is
//!
//! ```text
//! W[e][s] = min(W[e][s-1] + d(X[e+s], Y[s]),  W[e-1][s] + d_e)
//! ```
//!
//! and the distance is `W[N-M][M]`. Cells with `e > N - M` can never reach
//! that answer cell, so only the `(N-M+1) x (M+1)` rectangle is materialized.
//!
//! Walking the grid backwards from the answer cell reconstructs one optimal
//! edit sequence: two rows of equal length N where the first row spells `X`
//! and the second row spells `Y` stretched with gap markers at the deleted
//! positions.

use crate::alphabet::{AlignedSymbol, Seq, Symbol};
use crate::cost::CostModel;
use crate::error::{Error, Result};

/// Absolute tolerance for matching sums of elementary costs while walking the
/// grid backwards. Under integer-valued models the comparison is exact; real
/// valued models need the slack because the two branches accumulate the same
/// total in different orders.
const BRANCH_EPS: f64 = 1e-9;

/// Grid of partial distances, `(N - M + 1)` rows by `(M + 1)` columns.
#[derive(Clone, Debug)]
pub struct DpMatrix {
    w: Vec<f64>,
    source_len: usize,
    target_len: usize,
}

impl DpMatrix {
    /// Number of materialized deletion rows (N - M + 1).
    pub fn rows(&self) -> usize {
        self.source_len - self.target_len + 1
    }

    /// Number of substitution columns (M + 1).
    pub fn cols(&self) -> usize {
        self.target_len + 1
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// Partial distance after `e` deletions and `s` substitutions.
    pub fn get(&self, e: usize, s: usize) -> f64 {
        self.w[e * self.cols() + s]
    }

    /// The edit distance: the value at the answer cell `W[N-M][M]`.
    pub fn final_distance(&self) -> f64 {
        self.get(self.rows() - 1, self.target_len)
    }
}

/// Fills the grid of partial distances for transforming `x` into `y`.
///
/// Requires `|x| >= |y|`; callers with unordered pairs should use
/// [`distance_sym`].
pub fn dp_matrix(x: &Seq, y: &Seq, cost: &CostModel) -> Result<DpMatrix> {
    let n = x.len();
    let m = y.len();
    if n < m {
        return Err(Error::SourceShorterThanTarget {
            source_len: n,
            target_len: m,
        });
    }
    let rows = n - m + 1;
    let cols = m + 1;
    let de = cost.del_cost();
    let mut w = vec![0.0; rows * cols];

    // column 0: deletions only
    for e in 1..rows {
        w[e * cols] = w[(e - 1) * cols] + de;
    }
    // row 0: substitutions only
    for s in 1..cols {
        w[s] = w[s - 1] + cost.sub_cost(x.get(s - 1), y.get(s - 1));
    }
    for e in 1..rows {
        for s in 1..cols {
            let del = w[(e - 1) * cols + s] + de;
            let sub = w[e * cols + s - 1] + cost.sub_cost(x.get(e + s - 1), y.get(s - 1));
            w[e * cols + s] = del.min(sub);
        }
    }
    Ok(DpMatrix {
        w,
        source_len: n,
        target_len: m,
    })
}

/// Edit distance from `x` to `y`; requires `|x| >= |y|`.
pub fn distance(x: &Seq, y: &Seq, cost: &CostModel) -> Result<f64> {
    Ok(dp_matrix(x, y, cost)?.final_distance())
}

/// Orientation-free distance: computes from the longer sequence to the
/// shorter. Equal-length pairs keep the argument order as given, which
/// matters only under an asymmetric substitution matrix.
pub fn distance_sym(a: &Seq, b: &Seq, cost: &CostModel) -> f64 {
    let oriented = if a.len() >= b.len() {
        distance(a, b, cost)
    } else {
        distance(b, a, cost)
    };
    // cannot fail: the longer sequence is always first
    oriented.expect("oriented distance")
}

/// One edit transformation written as two aligned rows of equal length: the
/// first row spells the source, the second holds the target symbol at
/// substitution positions and the gap marker at deleted positions.
#[derive(Clone, Debug, PartialEq)]
pub struct EditSequence {
    alpha: Vec<Symbol>,
    beta: Vec<AlignedSymbol>,
}

impl EditSequence {
    pub fn new(alpha: Vec<Symbol>, beta: Vec<AlignedSymbol>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::RowLengthMismatch {
                alpha: alpha.len(),
                beta: beta.len(),
            });
        }
        if alpha.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(EditSequence { alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha(&self) -> &[Symbol] {
        &self.alpha
    }

    pub fn beta(&self) -> &[AlignedSymbol] {
        &self.beta
    }

    pub fn gap_count(&self) -> usize {
        self.beta.iter().filter(|b| b.is_gap()).count()
    }

    /// The target spelled by the second row with gaps removed.
    pub fn target_symbols(&self) -> Vec<Symbol> {
        self.beta.iter().filter_map(|b| b.symbol()).collect()
    }
}

/// Total elementary cost of an edit sequence: the sum over positions of the
/// substitution cost, with gap positions charged the deletion cost.
pub fn score_edit_sequence(es: &EditSequence, cost: &CostModel) -> f64 {
    es.alpha()
        .iter()
        .zip(es.beta())
        .map(|(&a, &b)| cost.aligned_cost(a, b))
        .sum()
}

/// The expanded target: the second row of the edit sequence verbatim,
/// i.e. the target stretched to the source's length with gap markers.
pub fn expanded_target(es: &EditSequence) -> &[AlignedSymbol] {
    es.beta()
}

/// Reconstructs one optimal edit sequence by walking `w` from the answer cell
/// back to the origin. When both branches reproduce the cell value the
/// deletion branch wins, which makes the reconstruction deterministic.
///
/// `w` must be the matrix produced by [`dp_matrix`] for the same `x`, `y`,
/// and cost model; an inconsistent matrix is reported as
/// [`Error::InconsistentMatrix`].
pub fn backtrack(x: &Seq, y: &Seq, w: &DpMatrix, cost: &CostModel) -> Result<EditSequence> {
    if w.source_len() != x.len() || w.target_len() != y.len() {
        return Err(Error::InconsistentMatrix {
            e: w.rows() - 1,
            s: w.cols() - 1,
        });
    }
    let de = cost.del_cost();
    let mut e = x.len() - y.len();
    let mut s = y.len();
    let mut alpha = Vec::with_capacity(x.len());
    let mut beta = Vec::with_capacity(x.len());

    while e > 0 || s > 0 {
        let cur = w.get(e, s);
        let take_deletion = e > 0 && (cur - (w.get(e - 1, s) + de)).abs() <= BRANCH_EPS;
        if take_deletion {
            alpha.push(x.get(e + s - 1));
            beta.push(AlignedSymbol::Gap);
            e -= 1;
        } else if s > 0 {
            let sub = w.get(e, s - 1) + cost.sub_cost(x.get(e + s - 1), y.get(s - 1));
            if (cur - sub).abs() > BRANCH_EPS {
                return Err(Error::InconsistentMatrix { e, s });
            }
            alpha.push(x.get(e + s - 1));
            beta.push(AlignedSymbol::Sym(y.get(s - 1)));
            s -= 1;
        } else {
            return Err(Error::InconsistentMatrix { e, s });
        }
    }
    // emitted back-to-front while walking; flip into forward order
    alpha.reverse();
    beta.reverse();
    EditSequence::new(alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn unit(size: usize) -> CostModel {
        CostModel::unit(&Alphabet::numeric(size).unwrap()).unwrap()
    }

    fn seq(ids: &[usize]) -> Seq {
        Seq::from_ids(ids).unwrap()
    }

    // X and Y of the worked example: Y is a subsequence of X, four symbols apart.
    fn example() -> (Seq, Seq) {
        (
            seq(&[1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
            seq(&[1, 0, 1, 1, 1, 1, 0]),
        )
    }

    #[test]
    fn identity_transform_grid_is_all_zero() {
        let cost = unit(2);
        let x = seq(&[1, 0, 1]);
        let w = dp_matrix(&x, &x, &cost).unwrap();
        assert_eq!(w.rows(), 1);
        assert_eq!(w.cols(), 4);
        for s in 0..4 {
            assert_eq!(w.get(0, s), 0.0);
        }
        assert_eq!(w.final_distance(), 0.0);
    }

    #[test]
    fn example_pair_grid_answer_cell() {
        // frozen from the exhaustive-enumeration reference in tests/
        let cost = unit(2);
        let (x, y) = example();
        let w = dp_matrix(&x, &y, &cost).unwrap();
        assert_eq!(w.rows(), 5);
        assert_eq!(w.cols(), 8);
        assert_eq!(w.get(4, 7), 4.0);
    }

    #[test]
    fn two_zeros_to_one_needs_a_deletion_and_a_substitution() {
        // hand enumeration: delete either 0, substitute the other by 1
        let cost = unit(2);
        let w = dp_matrix(&seq(&[0, 0]), &seq(&[1]), &cost).unwrap();
        assert_eq!(w.get(1, 1), 2.0);
    }

    #[test]
    fn column_zero_counts_deletions() {
        let cost = unit(2);
        let w = dp_matrix(&seq(&[1, 1, 1, 1, 0]), &seq(&[0]), &cost).unwrap();
        for e in 0..w.rows() {
            assert_eq!(w.get(e, 0), e as f64);
        }
    }

    #[test]
    fn distance_rejects_shorter_source() {
        let cost = unit(2);
        assert!(matches!(
            distance(&seq(&[1]), &seq(&[1, 0]), &cost),
            Err(Error::SourceShorterThanTarget { .. })
        ));
    }

    #[test]
    fn distance_of_example_pair() {
        let cost = unit(2);
        let (x, y) = example();
        assert_eq!(distance(&x, &y, &cost).unwrap(), 4.0);
    }

    #[test]
    fn self_distance_is_zero() {
        let cost = unit(3);
        let x = seq(&[2, 0, 1, 1, 2]);
        assert_eq!(distance(&x, &x, &cost).unwrap(), 0.0);
    }

    #[test]
    fn equal_length_reduces_to_positionwise_costs() {
        let cost = unit(3);
        let x = seq(&[0, 1, 2, 1]);
        let y = seq(&[0, 2, 2, 0]);
        let expected: f64 = x
            .symbols()
            .iter()
            .zip(y.symbols())
            .map(|(&a, &b)| cost.sub_cost(a, b))
            .sum();
        assert_eq!(distance(&x, &y, &cost).unwrap(), expected);
        assert_eq!(expected, 2.0);
    }

    #[test]
    fn sym_distance_orients_by_length() {
        let cost = unit(2);
        let (x, y) = example();
        assert_eq!(distance_sym(&x, &y, &cost), 4.0);
        assert_eq!(distance_sym(&y, &x, &cost), 4.0);
        assert_eq!(distance_sym(&x, &x, &cost), 0.0);
    }

    #[test]
    fn equal_length_sym_distance_keeps_argument_order() {
        // asymmetric substitution matrix: swapping equal-length arguments
        // swaps which direction's costs apply
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let cost =
            CostModel::with_matrix(&alphabet, vec![vec![0.0, 1.0], vec![5.0, 0.0]], 1.0).unwrap();
        let a = seq(&[0]);
        let b = seq(&[1]);
        assert_eq!(distance_sym(&a, &b, &cost), 1.0);
        assert_eq!(distance_sym(&b, &a, &cost), 5.0);
    }

    #[test]
    fn backtrack_identity() {
        let cost = unit(2);
        let x = seq(&[1, 0, 1]);
        let w = dp_matrix(&x, &x, &cost).unwrap();
        let es = backtrack(&x, &x, &w, &cost).unwrap();
        assert_eq!(es.alpha(), x.symbols());
        assert_eq!(es.gap_count(), 0);
        assert_eq!(es.target_symbols(), x.symbols());
        assert_eq!(score_edit_sequence(&es, &cost), 0.0);
    }

    #[test]
    fn backtrack_example_pair_is_optimal() {
        let cost = unit(2);
        let (x, y) = example();
        let w = dp_matrix(&x, &y, &cost).unwrap();
        let es = backtrack(&x, &y, &w, &cost).unwrap();
        assert_eq!(es.len(), x.len());
        assert_eq!(es.alpha(), x.symbols());
        assert_eq!(es.target_symbols(), y.symbols());
        assert_eq!(es.gap_count(), 4);
        assert_eq!(score_edit_sequence(&es, &cost), 4.0);
        // optimal for this pair means deletions only, no effective substitution
        for (&a, &b) in es.alpha().iter().zip(es.beta()) {
            if let AlignedSymbol::Sym(t) = b {
                assert_eq!(a, t);
            }
        }
    }

    #[test]
    fn backtrack_two_zeros_to_one() {
        let cost = unit(2);
        let x = seq(&[0, 0]);
        let y = seq(&[1]);
        let w = dp_matrix(&x, &y, &cost).unwrap();
        let es = backtrack(&x, &y, &w, &cost).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es.gap_count(), 1);
        assert_eq!(score_edit_sequence(&es, &cost), 2.0);
        assert_eq!(es.target_symbols(), y.symbols());
    }

    #[test]
    fn backtrack_rejects_foreign_matrix() {
        let cost = unit(2);
        let w = dp_matrix(&seq(&[0, 0]), &seq(&[1]), &cost).unwrap();
        assert!(matches!(
            backtrack(&seq(&[0, 0, 0]), &seq(&[1]), &w, &cost),
            Err(Error::InconsistentMatrix { .. })
        ));
    }

    #[test]
    fn scoring_the_displayed_example_sequence() {
        // the two-row display: four gaps plus two effective substitutions
        let cost = unit(2);
        let (x, _) = example();
        let sym = |i: usize| Symbol::from_id(i);
        let beta = vec![
            AlignedSymbol::Sym(sym(1)),
            AlignedSymbol::Sym(sym(0)),
            AlignedSymbol::Gap,
            AlignedSymbol::Gap,
            AlignedSymbol::Sym(sym(1)),
            AlignedSymbol::Sym(sym(1)),
            AlignedSymbol::Sym(sym(1)),
            AlignedSymbol::Gap,
            AlignedSymbol::Sym(sym(1)),
            AlignedSymbol::Sym(sym(0)),
            AlignedSymbol::Gap,
        ];
        let es = EditSequence::new(x.symbols().to_vec(), beta).unwrap();
        assert_eq!(score_edit_sequence(&es, &cost), 6.0);
        // its second row is the expanded target: length 11 with 4 gaps
        let row = expanded_target(&es);
        assert_eq!(row.len(), 11);
        assert_eq!(row.iter().filter(|b| b.is_gap()).count(), 4);
        assert_eq!(es.target_symbols(), seq(&[1, 0, 1, 1, 1, 1, 0]).symbols());
    }

    #[test]
    fn all_match_sequence_scores_zero() {
        let cost = unit(2);
        let x = seq(&[1, 1, 0]);
        let beta = x
            .symbols()
            .iter()
            .map(|&s| AlignedSymbol::Sym(s))
            .collect();
        let es = EditSequence::new(x.symbols().to_vec(), beta).unwrap();
        assert_eq!(score_edit_sequence(&es, &cost), 0.0);
    }

    #[test]
    fn deletions_only_score_scales_with_del_cost() {
        let alphabet = Alphabet::numeric(2).unwrap();
        let cost = CostModel::unit(&alphabet).unwrap().with_del_cost(2.5).unwrap();
        let x = seq(&[0, 1, 0, 1]);
        let beta = vec![AlignedSymbol::Gap; 4];
        let es = EditSequence::new(x.symbols().to_vec(), beta).unwrap();
        assert_eq!(score_edit_sequence(&es, &cost), 4.0 * 2.5);
    }

    #[test]
    fn mismatched_rows_are_rejected() {
        let x = seq(&[0, 1]);
        assert!(matches!(
            EditSequence::new(x.symbols().to_vec(), vec![AlignedSymbol::Gap]),
            Err(Error::RowLengthMismatch { .. })
        ));
    }
}
