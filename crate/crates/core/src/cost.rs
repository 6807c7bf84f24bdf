//! Elementary edit costs: a deletion cost `d_e` plus a substitution cost
//! `d(x, y)` over the alphabet, with `d(x, x) = 0` enforced at construction.

use crate::alphabet::{AlignedSymbol, Alphabet, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum SubCost {
    /// d(x, y) = 1 for x != y, 0 otherwise.
    Unit,
    /// Row-major |A| x |A| lookup table.
    Matrix(Vec<f64>),
}

/// Immutable cost model shared by every operation.
#[derive(Clone, Debug)]
pub struct CostModel {
    alphabet_size: usize,
    del_cost: f64,
    sub: SubCost,
}

impl CostModel {
    /// Unit model: every deletion and every effective substitution costs one.
    pub fn unit(alphabet: &Alphabet) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(CostModel {
            alphabet_size: alphabet.len(),
            del_cost: 1.0,
            sub: SubCost::Unit,
        })
    }

    /// Model backed by an explicit substitution matrix.
    ///
    /// The matrix must be square over the alphabet, nonnegative, with a zero
    /// diagonal. Asymmetric matrices are accepted; see [`distance_sym`] for
    /// how argument order is then interpreted.
    ///
    /// [`distance_sym`]: crate::editdist::distance_sym
    pub fn with_matrix(alphabet: &Alphabet, matrix: Vec<Vec<f64>>, del_cost: f64) -> Result<Self> {
        let n = alphabet.len();
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if del_cost < 0.0 || !del_cost.is_finite() {
            return Err(Error::NegativeDeletionCost(del_cost));
        }
        if matrix.len() != n {
            return Err(Error::BadCostMatrix(format!(
                "expected {n} rows, got {}",
                matrix.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadCostMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::BadCostMatrix(format!(
                        "entry ({i}, {j}) = {v} is not a nonnegative finite value"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::BadCostMatrix(format!(
                        "diagonal entry ({i}, {i}) = {v}, must be 0"
                    )));
                }
                flat.push(v);
            }
        }
        Ok(CostModel {
            alphabet_size: n,
            del_cost,
            sub: SubCost::Matrix(flat),
        })
    }

    /// Replaces the deletion cost, keeping the substitution costs.
    pub fn with_del_cost(mut self, del_cost: f64) -> Result<Self> {
        if del_cost < 0.0 || !del_cost.is_finite() {
            return Err(Error::NegativeDeletionCost(del_cost));
        }
        self.del_cost = del_cost;
        Ok(self)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn del_cost(&self) -> f64 {
        self.del_cost
    }

    /// Substitution cost d(x, y).
    pub fn sub_cost(&self, x: Symbol, y: Symbol) -> f64 {
        match &self.sub {
            SubCost::Unit => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            SubCost::Matrix(m) => m[x.id() * self.alphabet_size + y.id()],
        }
    }

    /// Cost of replacing `x` by an alignment-row entry: a substitution when
    /// the entry is a symbol, a deletion when it is the gap marker.
    pub fn aligned_cost(&self, x: Symbol, y: AlignedSymbol) -> f64 {
        match y {
            AlignedSymbol::Sym(s) => self.sub_cost(x, s),
            AlignedSymbol::Gap => self.del_cost,
        }
    }

    /// Largest substitution cost in the model, used for distance bounds.
    pub fn max_sub_cost(&self) -> f64 {
        match &self.sub {
            SubCost::Unit => 1.0,
            SubCost::Matrix(m) => m.iter().cloned().fold(0.0, f64::max),
        }
    }
}
