//! Problem instances and their weight models.

use std::fmt;
use std::str::FromStr;

use crate::assignment::Assignment;
use crate::dims::MAX_DIMS;
use crate::error::{MapError, Result};
use crate::rng::mix64;

/// Vector weights are 64-bit floats. Every generated family produces
/// integer-valued weights, so sums and comparisons are exact.
pub type Weight = f64;

/// Instance family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Random,
    /// Random weights with a known optimal assignment forced to weight `a`
    /// per vector. Stands in for the `gp` family generator; results on
    /// it are not comparable with published GP numbers.
    Planted,
    Clique,
    Geometric,
    Product,
    SquareRoot,
    Explicit,
}

impl Family {
    pub const GENERATED: [Family; 6] = [
        Family::Random,
        Family::Planted,
        Family::Clique,
        Family::Geometric,
        Family::Product,
        Family::SquareRoot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "Random",
            Family::Planted => "Planted",
            Family::Clique => "Clique",
            Family::Geometric => "Geometric",
            Family::Product => "Product",
            Family::SquareRoot => "SquareRoot",
            Family::Explicit => "Explicit",
        }
    }

    /// Short tag used in instance names such as `5r40`.
    pub fn name_tag(self) -> &'static str {
        match self {
            Family::Random => "r",
            Family::Planted => "gp",
            Family::Clique => "c",
            Family::Geometric => "g",
            Family::Product => "p",
            Family::SquareRoot => "sr",
            Family::Explicit => "x",
        }
    }

    /// Families with independent weights use `a * n` as best known value.
    pub fn has_independent_weights(self) -> bool {
        matches!(self, Family::Random | Family::Planted)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "random" => Family::Random,
            "planted" => Family::Planted,
            "clique" => Family::Clique,
            "geometric" => Family::Geometric,
            "product" => Family::Product,
            "squareroot" => Family::SquareRoot,
            "explicit" => Family::Explicit,
            _ => return Err(MapError::parse(format!("unknown family `{s}`"))),
        })
    }
}

/// How a decomposable weight combines its pairwise terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combiner {
    /// Sum of `d^{i,j}[e_i][e_j]` over all dimension pairs.
    CliqueSum,
    /// `round(sqrt(sum of squared pairwise entries))`.
    SquareRootOfSquares,
    /// Product of per-dimension factors `a^j[e_j]`.
    Product,
}

/// Data behind a decomposable weight.
#[derive(Debug, Clone, PartialEq)]
pub enum PairwiseData {
    /// One row-major `n x n` matrix per dimension pair `(i, j)`, `i < j`,
    /// pairs in lexicographic order.
    Matrices(Vec<Vec<f64>>),
    /// One length-`n` positive vector per dimension.
    Factors(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightModel {
    /// All `n^s` weights, lexicographic multi-index order with dimension 0
    /// most significant.
    ExplicitTensor { values: Vec<f64> },
    /// Counter-based random integer in `[a, b-1]` keyed by seed and vector.
    LazyRandom { a: i64, b: i64 },
    /// `LazyRandom` with the `n` vectors of `planted` forced to weight `a`.
    Planted { a: i64, b: i64, planted: Assignment },
    Decomposable {
        combiner: Combiner,
        pairwise: PairwiseData,
    },
    /// `n` points in the plane per dimension; weight is the rounded sum of
    /// pairwise Euclidean distances.
    GeometricPoints { points: Vec<Vec<(f64, f64)>> },
}

/// An `s`-dimensional assignment instance of side `n`.
///
/// Immutable after construction; share freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    s: usize,
    n: usize,
    family: Family,
    seed: u64,
    model: WeightModel,
    /// Premixed seed for the counter-based families.
    key: u64,
    /// Pair index lookup `pair_index[i * s + j]` for `i < j`.
    pair_index: Vec<usize>,
    lower_bound: Weight,
}

impl Instance {
    pub fn new(s: usize, n: usize, family: Family, seed: u64, model: WeightModel) -> Result<Self> {
        if s < 3 {
            return Err(MapError::input(format!("s must be >= 3, got {s}")));
        }
        if s > MAX_DIMS {
            return Err(MapError::input(format!("s must be <= {MAX_DIMS}, got {s}")));
        }
        if n < 1 {
            return Err(MapError::input("n must be >= 1"));
        }
        let pairs = s * (s - 1) / 2;
        let mut pair_index = vec![usize::MAX; s * s];
        let mut next = 0;
        for i in 0..s {
            for j in i + 1..s {
                pair_index[i * s + j] = next;
                next += 1;
            }
        }
        let check_values = |vals: &[f64], what: &str| -> Result<()> {
            match vals.iter().find(|v| !v.is_finite() || **v < 0.0) {
                Some(v) => Err(MapError::input(format!(
                    "{what} must be finite and non-negative, found {v}"
                ))),
                None => Ok(()),
            }
        };
        match &model {
            WeightModel::ExplicitTensor { values } => {
                let expected = n
                    .checked_pow(s as u32)
                    .ok_or_else(|| MapError::input("n^s overflows"))?;
                if values.len() != expected {
                    return Err(MapError::input(format!(
                        "explicit tensor has {} values, expected n^s = {expected}",
                        values.len()
                    )));
                }
                check_values(values, "weights")?;
            }
            WeightModel::LazyRandom { a, b } => check_range(*a, *b)?,
            WeightModel::Planted { a, b, planted } => {
                check_range(*a, *b)?;
                if planted.s() != s || planted.n() != n {
                    return Err(MapError::input("planted assignment has wrong shape"));
                }
                planted.validate()?;
            }
            WeightModel::Decomposable { combiner, pairwise } => match (combiner, pairwise) {
                (Combiner::CliqueSum | Combiner::SquareRootOfSquares, PairwiseData::Matrices(m)) => {
                    if m.len() != pairs || m.iter().any(|x| x.len() != n * n) {
                        return Err(MapError::input(format!(
                            "expected {pairs} pairwise matrices of {n}x{n}"
                        )));
                    }
                    for x in m {
                        check_values(x, "pairwise entries")?;
                    }
                }
                (Combiner::Product, PairwiseData::Factors(f)) => {
                    if f.len() != s || f.iter().any(|x| x.len() != n) {
                        return Err(MapError::input(format!(
                            "expected {s} factor vectors of length {n}"
                        )));
                    }
                    for x in f {
                        if x.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                            return Err(MapError::input("product factors must be positive"));
                        }
                    }
                }
                _ => return Err(MapError::input("combiner does not match pairwise data")),
            },
            WeightModel::GeometricPoints { points } => {
                if points.len() != s || points.iter().any(|p| p.len() != n) {
                    return Err(MapError::input(format!("expected {s} point sets of size {n}")));
                }
                if points.iter().flatten().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(MapError::input("point coordinates must be finite"));
                }
            }
        }
        let mut inst = Instance {
            s,
            n,
            family,
            seed,
            model,
            key: mix64(seed),
            pair_index,
            lower_bound: 0.0,
        };
        inst.lower_bound = inst.compute_lower_bound();
        Ok(inst)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model(&self) -> &WeightModel {
        &self.model
    }

    /// The forced optimum of a planted instance.
    pub fn planted(&self) -> Option<&Assignment> {
        match &self.model {
            WeightModel::Planted { planted, .. } => Some(planted),
            _ => None,
        }
    }

    /// A value no vector weight is below. Equal to the family minimum `a`
    /// for the random families; a pairwise-minimum bound for decomposable
    /// ones; the exact minimum for explicit tensors.
    pub fn weight_lower_bound(&self) -> Weight {
        self.lower_bound
    }

    /// `n * a` when every vector weight is at least `a` and that bound is
    /// the expected (Random) or forced (Planted) optimum.
    pub fn independent_optimum_estimate(&self) -> Option<Weight> {
        match self.model {
            WeightModel::LazyRandom { a, .. } | WeightModel::Planted { a, .. } => {
                Some(a as f64 * self.n as f64)
            }
            _ => None,
        }
    }

    /// Checked weight lookup.
    pub fn weight(&self, e: &[usize]) -> Result<Weight> {
        if e.len() != self.s {
            return Err(MapError::input(format!(
                "vector has {} coordinates, expected {}",
                e.len(),
                self.s
            )));
        }
        if let Some((j, &c)) = e.iter().enumerate().find(|(_, &c)| c >= self.n) {
            return Err(MapError::input(format!(
                "coordinate {} of dimension {} out of range 1..={}",
                c + 1,
                j + 1,
                self.n
            )));
        }
        Ok(self.weight_of(e))
    }

    /// Weight lookup without range checks; `e` must have `s` coordinates in
    /// `0..n`.
    #[inline]
    pub fn weight_of(&self, e: &[usize]) -> Weight {
        debug_assert_eq!(e.len(), self.s);
        debug_assert!(e.iter().all(|&c| c < self.n));
        match &self.model {
            WeightModel::ExplicitTensor { values } => values[self.rank(e) as usize],
            WeightModel::LazyRandom { a, b } => self.lazy(e, *a, *b),
            WeightModel::Planted { a, b, planted } => {
                if planted.vector(e[0]) == e {
                    *a as f64
                } else {
                    self.lazy(e, *a, *b)
                }
            }
            WeightModel::Decomposable { combiner, pairwise } => match (combiner, pairwise) {
                (Combiner::CliqueSum, PairwiseData::Matrices(m)) => {
                    let mut sum = 0.0;
                    self.for_each_pair(|i, j, p| sum += m[p][e[i] * self.n + e[j]]);
                    sum
                }
                (Combiner::SquareRootOfSquares, PairwiseData::Matrices(m)) => {
                    let mut sum = 0.0;
                    self.for_each_pair(|i, j, p| {
                        let d = m[p][e[i] * self.n + e[j]];
                        sum += d * d;
                    });
                    sum.sqrt().round()
                }
                (Combiner::Product, PairwiseData::Factors(f)) => {
                    e.iter().enumerate().map(|(j, &c)| f[j][c]).product()
                }
                _ => unreachable!("validated at construction"),
            },
            WeightModel::GeometricPoints { points } => {
                let mut sum = 0.0;
                self.for_each_pair(|i, j, _| {
                    let (x1, y1) = points[i][e[i]];
                    let (x2, y2) = points[j][e[j]];
                    sum += ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt();
                });
                sum.round()
            }
        }
    }

    /// Total weight of an assignment.
    pub fn assignment_weight(&self, a: &Assignment) -> Weight {
        debug_assert_eq!(a.s(), self.s);
        debug_assert_eq!(a.n(), self.n);
        a.vectors().map(|v| self.weight_of(v)).sum()
    }

    /// Checks shape and feasibility before summing.
    pub fn checked_assignment_weight(&self, a: &Assignment) -> Result<Weight> {
        if a.s() != self.s || a.n() != self.n {
            return Err(MapError::input(format!(
                "assignment is {}x{}, instance is {}x{}",
                a.s(),
                a.n(),
                self.s,
                self.n
            )));
        }
        a.validate()?;
        Ok(self.assignment_weight(a))
    }

    /// Lexicographic rank of a multi-index, dimension 0 most significant.
    #[inline]
    pub fn rank(&self, e: &[usize]) -> u64 {
        e.iter().fold(0u64, |acc, &c| {
            acc.wrapping_mul(self.n as u64).wrapping_add(c as u64)
        })
    }

    #[inline]
    fn lazy(&self, e: &[usize], a: i64, b: i64) -> Weight {
        let span = (b - a) as u64;
        (a + (mix64(self.key ^ self.rank(e)) % span) as i64) as f64
    }

    #[inline]
    fn for_each_pair(&self, mut f: impl FnMut(usize, usize, usize)) {
        let s = self.s;
        for i in 0..s {
            for j in i + 1..s {
                f(i, j, self.pair_index[i * s + j]);
            }
        }
    }

    fn compute_lower_bound(&self) -> Weight {
        match &self.model {
            WeightModel::ExplicitTensor { values } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
            WeightModel::LazyRandom { a, .. } | WeightModel::Planted { a, .. } => *a as f64,
            WeightModel::Decomposable { combiner, pairwise } => match (combiner, pairwise) {
                (Combiner::CliqueSum, PairwiseData::Matrices(m)) => {
                    m.iter().map(|x| min_of(x)).sum()
                }
                (Combiner::SquareRootOfSquares, PairwiseData::Matrices(m)) => {
                    let sq: f64 = m.iter().map(|x| min_of(x).powi(2)).sum();
                    // rounding can pull a vector weight below the exact root
                    (sq.sqrt() - 0.5).max(0.0).floor()
                }
                (Combiner::Product, PairwiseData::Factors(f)) => {
                    f.iter().map(|x| min_of(x)).product()
                }
                _ => 0.0,
            },
            WeightModel::GeometricPoints { .. } => 0.0,
        }
    }
}

fn min_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

fn check_range(a: i64, b: i64) -> Result<()> {
    if a >= b {
        return Err(MapError::input(format!("random range needs a < b, got a={a}, b={b}")));
    }
    if a < 0 {
        return Err(MapError::input("random weights must be non-negative"));
    }
    Ok(())
}
