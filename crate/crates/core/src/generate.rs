//! Benchmark instance generators.
//!
//! Instance `i` of a given family, `s` and `n` is seeded with `s + n + i`.
//! Eager families draw from a SplitMix64 stream in a fixed order: pairwise
//! matrices for dimension pairs `(i, j)`, `i < j`, lexicographically, each
//! row-major; points and product factors dimension by dimension. Planted
//! draws the forced optimum as one Fisher–Yates permutation per dimension
//! `2..s`.

use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::instance::{Combiner, Family, Instance, PairwiseData, WeightModel};
use crate::rng::SplitMix64;

/// Declarative description of one generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub s: usize,
    pub n: usize,
    /// 1-based instance index within its (family, s, n) group.
    pub index: u32,
    /// Random/Planted: weights in `[lo, hi - 1]` (i.e. `a = lo`, `b = hi`).
    /// Clique/SquareRoot edge weights, Geometric point coordinates and
    /// Product factors: integers in `[lo, hi]`.
    pub lo: i64,
    pub hi: i64,
}

impl FamilySpec {
    /// Spec with the default parameter range of `family`.
    pub fn new(family: Family, s: usize, n: usize, index: u32) -> Self {
        let (lo, hi) = default_range(family);
        FamilySpec {
            family,
            s,
            n,
            index,
            lo,
            hi,
        }
    }

    pub fn with_index(mut self, index: u32) -> Self {
        self.index = index;
        self
    }

    pub fn seed(&self) -> u64 {
        self.s as u64 + self.n as u64 + self.index as u64
    }

    /// Canonical short name such as `5r40`.
    pub fn name(&self) -> String {
        format!("{}{}{}", self.s, self.family.name_tag(), self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.family == Family::Explicit {
            return Err(MapError::input("explicit instances are loaded, not generated"));
        }
        if self.s < 3 {
            return Err(MapError::input(format!("s must be >= 3, got {}", self.s)));
        }
        if self.n < 1 {
            return Err(MapError::input("n must be >= 1"));
        }
        if self.index < 1 {
            return Err(MapError::input("instance index starts at 1"));
        }
        if self.lo >= self.hi {
            return Err(MapError::input(format!(
                "parameter range needs lo < hi, got {}..{}",
                self.lo, self.hi
            )));
        }
        if self.lo < 0 || (self.family == Family::Product && self.lo < 1) {
            return Err(MapError::input("parameter range must be positive"));
        }
        Ok(())
    }
}

pub fn default_range(family: Family) -> (i64, i64) {
    match family {
        Family::Random | Family::Planted => (1, 101),
        Family::Clique | Family::SquareRoot | Family::Geometric => (1, 100),
        Family::Product => (1, 10),
        Family::Explicit => (0, 1),
    }
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Instance> {
    spec.validate()?;
    let FamilySpec { family, s, n, lo, hi, .. } = *spec;
    let seed = spec.seed();
    let mut rng = SplitMix64::new(seed);
    let model = match family {
        Family::Random => WeightModel::LazyRandom { a: lo, b: hi },
        Family::Planted => {
            let rest: Vec<Vec<usize>> = (1..s).map(|_| rng.permutation(n)).collect();
            let planted = Assignment::from_tail_perms(n, &rest)?;
            WeightModel::Planted { a: lo, b: hi, planted }
        }
        Family::Clique | Family::SquareRoot => {
            let pairs = s * (s - 1) / 2;
            let matrices = (0..pairs)
                .map(|_| (0..n * n).map(|_| rng.range_inclusive(lo, hi) as f64).collect())
                .collect();
            let combiner = if family == Family::Clique {
                Combiner::CliqueSum
            } else {
                Combiner::SquareRootOfSquares
            };
            WeightModel::Decomposable {
                combiner,
                pairwise: PairwiseData::Matrices(matrices),
            }
        }
        Family::Geometric => {
            let points = (0..s)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x = rng.range_inclusive(lo, hi) as f64;
                            let y = rng.range_inclusive(lo, hi) as f64;
                            (x, y)
                        })
                        .collect()
                })
                .collect();
            WeightModel::GeometricPoints { points }
        }
        Family::Product => {
            let factors = (0..s)
                .map(|_| (0..n).map(|_| rng.range_inclusive(lo, hi) as f64).collect())
                .collect();
            WeightModel::Decomposable {
                combiner: Combiner::Product,
                pairwise: PairwiseData::Factors(factors),
            }
        }
        Family::Explicit => unreachable!("rejected by validate"),
    };
    Instance::new(s, n, family, seed, model)
}

/// Parses names of the form `<s><tag><n>`, e.g. `5r40` or `3sr150`.
///
/// Tags: `gp` Planted, `r` Random, `c` (or `cq`) Clique, `g` Geometric,
/// `p` Product, `sr` SquareRoot. The index defaults to 1.
pub fn parse_instance_name(name: &str) -> Result<FamilySpec> {
    let digits_end = name.find(|c: char| !c.is_ascii_digit()).unwrap_or(name.len());
    let (s_part, rest) = name.split_at(digits_end);
    if s_part.is_empty() {
        return Err(MapError::parse(format!(
            "instance name `{name}`: missing dimension count prefix"
        )));
    }
    let tag_end = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
    let (tag, n_part) = rest.split_at(tag_end);
    let family = match tag {
        "gp" => Family::Planted,
        "r" => Family::Random,
        "c" | "cq" => Family::Clique,
        "g" => Family::Geometric,
        "p" => Family::Product,
        "sr" => Family::SquareRoot,
        "" => {
            return Err(MapError::parse(format!("instance name `{name}`: missing family tag")))
        }
        other => {
            return Err(MapError::parse(format!(
                "instance name `{name}`: unknown family tag `{other}`"
            )))
        }
    };
    if n_part.is_empty() {
        return Err(MapError::parse(format!("instance name `{name}`: missing size suffix")));
    }
    let n: usize = n_part
        .parse()
        .map_err(|_| MapError::parse(format!("instance name `{name}`: bad size `{n_part}`")))?;
    let s: usize = s_part
        .parse()
        .map_err(|_| MapError::parse(format!("instance name `{name}`: bad dimension count")))?;
    if s < 3 {
        return Err(MapError::parse(format!(
            "instance name `{name}`: s must be >= 3, got {s}"
        )));
    }
    if n < 1 {
        return Err(MapError::parse(format!("instance name `{name}`: n must be >= 1")));
    }
    Ok(FamilySpec::new(family, s, n, 1))
}
