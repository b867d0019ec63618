//! Construction heuristics: Trivial, Greedy, Max-Regret and ROM.

use std::fmt;
use std::str::FromStr;

use crate::ap2::{solve_ap2, SquareMatrix};
use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::instance::{Instance, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constructor {
    Trivial,
    Greedy,
    /// Per-(dimension, value) regret variant; see [`max_regret`].
    MaxRegret,
    Rom,
}

impl Constructor {
    pub const ALL: [Constructor; 4] = [
        Constructor::Trivial,
        Constructor::Greedy,
        Constructor::MaxRegret,
        Constructor::Rom,
    ];

    pub fn build(self, inst: &Instance) -> Assignment {
        match self {
            Constructor::Trivial => trivial(inst),
            Constructor::Greedy => greedy(inst),
            Constructor::MaxRegret => max_regret(inst),
            Constructor::Rom => rom(inst),
        }
    }
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constructor::Trivial => "trivial",
            Constructor::Greedy => "greedy",
            Constructor::MaxRegret => "maxregret-jv",
            Constructor::Rom => "rom",
        })
    }
}

impl FromStr for Constructor {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "trivial" => Constructor::Trivial,
            "greedy" => Constructor::Greedy,
            "maxregret" | "maxregret-jv" | "max-regret" => Constructor::MaxRegret,
            "rom" => Constructor::Rom,
            _ => return Err(MapError::parse(format!("unknown construction heuristic `{s}`"))),
        })
    }
}

/// Every permutation the identity.
pub fn trivial(inst: &Instance) -> Assignment {
    Assignment::identity(inst.s(), inst.n())
}

/// Remaining coordinate values per dimension, kept sorted ascending.
struct FreeCoords {
    s: usize,
    free: Vec<Vec<usize>>,
    rows: Vec<usize>,
}

impl FreeCoords {
    fn new(s: usize, n: usize) -> Self {
        FreeCoords {
            s,
            free: vec![(0..n).collect(); s],
            rows: Vec::with_capacity(s * n),
        }
    }

    fn remaining(&self) -> usize {
        self.free[0].len()
    }

    fn commit(&mut self, e: &[usize]) {
        for (j, &c) in e.iter().enumerate() {
            let pos = self.free[j].binary_search(&c).expect("coordinate already used");
            self.free[j].remove(pos);
        }
        self.rows.extend_from_slice(e);
    }

    /// Visits every compatible vector in lexicographic order; the callback
    /// gets the per-dimension positions into the free lists and the vector.
    /// Stops early when the callback returns `false`.
    fn scan(&self, mut visit: impl FnMut(&[usize], &[usize]) -> bool) {
        let r = self.remaining();
        if r == 0 {
            return;
        }
        let s = self.s;
        let mut pos = vec![0usize; s];
        let mut e: Vec<usize> = (0..s).map(|j| self.free[j][0]).collect();
        loop {
            if !visit(&pos, &e) {
                return;
            }
            let mut j = s;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < r {
                    e[j] = self.free[j][pos[j]];
                    break;
                }
                pos[j] = 0;
                e[j] = self.free[j][0];
            }
        }
    }

    fn finish(self, n: usize) -> Assignment {
        Assignment::from_rows_unchecked(self.s, n, &self.rows)
    }
}

/// Adds, `n` times, the lightest vector compatible with the partial
/// assignment (lexicographically smallest on ties). A scan stops as soon as
/// it meets a vector at the instance's weight lower bound.
pub fn greedy(inst: &Instance) -> Assignment {
    let (s, n) = (inst.s(), inst.n());
    let floor = inst.weight_lower_bound();
    let mut fc = FreeCoords::new(s, n);
    let mut best_e = vec![0usize; s];
    while fc.remaining() > 0 {
        let mut best = f64::INFINITY;
        fc.scan(|_, e| {
            let w = inst.weight_of(e);
            if w < best {
                best = w;
                best_e.copy_from_slice(e);
            }
            w > floor
        });
        fc.commit(&best_e.clone());
    }
    fc.finish(n)
}

/// Max-Regret over (dimension, value) pairs.
///
/// Each round, for every dimension `j` and every unused value `v` of it,
/// finds the best and second-best weights among compatible vectors with
/// `e_j = v`. The pair with the largest gap (second minus best) commits its
/// best vector. Ties go to the smallest `(j, v)`, and within a pair to the
/// lexicographically smallest vector.
pub fn max_regret(inst: &Instance) -> Assignment {
    let (s, n) = (inst.s(), inst.n());
    let mut fc = FreeCoords::new(s, n);
    while fc.remaining() > 0 {
        let r = fc.remaining();
        if r == 1 {
            let e: Vec<usize> = (0..s).map(|j| fc.free[j][0]).collect();
            fc.commit(&e);
            break;
        }
        let mut best = vec![f64::INFINITY; s * r];
        let mut second = vec![f64::INFINITY; s * r];
        let mut best_vec = vec![0usize; s * r * s];
        fc.scan(|pos, e| {
            let w = inst.weight_of(e);
            for j in 0..s {
                let k = j * r + pos[j];
                if w < best[k] {
                    second[k] = best[k];
                    best[k] = w;
                    best_vec[k * s..(k + 1) * s].copy_from_slice(e);
                } else if w < second[k] {
                    second[k] = w;
                }
            }
            true
        });
        let mut pick = 0;
        let mut pick_regret = f64::NEG_INFINITY;
        for k in 0..s * r {
            let regret = second[k] - best[k];
            if regret > pick_regret {
                pick_regret = regret;
                pick = k;
            }
        }
        let e = best_vec[pick * s..(pick + 1) * s].to_vec();
        fc.commit(&e);
    }
    fc.finish(n)
}

/// ROM: fixes one more dimension per level by a 2-AP over aggregated
/// weights.
///
/// At level `l` every vector already has coordinates bound in dimensions
/// `0..=l` (vector `i` starts at `i`). Cell `(i, v)` of the level matrix sums
/// the weights of all vectors extending vector `i`'s bound prefix with `v`
/// in dimension `l + 1` and anything in the remaining dimensions. The 2-AP
/// solution assigns dimension `l + 1`.
pub fn rom(inst: &Instance) -> Assignment {
    let (s, n) = (inst.s(), inst.n());
    let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut e = vec![0usize; s];
    let mut m = SquareMatrix::zeroed(n);
    for level in 0..s - 1 {
        let target = level + 1;
        let free_dims = s - target - 1;
        for i in 0..n {
            for (j, p) in perms.iter().enumerate() {
                e[j] = p[i];
            }
            for v in 0..n {
                e[target] = v;
                m.set(i, v, sum_free_suffix(inst, &mut e, target + 1, free_dims));
            }
        }
        perms.push(solve_ap2(&m).perm);
    }
    Assignment::from_perms(&perms).expect("ROM yields permutations")
}

/// Sums weights over all completions of `e[start..]`.
fn sum_free_suffix(inst: &Instance, e: &mut [usize], start: usize, count: usize) -> Weight {
    let n = inst.n();
    if count == 0 {
        return inst.weight_of(e);
    }
    for c in &mut e[start..] {
        *c = 0;
    }
    let mut total = 0.0;
    loop {
        total += inst.weight_of(e);
        let mut j = e.len();
        loop {
            if j == start {
                return total;
            }
            j -= 1;
            e[j] += 1;
            if e[j] < n {
                break;
            }
            e[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Family, WeightModel};

    fn explicit(s: usize, n: usize, values: Vec<f64>) -> Instance {
        Instance::new(s, n, Family::Explicit, 0, WeightModel::ExplicitTensor { values }).unwrap()
    }

    /// All assignments of a small instance, by brute force.
    fn all_assignments(s: usize, n: usize) -> Vec<Assignment> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let base = perms(n);
        let mut out = vec![vec![]];
        for _ in 1..s {
            let mut next = Vec::new();
            for prefix in &out {
                for p in &base {
                    let mut v: Vec<Vec<usize>> = prefix.clone();
                    v.push(p.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|rest| Assignment::from_tail_perms(n, &rest).unwrap())
            .collect()
    }

    #[test]
    fn trivial_is_diagonal() {
        let inst = explicit(3, 2, (0..8).map(f64::from).collect());
        let a = trivial(&inst);
        for j in 0..3 {
            assert_eq!(a.perm(j), vec![0, 1]);
        }
    }

    #[test]
    fn single_vector_instances() {
        let inst = explicit(4, 1, vec![3.0]);
        for c in Constructor::ALL {
            let a = c.build(&inst);
            assert_eq!(a.vector(0), &[0, 0, 0, 0], "{c}");
        }
    }

    #[test]
    fn greedy_takes_global_minimum_first_and_can_be_suboptimal() {
        // w(1,1,1) = 0 is the unique minimum; the only completion (2,2,2)
        // costs 100 while the other three assignments cost 20.
        let mut values = vec![10.0; 8];
        values[0] = 0.0; // (1,1,1)
        values[7] = 100.0; // (2,2,2)
        let inst = explicit(3, 2, values);
        let a = greedy(&inst);
        assert_eq!(a.vector(0), &[0, 0, 0]);
        let optimum = all_assignments(3, 2)
            .iter()
            .map(|x| inst.assignment_weight(x))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(optimum, 20.0);
        assert!(inst.assignment_weight(&a) > optimum);
    }

    #[test]
    fn max_regret_commits_forced_vector_first() {
        // Through value 2 of dimension 1 every vector costs 50 except
        // (2,1,2) = 1: regret 49, far above any other pair's.
        let mut values = vec![5.0; 8];
        let idx = |e: [usize; 3]| e[0] * 4 + e[1] * 2 + e[2];
        for e2 in 0..2 {
            for e3 in 0..2 {
                values[idx([1, e2, e3])] = 50.0;
            }
        }
        values[idx([1, 0, 1])] = 1.0;
        values[idx([0, 0, 0])] = 4.0;
        let inst = explicit(3, 2, values);
        let a = max_regret(&inst);
        assert_eq!(a.vector(1), &[1, 0, 1]);
        assert_eq!(a.vector(0), &[0, 1, 0]);
    }

    #[test]
    fn rom_matches_hand_trace() {
        // Distinct weights w(e) = rank(e) + 1 with a twist on (1,2,*).
        let idx = |e: [usize; 3]| e[0] * 4 + e[1] * 2 + e[2];
        let mut values: Vec<f64> = (1..=8).map(f64::from).collect();
        values[idx([0, 1, 0])] = 0.5;
        values[idx([0, 1, 1])] = 0.25;
        let inst = explicit(3, 2, values.clone());
        // Level 1: M[i][j] = sum_k w(i, j, k)
        //   M = [[1+2, 0.5+0.25], [5+6, 7+8]] = [[3, 0.75], [11, 15]]
        //   identity 18, swap 11.75 -> pi2 = (2, 1)
        // Level 2: vectors (1,2,k), (2,1,k)
        //   M = [[0.5, 0.25], [5, 6]]; identity 6.5, swap 5.25 -> pi3 = (2, 1)
        let a = rom(&inst);
        assert_eq!(a.perm(1), vec![1, 0]);
        assert_eq!(a.perm(2), vec![1, 0]);
        assert_eq!(inst.assignment_weight(&a), 0.25 + 5.0);
    }

    #[test]
    fn all_constructors_feasible_and_deterministic() {
        use crate::generate::{generate, FamilySpec};
        for family in crate::instance::Family::GENERATED {
            for (s, n) in [(3, 7), (4, 5), (5, 3)] {
                let inst = generate(&FamilySpec::new(family, s, n, 1)).unwrap();
                for c in Constructor::ALL {
                    let a = c.build(&inst);
                    a.validate().unwrap();
                    assert_eq!(a, c.build(&inst), "{c} on {family}");
                }
            }
        }
    }

    #[test]
    fn greedy_first_vector_is_global_minimum() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for _ in 0..30 {
            let values: Vec<f64> = (0..27).map(|_| rng.range_inclusive(0, 40) as f64).collect();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let inst = explicit(3, 3, values);
            let a = greedy(&inst);
            let first_min = a.vectors().map(|v| inst.weight_of(v)).fold(f64::INFINITY, f64::min);
            assert_eq!(first_min, min);
        }
    }
}
