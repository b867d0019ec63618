//! Exact solver for the two-dimensional (linear) assignment problem.
//!
//! Hungarian method with row/column potentials and shortest augmenting
//! paths, O(n^3). Among equal-cost optima the identity permutation is
//! returned whenever it is one of them; otherwise the augmenting order
//! decides.

use crate::error::{MapError, Result};

/// Dense `n x n` cost matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(MapError::input(format!(
                "matrix has {} entries, expected {}",
                entries.len(),
                n * n
            )));
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(MapError::input(format!(
                "non-finite entry at row {}, column {}",
                pos / n + 1,
                pos % n + 1
            )));
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MapError::input("matrix is not square"));
        }
        Self::new(n, rows.concat())
    }

    pub(crate) fn zeroed(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    /// `sum_i M[i][perm[i]]`.
    pub fn cost_of(&self, perm: &[usize]) -> f64 {
        perm.iter().enumerate().map(|(i, &j)| self.get(i, j)).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Optimal permutation and its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Ap2Solution {
    /// Row `i` is matched to column `perm[i]`.
    pub perm: Vec<usize>,
    pub cost: f64,
}

/// Minimises `sum_i M[i][perm(i)]` over all permutations.
pub fn solve_ap2(m: &SquareMatrix) -> Ap2Solution {
    let n = m.n;
    if n == 0 {
        return Ap2Solution {
            perm: Vec::new(),
            cost: 0.0,
        };
    }
    // 1-based potentials; column 0 is the virtual start of each augmenting path.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let row = &m.entries[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[row_of_col[j] - 1] = j - 1;
    }
    let cost = m.cost_of(&perm);
    let identity_cost = m.trace();
    if identity_cost <= cost {
        return Ap2Solution {
            perm: (0..n).collect(),
            cost: identity_cost,
        };
    }
    Ap2Solution { perm, cost }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(m: &SquareMatrix) -> f64 {
        fn rec(m: &SquareMatrix, row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
            let n = m.n();
            if row == n {
                *best = best.min(acc);
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    rec(m, row + 1, used, acc + m.get(row, j), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(m, 0, &mut vec![false; m.n()], 0.0, &mut best);
        best
    }

    #[test]
    fn zeros_give_identity() {
        let m = SquareMatrix::new(4, vec![0.0; 16]).unwrap();
        let sol = solve_ap2(&m);
        assert_eq!(sol.perm, vec![0, 1, 2, 3]);
        assert_eq!(sol.cost, 0.0);
    }

    #[test]
    fn two_by_two() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 0.0]]).unwrap();
        let sol = solve_ap2(&m);
        assert_eq!(sol.perm, vec![0, 1]);
        assert_eq!(sol.cost, 1.0);
    }

    #[test]
    fn prefers_off_diagonal_when_cheaper() {
        let m = SquareMatrix::from_rows(&[vec![5.0, 1.0], vec![1.0, 5.0]]).unwrap();
        let sol = solve_ap2(&m);
        assert_eq!(sol.perm, vec![1, 0]);
        assert_eq!(sol.cost, 2.0);
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = crate::rng::SplitMix64::new(77);
        for n in 1..=6 {
            for _ in 0..20 {
                let entries = (0..n * n).map(|_| rng.range_inclusive(0, 30) as f64).collect();
                let m = SquareMatrix::new(n, entries).unwrap();
                let sol = solve_ap2(&m);
                assert_eq!(sol.cost, brute_force(&m));
                assert_eq!(sol.cost, m.cost_of(&sol.perm));
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(SquareMatrix::new(2, vec![0.0, f64::NAN, 1.0, 1.0]).is_err());
        assert!(SquareMatrix::new(2, vec![0.0, f64::INFINITY, 1.0, 1.0]).is_err());
        assert!(SquareMatrix::new(2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn empty_matrix() {
        let sol = solve_ap2(&SquareMatrix::new(0, vec![]).unwrap());
        assert!(sol.perm.is_empty());
        assert_eq!(sol.cost, 0.0);
    }
}
