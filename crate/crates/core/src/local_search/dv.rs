use std::time::Instant;

use super::{improves, DimensionSubsetFamily, LocalSearchReport};
use crate::ap2::{solve_ap2, SquareMatrix};
use crate::assignment::{swap_into, Assignment};
use crate::dims::DimSet;
use crate::instance::Instance;

/// `M[i][j] = w(swap(A^i, A^j, D))`.
///
/// Row `i`, column `rho(i)` is the weight vector `i` gets under
/// `p_D(A, rho)`, so the diagonal sums to `w(A)`.
pub fn dv_matrix(inst: &Instance, a: &Assignment, dims: DimSet) -> SquareMatrix {
    let n = a.n();
    let mut m = SquareMatrix::zeroed(n);
    let mut e = vec![0usize; a.s()];
    for i in 0..n {
        let u = a.vector(i);
        for j in 0..n {
            swap_into(u, a.vector(j), dims, &mut e);
            m.set(i, j, inst.weight_of(&e));
        }
    }
    m
}

/// Dimensionwise local search over `family`.
///
/// Each pass walks the family in order; for each set `D` it finds the best
/// `rho` by one 2-AP solve and applies `p_D(A, rho)` when that strictly
/// improves the weight. Passes repeat until one commits nothing.
pub fn dv_search(inst: &Instance, a: &Assignment, family: &DimensionSubsetFamily) -> LocalSearchReport {
    let started = Instant::now();
    let initial_weight = inst.assignment_weight(a);
    let mut current = a.clone();
    let mut weight = initial_weight;
    let mut passes = 0;
    let mut ap2_calls = 0;
    loop {
        passes += 1;
        let mut improved = false;
        for &dims in family.sets() {
            let m = dv_matrix(inst, &current, dims);
            let sol = solve_ap2(&m);
            ap2_calls += 1;
            if improves(sol.cost, m.trace()) {
                current = current.apply_dimension_permutation_unchecked(dims, &sol.perm);
                let w = inst.assignment_weight(&current);
                debug_assert!(w <= weight);
                weight = w;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    LocalSearchReport {
        result: current,
        initial_weight,
        final_weight: weight,
        passes,
        ap2_calls,
        candidate_evals: 0,
        elapsed: started.elapsed(),
    }
}
