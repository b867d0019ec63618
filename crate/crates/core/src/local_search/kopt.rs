use std::time::Instant;

use super::{improves, LocalSearchReport};
use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::instance::{Instance, Weight};

/// All permutations of `0..k` in lexicographic order; the first is the
/// identity.
pub(crate) fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// k-opt for `k` in {2, 3}.
///
/// Every sweep visits the `k`-subsets `E` of vector slots in lexicographic
/// order and replaces `E` by the lightest recombination of its coordinates
/// (first coordinates fixed; any permutation of `E`'s coordinates in each
/// other dimension). Among equal minima the first in lexicographic order of
/// the permutation tuple wins, and only a strict improvement is committed.
///
/// A subset is skipped when all its vectors already sit at the instance's
/// weight lower bound, or when none of them has changed since the previous
/// sweep began. Sweeps repeat until one changes nothing.
pub fn k_opt(inst: &Instance, a: &Assignment, k: usize) -> Result<LocalSearchReport> {
    if !(2..=3).contains(&k) {
        return Err(MapError::input(format!("k-opt supports k = 2 or 3, got {k}")));
    }
    let (s, n) = (a.s(), a.n());
    if k > n {
        return Err(MapError::input(format!("k-opt needs k <= n, got k = {k}, n = {n}")));
    }
    let started = Instant::now();
    let floor = inst.weight_lower_bound();
    let perms = permutations_lex(k);

    // k-opt never touches dimension 0, so slot i keeps first coordinate i
    // and the buffer stays canonical.
    let mut rows = a.rows().to_vec();
    let mut weights: Vec<Weight> = a.vectors().map(|v| inst.weight_of(v)).collect();
    let initial_weight: Weight = weights.iter().sum();

    let mut pow = vec![1usize; s];
    for j in (0..s - 1).rev() {
        pow[j] = pow[j + 1] * k;
    }
    let mut table = vec![0.0; pow[0] * k];
    let mut e = vec![0usize; s];
    let mut src = vec![0usize; s];
    let mut digits = vec![0usize; s];
    let mut idx = vec![0usize; k];
    let mut best_digits = vec![0usize; s];
    let mut replacement = vec![0usize; k * s];

    let mut dirty_prev = vec![true; n];
    let mut dirty_cur = vec![false; n];
    let mut subset: Vec<usize> = (0..k).collect();
    let mut passes = 0;
    let mut evals = 0u64;

    loop {
        passes += 1;
        let mut changed = false;
        subset.iter_mut().enumerate().for_each(|(i, x)| *x = i);
        loop {
            let skip = subset.iter().all(|&i| weights[i] <= floor)
                || subset.iter().all(|&i| !dirty_prev[i] && !dirty_cur[i]);
            if !skip {
                // table[sum_j src_j * pow[j]] = weight of the vector taking
                // dimension j from subset[src_j].
                src.fill(0);
                for slot in table.iter_mut() {
                    for j in 0..s {
                        e[j] = rows[subset[src[j]] * s + j];
                    }
                    *slot = inst.weight_of(&e);
                    for j in (0..s).rev() {
                        src[j] += 1;
                        if src[j] < k {
                            break;
                        }
                        src[j] = 0;
                    }
                }

                digits.fill(0);
                for (t, x) in idx.iter_mut().enumerate() {
                    *x = (0..s).map(|j| t * pow[j]).sum();
                }
                let current: Weight = idx.iter().map(|&x| table[x]).sum();
                let mut best = current;
                best_digits.fill(0);
                'odometer: loop {
                    let mut j = s - 1;
                    loop {
                        if j == 0 {
                            break 'odometer;
                        }
                        let old = digits[j];
                        let new = if old + 1 < perms.len() { old + 1 } else { 0 };
                        digits[j] = new;
                        for (t, x) in idx.iter_mut().enumerate() {
                            *x = *x + perms[new][t] * pow[j] - perms[old][t] * pow[j];
                        }
                        if new != 0 {
                            break;
                        }
                        j -= 1;
                    }
                    evals += 1;
                    let cost: Weight = idx.iter().map(|&x| table[x]).sum();
                    if cost < best {
                        best = cost;
                        best_digits.copy_from_slice(&digits);
                    }
                }

                if improves(best, current) {
                    for t in 0..k {
                        for j in 0..s {
                            let from = if j == 0 { t } else { perms[best_digits[j]][t] };
                            replacement[t * s + j] = rows[subset[from] * s + j];
                        }
                    }
                    for (t, &slot) in subset.iter().enumerate() {
                        let new = &replacement[t * s..(t + 1) * s];
                        if rows[slot * s..(slot + 1) * s] != *new {
                            rows[slot * s..(slot + 1) * s].copy_from_slice(new);
                            weights[slot] = inst.weight_of(new);
                            dirty_cur[slot] = true;
                        }
                    }
                    changed = true;
                }
            }
            if !next_subset(&mut subset, n) {
                break;
            }
        }
        std::mem::swap(&mut dirty_prev, &mut dirty_cur);
        dirty_cur.fill(false);
        if !changed {
            break;
        }
    }
    let result = Assignment::from_rows_unchecked(s, n, &rows);
    let final_weight = inst.assignment_weight(&result);
    Ok(LocalSearchReport {
        result,
        initial_weight,
        final_weight,
        passes,
        ap2_calls: 0,
        candidate_evals: evals,
        elapsed: started.elapsed(),
    })
}

/// Advances a sorted `k`-subset of `0..n` in lexicographic order.
fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for t in i + 1..k {
        subset[t] = subset[t - 1] + 1;
    }
    true
}
