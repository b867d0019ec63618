use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::{improves, LocalSearchReport};
use crate::assignment::{swap_into, Assignment};
use crate::dims::DimSet;
use crate::error::{MapError, Result};
use crate::instance::{Instance, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VOptVariant {
    /// Swaps in at most one dimension.
    Natural,
    /// Swaps in at most `s / 2` dimensions.
    #[default]
    Improved,
}

impl fmt::Display for VOptVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VOptVariant::Natural => "natural",
            VOptVariant::Improved => "improved",
        })
    }
}

impl FromStr for VOptVariant {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "natural" => Ok(VOptVariant::Natural),
            "improved" => Ok(VOptVariant::Improved),
            _ => Err(MapError::parse(format!("unknown v-opt variant `{s}` (natural or improved)"))),
        }
    }
}

/// Dimension sets whose swaps form `U(u, v)`: the empty set first, then by
/// size, then lexicographically. The first dimension may take part.
pub fn swap_candidates(variant: VOptVariant, s: usize) -> Vec<DimSet> {
    let max = match variant {
        VOptVariant::Natural => 1,
        VOptVariant::Improved => s / 2,
    };
    (0..=max).flat_map(|size| DimSet::combinations(s, size)).collect()
}

/// Variable-depth interchange.
///
/// For every start vector `c`: repeatedly pick, over the still available
/// vectors `m`, the lightest swap `v = swap(c, m, D)` with `D` from the
/// candidate list, add `w(c) - w(v)` to the running gain, and stop once the
/// gain is no longer positive. Otherwise `c` and `m` become `v` and its
/// complement, `m` leaves the pool and the complement becomes the new `c`.
/// The best assignment met along the chain is kept. Runs over all start
/// vectors repeat until one run brings no improvement.
pub fn v_opt(inst: &Instance, a: &Assignment, variant: VOptVariant) -> LocalSearchReport {
    let started = Instant::now();
    let (s, n) = (a.s(), a.n());
    if n < 2 {
        return LocalSearchReport::unchanged(inst, a, started);
    }
    let candidates = swap_candidates(variant, s);

    // Rows may leave canonical order mid-run: the start vector's row keeps
    // whichever half of each swap continues the chain.
    let mut rows = a.rows().to_vec();
    let mut weights: Vec<Weight> = a.vectors().map(|v| inst.weight_of(v)).collect();
    let initial_weight: Weight = weights.iter().sum();
    let mut total = initial_weight;

    let mut best_rows = rows.clone();
    let mut best_weights = weights.clone();
    let mut available = vec![true; n];
    let mut e = vec![0usize; s];
    let mut v = vec![0usize; s];
    let mut v_bar = vec![0usize; s];
    let mut passes = 0;
    let mut evals = 0u64;

    loop {
        passes += 1;
        let run_start = total;
        canonicalise(&mut rows, &mut weights, s);
        for c in 0..n {
            let mut best_total = total;
            best_rows.copy_from_slice(&rows);
            best_weights.copy_from_slice(&weights);
            available.fill(true);
            available[c] = false;
            let mut left = n - 1;
            let mut gain = 0.0;
            while left > 0 {
                let mut pick: Option<(usize, DimSet, Weight)> = None;
                for m in (0..n).filter(|&m| available[m]) {
                    let (cu, mv) = (&rows[c * s..(c + 1) * s], &rows[m * s..(m + 1) * s]);
                    for &dims in &candidates {
                        swap_into(cu, mv, dims, &mut e);
                        let w = inst.weight_of(&e);
                        evals += 1;
                        if pick.is_none_or(|(_, _, bw)| w < bw) {
                            pick = Some((m, dims, w));
                        }
                    }
                }
                let (m, dims, wv) = pick.expect("pool is non-empty");
                gain += weights[c] - wv;
                if gain <= 0.0 {
                    break;
                }
                available[m] = false;
                left -= 1;
                {
                    let (cu, mv) = (&rows[c * s..(c + 1) * s], &rows[m * s..(m + 1) * s]);
                    swap_into(cu, mv, dims, &mut v);
                    swap_into(mv, cu, dims, &mut v_bar);
                }
                let w_bar = inst.weight_of(&v_bar);
                total += wv + w_bar - weights[c] - weights[m];
                rows[m * s..(m + 1) * s].copy_from_slice(&v);
                rows[c * s..(c + 1) * s].copy_from_slice(&v_bar);
                weights[m] = wv;
                weights[c] = w_bar;
                if improves(total, best_total) {
                    best_total = total;
                    best_rows.copy_from_slice(&rows);
                    best_weights.copy_from_slice(&weights);
                }
            }
            rows.copy_from_slice(&best_rows);
            weights.copy_from_slice(&best_weights);
            total = best_total;
        }
        if !improves(total, run_start) {
            break;
        }
    }

    let result = Assignment::from_rows_unchecked(s, n, &rows);
    let final_weight = inst.assignment_weight(&result);
    LocalSearchReport {
        result,
        initial_weight,
        final_weight,
        passes,
        ap2_calls: 0,
        candidate_evals: evals,
        elapsed: started.elapsed(),
    }
}

/// Puts the vector with first coordinate `i` into row `i`, so every run
/// visits start vectors in the same order.
fn canonicalise(rows: &mut [usize], weights: &mut [Weight], s: usize) {
    let mut i = 0;
    while i < weights.len() {
        let slot = rows[i * s];
        if slot == i {
            i += 1;
            continue;
        }
        for j in 0..s {
            rows.swap(i * s + j, slot * s + j);
        }
        weights.swap(i, slot);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improved_three_has_four_candidates() {
        let c = swap_candidates(VOptVariant::Improved, 3);
        let shown: Vec<String> = c.iter().map(|d| d.to_string()).collect();
        assert_eq!(shown, ["{}", "{1}", "{2}", "{3}"]);
        assert_eq!(swap_candidates(VOptVariant::Natural, 6).len(), 7);
        assert_eq!(swap_candidates(VOptVariant::Improved, 6).len(), 1 + 6 + 15 + 20);
    }

    #[test]
    fn second_call_is_a_fixpoint() {
        let mut rng = crate::rng::SplitMix64::new(3);
        for _ in 0..20 {
            let values: Vec<f64> = (0..81).map(|_| rng.range_inclusive(0, 50) as f64).collect();
            let inst = Instance::new(4, 3, crate::instance::Family::Explicit, 0, crate::instance::WeightModel::ExplicitTensor { values }).unwrap();
            let once = v_opt(&inst, &Assignment::identity(4, 3), VOptVariant::Improved);
            assert!(once.final_weight <= once.initial_weight);
            let twice = v_opt(&inst, &once.result, VOptVariant::Improved);
            assert_eq!(twice.result, once.result);
            assert_eq!(twice.passes, 1);
        }
    }
}
