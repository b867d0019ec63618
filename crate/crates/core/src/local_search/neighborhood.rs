//! Brute-force neighbourhood enumeration, used as a test oracle.

use std::collections::BTreeSet;

use super::{build_family, DvVariant};
use crate::assignment::Assignment;
use crate::error::{MapError, Result};

/// Largest sizes the enumerator accepts.
pub const MAX_N: usize = 5;
pub const MAX_S: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodSpec {
    Dv(DvVariant),
    /// All recombinations of any `k` vectors (every vector when `k > n`).
    KOpt(usize),
    /// Union of a dimensionwise and a k-opt neighbourhood.
    Combined(DvVariant, usize),
}

/// The exact neighbourhood of `a`, including `a` itself.
pub fn enumerate_neighborhood(a: &Assignment, spec: NeighborhoodSpec) -> Result<BTreeSet<Assignment>> {
    if a.n() > MAX_N || a.s() > MAX_S {
        return Err(MapError::Guard(format!(
            "enumeration limited to n <= {MAX_N}, s <= {MAX_S}; got n = {}, s = {}",
            a.n(),
            a.s()
        )));
    }
    let mut out = BTreeSet::new();
    out.insert(a.clone());
    match spec {
        NeighborhoodSpec::Dv(v) => dv_into(a, v, &mut out),
        NeighborhoodSpec::KOpt(k) => kopt_into(a, k, &mut out),
        NeighborhoodSpec::Combined(v, k) => {
            dv_into(a, v, &mut out);
            kopt_into(a, k, &mut out);
        }
    }
    Ok(out)
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn dv_into(a: &Assignment, v: DvVariant, out: &mut BTreeSet<Assignment>) {
    let perms = all_perms(a.n());
    for &dims in build_family(v, a.s()).sets() {
        for rho in &perms {
            out.insert(a.apply_dimension_permutation(dims, rho).expect("valid permutation"));
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

fn kopt_into(a: &Assignment, k: usize, out: &mut BTreeSet<Assignment>) {
    let (s, n) = (a.s(), a.n());
    let k = k.min(n);
    let local = all_perms(k);
    for e in subsets(n, k) {
        // choice[j - 1] indexes the permutation used in dimension j.
        let mut choice = vec![0usize; s - 1];
        loop {
            let mut vectors: Vec<Vec<usize>> = a.vectors().map(<[usize]>::to_vec).collect();
            for (t, &slot) in e.iter().enumerate() {
                for j in 1..s {
                    vectors[slot][j] = a.vector(e[local[choice[j - 1]][t]])[j];
                }
            }
            out.insert(Assignment::from_vectors(s, &vectors).expect("recombination is feasible"));
            let Some(j) = (0..s - 1).rev().find(|&j| choice[j] + 1 < local.len()) else {
                break;
            };
            choice[j] += 1;
            choice[j + 1..].fill(0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cardinalities() {
        let a = Assignment::from_tail_perms(3, &[vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(enumerate_neighborhood(&a, NeighborhoodSpec::Dv(DvVariant::OneDV)).unwrap().len(), 16);
        assert_eq!(enumerate_neighborhood(&a, NeighborhoodSpec::KOpt(2)).unwrap().len(), 10);
        assert_eq!(enumerate_neighborhood(&a, NeighborhoodSpec::KOpt(3)).unwrap().len(), 36);
    }

    #[test]
    fn guard_refuses_large() {
        let a = Assignment::identity(3, 6);
        assert!(matches!(
            enumerate_neighborhood(&a, NeighborhoodSpec::KOpt(2)),
            Err(MapError::Guard(_))
        ));
    }
}
