//! Feasible full assignments in permutation form.

use crate::dims::DimSet;
use crate::error::{MapError, Result};

/// A full assignment of `n` vectors in `s` dimensions.
///
/// Stored row-major: vector `i` is `data[i*s .. (i+1)*s]`. The canonical
/// layout keeps vector `i` at slot `i`, i.e. its first coordinate is `i`
/// (the first permutation is the identity), so two assignments are equal as
/// vector sets exactly when they are equal as values. Coordinates are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    s: usize,
    n: usize,
    data: Vec<usize>,
}

impl Assignment {
    /// Every permutation the identity (the diagonal assignment).
    pub fn identity(s: usize, n: usize) -> Self {
        let mut data = Vec::with_capacity(s * n);
        for i in 0..n {
            data.extend(std::iter::repeat_n(i, s));
        }
        Assignment { s, n, data }
    }

    /// Builds an assignment from `s` permutations, `perms[j][i]` being the
    /// dimension-`j` coordinate of the vector whose dimension-0 coordinate
    /// is `perms[0][i]`. The result is canonicalised.
    pub fn from_perms(perms: &[Vec<usize>]) -> Result<Self> {
        let s = perms.len();
        if s == 0 {
            return Err(MapError::input("assignment needs at least one dimension"));
        }
        let n = perms[0].len();
        for (j, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(MapError::input(format!(
                    "permutation {} has length {}, expected {n}",
                    j + 1,
                    p.len()
                )));
            }
            check_permutation(p).map_err(|e| {
                MapError::input(format!("dimension {}: {e}", j + 1))
            })?;
        }
        let mut data = vec![0; s * n];
        for i in 0..n {
            let slot = perms[0][i];
            for j in 0..s {
                data[slot * s + j] = perms[j][i];
            }
        }
        Ok(Assignment { s, n, data })
    }

    /// Like [`from_perms`](Self::from_perms) with dimension 0 implicitly the
    /// identity; `rest[j]` is the permutation of dimension `j + 1`.
    pub fn from_tail_perms(n: usize, rest: &[Vec<usize>]) -> Result<Self> {
        let mut perms = Vec::with_capacity(rest.len() + 1);
        perms.push((0..n).collect());
        perms.extend(rest.iter().cloned());
        Self::from_perms(&perms)
    }

    /// Builds an assignment from `n` vectors in any order. Fails unless every
    /// column is a permutation.
    pub fn from_vectors(s: usize, vectors: &[Vec<usize>]) -> Result<Self> {
        let n = vectors.len();
        let mut perms = vec![vec![0; n]; s];
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != s {
                return Err(MapError::input(format!(
                    "vector {} has {} coordinates, expected {s}",
                    i + 1,
                    v.len()
                )));
            }
            for j in 0..s {
                perms[j][i] = v[j];
            }
        }
        Self::from_perms(&perms)
    }

    /// Rebuilds a canonical assignment from a row-major buffer of vectors in
    /// arbitrary slot order. The caller guarantees feasibility.
    pub(crate) fn from_rows_unchecked(s: usize, n: usize, rows: &[usize]) -> Self {
        debug_assert_eq!(rows.len(), s * n);
        let mut data = vec![0; s * n];
        for r in rows.chunks_exact(s) {
            let slot = r[0];
            data[slot * s..slot * s + s].copy_from_slice(r);
        }
        let a = Assignment { s, n, data };
        debug_assert!(a.validate().is_ok());
        a
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Vector at slot `i` (its first coordinate is `i`).
    #[inline]
    pub fn vector(&self, i: usize) -> &[usize] {
        &self.data[i * self.s..(i + 1) * self.s]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[usize]> {
        self.data.chunks_exact(self.s.max(1))
    }

    /// Raw row-major coordinates.
    pub fn rows(&self) -> &[usize] {
        &self.data
    }

    /// Permutation of dimension `j`: entry `i` is the coordinate of vector `i`.
    pub fn perm(&self, j: usize) -> Vec<usize> {
        (0..self.n).map(|i| self.data[i * self.s + j]).collect()
    }

    pub fn perms(&self) -> Vec<Vec<usize>> {
        (0..self.s).map(|j| self.perm(j)).collect()
    }

    /// Checks that every column is a bijection on `0..n` and that slot `i`
    /// holds the vector with first coordinate `i`.
    pub fn validate(&self) -> Result<()> {
        if self.data.len() != self.s * self.n {
            return Err(MapError::input("assignment buffer has wrong length"));
        }
        for j in 0..self.s {
            check_permutation(&self.perm(j))
                .map_err(|e| MapError::input(format!("dimension {}: {e}", j + 1)))?;
        }
        for i in 0..self.n {
            if self.data[i * self.s] != i {
                return Err(MapError::input(format!(
                    "slot {i} does not hold the vector with first coordinate {i}"
                )));
            }
        }
        Ok(())
    }

    /// `p_D(A, rho)`: vector `i` takes its coordinates in the dimensions of
    /// `dims` from vector `rho[i]`, keeping its own elsewhere.
    pub fn apply_dimension_permutation(&self, dims: DimSet, rho: &[usize]) -> Result<Self> {
        if rho.len() != self.n {
            return Err(MapError::input(format!(
                "rho has length {}, expected {}",
                rho.len(),
                self.n
            )));
        }
        check_permutation(rho).map_err(|e| MapError::input(format!("rho: {e}")))?;
        if dims.iter().any(|d| d >= self.s) {
            return Err(MapError::input(format!("dimension set {dims} exceeds s = {}", self.s)));
        }
        Ok(self.apply_dimension_permutation_unchecked(dims, rho))
    }

    pub(crate) fn apply_dimension_permutation_unchecked(&self, dims: DimSet, rho: &[usize]) -> Self {
        let s = self.s;
        let mut rows = self.data.clone();
        for (i, &src) in rho.iter().enumerate() {
            for j in dims.iter() {
                rows[i * s + j] = self.data[src * s + j];
            }
        }
        Self::from_rows_unchecked(s, self.n, &rows)
    }
}

/// Coordinate-wise merge: `v`'s coordinates on `dims`, `u`'s elsewhere.
pub fn swap_vectors(u: &[usize], v: &[usize], dims: DimSet) -> Vec<usize> {
    let mut out = u.to_vec();
    swap_into(u, v, dims, &mut out);
    out
}

#[inline]
pub(crate) fn swap_into(u: &[usize], v: &[usize], dims: DimSet, out: &mut [usize]) {
    for j in 0..u.len() {
        out[j] = if dims.contains(j) { v[j] } else { u[j] };
    }
}

/// Fails unless `p` is a bijection on `0..p.len()`.
pub fn check_permutation(p: &[usize]) -> std::result::Result<(), String> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() {
            return Err(format!("value {} out of range 1..={}", x + 1, p.len()));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(format!("value {} repeated", x + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_examples() {
        let u = [0, 1, 2];
        let v = [3, 4, 5];
        assert_eq!(swap_vectors(&u, &v, DimSet::singleton(1)), vec![0, 4, 2]);
        assert_eq!(swap_vectors(&u, &v, DimSet::EMPTY), u.to_vec());
        assert_eq!(swap_vectors(&u, &v, DimSet::full(3)), v.to_vec());
    }

    #[test]
    fn identity_rho_is_noop() {
        let a = Assignment::from_tail_perms(3, &[vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        let same = a.apply_dimension_permutation(DimSet::from_dims([0, 2]), &[0, 1, 2]).unwrap();
        assert_eq!(same, a);
    }

    #[test]
    fn full_dimension_set_is_noop() {
        let a = Assignment::from_tail_perms(4, &[vec![3, 0, 1, 2], vec![1, 2, 0, 3]]).unwrap();
        let b = a.apply_dimension_permutation(DimSet::full(3), &[2, 3, 1, 0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transposition_in_one_dimension() {
        // s = 3, n = 2, D = {2}: only the second permutation swaps.
        let a = Assignment::identity(3, 2);
        let b = a.apply_dimension_permutation(DimSet::singleton(1), &[1, 0]).unwrap();
        assert_eq!(b.perm(0), vec![0, 1]);
        assert_eq!(b.perm(1), vec![1, 0]);
        assert_eq!(b.perm(2), vec![0, 1]);
    }

    #[test]
    fn dimension_one_in_set_is_canonicalised() {
        let a = Assignment::identity(3, 3);
        let b = a.apply_dimension_permutation(DimSet::singleton(0), &[1, 2, 0]).unwrap();
        b.validate().unwrap();
        // same as moving dims {2,3} by the inverse
        let c = a.apply_dimension_permutation(DimSet::from_dims([1, 2]), &[2, 0, 1]).unwrap();
        assert_eq!(b, c);
    }

    #[test]
    fn rejects_non_permutation() {
        let a = Assignment::identity(3, 3);
        assert!(a.apply_dimension_permutation(DimSet::singleton(1), &[0, 0, 1]).is_err());
        assert!(a.apply_dimension_permutation(DimSet::singleton(1), &[0, 1]).is_err());
        assert!(Assignment::from_tail_perms(3, &[vec![0, 1, 1], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn from_vectors_any_order() {
        let a = Assignment::from_vectors(3, &[vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0]]).unwrap();
        assert_eq!(a.vector(0), &[0, 2, 1]);
        assert_eq!(a.vector(1), &[1, 0, 2]);
        a.validate().unwrap();
        assert!(Assignment::from_vectors(3, &[vec![0, 0, 0], vec![0, 1, 1]]).is_err());
    }
}
