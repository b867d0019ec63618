use std::fmt;

/// A set of dimensions, stored as a bitmask over 0-based dimension indices.
///
/// Displays 1-based, e.g. `{2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DimSet(u32);

/// Upper bound on `s` imposed by the bitmask width.
pub const MAX_DIMS: usize = 31;

impl DimSet {
    pub const EMPTY: DimSet = DimSet(0);

    pub fn from_bits(bits: u32) -> Self {
        DimSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// All of `0..s`.
    pub fn full(s: usize) -> Self {
        debug_assert!(s <= MAX_DIMS);
        DimSet((1u32 << s) - 1)
    }

    pub fn singleton(dim: usize) -> Self {
        DimSet(1 << dim)
    }

    pub fn from_dims<I: IntoIterator<Item = usize>>(dims: I) -> Self {
        DimSet(dims.into_iter().fold(0, |acc, d| acc | (1 << d)))
    }

    #[inline]
    pub fn contains(self, dim: usize) -> bool {
        self.0 & (1 << dim) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, s: usize) -> Self {
        DimSet(!self.0 & Self::full(s).0)
    }

    /// Dimensions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_DIMS).filter(move |&d| self.contains(d))
    }

    /// All subsets of `0..s` with exactly `k` elements, in lexicographic
    /// order of their sorted element lists.
    pub fn combinations(s: usize, k: usize) -> Vec<DimSet> {
        let mut out = Vec::new();
        if k > s {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(DimSet::from_dims(idx.iter().copied()));
            let Some(i) = (0..k).rev().find(|&i| idx[i] < s - k + i) else {
                return out;
            };
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
}

impl fmt::Display for DimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", d + 1)?;
        }
        f.write_str("}")
    }
}
