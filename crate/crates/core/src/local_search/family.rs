//! Dimension-subset families driving the dimensionwise searches.

use std::fmt;
use std::str::FromStr;

use crate::dims::DimSet;
use crate::error::{MapError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DvVariant {
    /// Singletons only.
    OneDV,
    /// Sets of size at most two.
    TwoDV,
    /// Every admissible size up to `s / 2`.
    SDV,
}

impl DvVariant {
    pub const ALL: [DvVariant; 3] = [DvVariant::OneDV, DvVariant::TwoDV, DvVariant::SDV];

    fn max_size(self, s: usize) -> usize {
        match self {
            DvVariant::OneDV => 1,
            DvVariant::TwoDV => 2.min(s / 2),
            DvVariant::SDV => s / 2,
        }
    }
}

impl fmt::Display for DvVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DvVariant::OneDV => "1dv",
            DvVariant::TwoDV => "2dv",
            DvVariant::SDV => "sdv",
        })
    }
}

impl FromStr for DvVariant {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1dv" => Ok(DvVariant::OneDV),
            "2dv" => Ok(DvVariant::TwoDV),
            "sdv" | "mdv" => Ok(DvVariant::SDV),
            _ => Err(MapError::parse(format!("unknown dimensionwise variant `{s}`"))),
        }
    }
}

/// Ordered list of dimension subsets.
///
/// A set and its complement give the same moves, so only one of each pair
/// is kept: sets smaller than `s/2`, plus, for even `s`, the size-`s/2` sets
/// that avoid the first dimension. Sets are ordered by size, then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionSubsetFamily {
    variant: DvVariant,
    s: usize,
    sets: Vec<DimSet>,
}

impl DimensionSubsetFamily {
    pub fn new(variant: DvVariant, s: usize) -> Self {
        let mut sets = Vec::new();
        for size in 1..=variant.max_size(s) {
            for d in DimSet::combinations(s, size) {
                if 2 * size < s || !d.contains(0) {
                    sets.push(d);
                }
            }
        }
        DimensionSubsetFamily { variant, s, sets }
    }

    pub fn variant(&self) -> DvVariant {
        self.variant
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sets(&self) -> &[DimSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

pub fn build_family(variant: DvVariant, s: usize) -> DimensionSubsetFamily {
    DimensionSubsetFamily::new(variant, s)
}

/// `|D|` of a family without building it.
pub fn family_len(variant: DvVariant, s: usize) -> usize {
    match variant {
        DvVariant::OneDV => s,
        DvVariant::TwoDV if s <= 4 => (1 << (s - 1)) - 1,
        DvVariant::TwoDV => s * (s - 1) / 2 + s,
        DvVariant::SDV => (1 << (s - 1)) - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(f: &DimensionSubsetFamily) -> Vec<String> {
        f.sets().iter().map(|d| d.to_string()).collect()
    }

    #[test]
    fn sdv_three_is_singletons() {
        assert_eq!(show(&build_family(DvVariant::SDV, 3)), ["{1}", "{2}", "{3}"]);
        assert_eq!(build_family(DvVariant::TwoDV, 3), {
            let mut f = build_family(DvVariant::SDV, 3);
            f.variant = DvVariant::TwoDV;
            f
        });
    }

    #[test]
    fn two_dv_four() {
        assert_eq!(
            show(&build_family(DvVariant::TwoDV, 4)),
            ["{1}", "{2}", "{3}", "{4}", "{2,3}", "{2,4}", "{3,4}"]
        );
    }

    #[test]
    fn one_dv_five() {
        assert_eq!(show(&build_family(DvVariant::OneDV, 5)), ["{1}", "{2}", "{3}", "{4}", "{5}"]);
    }

    #[test]
    fn sizes_match_closed_forms_and_restrictions() {
        for s in 3..=10 {
            for v in DvVariant::ALL {
                let f = build_family(v, s);
                assert_eq!(f.len(), family_len(v, s), "{v} s={s}");
                let full = DimSet::full(s);
                for d in f.sets() {
                    assert!(!d.is_empty() && *d != full);
                    assert!(!f.sets().contains(&d.complement(s)), "{v} s={s} {d}");
                }
            }
        }
    }

    #[test]
    fn two_dv_five_takes_pairs_with_first_dimension() {
        let f = build_family(DvVariant::TwoDV, 5);
        assert_eq!(f.sets()[5].to_string(), "{1,2}");
        assert_eq!(f.sets().last().unwrap().to_string(), "{4,5}");
    }
}
