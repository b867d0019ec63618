//! Local searches: dimensionwise (1DV, 2DV, sDV), k-opt, v-opt and their
//! combinations.
//!
//! Every search commits only strictly improving moves, so the reported final
//! weight never exceeds the initial one.

mod combined;
mod dv;
mod family;
mod kopt;
pub mod neighborhood;
mod vopt;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::instance::{Instance, Weight};

pub use combined::combined;
pub use dv::{dv_matrix, dv_search};
pub use family::{build_family, family_len, DimensionSubsetFamily, DvVariant};
pub use kopt::k_opt;
pub use vopt::{swap_candidates, v_opt, VOptVariant};

/// Outcome of one local search call.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSearchReport {
    pub result: Assignment,
    pub initial_weight: Weight,
    pub final_weight: Weight,
    /// Full passes (DV), sweeps (k-opt) or runs (v-opt); summed for
    /// combinations.
    pub passes: u64,
    pub ap2_calls: u64,
    /// Vector-set recombinations (k-opt) or swap candidates (v-opt) weighed.
    pub candidate_evals: u64,
    pub elapsed: Duration,
}

impl LocalSearchReport {
    pub(crate) fn unchanged(inst: &Instance, a: &Assignment, started: Instant) -> Self {
        let w = inst.assignment_weight(a);
        LocalSearchReport {
            result: a.clone(),
            initial_weight: w,
            final_weight: w,
            passes: 0,
            ap2_calls: 0,
            candidate_evals: 0,
            elapsed: started.elapsed(),
        }
    }
}

/// True when `new` is smaller than `old` by more than rounding noise.
///
/// Generated instances have integer weights, for which this is plain `<`.
#[inline]
pub(crate) fn improves(new: Weight, old: Weight) -> bool {
    new < old - 1e-9 * old.abs().max(1.0)
}

/// The vectorwise half of a combined search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vectorwise {
    TwoOpt,
    ThreeOpt,
    VOpt(VOptVariant),
}

impl Vectorwise {
    pub fn run(self, inst: &Instance, a: &Assignment) -> Result<LocalSearchReport> {
        match self {
            Vectorwise::TwoOpt => k_opt(inst, a, 2),
            Vectorwise::ThreeOpt => k_opt(inst, a, 3),
            Vectorwise::VOpt(v) => Ok(v_opt(inst, a, v)),
        }
    }
}

impl fmt::Display for Vectorwise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vectorwise::TwoOpt => f.write_str("2opt"),
            Vectorwise::ThreeOpt => f.write_str("3opt"),
            Vectorwise::VOpt(VOptVariant::Improved) => f.write_str("vopt"),
            Vectorwise::VOpt(VOptVariant::Natural) => f.write_str("vopt-natural"),
        }
    }
}

impl FromStr for Vectorwise {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "2opt" | "2-opt" => Ok(Vectorwise::TwoOpt),
            "3opt" | "3-opt" => Ok(Vectorwise::ThreeOpt),
            "vopt" | "v-opt" => Ok(Vectorwise::VOpt(VOptVariant::Improved)),
            "vopt-natural" => Ok(Vectorwise::VOpt(VOptVariant::Natural)),
            _ => Err(MapError::parse(format!("unknown vectorwise heuristic `{s}`"))),
        }
    }
}

/// Any of the supported local searches.
///
/// Parses from names like `none`, `sdv`, `3opt`, `vopt`, `vopt-natural`,
/// `1dv+2opt` or `sdv+vopt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalSearch {
    None,
    Dv(DvVariant),
    Vectorwise(Vectorwise),
    Combined(DvVariant, Vectorwise),
}

impl LocalSearch {
    /// Validates the pairing: `sDV + 2-opt` is rejected since the 2-opt
    /// neighbourhood already lies inside sDV's.
    pub fn check(self) -> Result<Self> {
        if let LocalSearch::Combined(DvVariant::SDV, Vectorwise::TwoOpt) = self {
            return Err(MapError::Config(
                "sdv+2opt adds nothing: the 2-opt neighbourhood is contained in sDV's".into(),
            ));
        }
        Ok(self)
    }

    /// Replaces any v-opt component's variant.
    pub fn with_vopt_variant(self, variant: VOptVariant) -> Self {
        let swap = |vw| match vw {
            Vectorwise::VOpt(_) => Vectorwise::VOpt(variant),
            other => other,
        };
        match self {
            LocalSearch::Vectorwise(vw) => LocalSearch::Vectorwise(swap(vw)),
            LocalSearch::Combined(dv, vw) => LocalSearch::Combined(dv, swap(vw)),
            other => other,
        }
    }

    pub fn run(self, inst: &Instance, a: &Assignment) -> Result<LocalSearchReport> {
        match self {
            LocalSearch::None => Ok(LocalSearchReport::unchanged(inst, a, Instant::now())),
            LocalSearch::Dv(v) => Ok(dv_search(inst, a, &build_family(v, inst.s()))),
            LocalSearch::Vectorwise(vw) => vw.run(inst, a),
            LocalSearch::Combined(dv, vw) => combined(inst, a, dv, vw),
        }
    }
}

impl fmt::Display for LocalSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSearch::None => f.write_str("none"),
            LocalSearch::Dv(v) => write!(f, "{v}"),
            LocalSearch::Vectorwise(vw) => write!(f, "{vw}"),
            LocalSearch::Combined(dv, vw) => write!(f, "{dv}+{vw}"),
        }
    }
}

impl FromStr for LocalSearch {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let ls = match lower.split_once('+') {
            Some((dv, vw)) => LocalSearch::Combined(dv.parse()?, vw.parse()?),
            None if lower == "none" => LocalSearch::None,
            None => match lower.parse::<DvVariant>() {
                Ok(v) => LocalSearch::Dv(v),
                Err(_) => LocalSearch::Vectorwise(lower.parse().map_err(|_| {
                    MapError::parse(format!("unknown local search `{s}`"))
                })?),
            },
        };
        ls.check()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for name in ["none", "1dv", "2dv", "sdv", "2opt", "3opt", "vopt", "vopt-natural", "1dv+2opt", "sdv+vopt", "2dv+3opt"] {
            let ls: LocalSearch = name.parse().unwrap();
            assert_eq!(ls.to_string(), name);
        }
        assert_eq!("MDV".parse::<LocalSearch>().unwrap(), LocalSearch::Dv(DvVariant::SDV));
    }

    #[test]
    fn rejects_sdv_plus_two_opt() {
        let err = "sdv+2opt".parse::<LocalSearch>().unwrap_err();
        assert!(matches!(err, MapError::Config(_)));
        assert!("4opt".parse::<LocalSearch>().is_err());
        assert!("sdv+sdv".parse::<LocalSearch>().is_err());
    }

    #[test]
    fn variant_override() {
        let ls: LocalSearch = "sdv+vopt".parse().unwrap();
        assert_eq!(ls.with_vopt_variant(VOptVariant::Natural).to_string(), "sdv+vopt-natural");
        assert_eq!(LocalSearch::Dv(DvVariant::OneDV).with_vopt_variant(VOptVariant::Natural).to_string(), "1dv");
    }

    #[test]
    fn improves_is_strict() {
        assert!(improves(9.0, 10.0));
        assert!(!improves(10.0, 10.0));
        assert!(!improves(10.0 - 1e-12, 10.0));
    }
}
