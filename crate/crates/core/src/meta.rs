//! Chain and Multichain: repeated local search from perturbed assignments.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::instance::{Instance, Weight};
use crate::local_search::{improves, LocalSearch};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetaKind {
    Chain,
    Multichain,
}

impl fmt::Display for MetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetaKind::Chain => "chain",
            MetaKind::Multichain => "multichain",
        })
    }
}

impl FromStr for MetaKind {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chain" | "c" => Ok(MetaKind::Chain),
            "multichain" | "mc" => Ok(MetaKind::Multichain),
            _ => Err(MapError::parse(format!("unknown metaheuristic `{s}`"))),
        }
    }
}

/// When to stop. Chain counts local-search calls, Multichain counts
/// completed generations. Time budgets are checked between local-search
/// calls, so a run may overshoot by one call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Time(Duration),
    Iterations(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaConfig {
    pub kind: MetaKind,
    /// Multichain width.
    pub c: usize,
    pub budget: Budget,
    pub rng_seed: u64,
}

impl MetaConfig {
    pub fn chain(budget: Budget, rng_seed: u64) -> Self {
        MetaConfig {
            kind: MetaKind::Chain,
            c: 5,
            budget,
            rng_seed,
        }
    }

    pub fn multichain(c: usize, budget: Budget, rng_seed: u64) -> Self {
        MetaConfig {
            kind: MetaKind::Multichain,
            c,
            budget,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c < 1 {
            return Err(MapError::Config("multichain width c must be >= 1".into()));
        }
        if self.budget == Budget::Iterations(0) {
            return Err(MapError::Config("iteration budget must be >= 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for MetaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.kind == MetaKind::Multichain && self.c != 5 {
            write!(f, "(c={})", self.c)?;
        }
        match self.budget {
            Budget::Time(d) => write!(f, ":{}s", d.as_secs_f64()),
            Budget::Iterations(k) => write!(f, ":{k}it"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaOutcome {
    pub best: Assignment,
    pub best_weight: Weight,
    pub local_searches: u64,
    /// Chain iterations or completed Multichain generations.
    pub iterations: u64,
    /// False when Multichain ran out of budget before its first generation
    /// finished; `best` is then the start assignment.
    pub completed: bool,
    pub elapsed: Duration,
}

/// `ceil(n / 25) + 1`, capped at `n`.
pub fn perturbation_size(n: usize) -> usize {
    (n.div_ceil(25) + 1).min(n)
}

/// Picks `perturbation_size(n)` distinct vectors and shuffles their
/// coordinates independently in every dimension but the first.
pub fn perturb(a: &Assignment, rng: &mut SplitMix64) -> Assignment {
    let (s, n) = (a.s(), a.n());
    if n < 2 {
        return a.clone();
    }
    let p = perturbation_size(n);
    let chosen = rng.sample_distinct(n, p);
    let mut rows = a.rows().to_vec();
    for j in 1..s {
        let sigma = rng.permutation(p);
        for (t, &slot) in chosen.iter().enumerate() {
            rows[slot * s + j] = a.vector(chosen[sigma[t]])[j];
        }
    }
    Assignment::from_rows_unchecked(s, n, &rows)
}

struct Clock {
    started: Instant,
    budget: Budget,
}

impl Clock {
    fn out_of_time(&self) -> bool {
        matches!(self.budget, Budget::Time(d) if self.started.elapsed() >= d)
    }
}

/// Chain: local search, keep the best, perturb the current assignment,
/// repeat.
pub fn chain<F>(inst: &Instance, a0: &Assignment, mut ls: F, cfg: &MetaConfig) -> Result<MetaOutcome>
where
    F: FnMut(&Assignment) -> Result<Assignment>,
{
    cfg.validate()?;
    let clock = Clock {
        started: Instant::now(),
        budget: cfg.budget,
    };
    let mut rng = SplitMix64::new(cfg.rng_seed);
    let mut best = a0.clone();
    let mut best_weight = inst.assignment_weight(a0);
    let mut current = a0.clone();
    let mut iterations = 0;
    loop {
        current = ls(&current)?;
        iterations += 1;
        let w = inst.assignment_weight(&current);
        if improves(w, best_weight) {
            best = current.clone();
            best_weight = w;
        }
        let done = match cfg.budget {
            Budget::Iterations(k) => iterations >= k,
            Budget::Time(_) => clock.out_of_time(),
        };
        if done {
            break;
        }
        current = perturb(&current, &mut rng);
    }
    Ok(MetaOutcome {
        best,
        best_weight,
        local_searches: iterations,
        iterations,
        completed: true,
        elapsed: clock.started.elapsed(),
    })
}

/// Multichain with `c` carriers.
///
/// The first generation runs `c(c+1)/2` local searches, each from an
/// independent perturbation of the start assignment. Each following
/// generation keeps the `c` lightest results (ties in insertion order) and
/// spawns `c - i + 1` children from the `i`-th. A generation cut short by
/// the time budget is discarded.
pub fn multichain<F>(inst: &Instance, a0: &Assignment, mut ls: F, cfg: &MetaConfig) -> Result<MetaOutcome>
where
    F: FnMut(&Assignment) -> Result<Assignment>,
{
    cfg.validate()?;
    let c = cfg.c;
    let clock = Clock {
        started: Instant::now(),
        budget: cfg.budget,
    };
    let mut rng = SplitMix64::new(cfg.rng_seed);
    let mut best = a0.clone();
    let mut best_weight = inst.assignment_weight(a0);
    let mut local_searches = 0;
    let mut generations = 0u64;
    let mut parents: Vec<(Weight, Assignment)> = vec![(best_weight, a0.clone())];
    let per_generation = c * (c + 1) / 2;

    'generations: loop {
        let mut population: Vec<(Weight, Assignment)> = Vec::with_capacity(per_generation);
        let first = generations == 0;
        for (i, (_, parent)) in parents.iter().enumerate() {
            let children = if first { per_generation } else { c - i };
            for _ in 0..children {
                if clock.out_of_time() {
                    break 'generations;
                }
                let child = ls(&perturb(parent, &mut rng))?;
                local_searches += 1;
                population.push((inst.assignment_weight(&child), child));
            }
        }
        generations += 1;
        population.sort_by(|x, y| x.0.total_cmp(&y.0));
        population.truncate(c);
        assert!(population.len() == c, "population holds at least c assignments");
        if improves(population[0].0, best_weight) {
            best_weight = population[0].0;
            best = population[0].1.clone();
        }
        parents = population;
        if let Budget::Iterations(k) = cfg.budget {
            if generations >= k {
                break;
            }
        }
    }
    Ok(MetaOutcome {
        best,
        best_weight,
        local_searches,
        iterations: generations,
        completed: generations > 0,
        elapsed: clock.started.elapsed(),
    })
}

/// Runs `cfg.kind` with a library local search.
pub fn run_meta(inst: &Instance, a0: &Assignment, ls: LocalSearch, cfg: &MetaConfig) -> Result<MetaOutcome> {
    let search = |a: &Assignment| ls.run(inst, a).map(|r| r.result);
    match cfg.kind {
        MetaKind::Chain => chain(inst, a0, search, cfg),
        MetaKind::Multichain => multichain(inst, a0, search, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, FamilySpec};
    use crate::instance::Family;

    #[test]
    fn perturbation_sizes() {
        assert_eq!(perturbation_size(25), 2);
        assert_eq!(perturbation_size(150), 7);
        assert_eq!(perturbation_size(2), 2);
        assert_eq!(perturbation_size(26), 3);
        assert_eq!(perturbation_size(1), 1);
    }

    #[test]
    fn perturb_touches_only_chosen_vectors() {
        let a = Assignment::identity(4, 60);
        let mut rng = SplitMix64::new(9);
        for _ in 0..50 {
            let b = perturb(&a, &mut rng);
            b.validate().unwrap();
            let moved = (0..60).filter(|&i| a.vector(i) != b.vector(i)).count();
            assert!(moved <= perturbation_size(60));
        }
    }

    #[test]
    fn perturb_two_vectors_is_a_recombination() {
        let a = Assignment::from_tail_perms(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let b = perturb(&a, &mut rng);
            b.validate().unwrap();
        }
    }

    fn setup() -> (Instance, Assignment) {
        let inst = generate(&FamilySpec::new(Family::Random, 3, 20, 1)).unwrap();
        let a0 = crate::construction::trivial(&inst);
        (inst, a0)
    }

    #[test]
    fn chain_with_one_iteration_is_plain_search() {
        let (inst, a0) = setup();
        let ls = LocalSearch::Dv(crate::local_search::DvVariant::SDV);
        let out = run_meta(&inst, &a0, ls, &MetaConfig::chain(Budget::Iterations(1), 3)).unwrap();
        assert_eq!(out.best, ls.run(&inst, &a0).unwrap().result);
        assert_eq!(out.local_searches, 1);
    }

    #[test]
    fn iteration_budget_is_deterministic() {
        let (inst, a0) = setup();
        let ls = LocalSearch::Dv(crate::local_search::DvVariant::OneDV);
        for cfg in [
            MetaConfig::chain(Budget::Iterations(20), 7),
            MetaConfig::multichain(3, Budget::Iterations(4), 7),
        ] {
            let x = run_meta(&inst, &a0, ls, &cfg).unwrap();
            let y = run_meta(&inst, &a0, ls, &cfg).unwrap();
            assert_eq!(x.best, y.best);
            assert_eq!(x.best_weight, inst.assignment_weight(&x.best));
        }
    }

    #[test]
    fn multichain_counts_local_searches() {
        let (inst, a0) = setup();
        let ls = LocalSearch::Dv(crate::local_search::DvVariant::OneDV);
        let out = run_meta(&inst, &a0, ls, &MetaConfig::multichain(5, Budget::Iterations(3), 1)).unwrap();
        assert_eq!(out.local_searches, 45);
        assert_eq!(out.iterations, 3);
        assert!(out.completed);
    }

    #[test]
    fn multichain_without_time_returns_start() {
        let (inst, a0) = setup();
        let ls = LocalSearch::Dv(crate::local_search::DvVariant::OneDV);
        let cfg = MetaConfig::multichain(5, Budget::Time(Duration::ZERO), 1);
        let out = run_meta(&inst, &a0, ls, &cfg).unwrap();
        assert!(!out.completed);
        assert_eq!(out.best, a0);
        assert_eq!(out.local_searches, 0);
    }

    #[test]
    fn rejects_bad_config() {
        let (inst, a0) = setup();
        let ls = LocalSearch::None;
        assert!(run_meta(&inst, &a0, ls, &MetaConfig::multichain(0, Budget::Iterations(1), 1)).is_err());
        assert!(run_meta(&inst, &a0, ls, &MetaConfig::chain(Budget::Iterations(0), 1)).is_err());
    }
}
