use std::time::Instant;

use super::{build_family, dv_search, DvVariant, LocalSearch, LocalSearchReport, Vectorwise};
use crate::assignment::Assignment;
use crate::error::Result;
use crate::instance::Instance;

/// Dimensionwise search, then alternating vectorwise and dimensionwise
/// phases; stops as soon as a phase leaves the weight unchanged.
pub fn combined(inst: &Instance, a: &Assignment, dv: DvVariant, vw: Vectorwise) -> Result<LocalSearchReport> {
    LocalSearch::Combined(dv, vw).check()?;
    let started = Instant::now();
    let family = build_family(dv, inst.s());
    let mut total = dv_search(inst, a, &family);
    let initial_weight = total.initial_weight;
    let absorb = |total: &mut LocalSearchReport, step: LocalSearchReport| -> bool {
        let changed = step.final_weight != total.final_weight;
        total.passes += step.passes;
        total.ap2_calls += step.ap2_calls;
        total.candidate_evals += step.candidate_evals;
        total.final_weight = step.final_weight;
        total.result = step.result;
        changed
    };
    loop {
        let step = vw.run(inst, &total.result)?;
        if !absorb(&mut total, step) {
            break;
        }
        let step = dv_search(inst, &total.result, &family);
        if !absorb(&mut total, step) {
            break;
        }
    }
    total.initial_weight = initial_weight;
    total.elapsed = started.elapsed();
    Ok(total)
}
