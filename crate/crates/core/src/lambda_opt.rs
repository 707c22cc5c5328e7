//! Search for the extension parameter that minimises the final error.
//!
//! A coarse sweep over `[lo, hi]` is followed by rounds of local refinement:
//! each round divides the step by ten and evaluates the 21 points within ten
//! new steps of the incumbent. Candidates run in parallel; the winner is the
//! lexicographic minimum of `(linf, lambda)`, so ties resolve the same way on
//! every run.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::PhiReflection;
use crate::error::{Error, Result};
use crate::problems::ExperimentPreset;
use crate::simulation::final_linf;

/// Refinement stops once the step reaches this resolution.
pub const MIN_STEP: f64 = 1e-6;

const REFINE_HALF_WIDTH: i64 = 10;

/// Round to a 1e-12 lattice so grids built by different rounds agree exactly.
fn snap(lambda: f64) -> f64 {
    (lambda * 1e12).round() / 1e12
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub lo: f64,
    pub hi: f64,
    pub coarse_step: f64,
    pub refine_rounds: usize,
    pub objective_time: f64,
}

impl ScanSpec {
    /// `[-1, 1]` in steps of 0.1, refined down to 1e-6.
    pub fn new(objective_time: f64) -> Self {
        Self {
            lo: -1.0,
            hi: 1.0,
            coarse_step: 0.1,
            refine_rounds: 5,
            objective_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo <= self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Config(format!(
                "scan interval [{}, {}] is empty",
                self.lo, self.hi
            )));
        }
        if !(self.coarse_step > 0.0) || !self.coarse_step.is_finite() {
            return Err(Error::Config(format!(
                "coarse step must be positive, got {}",
                self.coarse_step
            )));
        }
        Ok(())
    }

    fn coarse_candidates(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.coarse_step + 1e-9).floor() as usize;
        let mut c: Vec<f64> = (0..=count)
            .map(|k| snap(self.lo + k as f64 * self.coarse_step))
            .filter(|l| *l <= self.hi)
            .collect();
        c.push(self.hi);
        if self.lo <= 0.0 && 0.0 <= self.hi {
            c.push(0.0);
        }
        c
    }

    fn refined_candidates(&self, centre: f64, step: f64) -> Vec<f64> {
        let base = (centre / step).round() as i64;
        (-REFINE_HALF_WIDTH..=REFINE_HALF_WIDTH)
            .map(|k| snap((base + k) as f64 * step))
            .filter(|l| (self.lo..=self.hi).contains(l))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub lambda_star: f64,
    pub linf_star: f64,
    /// Error at `lambda = 0`, if zero lies in the scanned interval.
    pub linf_at_zero: Option<f64>,
    /// Every evaluated `(lambda, linf)`, sorted by `lambda`.
    pub trace: Vec<(f64, f64)>,
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)).is_lt()
}

pub fn scan(preset: &ExperimentPreset, spec: &ScanSpec) -> Result<ScanResult> {
    scan_with(preset, spec, PhiReflection::default())
}

pub fn scan_with(
    preset: &ExperimentPreset,
    spec: &ScanSpec,
    reflection: PhiReflection,
) -> Result<ScanResult> {
    spec.validate()?;
    if preset.exact.is_none() {
        return Err(Error::UnsupportedObjective(preset.name.to_string()));
    }
    let base = preset.clone().with_t_end(spec.objective_time);
    let mut trace: Vec<(f64, f64)> = Vec::new();

    evaluate(&base, reflection, spec.coarse_candidates(), &mut trace)?;
    let mut step = spec.coarse_step;
    for _ in 0..spec.refine_rounds {
        if step <= MIN_STEP || spec.lo == spec.hi {
            break;
        }
        step /= 10.0;
        let centre = incumbent(&trace).0;
        evaluate(
            &base,
            reflection,
            spec.refined_candidates(centre, step),
            &mut trace,
        )?;
    }

    trace.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lambda_star, linf_star) = incumbent(&trace);
    let linf_at_zero = trace.iter().find(|(l, _)| *l == 0.0).map(|&(_, e)| e);
    Ok(ScanResult {
        lambda_star,
        linf_star,
        linf_at_zero,
        trace,
    })
}

/// Run the candidates not yet in `trace` and append their errors.
fn evaluate(
    base: &ExperimentPreset,
    reflection: PhiReflection,
    candidates: Vec<f64>,
    trace: &mut Vec<(f64, f64)>,
) -> Result<()> {
    let mut fresh: Vec<f64> = Vec::with_capacity(candidates.len());
    for l in candidates {
        if !fresh.contains(&l) && !trace.iter().any(|(seen, _)| *seen == l) {
            fresh.push(l);
        }
    }
    let results = fresh
        .par_iter()
        .map(|&l| final_linf(&base.clone().with_lambda(l), reflection).map(|e| (l, e)))
        .collect::<Result<Vec<_>>>()?;
    trace.extend(results);
    Ok(())
}

fn incumbent(trace: &[(f64, f64)]) -> (f64, f64) {
    trace
        .iter()
        .copied()
        .reduce(|a, b| if better(b, a) { b } else { a })
        .expect("scan evaluates at least one candidate")
}
