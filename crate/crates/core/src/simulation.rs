//! Time integration of a preset with snapshots and diagnostics.

use serde::{Deserialize, Serialize};

use crate::assembly::{CoefficientState, PhiReflection, Scheme};
use crate::diagnostics::{
    conserved_quantities_with, linf_error, relative_changes, Conserved, DiagnosticsRecord,
    Quadrature,
};
use crate::error::{Error, Result};
use crate::init::fit_initial;
use crate::problems::ExperimentPreset;

/// Tolerance for times that must land on the time grid.
pub const TIME_GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub reflection: PhiReflection,
    pub quadrature: Quadrature,
    /// Times at which the full state is kept.
    pub snapshot_times: Vec<f64>,
    /// Record diagnostics every this many steps (the final step is always
    /// recorded). Zero records only the initial and final states.
    pub diagnostics_every: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            reflection: PhiReflection::default(),
            quadrature: Quadrature::default(),
            snapshot_times: Vec::new(),
            diagnostics_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub initial: CoefficientState,
    pub snapshots: Vec<CoefficientState>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub final_state: CoefficientState,
    pub steps: usize,
}

impl RunOutput {
    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.diagnostics
            .last()
            .expect("at least the initial record")
    }
}

/// Number of steps of size `dt` that reach `t`, if `t` is on the time grid.
pub fn steps_to(t: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Config(format!("time must be non-negative, got {t}")));
    }
    let k = (t / dt).round();
    if (k * dt - t).abs() > TIME_GRID_TOL {
        return Err(Error::Config(format!(
            "time {t} is not a multiple of the time step {dt}"
        )));
    }
    Ok(k as usize)
}

/// Record diagnostics for `state` relative to `initial` (`None` for the
/// initial state itself).
fn record(
    state: &CoefficientState,
    preset: &ExperimentPreset,
    quadrature: Quadrature,
    initial: Option<&Conserved>,
) -> Result<DiagnosticsRecord> {
    let q = conserved_quantities_with(state, &preset.params, &preset.grid, quadrature)?;
    let c = relative_changes(&q, initial.unwrap_or(&q))?;
    let linf = match &preset.exact {
        Some(u) => Some(linf_error(
            state,
            u.as_ref(),
            &preset.grid,
            preset.params.lambda,
        )?),
        None => None,
    };
    Ok(DiagnosticsRecord::new(state.time, linf, &q, &c))
}

pub fn run(preset: &ExperimentPreset, options: &RunOptions) -> Result<RunOutput> {
    let steps = steps_to(preset.t_end, preset.dt)?;
    if steps == 0 {
        return Err(Error::Config("final time must be positive".into()));
    }
    let mut snapshot_steps = options
        .snapshot_times
        .iter()
        .map(|&t| {
            if t > preset.t_end + TIME_GRID_TOL {
                return Err(Error::Config(format!(
                    "snapshot time {t} is beyond the final time {}",
                    preset.t_end
                )));
            }
            steps_to(t, preset.dt)
        })
        .collect::<Result<Vec<_>>>()?;
    snapshot_steps.sort_unstable();
    snapshot_steps.dedup();

    let scheme =
        Scheme::new(preset.params, preset.grid, preset.dt)?.with_reflection(options.reflection);
    let initial = fit_initial(
        &preset.initial,
        &preset.grid,
        preset.params.lambda,
        options.reflection,
    )?;

    let first = record(&initial, preset, options.quadrature, None)?;
    let q0 = first.quantities();
    let mut diagnostics = vec![first];
    let mut snapshots = Vec::with_capacity(snapshot_steps.len());
    let mut pending = snapshot_steps.iter().peekable();
    if pending.next_if_eq(&&0).is_some() {
        snapshots.push(initial.clone());
    }

    let mut state = initial.clone();
    for k in 1..=steps {
        state = scheme.step(&state)?;
        state.time = k as f64 * preset.dt;
        if pending.next_if_eq(&&k).is_some() {
            snapshots.push(state.clone());
        }
        let due = options.diagnostics_every > 0 && k % options.diagnostics_every == 0;
        if due || k == steps {
            diagnostics.push(record(&state, preset, options.quadrature, Some(&q0))?);
        }
    }

    Ok(RunOutput {
        initial,
        snapshots,
        diagnostics,
        final_state: state,
        steps,
    })
}

/// L-infinity error at the preset's final time, without recording anything
/// along the way.
pub fn final_linf(preset: &ExperimentPreset, reflection: PhiReflection) -> Result<f64> {
    let exact = preset
        .exact
        .as_ref()
        .ok_or_else(|| Error::UnsupportedObjective(preset.name.to_string()))?;
    let steps = steps_to(preset.t_end, preset.dt)?;
    let scheme = Scheme::new(preset.params, preset.grid, preset.dt)?.with_reflection(reflection);
    let mut state = fit_initial(
        &preset.initial,
        &preset.grid,
        preset.params.lambda,
        reflection,
    )?;
    for k in 1..=steps {
        state = scheme.step(&state)?;
        state.time = k as f64 * preset.dt;
    }
    linf_error(&state, exact.as_ref(), &preset.grid, preset.params.lambda)
}
