//! CSV writers. Numbers are written with 17 significant digits so that a
//! round trip through the file is lossless; missing values are blank.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::assembly::CoefficientState;
use crate::basis::{nodal_weights, Derivative};
use crate::diagnostics::DiagnosticsRecord;
use crate::error::Result;
use crate::problems::ExperimentPreset;
use crate::stability::StabilitySample;

pub const PROFILE_HEADER: [&str; 5] = ["x", "u_numeric", "v_numeric", "u_exact", "error"];
pub const DIAGNOSTICS_HEADER: [&str; 8] = ["t", "linf", "M", "E", "H", "C_M", "C_E", "C_H"];
pub const SCAN_HEADER: [&str; 2] = ["lambda", "linf"];
pub const STABILITY_HEADER: [&str; 4] = ["phi", "eps_local", "abs_rho1", "abs_rho2"];

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// One node of a solution profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub x: f64,
    pub u_numeric: f64,
    pub v_numeric: f64,
    pub u_exact: Option<f64>,
    pub error: Option<f64>,
}

/// Nodal profile of `state`, with the exact solution where the preset has one.
pub fn profile_rows(
    state: &CoefficientState,
    preset: &ExperimentPreset,
) -> Result<Vec<ProfileRow>> {
    state.check_dims(&preset.grid)?;
    let w = nodal_weights(preset.params.lambda, preset.grid.h())?;
    let u = state.u_nodes(&w, Derivative::Value);
    let v = state.v_nodes(&w, Derivative::Value);
    Ok(preset
        .grid
        .nodes()
        .zip(u)
        .zip(v)
        .map(|((x, u), v)| {
            let exact = preset.exact_at(x, state.time);
            ProfileRow {
                x,
                u_numeric: u,
                v_numeric: v,
                u_exact: exact,
                error: exact.map(|e| (e - u).abs()),
            }
        })
        .collect())
}

pub fn write_profile_csv<W: Write>(
    out: W,
    state: &CoefficientState,
    preset: &ExperimentPreset,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(PROFILE_HEADER)?;
    for r in profile_rows(state, preset)? {
        csv.write_record([
            fmt_num(r.x),
            fmt_num(r.u_numeric),
            fmt_num(r.v_numeric),
            fmt_opt(r.u_exact),
            fmt_opt(r.error),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_diagnostics_csv<W: Write>(out: W, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(DIAGNOSTICS_HEADER)?;
    for r in records {
        csv.write_record([
            fmt_num(r.time),
            fmt_opt(r.linf),
            fmt_num(r.m),
            fmt_num(r.e),
            fmt_num(r.h_quantity),
            fmt_num(r.c_m),
            fmt_num(r.c_e),
            fmt_num(r.c_h),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_scan_csv<W: Write>(out: W, trace: &[(f64, f64)]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(SCAN_HEADER)?;
    for &(l, e) in trace {
        csv.write_record([fmt_num(l), fmt_num(e)])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_stability_csv<W: Write>(out: W, samples: &[StabilitySample]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(STABILITY_HEADER)?;
    for s in samples {
        csv.write_record([
            fmt_num(s.phi),
            fmt_num(s.eps_local),
            fmt_num(s.abs_rho1),
            fmt_num(s.abs_rho2),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
