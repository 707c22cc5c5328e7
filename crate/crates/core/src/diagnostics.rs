//! Error norm and conserved quantities.
//!
//! The Gardner equation conserves
//!
//! ```text
//! M = int u,   E = int u^2,   H = int (mu1 u^3 / 3 + mu2 u^4 / 6 - mu3 u_x^2)
//! ```
//!
//! evaluated here over the computational interval `[a, b]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::{CoefficientState, PhysicsParams};
use crate::basis::{nodal_values, nodal_weights, reconstruct_with, Derivative, GridSpec};
use crate::error::{Error, Result};

/// Maximum nodal error `max_j |exact(x_j, t) - U(x_j)|` at the state's time.
pub fn linf_error(
    state: &CoefficientState,
    exact: &dyn Fn(f64, f64) -> f64,
    grid: &GridSpec,
    lambda: f64,
) -> Result<f64> {
    state.check_dims(grid)?;
    let w = nodal_weights(lambda, grid.h())?;
    let u = nodal_values(&state.delta, &w, Derivative::Value);
    Ok(grid
        .nodes()
        .zip(&u)
        .map(|(x, u)| (exact(x, state.time) - u).abs())
        .fold(0.0, f64::max))
}

/// Quadrature used for `M`, `E`, `H`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    /// `h * sum_{j=0}^{N} q(U_j, U'_j)` over the nodes.
    #[default]
    NodalSum,
    /// Composite Simpson on the spline sampled at nodes and midpoints.
    Simpson,
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quadrature::NodalSum => "nodal",
            Quadrature::Simpson => "simpson",
        })
    }
}

impl FromStr for Quadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nodal" => Ok(Quadrature::NodalSum),
            "simpson" => Ok(Quadrature::Simpson),
            other => Err(Error::Config(format!(
                "unknown quadrature '{other}' (expected nodal or simpson)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conserved {
    pub m: f64,
    pub e: f64,
    pub h: f64,
}

impl Conserved {
    /// Integrand triple at a point with value `u` and slope `ux`.
    fn density(u: f64, ux: f64, p: &PhysicsParams) -> [f64; 3] {
        let u2 = u * u;
        [
            u,
            u2,
            p.mu1 * u2 * u / 3.0 + p.mu2 * u2 * u2 / 6.0 - p.mu3 * ux * ux,
        ]
    }
}

pub fn conserved_quantities(
    state: &CoefficientState,
    params: &PhysicsParams,
    grid: &GridSpec,
) -> Result<Conserved> {
    conserved_quantities_with(state, params, grid, Quadrature::default())
}

pub fn conserved_quantities_with(
    state: &CoefficientState,
    params: &PhysicsParams,
    grid: &GridSpec,
    quadrature: Quadrature,
) -> Result<Conserved> {
    state.check_dims(grid)?;
    let h = grid.h();
    let mut acc = [0.0; 3];
    let mut add = |weight: f64, u: f64, ux: f64| {
        for (a, q) in acc.iter_mut().zip(Conserved::density(u, ux, params)) {
            *a += weight * q;
        }
    };
    match quadrature {
        Quadrature::NodalSum => {
            let w = nodal_weights(params.lambda, h)?;
            let u = nodal_values(&state.delta, &w, Derivative::Value);
            let ux = nodal_values(&state.delta, &w, Derivative::First);
            for (u, ux) in u.into_iter().zip(ux) {
                add(h, u, ux);
            }
        }
        Quadrature::Simpson => {
            let sample = |x: f64| {
                (
                    reconstruct_with(&state.delta, x, grid, params.lambda, Derivative::Value),
                    reconstruct_with(&state.delta, x, grid, params.lambda, Derivative::First),
                )
            };
            let n = grid.n();
            for k in 0..=n {
                let (u, ux) = sample(grid.knot(k as isize));
                let end = k == 0 || k == n;
                add(if end { h / 6.0 } else { h / 3.0 }, u, ux);
            }
            for k in 0..n {
                let (u, ux) = sample(grid.knot(k as isize) + 0.5 * h);
                add(2.0 * h / 3.0, u, ux);
            }
        }
    }
    Ok(Conserved {
        m: acc[0],
        e: acc[1],
        h: acc[2],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeChanges {
    pub c_m: f64,
    pub c_e: f64,
    pub c_h: f64,
}

/// `|(q - q0) / q0|` for each quantity.
pub fn relative_changes(current: &Conserved, initial: &Conserved) -> Result<RelativeChanges> {
    let rel = |q: f64, q0: f64, name: &'static str| {
        if q0 == 0.0 {
            Err(Error::ZeroInitialQuantity(name))
        } else {
            Ok(((q - q0) / q0).abs())
        }
    };
    Ok(RelativeChanges {
        c_m: rel(current.m, initial.m, "M")?,
        c_e: rel(current.e, initial.e, "E")?,
        c_h: rel(current.h, initial.h, "H")?,
    })
}

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub linf: Option<f64>,
    pub m: f64,
    pub e: f64,
    pub h_quantity: f64,
    pub c_m: f64,
    pub c_e: f64,
    pub c_h: f64,
}

impl DiagnosticsRecord {
    pub fn new(time: f64, linf: Option<f64>, q: &Conserved, c: &RelativeChanges) -> Self {
        Self {
            time,
            linf,
            m: q.m,
            e: q.e,
            h_quantity: q.h,
            c_m: c.c_m,
            c_e: c.c_e,
            c_h: c.c_h,
        }
    }

    pub fn quantities(&self) -> Conserved {
        Conserved {
            m: self.m,
            e: self.e,
            h: self.h_quantity,
        }
    }
}
