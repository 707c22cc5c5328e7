//! Initial coefficients from the initial profiles `f` and `f_x`.
//!
//! Both fields interpolate their data at every node `x_0..x_N`; the ghost
//! coefficients are tied to their mirror partners by the same reflections the
//! time stepper uses, giving one tridiagonal system per field.

use std::fmt;
use std::sync::Arc;

use crate::assembly::{CoefficientState, PhiReflection};
use crate::banded::{solve_checked, BandedMatrix};
use crate::basis::{nodal_weights, GridSpec};
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial data `u(x, 0) = f(x)` and `v(x, 0) = f_x(x)`.
#[derive(Clone)]
pub struct InitialProfile {
    pub f: ScalarFn,
    pub fx: ScalarFn,
}

impl InitialProfile {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fx: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            fx: Arc::new(fx),
        }
    }
}

impl fmt::Debug for InitialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("InitialProfile { .. }")
    }
}

/// Solve `alpha1 c_{j-1} + alpha2 c_j + alpha1 c_{j+1} = values_j` for
/// `j = 0..=N` with `c_{-1} = sign c_1`, `c_{N+1} = sign c_{N-1}`. Returns the
/// coefficients with ghosts, indices `-1..=N+1`.
pub(crate) fn fit_nodal(values: &[f64], lambda: f64, h: f64, sign: f64) -> Result<Vec<f64>> {
    let n = values.len() - 1;
    let w = nodal_weights(lambda, h)?;
    let mut m = BandedMatrix::zeros(n + 1, 1, 1);
    for j in 0..=n {
        m.set(j, j, w.alpha2);
    }
    for j in 1..n {
        m.set(j, j - 1, w.alpha1);
        m.set(j, j + 1, w.alpha1);
    }
    m.add(0, 1, w.alpha1 * (1.0 + sign));
    m.add(n, n - 1, w.alpha1 * (1.0 + sign));
    let interior = solve_checked(&m, values)?;
    let mut coeffs = Vec::with_capacity(n + 3);
    coeffs.push(sign * interior[1]);
    coeffs.extend_from_slice(&interior);
    coeffs.push(sign * interior[n - 1]);
    Ok(coeffs)
}

pub fn fit_initial(
    profile: &InitialProfile,
    grid: &GridSpec,
    lambda: f64,
    reflection: PhiReflection,
) -> Result<CoefficientState> {
    let u: Vec<f64> = grid.nodes().map(|x| (profile.f)(x)).collect();
    let v: Vec<f64> = grid.nodes().map(|x| (profile.fx)(x)).collect();
    if u.iter().chain(&v).any(|x| !x.is_finite()) {
        return Err(Error::Domain(
            "initial profile is not finite on the grid".into(),
        ));
    }
    Ok(CoefficientState {
        delta: fit_nodal(&u, lambda, grid.h(), 1.0)?,
        phi: fit_nodal(&v, lambda, grid.h(), reflection.sign())?,
        time: 0.0,
    })
}
