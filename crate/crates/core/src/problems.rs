//! Closed-form solutions, initial data and parameter presets for the three
//! benchmark problems: a travelling pulse, a kink front, and wave generation
//! from a pulse that is too tall for its equation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::PhysicsParams;
use crate::basis::GridSpec;
use crate::error::{Error, Result};
use crate::init::InitialProfile;

const SQRT14: f64 = 3.741_657_386_773_941_3;

/// Solitary wave of `u_t + 4 u u_x - 3 u^2 u_x + u_xxx = 0`, peak at
/// `x = 5 + t/9`.
pub fn exact_pulse(x: f64, t: f64) -> f64 {
    let theta = -x / 3.0 + 5.0 / 3.0 + t / 27.0;
    2.0 / (12.0 + 3.0 * SQRT14 * theta.cosh())
}

pub fn exact_pulse_x(x: f64, t: f64) -> f64 {
    let theta = -x / 3.0 + 5.0 / 3.0 + t / 27.0;
    let d = 12.0 + 3.0 * SQRT14 * theta.cosh();
    2.0 * SQRT14 * theta.sinh() / (d * d)
}

fn kink_rate() -> f64 {
    30f64.sqrt() / 60.0
}

/// Kink of `u_t + u u_x - 5 u^2 u_x + u_xxx = 0`, moving right at speed 1/30
/// from 0.2 (left) to 0 (right).
pub fn exact_kink(x: f64, t: f64) -> f64 {
    0.1 - 0.1 * (kink_rate() * (x - t / 30.0)).tanh()
}

pub fn exact_kink_x(x: f64, t: f64) -> f64 {
    let c = (kink_rate() * (x - t / 30.0)).cosh();
    -0.1 * kink_rate() / (c * c)
}

/// Unit-amplitude-scale generation profile `(2/3) / (4 + sqrt14 cosh(x/3 -
/// 5/3))`, height about 0.0861 at `x = 5`.
pub fn pulse3_initial(x: f64) -> f64 {
    (2.0 / 3.0) / (4.0 + SQRT14 * (x / 3.0 - 5.0 / 3.0).cosh())
}

pub fn pulse3_initial_x(x: f64) -> f64 {
    let theta = x / 3.0 - 5.0 / 3.0;
    let d = 4.0 + SQRT14 * theta.cosh();
    -(2.0 / 9.0) * SQRT14 * theta.sinh() / (d * d)
}

/// Scale applied to [`pulse3_initial`] in the generation preset, giving the
/// initial height 0.4305 whose invariants are `M0 = 5.2255`, `E0 = 1.5033`,
/// `H0 = 1.5994`.
pub const GENERATION_AMPLITUDE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Pulse,
    Kink,
    Generation,
}

impl PresetName {
    pub const ALL: [PresetName; 3] = [PresetName::Pulse, PresetName::Kink, PresetName::Generation];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Pulse => "pulse",
            PresetName::Kink => "kink",
            PresetName::Generation => "generation",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pulse" => Ok(PresetName::Pulse),
            "kink" => Ok(PresetName::Kink),
            "generation" => Ok(PresetName::Generation),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

pub type ExactFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A fully specified experiment.
#[derive(Clone)]
pub struct ExperimentPreset {
    pub name: PresetName,
    pub params: PhysicsParams,
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub exact: Option<ExactFn>,
    pub initial: InitialProfile,
    /// Range of the frozen nonlinearity `U + U^2` used by the stability sweep.
    pub stability_eps_range: (f64, f64),
    /// Times at which results are reported by default, ending at `t_end`.
    pub report_times: Vec<f64>,
}

impl fmt::Debug for ExperimentPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExperimentPreset")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("grid", &self.grid)
            .field("dt", &self.dt)
            .field("t_end", &self.t_end)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ExperimentPreset {
    /// Same preset on a grid with `n` intervals.
    pub fn with_n(mut self, n: usize) -> Result<Self> {
        self.grid = GridSpec::new(self.grid.a(), self.grid.b(), n)?;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.params.lambda = lambda;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.params.epsilon = epsilon;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    /// Set the final time; report times beyond it are dropped and `t_end`
    /// itself is always reported.
    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self.report_times.retain(|&t| t < t_end);
        self.report_times.push(t_end);
        self
    }

    pub fn exact_at(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, t))
    }
}

pub fn preset(name: &str) -> Result<ExperimentPreset> {
    Ok(preset_of(name.parse()?))
}

pub fn preset_of(name: PresetName) -> ExperimentPreset {
    match name {
        PresetName::Pulse => ExperimentPreset {
            name,
            params: PhysicsParams::new(4.0, -3.0, 1.0),
            grid: GridSpec::new(-20.0, 30.0, 100).expect("valid grid"),
            dt: 0.1,
            t_end: 5.0,
            exact: Some(Arc::new(exact_pulse)),
            initial: InitialProfile::new(|x| exact_pulse(x, 0.0), |x| exact_pulse_x(x, 0.0)),
            stability_eps_range: (0.0, 0.1),
            report_times: vec![0.0, 2.5, 5.0],
        },
        PresetName::Kink => ExperimentPreset {
            name,
            params: PhysicsParams::new(1.0, -5.0, 1.0),
            grid: GridSpec::new(-80.0, 80.0, 100).expect("valid grid"),
            dt: 0.1,
            t_end: 12.0,
            exact: Some(Arc::new(exact_kink)),
            initial: InitialProfile::new(|x| exact_kink(x, 0.0), |x| exact_kink_x(x, 0.0)),
            stability_eps_range: (0.0, 0.24),
            report_times: vec![0.0, 4.0, 12.0],
        },
        PresetName::Generation => ExperimentPreset {
            name,
            params: PhysicsParams::new(10.0, -3.0, 1.0),
            grid: GridSpec::new(-40.0, 60.0, 400).expect("valid grid"),
            dt: 0.01,
            t_end: 15.0,
            exact: None,
            initial: InitialProfile::new(
                |x| GENERATION_AMPLITUDE * pulse3_initial(x),
                |x| GENERATION_AMPLITUDE * pulse3_initial_x(x),
            ),
            // Waves grow to about 0.7, so U + U^2 stays below 1.25.
            stability_eps_range: (0.0, 1.25),
            report_times: vec![0.0, 5.0, 10.0, 15.0],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pulse_values() {
        assert_relative_eq!(
            exact_pulse(5.0, 0.0),
            2.0 / (12.0 + 3.0 * SQRT14),
            epsilon = 1e-16
        );
        assert!((exact_pulse(5.0, 0.0) - 0.0861).abs() < 1e-4);
        assert!(exact_pulse(500.0, 1.0) < 1e-60);
        assert!(exact_pulse(-500.0, 1.0) < 1e-60);
        // Peak moves with speed 1/9.
        let t = 4.5;
        let peak = 5.0 + t / 9.0;
        assert_relative_eq!(exact_pulse(peak, t), exact_pulse(5.0, 0.0), epsilon = 1e-16);
        assert!(exact_pulse(peak + 0.01, t) < exact_pulse(peak, t));
        assert!(exact_pulse(peak - 0.01, t) < exact_pulse(peak, t));
    }

    #[test]
    fn kink_values() {
        for t in [0.0, 3.0, 12.0] {
            assert_relative_eq!(exact_kink(t / 30.0, t), 0.1, epsilon = 1e-16);
        }
        assert_relative_eq!(exact_kink(-1e3, 0.0), 0.2, epsilon = 1e-15);
        assert!(exact_kink(1e3, 0.0).abs() < 1e-15);
    }

    #[test]
    fn generation_profile() {
        assert!((pulse3_initial(5.0) - 0.0861).abs() < 1e-4);
        assert!(pulse3_initial(400.0) < 1e-40);
        assert!(pulse3_initial_x(5.0).abs() < 1e-18);
        let g = preset("generation").unwrap();
        assert!(((g.initial.f)(5.0) - 0.4305).abs() < 1e-4);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let e = 1e-5;
        for x in [-3.0, 0.5, 5.0, 7.25] {
            let fd = (exact_pulse(x + e, 1.0) - exact_pulse(x - e, 1.0)) / (2.0 * e);
            assert!((fd - exact_pulse_x(x, 1.0)).abs() < 1e-9);
            let fd = (exact_kink(x + e, 1.0) - exact_kink(x - e, 1.0)) / (2.0 * e);
            assert!((fd - exact_kink_x(x, 1.0)).abs() < 1e-9);
            let fd = (pulse3_initial(x + e) - pulse3_initial(x - e)) / (2.0 * e);
            assert!((fd - pulse3_initial_x(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn presets() {
        let p = preset("pulse").unwrap();
        assert_eq!((p.params.mu1, p.params.mu2, p.params.mu3), (4.0, -3.0, 1.0));
        assert_eq!(
            (p.grid.a(), p.grid.b(), p.dt, p.t_end),
            (-20.0, 30.0, 0.1, 5.0)
        );
        let k = preset("kink").unwrap();
        assert_eq!((k.params.mu1, k.params.mu2, k.params.mu3), (1.0, -5.0, 1.0));
        assert_eq!(
            (k.grid.a(), k.grid.b(), k.dt, k.t_end),
            (-80.0, 80.0, 0.1, 12.0)
        );
        let g = preset("generation").unwrap().with_epsilon(0.002);
        assert_eq!(
            (g.params.mu1, g.params.mu2, g.params.mu3),
            (10.0, -3.0, 1.0)
        );
        assert_eq!(
            (g.grid.a(), g.grid.b(), g.grid.n(), g.dt, g.t_end),
            (-40.0, 60.0, 400, 0.01, 15.0)
        );
        assert_eq!(g.params.epsilon, 0.002);
        assert!(g.exact.is_none());
        assert!(matches!(preset("soliton"), Err(Error::UnknownPreset(_))));
        assert_eq!(g.report_times, vec![0.0, 5.0, 10.0, 15.0]);
        assert_eq!(p.with_t_end(3.0).report_times, vec![0.0, 2.5, 3.0]);
    }

    #[test]
    fn exact_presets_start_from_exact_solution() {
        for name in [PresetName::Pulse, PresetName::Kink] {
            let p = preset_of(name);
            for x in p.grid.nodes().step_by(7) {
                assert_eq!((p.initial.f)(x), p.exact_at(x, 0.0).unwrap());
            }
        }
    }
}
