//! Von Neumann amplification factors of the linearised scheme.
//!
//! With `delta_j^n = A1 xi^n e^{i j phi}` and `phi_j^n = A2 xi^n e^{i j phi}`
//! and the nonlinearity `U + U^2` frozen to `eps_local`, the two collocation
//! equations give
//!
//! ```text
//! rho1 = (X1 + iY) / (X2 - iY)
//! X1 = A1 s - (A2 dt mu3 / 2) g,   X2 = A1 s + (A2 dt mu3 / 2) g
//! Y  = w dt eps_local A1 a3 sin(phi)
//!
//! rho2 = (X3 + iZ) / (X4 - iZ),    X3 = A2 s,  X4 = -X3,  Z = 2 A1 a3 sin(phi)
//! ```
//!
//! where `s = 2 a1 cos(phi) + a2`, `g = 2 a4 cos(phi) + a5`, `(a1, .., a5) =
//! (alpha1, alpha2, 1/(2h), gamma1, gamma2)` and `w` is the weight of the
//! frozen nonlinearity.
//!
//! The amplitudes are not free. The second equation ties them together on the
//! physical branch, `A2 = 2i a3 sin(phi) A1 / s`, which makes `X2 = conj(X1)`
//! and `|rho1| = 1`; the other branch is `A1 = 0`, on which `rho2 = -1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assembly::PhysicsParams;
use crate::basis::nodal_weights;
use crate::error::{Error, Result};

/// Pass threshold for `|rho| - 1`.
pub const STABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityInput {
    pub params: PhysicsParams,
    pub h: f64,
    pub dt: f64,
    /// Frozen value of `U + U^2`.
    pub eps_local: f64,
    /// Mode angle `k h` in `(0, 2 pi)`.
    pub phi_mode: f64,
    pub amp1: Complex64,
    pub amp2: Complex64,
    /// Weight of the frozen nonlinearity in `Y`.
    pub linearization_weight: f64,
}

/// The symbols `a1..a5` and the two trigonometric combinations.
struct Symbols {
    a3: f64,
    s: f64,
    g: f64,
    sin: f64,
}

impl StabilityInput {
    /// Input with real amplitudes `(amp1, amp2)` and unit weight.
    pub fn new(
        params: PhysicsParams,
        h: f64,
        dt: f64,
        eps_local: f64,
        phi_mode: f64,
        amp1: f64,
        amp2: f64,
    ) -> Self {
        Self {
            params,
            h,
            dt,
            eps_local,
            phi_mode,
            amp1: Complex64::new(amp1, 0.0),
            amp2: Complex64::new(amp2, 0.0),
            linearization_weight: 1.0,
        }
    }

    /// Amplitudes of the physical branch, normalised to `A1 = 1`.
    pub fn physical(
        params: PhysicsParams,
        h: f64,
        dt: f64,
        eps_local: f64,
        phi_mode: f64,
    ) -> Result<Self> {
        let mut input = Self::new(params, h, dt, eps_local, phi_mode, 1.0, 0.0);
        let sy = input.symbols()?;
        input.amp2 = Complex64::new(0.0, 2.0 * sy.a3 * sy.sin / sy.s);
        Ok(input)
    }

    /// Amplitudes of the spurious branch, `A1 = 0`, `A2 = 1`.
    pub fn spurious(params: PhysicsParams, h: f64, dt: f64, eps_local: f64, phi_mode: f64) -> Self {
        Self::new(params, h, dt, eps_local, phi_mode, 0.0, 1.0)
    }

    pub fn with_linearization_weight(mut self, weight: f64) -> Self {
        self.linearization_weight = weight;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi_mode > 0.0 && self.phi_mode < 2.0 * PI) {
            return Err(Error::Domain(format!(
                "mode angle must lie in (0, 2 pi), got {}",
                self.phi_mode
            )));
        }
        if self.amp1 == Complex64::ZERO && self.amp2 == Complex64::ZERO {
            return Err(Error::Domain("amplitudes must not both be zero".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if !self.eps_local.is_finite() || !self.linearization_weight.is_finite() {
            return Err(Error::Domain("frozen nonlinearity must be finite".into()));
        }
        Ok(())
    }

    fn symbols(&self) -> Result<Symbols> {
        self.validate()?;
        let w = nodal_weights(self.params.lambda, self.h)?;
        let cos = self.phi_mode.cos();
        Ok(Symbols {
            a3: 1.0 / (2.0 * self.h),
            s: 2.0 * w.alpha1 * cos + w.alpha2,
            g: 2.0 * w.gamma1 * cos + w.gamma2,
            sin: self.phi_mode.sin(),
        })
    }
}

/// `(rho1, rho2)` for one mode.
pub fn amplification_factors(input: &StabilityInput) -> Result<(Complex64, Complex64)> {
    let sy = input.symbols()?;
    let i = Complex64::i();
    let (a1, a2) = (input.amp1, input.amp2);
    let disp = a2 * (input.dt * input.params.mu3 / 2.0) * sy.g;
    let x1 = a1 * sy.s - disp;
    let x2 = a1 * sy.s + disp;
    let y = a1 * (input.linearization_weight * input.dt * input.eps_local * sy.a3 * sy.sin);
    let rho1 = (x1 + i * y) / (x2 - i * y);

    let x3 = a2 * sy.s;
    let x4 = -x3;
    let z = a1 * (2.0 * sy.a3 * sy.sin);
    let rho2 = (x3 + i * z) / (x4 - i * z);
    Ok((rho1, rho2))
}

/// Grid of a stability sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilitySweep {
    pub n_modes: usize,
    pub n_eps: usize,
    pub eps_range: (f64, f64),
    pub linearization_weight: f64,
}

impl StabilitySweep {
    pub const MIN_MODES: usize = 8;

    pub fn new(eps_range: (f64, f64), n_modes: usize) -> Self {
        Self {
            n_modes,
            n_eps: 16,
            eps_range,
            linearization_weight: 1.0,
        }
    }

    /// Mode angles `2 pi (k + 1/2) / n`, symmetric about `pi`.
    pub fn modes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_modes).map(move |k| 2.0 * PI * (k as f64 + 0.5) / self.n_modes as f64)
    }

    pub fn eps_values(&self) -> impl Iterator<Item = f64> + '_ {
        let (lo, hi) = self.eps_range;
        let last = self.n_eps.saturating_sub(1).max(1) as f64;
        (0..self.n_eps).map(move |k| lo + (hi - lo) * k as f64 / last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilitySample {
    pub phi: f64,
    pub eps_local: f64,
    pub abs_rho1: f64,
    pub abs_rho2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub max_abs_rho1: f64,
    /// `(phi, eps_local)` at the maximum.
    pub argmax_rho1: (f64, f64),
    pub max_abs_rho2: f64,
    pub argmax_rho2: (f64, f64),
    pub passed: bool,
    pub samples: Vec<StabilitySample>,
}

/// Sweep with 16 values of `eps_local` and unit weight.
pub fn verify_stability(
    params: PhysicsParams,
    h: f64,
    dt: f64,
    eps_range: (f64, f64),
    n_modes: usize,
) -> Result<StabilityReport> {
    verify_stability_with(params, h, dt, &StabilitySweep::new(eps_range, n_modes))
}

/// Sweep `rho1` on the physical branch and `rho2` on the spurious branch.
pub fn verify_stability_with(
    params: PhysicsParams,
    h: f64,
    dt: f64,
    sweep: &StabilitySweep,
) -> Result<StabilityReport> {
    if sweep.n_modes < StabilitySweep::MIN_MODES {
        return Err(Error::Config(format!(
            "at least {} modes are required, got {}",
            StabilitySweep::MIN_MODES,
            sweep.n_modes
        )));
    }
    if sweep.n_eps == 0 || !(sweep.eps_range.0 <= sweep.eps_range.1) {
        return Err(Error::Config(format!(
            "invalid eps sweep: {} values over [{}, {}]",
            sweep.n_eps, sweep.eps_range.0, sweep.eps_range.1
        )));
    }
    let mut samples = Vec::with_capacity(sweep.n_modes * sweep.n_eps);
    for phi in sweep.modes() {
        for eps in sweep.eps_values() {
            let w = sweep.linearization_weight;
            let physical =
                StabilityInput::physical(params, h, dt, eps, phi)?.with_linearization_weight(w);
            let spurious =
                StabilityInput::spurious(params, h, dt, eps, phi).with_linearization_weight(w);
            let (rho1, _) = amplification_factors(&physical)?;
            let (_, rho2) = amplification_factors(&spurious)?;
            samples.push(StabilitySample {
                phi,
                eps_local: eps,
                abs_rho1: rho1.norm(),
                abs_rho2: rho2.norm(),
            });
        }
    }
    let argmax = |f: fn(&StabilitySample) -> f64| {
        let best = samples
            .iter()
            .reduce(|a, b| if f(b) > f(a) { b } else { a })
            .expect("sweep is non-empty");
        (f(best), (best.phi, best.eps_local))
    };
    let (max_abs_rho1, argmax_rho1) = argmax(|s| s.abs_rho1);
    let (max_abs_rho2, argmax_rho2) = argmax(|s| s.abs_rho2);
    let min_abs_rho2 = samples
        .iter()
        .map(|s| s.abs_rho2)
        .fold(f64::INFINITY, f64::min);
    let passed = max_abs_rho1 <= 1.0 + STABILITY_TOL
        && (max_abs_rho2 - 1.0).abs() <= STABILITY_TOL
        && (min_abs_rho2 - 1.0).abs() <= STABILITY_TOL;
    Ok(StabilityReport {
        max_abs_rho1,
        argmax_rho1,
        max_abs_rho2,
        argmax_rho2,
        passed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse_params() -> PhysicsParams {
        PhysicsParams::new(4.0, -3.0, 1.0)
    }

    #[test]
    fn physical_branch_is_unit_modulus() {
        for phi in [0.1, 1.0, 2.0, 3.0, 4.5, 6.2] {
            let input = StabilityInput::physical(pulse_params(), 0.5, 0.1, 0.1, phi).unwrap();
            let (rho1, _) = amplification_factors(&input).unwrap();
            assert!(
                (rho1.norm() - 1.0).abs() < 1e-14,
                "phi {phi}: {}",
                rho1.norm()
            );
        }
    }

    #[test]
    fn spurious_branch_is_minus_one() {
        let input = StabilityInput::spurious(pulse_params(), 0.5, 0.1, 0.1, 1.3);
        let (_, rho2) = amplification_factors(&input).unwrap();
        assert!((rho2 + 1.0).norm() < 1e-15);
    }

    #[test]
    fn no_dispersion_gives_unit_modulus() {
        let p = PhysicsParams::new(1.0, -5.0, 0.0);
        for phi in [0.4, 2.2, 5.0] {
            let input = StabilityInput::new(p, 1.6, 0.1, 0.2, phi, 1.0, 1.0);
            let (rho1, rho2) = amplification_factors(&input).unwrap();
            assert!((rho1.norm() - 1.0).abs() < 1e-15);
            assert!((rho2.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn independent_real_amplitudes_can_amplify() {
        // With A1 = A2 = 1 the two equations are not both satisfied and
        // |rho1| exceeds one whenever A1 A2 mu3 > 0.
        let input = StabilityInput::new(pulse_params(), 0.5, 0.1, 0.1, 1.2, 1.0, 1.0);
        let (rho1, _) = amplification_factors(&input).unwrap();
        assert!(rho1.norm() > 1.5);
        let input = StabilityInput::new(pulse_params(), 0.5, 0.1, 0.1, 1.2, 1.0, -1.0);
        let (rho1, _) = amplification_factors(&input).unwrap();
        assert!(rho1.norm() < 1.0);
    }

    #[test]
    fn invalid_inputs() {
        let p = pulse_params();
        for phi in [0.0, 2.0 * PI, -1.0] {
            let input = StabilityInput::new(p, 0.5, 0.1, 0.0, phi, 1.0, 0.0);
            assert!(amplification_factors(&input).is_err());
        }
        let input = StabilityInput::new(p, 0.5, 0.1, 0.0, 1.0, 0.0, 0.0);
        assert!(amplification_factors(&input).is_err());
        assert!(verify_stability(p, 0.5, 0.1, (0.0, 0.1), 4).is_err());
    }

    #[test]
    fn sweep_grid() {
        let s = StabilitySweep::new((0.0, 0.3), 720);
        let modes: Vec<f64> = s.modes().collect();
        assert_eq!(modes.len(), 720);
        assert!(modes.iter().all(|&p| p > 0.0 && p < 2.0 * PI));
        let eps: Vec<f64> = s.eps_values().collect();
        assert_eq!(eps.len(), 16);
        assert_eq!((eps[0], eps[15]), (0.0, 0.3));
    }

    #[test]
    fn sweep_passes_for_pulse_parameters() {
        let r = verify_stability(pulse_params(), 0.5, 0.1, (0.0, 0.1), 720).unwrap();
        assert!(r.passed);
        assert_eq!(r.samples.len(), 720 * 16);
        assert!(r.max_abs_rho1 <= 1.0 + STABILITY_TOL);
    }
}
