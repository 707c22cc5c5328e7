//! Linearised Crank-Nicolson collocation step.
//!
//! The Gardner equation is split into `u_t + (mu1 u + mu2 u^2) u_x + mu3 v_xx
//! + epsilon = 0`, `v - u_x = 0`. Both fields are expanded in extended cubic
//! B-splines (`U = sum delta_j E_j`, `V = sum phi_j E_j`) and collocated at
//! the `N + 1` nodes. The products at the new time level are linearised
//!
//! ```text
//! (U U_x)^{n+1}   ~ U^{n+1} U_x^n + U^n U_x^{n+1} - U^n U_x^n
//! (U^2 U_x)^{n+1} ~ 2 U^{n+1} U^n U_x^n + (U^n)^2 U_x^{n+1} - 2 (U^n)^2 U_x^n
//! ```
//!
//! with the frozen nodal values `K = U^n_m` and `L = V^n_m`. Each step solves
//! one banded system of `2(N + 1)` equations; the four ghost coefficients are
//! folded into their mirror columns before solving.

use serde::{Deserialize, Serialize};

use crate::banded::{solve_checked, BandedMatrix};
use crate::basis::{nodal_values, nodal_weights, Derivative, GridSpec, NodalWeights};
use crate::error::{Error, Result};

/// Constants of `u_t + mu1 u u_x + mu2 u^2 u_x + mu3 u_xxx + epsilon = 0` and
/// the basis extension parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub epsilon: f64,
    pub lambda: f64,
}

impl PhysicsParams {
    pub fn new(mu1: f64, mu2: f64, mu3: f64) -> Self {
        Self {
            mu1,
            mu2,
            mu3,
            epsilon: 0.0,
            lambda: 0.0,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mu1, self.mu2, self.mu3, self.epsilon, self.lambda];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "non-finite equation parameter in {self:?}"
            )))
        }
    }
}

/// How the ghost coefficients `phi_{-1}`, `phi_{N+1}` mirror their interior
/// partners. The `delta` ghosts are always even (`U_x = 0` at both ends).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PhiReflection {
    /// `phi_{-1} = -phi_1`: `V` is odd about each end, i.e. `V = U_x = 0`
    /// there. This keeps `V` the derivative of an evenly reflected `U`.
    #[default]
    Odd,
    /// `phi_{-1} = phi_1`: `V_x = 0` at both ends. Excites a neutral
    /// grid-scale mode whenever the data do not vanish at the boundary.
    Even,
}

impl PhiReflection {
    pub fn sign(self) -> f64 {
        match self {
            PhiReflection::Odd => -1.0,
            PhiReflection::Even => 1.0,
        }
    }
}

/// Spline coefficients at one time level, stored for indices `-1..=N+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientState {
    pub delta: Vec<f64>,
    pub phi: Vec<f64>,
    pub time: f64,
}

impl CoefficientState {
    pub fn zeros(grid: &GridSpec) -> Self {
        Self {
            delta: vec![0.0; grid.n_coeffs()],
            phi: vec![0.0; grid.n_coeffs()],
            time: 0.0,
        }
    }

    /// Number of intervals implied by the coefficient length.
    pub fn n(&self) -> usize {
        self.delta.len() - 3
    }

    pub fn check_dims(&self, grid: &GridSpec) -> Result<()> {
        if self.delta.len() != grid.n_coeffs() || self.phi.len() != grid.n_coeffs() {
            return Err(Error::Dimension(format!(
                "state has {}/{} coefficients, grid needs {}",
                self.delta.len(),
                self.phi.len(),
                grid.n_coeffs()
            )));
        }
        Ok(())
    }

    /// Overwrite the ghost coefficients from their mirror partners.
    pub fn apply_boundary(&mut self, reflection: PhiReflection) {
        let len = self.delta.len();
        let s = reflection.sign();
        self.delta[0] = self.delta[2];
        self.delta[len - 1] = self.delta[len - 3];
        self.phi[0] = s * self.phi[2];
        self.phi[len - 1] = s * self.phi[len - 3];
    }

    /// Interleaved unknown vector `(delta_0, phi_0, ..., delta_N, phi_N)`.
    pub fn interior_vector(&self) -> Vec<f64> {
        let n = self.n();
        (0..=n)
            .flat_map(|m| [self.delta[m + 1], self.phi[m + 1]])
            .collect()
    }

    fn from_interior(x: &[f64], time: f64, reflection: PhiReflection) -> Self {
        let n = x.len() / 2 - 1;
        let mut delta = vec![0.0; n + 3];
        let mut phi = vec![0.0; n + 3];
        for m in 0..=n {
            delta[m + 1] = x[2 * m];
            phi[m + 1] = x[2 * m + 1];
        }
        let mut state = Self { delta, phi, time };
        state.apply_boundary(reflection);
        state
    }

    /// Nodal values of `U` (or its derivatives).
    pub fn u_nodes(&self, weights: &NodalWeights, order: Derivative) -> Vec<f64> {
        nodal_values(&self.delta, weights, order)
    }

    /// Nodal values of `V` (or its derivatives).
    pub fn v_nodes(&self, weights: &NodalWeights, order: Derivative) -> Vec<f64> {
        nodal_values(&self.phi, weights, order)
    }

    pub fn is_finite(&self) -> bool {
        self.delta.iter().chain(&self.phi).all(|v| v.is_finite())
    }
}

/// Frozen nodal values used by the linearisation at one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizedNonlinearity {
    /// `U^n` at the node.
    pub k: f64,
    /// `V^n` (standing in for `U_x^n`) at the node.
    pub l: f64,
}

pub fn compute_kl(state: &CoefficientState, weights: &NodalWeights) -> Vec<LocalizedNonlinearity> {
    state
        .delta
        .windows(3)
        .zip(state.phi.windows(3))
        .map(|(d, p)| LocalizedNonlinearity {
            k: weights.value(d[0], d[1], d[2]),
            l: weights.value(p[0], p[1], p[2]),
        })
        .collect()
}

/// Coefficients of the first collocation equation at one node.
///
/// Left-hand side: `nu1 delta_{m-1} + nu2 phi_{m-1} + nu3 delta_m + nu4 phi_m
/// + nu5 delta_{m+1} + nu2 phi_{m+1}`; right-hand side: `nu6 delta_{m-1} -
/// nu2 phi_{m-1} + nu7 delta_m - nu4 phi_m + nu6 delta_{m+1} - nu2 phi_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowCoefficients {
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub nu4: f64,
    pub nu5: f64,
    pub nu6: f64,
    pub nu7: f64,
}

pub fn nu_coefficients(
    kl: LocalizedNonlinearity,
    params: &PhysicsParams,
    weights: &NodalWeights,
    dt: f64,
) -> Result<RowCoefficients> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let LocalizedNonlinearity { k, l } = kl;
    let w = weights;
    let implicit = 2.0 / dt + params.mu1 * l + 2.0 * params.mu2 * k * l;
    let advect = params.mu1 * k + params.mu2 * k * k;
    let explicit = 2.0 / dt + params.mu2 * k * l;
    Ok(RowCoefficients {
        nu1: implicit * w.alpha1 + advect * w.beta1,
        nu2: params.mu3 * w.gamma1,
        nu3: implicit * w.alpha2,
        nu4: params.mu3 * w.gamma2,
        nu5: implicit * w.alpha1 - advect * w.beta1,
        nu6: explicit * w.alpha1,
        nu7: explicit * w.alpha2,
    })
}

/// `lhs x^{n+1} = rhs_matrix x^n + rhs_forcing`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSystem {
    pub lhs: BandedMatrix,
    pub rhs_matrix: BandedMatrix,
    pub rhs_forcing: Vec<f64>,
}

/// Solve one assembled step.
pub fn banded_solve(system: &BandedSystem, x_n: &[f64]) -> Result<Vec<f64>> {
    let n = system.lhs.n();
    if system.rhs_matrix.n() != n || system.rhs_forcing.len() != n {
        return Err(Error::Dimension(format!(
            "lhs is {n}x{n}, rhs matrix {}, forcing length {}",
            system.rhs_matrix.n(),
            system.rhs_forcing.len()
        )));
    }
    let mut rhs = system.rhs_matrix.mul_vec(x_n)?;
    for (r, f) in rhs.iter_mut().zip(&system.rhs_forcing) {
        *r += f;
    }
    solve_checked(&system.lhs, &rhs)
}

/// Half-bandwidths of the step matrices with unknowns interleaved per node.
const BANDWIDTH: usize = 3;

/// The discretisation of one problem: grid, time step, equation constants
/// and boundary closure. Cheap to clone; holds no per-step state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub grid: GridSpec,
    pub params: PhysicsParams,
    pub dt: f64,
    pub reflection: PhiReflection,
    weights: NodalWeights,
}

impl Scheme {
    pub fn new(params: PhysicsParams, grid: GridSpec, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!(
                "time step must be positive, got {dt}"
            )));
        }
        Ok(Self {
            grid,
            params,
            dt,
            reflection: PhiReflection::default(),
            weights: nodal_weights(params.lambda, grid.h())?,
        })
    }

    pub fn with_reflection(mut self, reflection: PhiReflection) -> Self {
        self.reflection = reflection;
        self
    }

    pub fn weights(&self) -> &NodalWeights {
        &self.weights
    }

    /// Column of neighbour `j` of node `m` after folding, and the sign the
    /// `phi` entry picks up.
    fn fold(&self, j: isize) -> (usize, f64) {
        let n = self.grid.n() as isize;
        if j < 0 {
            (1, self.reflection.sign())
        } else if j > n {
            ((n - 1) as usize, self.reflection.sign())
        } else {
            (j as usize, 1.0)
        }
    }

    pub fn assemble(&self, state: &CoefficientState) -> Result<BandedSystem> {
        state.check_dims(&self.grid)?;
        let n = self.grid.n();
        let size = 2 * (n + 1);
        let w = &self.weights;
        let mut lhs = BandedMatrix::zeros(size, BANDWIDTH, BANDWIDTH);
        let mut rhs = BandedMatrix::zeros(size, BANDWIDTH, BANDWIDTH);
        let mut forcing = vec![0.0; size];

        for (m, kl) in compute_kl(state, w).into_iter().enumerate() {
            let nu = nu_coefficients(kl, &self.params, w, self.dt)?;
            let (pde, constraint) = (2 * m, 2 * m + 1);
            // (delta lhs, phi lhs, delta rhs, phi rhs) for neighbours m-1, m, m+1
            let pde_row = [
                (nu.nu1, nu.nu2, nu.nu6, -nu.nu2),
                (nu.nu3, nu.nu4, nu.nu7, -nu.nu4),
                (nu.nu5, nu.nu2, nu.nu6, -nu.nu2),
            ];
            let constraint_row = [
                (-w.beta1, w.alpha1, w.beta1, -w.alpha1),
                (0.0, w.alpha2, 0.0, -w.alpha2),
                (w.beta1, w.alpha1, -w.beta1, -w.alpha1),
            ];
            for (offset, (p, c)) in pde_row.iter().zip(&constraint_row).enumerate() {
                let (node, phi_sign) = self.fold(m as isize + offset as isize - 1);
                let (dc, pc) = (2 * node, 2 * node + 1);
                lhs.add(pde, dc, p.0);
                lhs.add(pde, pc, phi_sign * p.1);
                rhs.add(pde, dc, p.2);
                rhs.add(pde, pc, phi_sign * p.3);
                lhs.add(constraint, dc, c.0);
                lhs.add(constraint, pc, phi_sign * c.1);
                rhs.add(constraint, dc, c.2);
                rhs.add(constraint, pc, phi_sign * c.3);
            }
            forcing[pde] = -2.0 * self.params.epsilon;
        }
        Ok(BandedSystem {
            lhs,
            rhs_matrix: rhs,
            rhs_forcing: forcing,
        })
    }

    /// Advance by one time step.
    pub fn step(&self, state: &CoefficientState) -> Result<CoefficientState> {
        let system = self.assemble(state)?;
        let x = banded_solve(&system, &state.interior_vector())?;
        let time = state.time + self.dt;
        let next = CoefficientState::from_interior(&x, time, self.reflection);
        if !next.is_finite() {
            return Err(Error::NonFinite { time });
        }
        Ok(next)
    }
}

/// Assemble the step system with the default boundary closure.
pub fn assemble(
    state: &CoefficientState,
    params: &PhysicsParams,
    grid: &GridSpec,
    dt: f64,
) -> Result<BandedSystem> {
    Scheme::new(*params, *grid, dt)?.assemble(state)
}

/// Advance one step with the default boundary closure.
pub fn step(
    state: &CoefficientState,
    params: &PhysicsParams,
    grid: &GridSpec,
    dt: f64,
) -> Result<CoefficientState> {
    Scheme::new(*params, *grid, dt)?.step(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn weights() -> NodalWeights {
        nodal_weights(0.0, 0.5).unwrap()
    }

    #[test]
    fn kl_of_constant_state() {
        let g = GridSpec::new(0.0, 5.0, 10).unwrap();
        let mut s = CoefficientState::zeros(&g);
        s.delta.fill(1.0);
        for kl in compute_kl(&s, &weights()) {
            assert_relative_eq!(kl.k, 1.0, epsilon = 1e-15);
            assert_eq!(kl.l, 0.0);
        }
        let s = CoefficientState::zeros(&g);
        assert!(compute_kl(&s, &weights()).iter().all(|kl| kl.k == 0.0));
        assert_eq!(compute_kl(&s, &weights()).len(), 11);
    }

    #[test]
    fn nu_without_nonlinearity() {
        let w = weights();
        let p = PhysicsParams::new(4.0, -3.0, 1.0);
        let dt = 0.1;
        let nu = nu_coefficients(LocalizedNonlinearity { k: 0.0, l: 0.0 }, &p, &w, dt).unwrap();
        assert_relative_eq!(nu.nu1, 2.0 * w.alpha1 / dt);
        assert_relative_eq!(nu.nu3, 2.0 * w.alpha2 / dt);
        assert_relative_eq!(nu.nu5, 2.0 * w.alpha1 / dt);
        assert_relative_eq!(nu.nu6, 2.0 * w.alpha1 / dt);
        assert_relative_eq!(nu.nu7, 2.0 * w.alpha2 / dt);
    }

    #[test]
    fn nu_linear_airy_reduction() {
        let w = weights();
        let p = PhysicsParams::new(0.0, 0.0, 1.5);
        let nu = nu_coefficients(LocalizedNonlinearity { k: 0.3, l: -0.2 }, &p, &w, 0.05).unwrap();
        assert_relative_eq!(nu.nu1, 40.0 * w.alpha1);
        assert_relative_eq!(nu.nu3, 40.0 * w.alpha2);
        assert_relative_eq!(nu.nu5, 40.0 * w.alpha1);
        assert_relative_eq!(nu.nu2, 1.5 * w.gamma1);
        assert_relative_eq!(nu.nu4, 1.5 * w.gamma2);
    }

    #[test]
    fn nu_hand_substitution() {
        // (20 + 4 - 6) / 6 + (4 - 3) * (-1) = 2
        let w = weights();
        let p = PhysicsParams::new(4.0, -3.0, 1.0);
        let nu = nu_coefficients(LocalizedNonlinearity { k: 1.0, l: 1.0 }, &p, &w, 0.1).unwrap();
        assert_relative_eq!(nu.nu1, 2.0, epsilon = 1e-13);
        assert_relative_eq!(nu.nu5, 18.0 / 6.0 + 1.0, epsilon = 1e-13);
        assert_relative_eq!(nu.nu3, 18.0 * 2.0 / 3.0, epsilon = 1e-13);
        assert_relative_eq!(nu.nu6, 17.0 / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn nu_rejects_bad_dt() {
        let p = PhysicsParams::new(1.0, 1.0, 1.0);
        let kl = LocalizedNonlinearity { k: 0.0, l: 0.0 };
        assert!(nu_coefficients(kl, &p, &weights(), 0.0).is_err());
        assert!(nu_coefficients(kl, &p, &weights(), -0.1).is_err());
    }

    #[test]
    fn apply_boundary_parities() {
        let g = GridSpec::new(0.0, 1.0, 5).unwrap();
        let mut s = CoefficientState::zeros(&g);
        for (i, (d, p)) in s.delta.iter_mut().zip(s.phi.iter_mut()).enumerate() {
            *d = i as f64;
            *p = 10.0 + i as f64;
        }
        let mut odd = s.clone();
        odd.apply_boundary(PhiReflection::Odd);
        assert_eq!(odd.delta[0], odd.delta[2]);
        assert_eq!(odd.delta[7], odd.delta[5]);
        assert_eq!(odd.phi[0], -odd.phi[2]);
        assert_eq!(odd.phi[7], -odd.phi[5]);
        s.apply_boundary(PhiReflection::Even);
        assert_eq!(s.phi[0], s.phi[2]);
        assert_eq!(s.phi[7], s.phi[5]);
    }

    #[test]
    fn bad_state_dimension() {
        let g = GridSpec::new(0.0, 1.0, 5).unwrap();
        let mut s = CoefficientState::zeros(&g);
        s.phi.pop();
        let p = PhysicsParams::new(1.0, 1.0, 1.0);
        assert!(matches!(
            assemble(&s, &p, &g, 0.1),
            Err(Error::Dimension(_))
        ));
    }
}
