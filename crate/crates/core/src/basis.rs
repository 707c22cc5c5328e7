//! Extended cubic B-spline basis on a uniform grid.
//!
//! `E_j` is supported on `[x_{j-2}, x_{j+2}]` and is built from four quartic
//! pieces. The extension parameter `lambda` perturbs the classical cubic
//! B-spline (recovered at `lambda = 0`) while keeping C2 continuity. Indices
//! run over `j = -1..=N+1`; the two ghost splines use knots extrapolated
//! uniformly beyond `[a, b]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `a = x_0 < x_1 < ... < x_N = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    a: f64,
    b: f64,
    n_intervals: usize,
    h: f64,
}

impl GridSpec {
    /// Smallest number of intervals the scheme supports.
    pub const MIN_INTERVALS: usize = 4;

    pub fn new(a: f64, b: f64, n_intervals: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Domain(format!(
                "grid needs finite a < b, got [{a}, {b}]"
            )));
        }
        if n_intervals < Self::MIN_INTERVALS {
            return Err(Error::Domain(format!(
                "grid needs N >= {}, got {n_intervals}",
                Self::MIN_INTERVALS
            )));
        }
        Ok(Self {
            a,
            b,
            n_intervals,
            h: (b - a) / n_intervals as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals `N`.
    pub fn n(&self) -> usize {
        self.n_intervals
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Knot `x_k`; `k` may lie outside `0..=N` for the extrapolated knots.
    pub fn knot(&self, k: isize) -> f64 {
        // Pin the right endpoint so x_N == b exactly.
        if k == self.n_intervals as isize {
            return self.b;
        }
        self.a + k as f64 * self.h
    }

    /// The `N + 1` grid nodes.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_intervals + 1).map(move |k| self.knot(k as isize))
    }

    /// Length of a coefficient vector, `N + 3` (indices `-1..=N+1`).
    pub fn n_coeffs(&self) -> usize {
        self.n_intervals + 3
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// Values of the spline and its derivatives at grid nodes, expressed as
/// weights on the neighbouring coefficients `(j-1, j, j+1)`.
///
/// * `U_j   = alpha1 (c_{j-1} + c_{j+1}) + alpha2 c_j`
/// * `U'_j  = beta1 (c_{j-1} - c_{j+1})`
/// * `U''_j = gamma1 (c_{j-1} + c_{j+1}) + gamma2 c_j`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalWeights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl NodalWeights {
    /// Value of the three-term value stencil at coefficient triple `(l, c, r)`.
    #[inline]
    pub fn value(&self, left: f64, centre: f64, right: f64) -> f64 {
        self.alpha1 * (left + right) + self.alpha2 * centre
    }

    #[inline]
    pub fn first(&self, left: f64, _centre: f64, right: f64) -> f64 {
        self.beta1 * (left - right)
    }

    #[inline]
    pub fn second(&self, left: f64, centre: f64, right: f64) -> f64 {
        self.gamma1 * (left + right) + self.gamma2 * centre
    }
}

pub fn nodal_weights(lambda: f64, h: f64) -> Result<NodalWeights> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "mesh size must be positive, got {h}"
        )));
    }
    if !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "extension parameter must be finite, got {lambda}"
        )));
    }
    let h2 = h * h;
    Ok(NodalWeights {
        alpha1: (4.0 - lambda) / 24.0,
        alpha2: (8.0 + lambda) / 12.0,
        beta1: -1.0 / (2.0 * h),
        gamma1: (2.0 + lambda) / (2.0 * h2),
        gamma2: -(4.0 + 2.0 * lambda) / (2.0 * h2),
    })
}

/// Derivative order of a basis evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Derivative {
    Value,
    First,
    Second,
}

impl Derivative {
    pub fn order(self) -> u8 {
        match self {
            Derivative::Value => 0,
            Derivative::First => 1,
            Derivative::Second => 2,
        }
    }
}

impl TryFrom<u8> for Derivative {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(Derivative::Value),
            1 => Ok(Derivative::First),
            2 => Ok(Derivative::Second),
            k => Err(Error::UnsupportedDerivative(k)),
        }
    }
}

/// Coefficients (ascending powers of `s = (x - knot)/h`) of the four pieces
/// of `24 E_j`, each paired with the knot offset (relative to `j`) that
/// defines the shift.
fn pieces(lambda: f64) -> [(isize, [f64; 5]); 4] {
    let l = lambda;
    [
        (-2, [0.0, 0.0, 0.0, 4.0 * (1.0 - l), 3.0 * l]),
        (-1, [4.0 - l, 12.0, 6.0 * (2.0 + l), -12.0, -3.0 * l]),
        (1, [4.0 - l, -12.0, 6.0 * (2.0 + l), 12.0, -3.0 * l]),
        (2, [0.0, 0.0, 0.0, 4.0 * (l - 1.0), 3.0 * l]),
    ]
}

/// Horner evaluation of `d^k/ds^k` of a quartic with the given coefficients.
fn horner(c: &[f64; 5], s: f64, order: Derivative) -> f64 {
    match order {
        Derivative::Value => (((c[4] * s + c[3]) * s + c[2]) * s + c[1]) * s + c[0],
        Derivative::First => ((4.0 * c[4] * s + 3.0 * c[3]) * s + 2.0 * c[2]) * s + c[1],
        Derivative::Second => (12.0 * c[4] * s + 6.0 * c[3]) * s + 2.0 * c[2],
    }
}

/// Evaluate piece `piece` (0..4) of `E_j` at `x`, ignoring the support test.
/// Used by the continuity checks, which need both one-sided limits at a knot.
pub fn eval_piece(
    piece: usize,
    j: isize,
    x: f64,
    grid: &GridSpec,
    lambda: f64,
    order: Derivative,
) -> f64 {
    let (offset, coeffs) = pieces(lambda)[piece];
    let h = grid.h();
    let s = (x - grid.knot(j + offset)) / h;
    horner(&coeffs, s, order) / (24.0 * h.powi(order.order() as i32))
}

/// Evaluate `E_j` (or a derivative) at `x`.
///
/// Pieces are half-open `[x_{j-2}, x_{j-1})`, ..., with the last one closed
/// at `x_{j+2}`. Returns zero outside the support.
pub fn eval_basis(j: isize, x: f64, grid: &GridSpec, lambda: f64, order: u8) -> Result<f64> {
    let order = Derivative::try_from(order)?;
    Ok(eval_basis_with(j, x, grid, lambda, order))
}

pub(crate) fn eval_basis_with(
    j: isize,
    x: f64,
    grid: &GridSpec,
    lambda: f64,
    order: Derivative,
) -> f64 {
    let left = grid.knot(j - 2);
    let right = grid.knot(j + 2);
    if x < left || x > right {
        return 0.0;
    }
    let piece = if x < grid.knot(j - 1) {
        0
    } else if x < grid.knot(j) {
        1
    } else if x < grid.knot(j + 1) {
        2
    } else {
        3
    };
    eval_piece(piece, j, x, grid, lambda, order)
}

/// Coefficient `c_j` from a vector stored with offset one (index `-1` first).
#[inline]
pub fn coeff_at(coeffs: &[f64], j: isize) -> f64 {
    coeffs[(j + 1) as usize]
}

/// Evaluate `sum_j c_j E_j(x)` (or a derivative) for `x` in `[a, b]`.
pub fn reconstruct(coeffs: &[f64], x: f64, grid: &GridSpec, lambda: f64, order: u8) -> Result<f64> {
    let order = Derivative::try_from(order)?;
    if coeffs.len() != grid.n_coeffs() {
        return Err(Error::Dimension(format!(
            "expected {} coefficients, got {}",
            grid.n_coeffs(),
            coeffs.len()
        )));
    }
    if !grid.contains(x) {
        return Err(Error::Domain(format!(
            "x = {x} lies outside [{}, {}]",
            grid.a(),
            grid.b()
        )));
    }
    Ok(reconstruct_with(coeffs, x, grid, lambda, order))
}

pub(crate) fn reconstruct_with(
    coeffs: &[f64],
    x: f64,
    grid: &GridSpec,
    lambda: f64,
    order: Derivative,
) -> f64 {
    let n = grid.n() as isize;
    let cell = (((x - grid.a()) / grid.h()).floor() as isize).clamp(0, n - 1);
    // Only E_{cell-1}..=E_{cell+2} are nonzero on [x_cell, x_{cell+1}].
    ((cell - 1)..=(cell + 2))
        .map(|j| coeff_at(coeffs, j) * eval_basis_with(j, x, grid, lambda, order))
        .sum()
}

/// Spline values (or derivatives) at all `N + 1` nodes via the three-term
/// nodal formulas.
pub fn nodal_values(coeffs: &[f64], weights: &NodalWeights, order: Derivative) -> Vec<f64> {
    coeffs
        .windows(3)
        .map(|w| match order {
            Derivative::Value => weights.value(w[0], w[1], w[2]),
            Derivative::First => weights.first(w[0], w[1], w[2]),
            Derivative::Second => weights.second(w[0], w[1], w[2]),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> GridSpec {
        GridSpec::new(0.0, 10.0, 10).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 0.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 3).is_err());
        let g = GridSpec::new(-20.0, 30.0, 100).unwrap();
        assert_eq!(g.h(), 0.5);
        assert_eq!(g.knot(100), 30.0);
        assert_eq!(g.knot(-3), -21.5);
        assert_eq!(g.nodes().len(), 101);
    }

    #[test]
    fn weights_classical_and_substituted() {
        let w = nodal_weights(0.0, 1.0).unwrap();
        assert_relative_eq!(w.alpha1, 1.0 / 6.0);
        assert_relative_eq!(w.alpha2, 2.0 / 3.0);
        assert_relative_eq!(w.beta1, -0.5);
        assert_relative_eq!(w.gamma1, 1.0);
        assert_relative_eq!(w.gamma2, -2.0);

        let w = nodal_weights(1.0, 0.5).unwrap();
        assert_relative_eq!(w.alpha1, 1.0 / 8.0);
        assert_relative_eq!(w.alpha2, 3.0 / 4.0);
        assert_relative_eq!(w.beta1, -1.0);
        assert_relative_eq!(w.gamma1, 6.0);
        assert_relative_eq!(w.gamma2, -12.0);
    }

    #[test]
    fn weights_reject_bad_h() {
        assert!(nodal_weights(0.0, 0.0).is_err());
        assert!(nodal_weights(0.0, -1.0).is_err());
        assert!(nodal_weights(0.0, f64::NAN).is_err());
    }

    #[test]
    fn basis_peak_matches_alpha2() {
        let g = grid();
        for &lam in &[-1.0, -0.3, 0.0, 0.01, 0.7, 1.0] {
            let v = eval_basis(4, g.knot(4), &g, lam, 0).unwrap();
            assert_relative_eq!(v, (8.0 + lam) / 12.0, epsilon = 1e-15);
            let w = nodal_weights(lam, g.h()).unwrap();
            assert_relative_eq!(v, w.alpha2, epsilon = 1e-15);
            assert_relative_eq!(
                eval_basis(4, g.knot(3), &g, lam, 0).unwrap(),
                w.alpha1,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn basis_support_ends_vanish() {
        let g = grid();
        for &lam in &[-0.5, 0.0, 0.5] {
            assert_eq!(eval_basis(5, g.knot(3), &g, lam, 0).unwrap(), 0.0);
            assert!(eval_basis(5, g.knot(7), &g, lam, 0).unwrap().abs() < 1e-15);
            assert_eq!(eval_basis(5, g.knot(8), &g, lam, 0).unwrap(), 0.0);
        }
    }

    #[test]
    fn basis_second_derivative_at_centre() {
        let g = grid();
        assert_relative_eq!(
            eval_basis(5, g.knot(5), &g, 0.0, 2).unwrap(),
            -2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            eval_basis(5, g.knot(4), &g, 0.0, 2).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            eval_basis(5, g.knot(4), &g, 0.0, 1).unwrap(),
            0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn derivative_order_three_is_rejected() {
        let g = grid();
        assert_eq!(
            eval_basis(3, 3.0, &g, 0.0, 3),
            Err(Error::UnsupportedDerivative(3))
        );
    }

    #[test]
    fn reconstruct_constant_and_domain() {
        let g = grid();
        let c = vec![2.5; g.n_coeffs()];
        for x in [0.0, 0.3, 5.0, 9.99, 10.0] {
            assert_relative_eq!(
                reconstruct(&c, x, &g, 0.2, 0).unwrap(),
                2.5,
                epsilon = 1e-14
            );
            assert!(reconstruct(&c, x, &g, 0.2, 1).unwrap().abs() < 1e-13);
        }
        assert!(matches!(
            reconstruct(&c, 10.5, &g, 0.0, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            reconstruct(&c[1..], 1.0, &g, 0.0, 0),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn reconstruct_at_nodes_matches_three_term_formulas() {
        let g = grid();
        let c: Vec<f64> = (0..g.n_coeffs()).map(|i| (i as f64 * 0.7).sin()).collect();
        for &lam in &[-0.4, 0.0, 0.3] {
            let w = nodal_weights(lam, g.h()).unwrap();
            for (order, d) in [
                (0u8, Derivative::Value),
                (1, Derivative::First),
                (2, Derivative::Second),
            ] {
                let nodal = nodal_values(&c, &w, d);
                for (k, x) in g.nodes().enumerate() {
                    let r = reconstruct(&c, x, &g, lam, order).unwrap();
                    assert!(
                        (r - nodal[k]).abs() < 1e-12,
                        "order {order} node {k}: {r} vs {}",
                        nodal[k]
                    );
                }
            }
        }
    }
}
