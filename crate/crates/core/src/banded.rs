//! Banded matrices and LU factorisation with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl` upper
//! diagonals absorb fill-in from row interchanges, as in LAPACK's `gbtrf`.

use crate::error::{Error, Result};

/// Relative pivot floor: a pivot smaller than this times the largest entry
/// of the matrix is treated as singular.
pub const PIVOT_FLOOR: f64 = 1e-14;

/// Residual bound for accepted solves, relative to the right-hand side.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < self.n && j < self.n && self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i < self.n && j < self.n && self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j);
        self.set(i, j, v + value);
    }

    /// Columns of row `i` that may hold nonzeros.
    fn row_span(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, vector has length {}",
                self.n,
                self.n,
                x.len()
            )));
        }
        Ok((0..self.n)
            .map(|i| {
                self.row_span(i)
                    .map(|j| self.data[self.idx(i, j)] * x[j])
                    .sum()
            })
            .collect())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row_span(i).map(move |j| (i, j)))
            .map(|(i, j)| self.data[self.idx(i, j)].abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Factorise in place into `P A = L U`.
    pub fn factorize(&self) -> Result<BandedLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let floor = PIVOT_FLOOR * self.max_abs();
        let mut lu = self.clone();
        let mut pivots = vec![0usize; n];

        for k in 0..n {
            let last_row = (k + kl).min(n.saturating_sub(1));
            let last_col = (k + kl + ku).min(n.saturating_sub(1));

            let (p, pivot) = (k..=last_row).map(|i| (i, lu.data[lu.idx(i, k)])).fold(
                (k, 0.0f64),
                |best, (i, v)| if v.abs() > best.1.abs() { (i, v) } else { best },
            );
            if !(pivot.abs() > floor) {
                return Err(Error::Singular {
                    row: k,
                    pivot: pivot.abs(),
                    floor,
                });
            }
            pivots[k] = p;
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (lu.idx(k, j), lu.idx(p, j));
                    lu.data.swap(a, b);
                }
            }
            for i in (k + 1)..=last_row {
                let ik = lu.idx(i, k);
                let factor = lu.data[ik] / pivot;
                lu.data[ik] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..=last_col {
                        let kj = lu.data[lu.idx(k, j)];
                        let ij = lu.idx(i, j);
                        lu.data[ij] -= factor * kj;
                    }
                }
            }
        }
        Ok(BandedLu { lu, pivots })
    }
}

/// Packed LU factors of a banded matrix.
#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = &self.lu;
        let n = m.n;
        if rhs.len() != n {
            return Err(Error::Dimension(format!(
                "system has {n} rows, right-hand side has {}",
                rhs.len()
            )));
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for i in (k + 1)..=(k + m.kl).min(n - 1) {
                x[i] -= m.data[m.idx(i, k)] * xk;
            }
        }
        let reach = m.kl + m.ku;
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..=(i + reach).min(n - 1) {
                s -= m.data[m.idx(i, j)] * x[j];
            }
            x[i] = s / m.data[m.idx(i, i)];
        }
        Ok(x)
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve `A x = b` and verify the residual `|b - A x| <= RESIDUAL_TOL |b|`.
pub fn solve_checked(a: &BandedMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let x = a.factorize()?.solve(b)?;
    let ax = a.mul_vec(&x)?;
    let residual = norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
    let limit = RESIDUAL_TOL * norm2(b);
    if residual > limit && residual > f64::MIN_POSITIVE {
        return Err(Error::Residual { residual, limit });
    }
    Ok(x)
}
