//! Uniform periodic grid on [-L, L)^2 and its FFT-ordered spectral dual.

use crate::error::{CoreError, Result};

/// Discretization of the square [-L, L)^2 with n points per axis.
///
/// Sample i lives at x_i = -L + i*h with h = 2L/n, so the origin is the
/// grid point (n/2, n/2). Wavenumbers follow FFT ordering: index p maps to
/// the integer mode m = p for p < n/2 and m = p - n otherwise, with
/// k = (pi/L) * m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    half_width: f64,
    spacing: f64,
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(CoreError::InvalidGridSize(n));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(CoreError::InvalidHalfWidth(half_width));
        }
        Ok(GridSpec {
            n,
            half_width,
            spacing: 2.0 * half_width / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of cells (n^2).
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell area h^2, the quadrature weight of every cell.
    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// Physical coordinate of axis index i.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing
    }

    /// Row-major flattening: sample (i, j) is u(x_i, y_j).
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn pair_of(&self, idx: usize) -> (usize, usize) {
        (idx / self.n, idx % self.n)
    }

    /// Distance of the cell center from the origin.
    pub fn radius(&self, i: usize, j: usize) -> f64 {
        let x = self.coord(i);
        let y = self.coord(j);
        x.hypot(y)
    }

    /// FFT-ordered wavenumbers k_p = (pi/L) * m_p with m in {-n/2, .., n/2-1}.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let scale = std::f64::consts::PI / self.half_width;
        (0..self.n)
            .map(|p| {
                let m = if p < self.n / 2 {
                    p as i64
                } else {
                    p as i64 - self.n as i64
                };
                scale * m as f64
            })
            .collect()
    }

    /// Quadrature h^2 * sum(values): the periodic rectangle rule, spectrally
    /// accurate for smooth periodic integrands.
    pub fn quadrature<I: IntoIterator<Item = f64>>(&self, values: I) -> f64 {
        self.cell_area() * crate::util::compensated_sum(values)
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::GridMismatch(self.n, other.n))
        }
    }
}
