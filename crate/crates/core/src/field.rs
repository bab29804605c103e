//! Complex-valued samples on a grid: the central state object.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::grid::GridSpec;

/// Immutable snapshot of u on a grid, row-major: value (i, j) is u(x_i, y_j).
/// All operations are value-semantic; nothing mutates a field in place.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::GridMismatch(grid.n(), values.len()));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: Complex64) -> Self {
        Field {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Build from a function of the physical coordinates.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Self {
        let n = grid.n();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let x = grid.coord(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(x, grid.coord(j));
            }
        });
        Field { grid, values }
    }

    /// Gaussian A * exp(-|x - c|^2 / 2).
    pub fn gaussian(grid: GridSpec, amplitude: f64, center: (f64, f64)) -> Self {
        Field::from_fn(grid, |x, y| {
            let dx = x - center.0;
            let dy = y - center.1;
            Complex64::new(amplitude * (-0.5 * (dx * dx + dy * dy)).exp(), 0.0)
        })
    }

    /// Radial ring A * r * exp(-r^2 / 2) centered at c (vanishes at the center).
    pub fn ring(grid: GridSpec, amplitude: f64, center: (f64, f64)) -> Self {
        Field::from_fn(grid, |x, y| {
            let dx = x - center.0;
            let dy = y - center.1;
            let r2 = dx * dx + dy * dy;
            Complex64::new(amplitude * r2.sqrt() * (-0.5 * r2).exp(), 0.0)
        })
    }

    /// Grid-resolved plane wave exp(i k . x) for integer modes (mx, my).
    pub fn plane_wave(grid: GridSpec, mx: i64, my: i64) -> Self {
        let scale = std::f64::consts::PI / grid.half_width();
        let kx = scale * mx as f64;
        let ky = scale * my as f64;
        Field::from_fn(grid, |x, y| Complex64::from_polar(1.0, kx * x + ky * y))
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Field {
        let values = self.values.par_iter().map(|&z| f(z)).collect();
        Field {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise map that sees the cell index as well as the value.
    pub fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64 + Sync) -> Field {
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(idx, &z)| f(idx, z))
            .collect();
        Field {
            grid: self.grid,
            values,
        }
    }

    pub fn zip_map(
        &self,
        other: &Field,
        f: impl Fn(Complex64, Complex64) -> Complex64 + Sync,
    ) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        let values = self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Field {
            grid: self.grid,
            values,
        })
    }

    pub fn scale(&self, c: f64) -> Field {
        self.map(|z| z * c)
    }

    pub fn phase_rotate(&self, theta: f64) -> Field {
        let rot = Complex64::from_polar(1.0, theta);
        self.map(|z| z * rot)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a + b)
    }

    /// Periodic translation by whole cells.
    pub fn translate_cells(&self, di: i64, dj: i64) -> Field {
        let n = self.grid.n() as i64;
        let shift = |p: i64, d: i64| (((p - d) % n + n) % n) as usize;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for i in 0..self.grid.n() {
            for j in 0..self.grid.n() {
                let src = self.grid.index(shift(i as i64, di), shift(j as i64, dj));
                values[self.grid.index(i, j)] = self.values[src];
            }
        }
        Field {
            grid: self.grid,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .par_iter()
            .map(|z| z.norm())
            .reduce(|| 0.0, f64::max)
    }

    pub fn assert_finite(&self) -> Result<()> {
        if self
            .values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(CoreError::NonFinite)
        }
    }

    /// h^2 * sum of samples (complex-valued quadrature).
    pub fn integral(&self) -> Complex64 {
        let re = crate::util::compensated_sum(self.values.iter().map(|z| z.re));
        let im = crate::util::compensated_sum(self.values.iter().map(|z| z.im));
        Complex64::new(re, im) * self.grid.cell_area()
    }

    /// Quadrature of |u|^2.
    pub fn abs2_integral(&self) -> f64 {
        self.grid
            .quadrature(self.values.iter().map(|z| z.norm_sqr()))
    }

    /// Real samples for rearrangement-style operations: the real parts when
    /// the field carries no imaginary content, |u| otherwise.
    pub fn real_samples(&self) -> Vec<f64> {
        let purely_real = self.values.iter().all(|z| z.im == 0.0);
        if purely_real {
            self.values.iter().map(|z| z.re).collect()
        } else {
            self.values.iter().map(|z| z.norm()).collect()
        }
    }
}
