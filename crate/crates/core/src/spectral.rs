//! Spectral transforms and the exact free Schroedinger flow.
//!
//! Normalization: the forward transform returns samples of the continuum
//! Fourier integral, F(k) = h^2 * sum_j f(x_j) exp(-i k . x_j), on the
//! FFT-ordered wavenumber lattice. With this scaling Parseval reads
//! ||f||_L2^2 = sum_k |F_k|^2 / (2L)^2 and inverse(forward(f)) = f exactly
//! up to FFT roundoff.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::Result;
use crate::field::Field;
use crate::grid::GridSpec;

/// FFT-ordered spectrum of a field; same storage layout as `Field`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            planner.plan_fft(
                n,
                if forward {
                    FftDirection::Forward
                } else {
                    FftDirection::Inverse
                },
            )
        })
        .clone()
}

fn transpose_square(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized 2D DFT over both axes, in place.
fn fft2(values: &mut [Complex64], n: usize, forward: bool) {
    let fft = plan(n, forward);
    let scratch_len = fft.get_inplace_scratch_len();
    for _ in 0..2 {
        values.par_chunks_mut(n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
        transpose_square(values, n);
    }
}

/// Sign (-1)^(m_x + m_y) translating between DFT phases and the grid origin
/// at the box center. For even n this is just the index parity.
#[inline]
fn center_sign(i: usize, j: usize) -> f64 {
    if (i + j) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn forward_transform(f: &Field) -> SpectralField {
    let grid = f.grid();
    let n = grid.n();
    let mut values = f.values().to_vec();
    fft2(&mut values, n, true);
    let h2 = grid.cell_area();
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= h2 * center_sign(i, j);
        }
    });
    SpectralField { grid, values }
}

pub fn inverse_transform(spec: &SpectralField) -> Field {
    let grid = spec.grid;
    let n = grid.n();
    let box_area = (2.0 * grid.half_width()) * (2.0 * grid.half_width());
    let mut values = spec.values.clone();
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= center_sign(i, j) / box_area;
        }
    });
    fft2(&mut values, n, false);
    Field::new(grid, values).expect("spectrum carries its own grid")
}

impl SpectralField {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(crate::error::CoreError::GridMismatch(
                grid.n(),
                values.len(),
            ));
        }
        Ok(SpectralField { grid, values })
    }

    /// Apply a multiplier that depends on (k_x, k_y).
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64 + Sync) -> SpectralField {
        let k = self.grid.wavenumbers();
        let n = self.grid.n();
        let mut values = self.values.clone();
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let kx = k[i];
            for (j, v) in row.iter_mut().enumerate() {
                *v *= m(kx, k[j]);
            }
        });
        SpectralField {
            grid: self.grid,
            values,
        }
    }

    /// d/dx via ik_x (Nyquist mode kept at its negative alias).
    pub fn derivative_x(&self) -> SpectralField {
        self.apply_multiplier(|kx, _| Complex64::new(0.0, kx))
    }

    pub fn derivative_y(&self) -> SpectralField {
        self.apply_multiplier(|_, ky| Complex64::new(0.0, ky))
    }

    /// Free flow multiplier exp(-i |k|^2 t) solving i u_t + Lap u = 0.
    pub fn free_propagate(&self, t: f64) -> SpectralField {
        self.apply_multiplier(|kx, ky| Complex64::from_polar(1.0, -(kx * kx + ky * ky) * t))
    }

    /// ||f||_L2^2 computed on the spectral side (Parseval).
    pub fn l2_norm_sq(&self) -> f64 {
        let box_area = (2.0 * self.grid.half_width()) * (2.0 * self.grid.half_width());
        crate::util::compensated_sum(self.values.iter().map(|z| z.norm_sqr())) / box_area
    }

    /// ||grad f||_L2^2 via the |k|^2 multiplier.
    pub fn grad_norm_sq(&self) -> f64 {
        let k = self.grid.wavenumbers();
        let n = self.grid.n();
        let box_area = (2.0 * self.grid.half_width()) * (2.0 * self.grid.half_width());
        crate::util::compensated_sum(self.values.iter().enumerate().map(|(idx, z)| {
            let kx = k[idx / n];
            let ky = k[idx % n];
            (kx * kx + ky * ky) * z.norm_sqr()
        })) / box_area
    }

    /// ||f||_H1^2 = ||f||^2 + ||grad f||^2.
    pub fn h1_norm_sq(&self) -> f64 {
        let k = self.grid.wavenumbers();
        let n = self.grid.n();
        let box_area = (2.0 * self.grid.half_width()) * (2.0 * self.grid.half_width());
        crate::util::compensated_sum(self.values.iter().enumerate().map(|(idx, z)| {
            let kx = k[idx / n];
            let ky = k[idx % n];
            (1.0 + kx * kx + ky * ky) * z.norm_sqr()
        })) / box_area
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.check_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            values,
        })
    }
}

/// Spectral gradient of a field, returned as two physical-space fields.
pub fn gradient(f: &Field) -> (Field, Field) {
    let spec = forward_transform(f);
    (
        inverse_transform(&spec.derivative_x()),
        inverse_transform(&spec.derivative_y()),
    )
}
