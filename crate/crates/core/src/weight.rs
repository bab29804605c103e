//! The singular weight |x|^{-b} on the grid, with the origin cell replaced
//! by its exact cell average so the integrable singularity stays finite.

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::grid::GridSpec;

/// Nonnegative samples of |x|^{-b}. Every cell away from the origin carries
/// the pointwise value at its center; the origin cell carries
/// (1/h^2) * integral of |x|^{-b} over the cell, which preserves the
/// integral of the weight and keeps it bounded on the grid.
#[derive(Debug, Clone)]
pub struct SingularWeight {
    grid: GridSpec,
    b: f64,
    values: Vec<f64>,
}

/// Average of |x|^{-q} over the square cell [-h/2, h/2]^2, for 0 < q < 2.
///
/// By symmetry the integral splits into 8 wedges; over one wedge the radial
/// integral is exact and the angular remainder is smooth:
///   avg = (8 / h^2) * (h/2)^{2-q} / (2-q) * int_0^{pi/4} sec(t)^{2-q} dt,
/// evaluated by adaptive Simpson to 1e-12.
pub fn origin_cell_average(h: f64, q: f64) -> f64 {
    let s = 2.0 - q;
    let angular = crate::util::adaptive_simpson(
        &|t: f64| t.cos().powf(-s),
        0.0,
        std::f64::consts::FRAC_PI_4,
        1e-13,
    );
    8.0 / (h * h) * (0.5 * h).powf(s) / s * angular
}

impl SingularWeight {
    pub fn new(grid: GridSpec, b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 2.0) {
            return Err(CoreError::WeightExponent(b));
        }
        let n = grid.n();
        let origin = n / 2;
        let origin_value = origin_cell_average(grid.spacing(), b);
        let mut values = vec![0.0f64; grid.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if i == origin && j == origin {
                    origin_value
                } else {
                    grid.radius(i, j).powf(-b)
                };
            }
        });
        Ok(SingularWeight { grid, b, values })
    }

    /// Degenerate weight identically equal to `value` (used to switch the
    /// nonlinearity off in splitting degeneracy tests).
    pub fn uniform(grid: GridSpec, value: f64) -> Self {
        SingularWeight {
            grid,
            b: 0.0,
            values: vec![value; grid.len()],
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Periodic translation by whole cells (re-centers the singularity).
    pub fn translate_cells(&self, di: i64, dj: i64) -> SingularWeight {
        let n = self.grid.n() as i64;
        let shift = |p: i64, d: i64| (((p - d) % n + n) % n) as usize;
        let mut values = vec![0.0; self.values.len()];
        for i in 0..self.grid.n() {
            for j in 0..self.grid.n() {
                values[self.grid.index(i, j)] =
                    self.values[self.grid.index(shift(i as i64, di), shift(j as i64, dj))];
            }
        }
        SingularWeight {
            grid: self.grid,
            b: self.b,
            values,
        }
    }

    /// Quadrature of w * |u|^p over the grid.
    pub fn weighted_power_integral(&self, u: &crate::field::Field, p: f64) -> Result<f64> {
        self.grid.check_same(&u.grid())?;
        Ok(self.grid.quadrature(
            self.values
                .iter()
                .zip(u.values().iter())
                .map(|(&w, z)| w * z.norm().powf(p)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_out_of_range_exponents() {
        let grid = GridSpec::new(32, 2.0).unwrap();
        assert!(matches!(
            SingularWeight::new(grid, 0.0),
            Err(CoreError::WeightExponent(_))
        ));
        assert!(matches!(
            SingularWeight::new(grid, 2.0),
            Err(CoreError::WeightExponent(_))
        ));
        assert!(matches!(
            SingularWeight::new(grid, -0.5),
            Err(CoreError::WeightExponent(_))
        ));
    }

    #[test]
    fn tiny_exponent_gives_unit_weight() {
        let grid = GridSpec::new(32, 2.0).unwrap();
        let w = SingularWeight::new(grid, 1e-12).unwrap();
        for &v in w.values() {
            assert!((v - 1.0).abs() < 1e-9, "got {v}");
        }
    }

    #[test]
    fn origin_cell_dominates_its_neighbors() {
        // b = 0.5, h = 0.1 grid: the averaged origin cell must exceed the
        // pointwise value of every adjacent cell.
        let grid = GridSpec::new(64, 3.2).unwrap();
        assert_eq!(grid.spacing(), 0.1);
        let w = SingularWeight::new(grid, 0.5).unwrap();
        let o = grid.n() / 2;
        let center = w.value(o, o);
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let v = w.value((o as i64 + di) as usize, (o as i64 + dj) as usize);
                assert!(center > v, "origin {center} <= neighbor {v}");
            }
        }
    }

    #[test]
    fn away_from_origin_values_are_pointwise() {
        let grid = GridSpec::new(64, 2.0).unwrap();
        let w = SingularWeight::new(grid, 0.75).unwrap();
        let o = grid.n() / 2;
        for (idx, &v) in w.values().iter().enumerate() {
            let (i, j) = grid.pair_of(idx);
            if (i as i64 - o as i64).abs() > 1 || (j as i64 - o as i64).abs() > 1 {
                let exact = grid.radius(i, j).powf(-0.75);
                assert_eq!(v, exact);
            }
        }
    }

    #[test]
    fn unit_disk_integral_matches_polar_closed_form() {
        // int_{|x|<1} |x|^{-b} dx = 2 pi / (2 - b); b = 0.5 gives 4 pi / 3.
        // converges under refinement across the integrable range, b = 1
        // included.
        for b in [0.25, 0.5, 1.0] {
            let exact = 2.0 * std::f64::consts::PI / (2.0 - b);
            let mut errs = Vec::new();
            for n in [128usize, 512] {
                let grid = GridSpec::new(n, 2.0).unwrap();
                let w = SingularWeight::new(grid, b).unwrap();
                let indicator = crate::field::Field::from_fn(grid, |x, y| {
                    if x.hypot(y) <= 1.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let v = w.weighted_power_integral(&indicator, 2.0).unwrap();
                errs.push((v - exact).abs() / exact);
            }
            assert!(errs[1] < 1e-3, "b={b}: relative error {} at n=512", errs[1]);
            assert!(errs[1] < errs[0], "b={b}: no refinement: {errs:?}");
        }
    }

    #[test]
    fn origin_average_limits() {
        // q -> 0 recovers a unit average.
        assert!((origin_cell_average(0.1, 1e-12) - 1.0).abs() < 1e-9);
        // q = 1 on the unit cell: 8 * (1/2) * asinh(1) = 4 ln(1 + sqrt 2).
        let exact = 4.0 * (1.0 + 2.0f64.sqrt()).ln();
        assert!((origin_cell_average(1.0, 1.0) - exact).abs() < 1e-10);
    }
}
