//! Distribution functions, decreasing rearrangement, Schwarz symmetrization,
//! and the Hardy-Littlewood / Polya-Szego verifiers.
//!
//! Grid convention: every cell carries measure h^2. The discrete
//! symmetrization assigns the sorted cell values to cells sorted by center
//! radius (ties broken by row-major index), which makes it equimeasurable —
//! same multiset of values — by construction.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::weight::SingularWeight;

/// mu_u(t) = |{u > t}| as h^2 times the count of cells above the threshold.
/// Applies to the real samples of u (|u| for genuinely complex fields).
pub fn distribution_function(u: &Field, t: f64) -> f64 {
    let count = u.real_samples().iter().filter(|&&v| v > t).count();
    u.grid().cell_area() * count as f64
}

/// The 1D decreasing rearrangement u^# as a right-continuous step function:
/// strictly decreasing values with their aggregated measures.
#[derive(Debug, Clone)]
pub struct RearrangedProfile {
    /// (value, measure) pairs, values strictly decreasing, measures positive.
    pub levels: Vec<(f64, f64)>,
    pub total_measure: f64,
}

impl RearrangedProfile {
    /// u^#(s): essential sup at s = 0, inf{t : mu(t) < s} for s > 0,
    /// zero beyond the total measure.
    pub fn eval(&self, s: f64) -> f64 {
        if self.levels.is_empty() {
            return 0.0;
        }
        if s <= 0.0 {
            return self.levels[0].0;
        }
        let mut acc = 0.0;
        for &(value, measure) in &self.levels {
            acc += measure;
            if s <= acc {
                return value;
            }
        }
        0.0
    }
}

fn sorted_real_samples_desc(u: &Field) -> Result<Vec<f64>> {
    let mut vals = u.real_samples();
    if let Some(&bad) = vals.iter().find(|v| **v < 0.0) {
        return Err(CoreError::NegativeValue(bad));
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite);
    }
    vals.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

pub fn decreasing_rearrangement(u: &Field) -> Result<RearrangedProfile> {
    let vals = sorted_real_samples_desc(u)?;
    let h2 = u.grid().cell_area();
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for v in vals {
        match levels.last_mut() {
            Some((value, measure)) if *value == v => *measure += h2,
            _ => levels.push((v, h2)),
        }
    }
    let total = u.grid().cell_area() * u.grid().len() as f64;
    Ok(RearrangedProfile {
        levels,
        total_measure: total,
    })
}

/// Cells sorted by center radius, row-major order breaking ties.
fn cells_by_radius(grid: GridSpec) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ai, aj) = grid.pair_of(a);
        let (bi, bj) = grid.pair_of(b);
        grid.radius(ai, aj)
            .partial_cmp(&grid.radius(bi, bj))
            .unwrap()
            .then(a.cmp(&b))
    });
    idx
}

/// Schwarz symmetrization: the radially nonincreasing field carrying the
/// same multiset of cell values, u*(x) = u^#(pi |x|^2) at grid level.
pub fn schwarz_symmetrization(u: &Field) -> Result<Field> {
    let sorted = sorted_real_samples_desc(u)?;
    let order = cells_by_radius(u.grid());
    let mut values = vec![Complex64::new(0.0, 0.0); u.grid().len()];
    for (rank, &cell) in order.iter().enumerate() {
        values[cell] = Complex64::new(sorted[rank], 0.0);
    }
    Field::new(u.grid(), values)
}

#[derive(Debug, Clone, Copy)]
pub struct PairingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Hardy-Littlewood: int f g <= int f* g*. On the grid the right side is the
/// sorted-descending pairing of the two value multisets, and the inequality
/// is the discrete rearrangement inequality, exact up to roundoff slack.
pub fn hardy_littlewood_check(f: &Field, g: &Field) -> Result<PairingCheck> {
    f.grid().check_same(&g.grid())?;
    let fv = sorted_real_samples_desc(f)?;
    let gv = sorted_real_samples_desc(g)?;
    let h2 = f.grid().cell_area();
    let lhs = f.grid().quadrature(
        f.real_samples()
            .iter()
            .zip(g.real_samples().iter())
            .map(|(a, b)| a * b),
    );
    let rhs = h2 * crate::util::compensated_sum(fv.iter().zip(gv.iter()).map(|(a, b)| a * b));
    Ok(PairingCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12 * rhs.abs().max(1.0),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GradientCheck {
    pub grad_before: f64,
    pub grad_after: f64,
    pub holds: bool,
}

/// Tolerance absorbing rearrangement-induced grid roughness in the
/// Polya-Szego comparison.
pub const POLYA_SZEGO_TOL: f64 = 0.05;

/// ||grad u||_L2^2 by centered differences; the rearranged field is not
/// band-limited, so spectral differentiation would ring at its jumps.
pub fn fd_grad_norm_sq(u: &Field) -> f64 {
    let grid = u.grid();
    let n = grid.n();
    let inv2h = 1.0 / (2.0 * grid.spacing());
    grid.quadrature((0..grid.len()).map(|idx| {
        let (i, j) = grid.pair_of(idx);
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        let jp = (j + 1) % n;
        let jm = (j + n - 1) % n;
        let dx = (u.values()[grid.index(ip, j)] - u.values()[grid.index(im, j)]) * inv2h;
        let dy = (u.values()[grid.index(i, jp)] - u.values()[grid.index(i, jm)]) * inv2h;
        dx.norm_sqr() + dy.norm_sqr()
    }))
}

/// Polya-Szego: symmetrization does not increase the Dirichlet energy,
/// within the grid tolerance.
pub fn polya_szego_check(u: &Field) -> Result<GradientCheck> {
    let sym = schwarz_symmetrization(u)?;
    let grad_before = fd_grad_norm_sq(u);
    let grad_after = fd_grad_norm_sq(&sym);
    Ok(GradientCheck {
        grad_before,
        grad_after,
        holds: grad_after <= grad_before * (1.0 + POLYA_SZEGO_TOL),
    })
}

/// Analytic decreasing rearrangement of |x|^{-b} on a disk:
/// omega^#(s) = pi^{b/2} s^{-b/2} for 0 < s <= pi R^2.
pub fn weight_rearrangement_analytic(b: f64, s: f64) -> f64 {
    std::f64::consts::PI.powf(0.5 * b) * s.powf(-0.5 * b)
}

#[derive(Debug, Clone)]
pub struct WeightRearrangementCheck {
    pub b: f64,
    pub domain_radius: f64,
    pub profile: RearrangedProfile,
    /// max relative deviation from the analytic profile on the sampled
    /// measure window.
    pub max_rel_err: f64,
}

/// Rearrange the grid restriction of |x|^{-b} to the disk of radius R and
/// compare against the analytic pi^{b/2} s^{-b/2} on s in [s_lo, pi R^2).
pub fn weight_rearrangement(
    b: f64,
    grid: GridSpec,
    domain_radius: f64,
    s_lo: f64,
) -> Result<WeightRearrangementCheck> {
    if !(b > 0.0 && b < 2.0) {
        return Err(CoreError::WeightExponent(b));
    }
    if !(domain_radius > 0.0 && domain_radius <= grid.half_width()) {
        return Err(CoreError::ParamDomain {
            name: "domain_radius",
            value: domain_radius,
            domain: "(0, half_width]",
        });
    }
    let w = SingularWeight::new(grid, b)?;
    // cell values restricted to the disk, sorted descending
    let mut vals: Vec<f64> = (0..grid.len())
        .filter(|&idx| {
            let (i, j) = grid.pair_of(idx);
            grid.radius(i, j) <= domain_radius
        })
        .map(|idx| w.values()[idx])
        .collect();
    vals.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let h2 = grid.cell_area();
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for v in vals {
        match levels.last_mut() {
            Some((value, measure)) if *value == v => *measure += h2,
            _ => levels.push((v, h2)),
        }
    }
    let total: f64 = levels.iter().map(|(_, m)| m).sum();
    let profile = RearrangedProfile {
        levels,
        total_measure: total,
    };
    // compare on [s_lo, min(0.999 pi R^2, discrete disk measure)]: the
    // cell-quantized disk can undershoot pi R^2 by a boundary ring, and the
    // discrete profile carries no mass beyond it
    let s_hi = (std::f64::consts::PI * domain_radius * domain_radius * 0.999).min(total);
    let mut max_rel_err: f64 = 0.0;
    let samples = 400;
    for k in 0..samples {
        let s = s_lo + (s_hi - s_lo) * k as f64 / (samples - 1) as f64;
        let analytic = weight_rearrangement_analytic(b, s);
        let discrete = profile.eval(s);
        max_rel_err = max_rel_err.max((discrete - analytic).abs() / analytic);
    }
    Ok(WeightRearrangementCheck {
        b,
        domain_radius,
        profile,
        max_rel_err,
    })
}
