//! Time integration: Strang splitting with exact substeps, and the
//! short-time Duhamel fixed-point iteration as an independent oracle.
//!
//! Convention: the equation is i u_t + Lap u = w(x) g(u). The linear flow
//! multiplies spectra by exp(-i |k|^2 t); the nonlinear flow is an exact
//! pointwise phase rotation because |u| is a constant of that substep. The
//! Duhamel form reads u(t) = e^{it Lap} u0 - i int_0^t e^{i(t-s) Lap} f(u(s)) ds.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::Field;
use crate::nonlin::{PhysParams, AMPLITUDE_GUARD};
use crate::spectral::{forward_transform, inverse_transform, SpectralField};
use crate::weight::SingularWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Strang,
    Picard,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveConfig {
    pub dt: f64,
    pub t_final: f64,
    pub integrator: Integrator,
    pub picard_iters: usize,
    pub snapshot_stride: usize,
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(CoreError::ParamDomain {
                name: "dt",
                value: self.dt,
                domain: "(0, inf)",
            });
        }
        if !(self.t_final >= self.dt) {
            return Err(CoreError::ParamDomain {
                name: "t_final",
                value: self.t_final,
                domain: "[dt, inf)",
            });
        }
        if self.picard_iters < 2 {
            return Err(CoreError::ParamDomain {
                name: "picard_iters",
                value: self.picard_iters as f64,
                domain: "[2, inf)",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryState {
    pub t: f64,
    pub u: Field,
    pub step_index: usize,
}

/// Exact free flow e^{it Lap}: spectral multiplication by exp(-i |k|^2 t).
/// An L2 isometry mode by mode, with the exact group property.
pub fn linear_propagator(u: &Field, t: f64) -> Field {
    inverse_transform(&forward_transform(u).free_propagate(t))
}

/// Exact nonlinear flow of i u_t = w (e^{alpha |u|^2} - 1) u over time t:
/// the pointwise rotation u -> u exp(-i t w (e^{alpha |u|^2} - 1)).
/// Preserves |u| cell by cell.
pub fn nonlinear_substep(u: &Field, w: &SingularWeight, p: &PhysParams, t: f64) -> Result<Field> {
    u.grid().check_same(&w.grid())?;
    let max = u.max_abs();
    if !max.is_finite() {
        return Err(CoreError::NonFinite);
    }
    if max > AMPLITUDE_GUARD {
        return Err(CoreError::AmplitudeOverflow(max, AMPLITUDE_GUARD));
    }
    let alpha = p.alpha();
    Ok(u.map_indexed(|idx, z| {
        let phase = -t * w.values()[idx] * (alpha * z.norm_sqr()).exp_m1();
        z * Complex64::from_polar(1.0, phase)
    }))
}

/// One Strang step: half linear, full nonlinear, half linear. Both substeps
/// are exact L2 isometries, so mass survives to roundoff; the local
/// splitting error is O(dt^3).
pub fn strang_step(
    state: &TrajectoryState,
    cfg: &EvolveConfig,
    w: &SingularWeight,
    p: &PhysParams,
) -> Result<TrajectoryState> {
    let half = linear_propagator(&state.u, 0.5 * cfg.dt);
    let kicked = nonlinear_substep(&half, w, p, cfg.dt)?;
    let u = linear_propagator(&kicked, 0.5 * cfg.dt);
    Ok(TrajectoryState {
        t: state.t + cfg.dt,
        u,
        step_index: state.step_index + 1,
    })
}

/// Run the Strang integrator to t_final, invoking the observer on the
/// initial state, at every snapshot-stride boundary, and on the final state.
///
/// Inside a stride block the trailing and leading half linear steps are
/// fused into one full step, which agrees with composing `strang_step` to
/// roundoff while halving the transform count.
pub fn evolve_strang(
    u0: &Field,
    cfg: &EvolveConfig,
    w: &SingularWeight,
    p: &PhysParams,
    mut observer: impl FnMut(&TrajectoryState) -> Result<()>,
) -> Result<TrajectoryState> {
    cfg.validate()?;
    u0.grid().check_same(&w.grid())?;
    u0.assert_finite()?;
    let steps = (cfg.t_final / cfg.dt).round().max(1.0) as usize;
    let stride = cfg.snapshot_stride.max(1);
    let mut state = TrajectoryState {
        t: 0.0,
        u: u0.clone(),
        step_index: 0,
    };
    observer(&state)?;
    let mut done = 0usize;
    while done < steps {
        let block = stride.min(steps - done);
        let mut spec = forward_transform(&state.u).free_propagate(0.5 * cfg.dt);
        for k in 0..block {
            let phys = inverse_transform(&spec);
            let t_now = (done + k) as f64 * cfg.dt;
            let kicked = nonlinear_substep(&phys, w, p, cfg.dt).map_err(|e| match e {
                CoreError::AmplitudeOverflow(a, _) => CoreError::Diverged { t: t_now, linf: a },
                other => other,
            })?;
            let tail = if k + 1 == block { 0.5 * cfg.dt } else { cfg.dt };
            spec = forward_transform(&kicked).free_propagate(tail);
        }
        done += block;
        let u = inverse_transform(&spec);
        u.assert_finite().map_err(|_| CoreError::Diverged {
            t: done as f64 * cfg.dt,
            linf: f64::INFINITY,
        })?;
        state = TrajectoryState {
            t: done as f64 * cfg.dt,
            u,
            step_index: done,
        };
        observer(&state)?;
    }
    Ok(state)
}

/// Outcome of the Duhamel fixed-point iteration.
#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub u_final: Field,
    /// Successive-difference norms ||u^{n+1} - u^n|| in C_T H^1.
    pub difference_norms: Vec<f64>,
    /// Ratios of consecutive difference norms, reported down to the
    /// roundoff floor.
    pub contraction_ratios: Vec<f64>,
    /// The iteration reached the roundoff floor before exhausting its
    /// iteration budget.
    pub converged: bool,
}

/// Largest horizon accepted by the short-time fixed-point oracle.
pub const PICARD_MAX_HORIZON: f64 = 0.05;

/// Iterate the Duhamel map from the free trajectory:
///   u^{n+1}(t) = e^{it Lap} u0 - i int_0^t e^{i(t-s) Lap} w g(u^n(s)) ds,
/// with the time integral discretized by the composite trapezoid rule on
/// the internal substep grid. Requires the smallness gate ||grad u0|| < 1.
pub fn picard_solve(
    u0: &Field,
    t_final: f64,
    cfg: &EvolveConfig,
    w: &SingularWeight,
    p: &PhysParams,
) -> Result<PicardOutcome> {
    cfg.validate()?;
    u0.grid().check_same(&w.grid())?;
    u0.assert_finite()?;
    if !(t_final > 0.0 && t_final <= PICARD_MAX_HORIZON) {
        return Err(CoreError::ParamDomain {
            name: "t_final",
            value: t_final,
            domain: "(0, 0.05]",
        });
    }
    let grid = u0.grid();
    let u0_spec = forward_transform(u0);
    let grad = u0_spec.grad_norm_sq().sqrt();
    if !(grad < 1.0) {
        return Err(CoreError::GradientGate(grad));
    }
    let j_max = ((t_final / cfg.dt).round() as usize).max(1);
    let dt = t_final / j_max as f64;
    let alpha = p.alpha();
    let n = grid.n();
    let k = grid.wavenumbers();
    let k2: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let kx = k[idx / n];
            let ky = k[idx % n];
            kx * kx + ky * ky
        })
        .collect();

    let h1_of = |vals: &[Complex64]| -> f64 {
        let box_area = (2.0 * grid.half_width()) * (2.0 * grid.half_width());
        (crate::util::compensated_sum(
            vals.iter()
                .enumerate()
                .map(|(idx, z)| (1.0 + k2[idx]) * z.norm_sqr()),
        ) / box_area)
            .sqrt()
    };

    // trajectory stored spectrally; iterate zero is the free flow
    let mut traj: Vec<Vec<Complex64>> = (0..=j_max)
        .map(|j| {
            let t = j as f64 * dt;
            u0_spec
                .values()
                .iter()
                .enumerate()
                .map(|(idx, &z)| z * Complex64::from_polar(1.0, -k2[idx] * t))
                .collect()
        })
        .collect();

    let floor = 1e-13 * h1_of(u0_spec.values()).max(1.0);
    let mut difference_norms = Vec::new();
    let mut converged = false;

    for _ in 0..cfg.picard_iters {
        if converged {
            break;
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut prev_b: Vec<Complex64> = Vec::new();
        let mut d_max = 0.0f64;
        for j in 0..=j_max {
            let t = j as f64 * dt;
            let u_j = inverse_transform(&SpectralField::from_values(grid, traj[j].clone())?);
            let max = u_j.max_abs();
            if max > AMPLITUDE_GUARD {
                return Err(CoreError::AmplitudeOverflow(max, AMPLITUDE_GUARD));
            }
            let f_j =
                u_j.map_indexed(|idx, z| w.values()[idx] * z * (alpha * z.norm_sqr()).exp_m1());
            let f_spec = forward_transform(&f_j);
            let b_j: Vec<Complex64> = f_spec
                .values()
                .iter()
                .enumerate()
                .map(|(idx, &z)| z * Complex64::from_polar(1.0, k2[idx] * t))
                .collect();
            if j > 0 {
                for idx in 0..acc.len() {
                    acc[idx] += 0.5 * dt * (prev_b[idx] + b_j[idx]);
                }
            }
            let minus_i = Complex64::new(0.0, -1.0);
            let new_j: Vec<Complex64> = acc
                .iter()
                .enumerate()
                .map(|(idx, &a)| {
                    (u0_spec.values()[idx] + minus_i * a) * Complex64::from_polar(1.0, -k2[idx] * t)
                })
                .collect();
            let diff: Vec<Complex64> = new_j
                .iter()
                .zip(traj[j].iter())
                .map(|(&a, &b)| a - b)
                .collect();
            d_max = d_max.max(h1_of(&diff));
            traj[j] = new_j;
            prev_b = b_j;
        }
        difference_norms.push(d_max);
        if d_max <= floor {
            converged = true;
        }
    }

    let mut contraction_ratios = Vec::new();
    for i in 1..difference_norms.len() {
        if difference_norms[i - 1] <= floor {
            break;
        }
        let ratio = difference_norms[i] / difference_norms[i - 1];
        if ratio >= 1.0 && difference_norms[i] > floor {
            return Err(CoreError::NonContraction {
                iteration: i,
                ratio,
            });
        }
        contraction_ratios.push(ratio);
    }

    let u_final = inverse_transform(&SpectralField::from_values(grid, traj[j_max].clone())?);
    Ok(PicardOutcome {
        u_final,
        difference_norms,
        contraction_ratios,
        converged,
    })
}
