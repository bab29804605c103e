//! Trajectory-level monitors: localized mass, concentration quantities,
//! scattering pullback trend, and the Strichartz-norm probe.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::Field;
use crate::functionals::{hamiltonian, EnergyReport};
use crate::grid::GridSpec;
use crate::nonlin::PhysParams;
use crate::norms::{holder_norm, norms};
use crate::rng::Rng;
use crate::spectral::{forward_transform, inverse_transform};
use crate::weight::SingularWeight;

/// One row of the observable series.
#[derive(Debug, Clone, Copy)]
pub struct ObservableRecord {
    pub t: f64,
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub hamiltonian: f64,
    pub linf: f64,
    pub grad_l2: f64,
    /// int w |u|^4
    pub quartic_weighted: f64,
    /// C^{1/2} norm (L-infinity plus the windowed Hoelder seminorm)
    pub holder_half: f64,
    /// mass over B(S)
    pub ball_mass_inner: f64,
    /// mass over B(S + S')
    pub ball_mass_outer: f64,
    /// H1 distance of the free pullback to the previous recorded pullback;
    /// zero on the first record.
    pub scattering_cauchy: f64,
}

/// Time-indexed diagnostics with the ball radii used for localized mass.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub s_inner: f64,
    pub s_prime: f64,
    pub records: Vec<ObservableRecord>,
}

pub const CSV_HEADER: &str = "time,mass,kinetic,potential,hamiltonian,linf,grad_l2,quartic_weighted,holder_half,ball_mass_inner,ball_mass_outer,scattering_cauchy";

impl ObservableSeries {
    pub fn new(s_inner: f64, s_prime: f64) -> Self {
        ObservableSeries {
            s_inner,
            s_prime,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: ObservableRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.t <= last.t {
                return Err(CoreError::ParamDomain {
                    name: "record.t",
                    value: record.t,
                    domain: "strictly increasing",
                });
            }
        }
        self.records.push(record);
        Ok(())
    }

    /// CSV with a fixed column order and full float precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}\n",
                r.t,
                r.mass,
                r.kinetic,
                r.potential,
                r.hamiltonian,
                r.linf,
                r.grad_l2,
                r.quartic_weighted,
                r.holder_half,
                r.ball_mass_inner,
                r.ball_mass_outer,
                r.scattering_cauchy
            ));
        }
        out
    }
}

/// Mass over the centered ball: cells counted iff their center lies inside.
pub fn ball_mass(u: &Field, radius: f64) -> f64 {
    let grid = u.grid();
    grid.quadrature((0..grid.len()).map(|idx| {
        let (i, j) = grid.pair_of(idx);
        if grid.radius(i, j) <= radius {
            u.values()[idx].norm_sqr()
        } else {
            0.0
        }
    }))
}

/// Streaming recorder: computes one observable row per call and carries the
/// free pullback e^{-it Lap} u(t) forward for the scattering column.
pub struct Recorder {
    pub series: ObservableSeries,
    w: SingularWeight,
    p: PhysParams,
    prev_pullback: Option<Field>,
}

impl Recorder {
    pub fn new(w: SingularWeight, p: PhysParams, s_inner: f64, s_prime: f64) -> Self {
        Recorder {
            series: ObservableSeries::new(s_inner, s_prime),
            w,
            p,
            prev_pullback: None,
        }
    }

    pub fn record(&mut self, t: f64, u: &Field) -> Result<EnergyReport> {
        let report = hamiltonian(u, &self.w, &self.p)?;
        let nn = norms(u);
        let quartic = self.w.weighted_power_integral(u, 4.0)?;
        let holder = holder_norm(u, 0.5)?;
        let pullback = linear_pullback(u, t);
        let cauchy = match &self.prev_pullback {
            Some(prev) => norms(&pullback.sub(prev)?).h1,
            None => 0.0,
        };
        let record = ObservableRecord {
            t,
            mass: report.mass,
            kinetic: report.kinetic,
            potential: report.potential,
            hamiltonian: report.hamiltonian,
            linf: nn.linf,
            grad_l2: nn.grad_l2,
            quartic_weighted: quartic,
            holder_half: holder,
            ball_mass_inner: ball_mass(u, self.series.s_inner),
            ball_mass_outer: ball_mass(u, self.series.s_inner + self.series.s_prime),
            scattering_cauchy: cauchy,
        };
        if self.series.records.is_empty() {
            self.series.records.push(record);
        } else {
            self.series.push(record)?;
        }
        self.prev_pullback = Some(pullback);
        Ok(report)
    }
}

/// e^{-it Lap} u(t): the free pullback whose Cauchy behavior signals
/// scattering.
pub fn linear_pullback(u: &Field, t: f64) -> Field {
    inverse_transform(&forward_transform(u).free_propagate(-t))
}

#[derive(Debug, Clone)]
pub struct LocalizedMassViolation {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Localized-mass monitor: at every recorded time,
///   mass over B(S + S') at time t >= mass over B(S) at time 0 - C(E)/S' * t
/// with C(E) = 2E from the proof's chain (smooth cutoff with |h'| <= 1).
/// Violations beyond 1e-8 slack are returned.
pub fn localized_mass_monitor(
    series: &ObservableSeries,
    energy: f64,
) -> Vec<LocalizedMassViolation> {
    let mut violations = Vec::new();
    if series.records.is_empty() {
        return violations;
    }
    let inner0 = series.records[0].ball_mass_inner;
    let c_e = 2.0 * energy;
    for r in &series.records {
        let rhs = inner0 - c_e / series.s_prime * r.t;
        if r.ball_mass_outer < rhs - 1e-8 {
            violations.push(LocalizedMassViolation {
                t: r.t,
                lhs: r.ball_mass_outer,
                rhs,
            });
        }
    }
    violations
}

#[derive(Debug, Clone, Copy)]
pub struct ConcentrationReport {
    pub sup_grad: f64,
    pub min_quartic: f64,
    pub coupled_bound_ok: bool,
}

/// Concentration monitor for H(u0) <= 1 runs: tracks sup ||grad u||,
/// min int w|u|^4, and whether int w|u|^4 + ||grad u||^2 <= 1 + 1e-6 held
/// at every recorded time.
pub fn concentration_monitor(series: &ObservableSeries) -> ConcentrationReport {
    let mut sup_grad = 0.0f64;
    let mut min_quartic = f64::INFINITY;
    let mut ok = true;
    for r in &series.records {
        sup_grad = sup_grad.max(r.grad_l2);
        min_quartic = min_quartic.min(r.quartic_weighted);
        if r.quartic_weighted + r.grad_l2 * r.grad_l2 > 1.0 + 1e-6 {
            ok = false;
        }
    }
    if series.records.is_empty() {
        min_quartic = 0.0;
    }
    ConcentrationReport {
        sup_grad,
        min_quartic,
        coupled_bound_ok: ok,
    }
}

/// Consecutive H1 differences of the free pullbacks of trajectory
/// snapshots. A decreasing tail is reported as a scattering trend, never
/// asserted as convergence.
pub fn scattering_diagnostic(snapshots: &[(f64, Field)]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut prev: Option<Field> = None;
    for (t, u) in snapshots {
        let pb = linear_pullback(u, *t);
        if let Some(p) = &prev {
            out.push(norms(&pb.sub(p)?).h1);
        }
        prev = Some(pb);
    }
    Ok(out)
}

/// ||v||_{W^{1,4}}^4 = ||v||_{L4}^4 + || |grad v| ||_{L4}^4.
fn w14_norm_pow4(u: &Field) -> f64 {
    let spec = forward_transform(u);
    let dx = inverse_transform(&spec.derivative_x());
    let dy = inverse_transform(&spec.derivative_y());
    let grid = u.grid();
    let l4_u = grid.quadrature(u.values().iter().map(|z| {
        let a = z.norm_sqr();
        a * a
    }));
    let l4_g = grid.quadrature(dx.values().iter().zip(dy.values().iter()).map(|(a, b)| {
        let g = a.norm_sqr() + b.norm_sqr();
        g * g
    }));
    l4_u + l4_g
}

/// ||e^{it Lap} u0||_{L^4([0,T], W^{1,4})} / ||u0||_{H1} via composite
/// Simpson in time with `intervals` panels (rounded up to even).
pub fn strichartz_ratio(u0: &Field, t_horizon: f64, intervals: usize) -> Result<f64> {
    if !(t_horizon > 0.0) {
        return Err(CoreError::ParamDomain {
            name: "t_horizon",
            value: t_horizon,
            domain: "(0, inf)",
        });
    }
    let spec = forward_transform(u0);
    let h1 = spec.h1_norm_sq().sqrt();
    if h1 == 0.0 {
        return Ok(0.0);
    }
    let m = intervals.max(2) + intervals % 2;
    let dt = t_horizon / m as f64;
    let mut sum = 0.0;
    for node in 0..=m {
        let t = node as f64 * dt;
        let ut = inverse_transform(&spec.free_propagate(t));
        let g = w14_norm_pow4(&ut);
        let weight = if node == 0 || node == m {
            1.0
        } else if node % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * g;
    }
    let integral = sum * dt / 3.0;
    Ok(integral.powf(0.25) / h1)
}

/// Seeded band-limited complex field with unit H1 norm. Spectrum filled on
/// |m_x|, |m_y| <= n/8.
pub fn random_band_limited(grid: GridSpec, seed: u64) -> Field {
    let mut rng = Rng::new(seed);
    let n = grid.n();
    let cut = (n / 8) as i64;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in 0..n {
        let mi = if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        };
        for j in 0..n {
            let mj = if j < n / 2 {
                j as i64
            } else {
                j as i64 - n as i64
            };
            if mi.abs() <= cut && mj.abs() <= cut {
                values[i * n + j] = Complex64::new(rng.normal(), rng.normal());
            }
        }
    }
    let spec = crate::spectral::SpectralField::from_values(grid, values).unwrap();
    let field = inverse_transform(&spec);
    let h1 = norms(&field).h1;
    field.scale(1.0 / h1)
}

#[derive(Debug, Clone)]
pub struct StrichartzReport {
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Regression value of the (4,4) free-flow probe for the canonical setup
/// (32 samples, n = 128, L = 10, T = 1, seed 0); reseeding stays within 5%.
pub const STRICHARTZ_44_REGRESSION: f64 = 0.2416;

/// Free-flow Strichartz probe over a seeded ensemble of unit-H1
/// band-limited data; the maximum ratio is a pinned regression constant.
pub fn strichartz_probe(
    ensemble_size: usize,
    grid: GridSpec,
    t_horizon: f64,
    seed: u64,
) -> Result<StrichartzReport> {
    if ensemble_size == 0 {
        return Err(CoreError::EmptyInput("ensemble_size"));
    }
    let mut seeder = Rng::new(seed);
    let mut ratios = Vec::with_capacity(ensemble_size);
    for _ in 0..ensemble_size {
        let u0 = random_band_limited(grid, seeder.next_u64());
        ratios.push(strichartz_ratio(&u0, t_horizon, 16)?);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(StrichartzReport { ratios, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{evolve_strang, linear_propagator, EvolveConfig, Integrator};

    fn setting(n: usize, l: f64) -> (GridSpec, SingularWeight, PhysParams) {
        let grid = GridSpec::new(n, l).unwrap();
        (
            grid,
            SingularWeight::new(grid, 0.5).unwrap(),
            PhysParams::new(0.5).unwrap(),
        )
    }

    #[test]
    fn ball_mass_respects_membership() {
        let grid = GridSpec::new(64, 4.0).unwrap();
        let u = Field::constant(grid, Complex64::new(1.0, 0.0));
        let inner = ball_mass(&u, 1.0);
        assert!((inner - std::f64::consts::PI).abs() < 0.3);
        let all = ball_mass(&u, 10.0);
        assert!((all - 64.0).abs() < 1e-10);
    }

    #[test]
    fn series_rejects_nonincreasing_times() {
        let mut s = ObservableSeries::new(2.0, 4.0);
        let r = ObservableRecord {
            t: 0.0,
            mass: 0.0,
            kinetic: 0.0,
            potential: 0.0,
            hamiltonian: 0.0,
            linf: 0.0,
            grad_l2: 0.0,
            quartic_weighted: 0.0,
            holder_half: 0.0,
            ball_mass_inner: 0.0,
            ball_mass_outer: 0.0,
            scattering_cauchy: 0.0,
        };
        s.records.push(r);
        assert!(s.push(r).is_err());
    }

    #[test]
    fn localized_mass_trivial_at_time_zero() {
        // at t = 0 the inequality is mass(B(S+S')) >= mass(B(S)), true by
        // nonnegativity of the integrand
        let (grid, w, p) = setting(64, 10.0);
        let u = Field::gaussian(grid, 0.4, (0.0, 0.0));
        let mut rec = Recorder::new(w, p, 2.0, 4.0);
        rec.record(0.0, &u).unwrap();
        let r = &rec.series.records[0];
        assert!(r.ball_mass_outer >= r.ball_mass_inner);
        let report = hamiltonian(&u, &SingularWeight::new(grid, 0.5).unwrap(), &p).unwrap();
        let e = report.hamiltonian + report.mass;
        assert!(localized_mass_monitor(&rec.series, e).is_empty());
    }

    #[test]
    fn localized_mass_on_free_gaussian() {
        // free evolution of a gaussian, S = 2, S' = 4, T = 1: no violations
        let (grid, w, p) = setting(128, 10.0);
        let u = Field::gaussian(grid, 0.4, (0.0, 0.0));
        let report = hamiltonian(&u, &w, &p).unwrap();
        let e = report.hamiltonian + report.mass;
        let mut rec = Recorder::new(w, p, 2.0, 4.0);
        for k in 0..=10 {
            let t = 0.1 * k as f64;
            let ut = if k == 0 {
                u.clone()
            } else {
                linear_propagator(&u, t)
            };
            rec.record(t, &ut).unwrap();
        }
        let violations = localized_mass_monitor(&rec.series, e);
        assert!(violations.is_empty(), "{violations:?}");
        // large S' pushes the bound toward its t = 0 form; still no violations
        let mut rec2 = Recorder::new(SingularWeight::new(grid, 0.5).unwrap(), p, 2.0, 1e6);
        rec2.record(0.0, &u).unwrap();
        rec2.record(1.0, &linear_propagator(&u, 1.0)).unwrap();
        assert!(localized_mass_monitor(&rec2.series, e).is_empty());
    }

    #[test]
    fn concentration_monitor_zero_data() {
        let (grid, w, p) = setting(64, 10.0);
        let mut rec = Recorder::new(w, p, 2.0, 4.0);
        rec.record(0.0, &Field::zeros(grid)).unwrap();
        let c = concentration_monitor(&rec.series);
        assert_eq!(c.sup_grad, 0.0);
        assert_eq!(c.min_quartic, 0.0);
        assert!(c.coupled_bound_ok);
    }

    #[test]
    fn scattering_diagnostic_zero_and_free_cases() {
        let (grid, _, _) = setting(64, 10.0);
        let zero_snaps: Vec<(f64, Field)> =
            (0..4).map(|k| (k as f64, Field::zeros(grid))).collect();
        for d in scattering_diagnostic(&zero_snaps).unwrap() {
            assert_eq!(d, 0.0);
        }
        // exactly free trajectory: the pullback is constant
        let u = Field::gaussian(grid, 0.5, (0.0, 0.0));
        let snaps: Vec<(f64, Field)> = (0..5)
            .map(|k| {
                let t = 0.5 * k as f64;
                (
                    t,
                    if k == 0 {
                        u.clone()
                    } else {
                        linear_propagator(&u, t)
                    },
                )
            })
            .collect();
        for d in scattering_diagnostic(&snaps).unwrap() {
            assert!(d < 1e-12, "free pullback moved by {d}");
        }
    }

    #[test]
    fn scattering_trend_on_small_data_run() {
        // small-amplitude run: pullback differences decrease after the
        // initial transient (trend check only)
        let (grid, w, p) = setting(128, 10.0);
        let u = Field::gaussian(grid, 0.2, (0.0, 0.0));
        let mut snaps: Vec<(f64, Field)> = Vec::new();
        let cfg = EvolveConfig {
            dt: 2e-3,
            t_final: 2.0,
            integrator: Integrator::Strang,
            picard_iters: 6,
            snapshot_stride: 250,
        };
        evolve_strang(&u, &cfg, &w, &p, |state| {
            snaps.push((state.t, state.u.clone()));
            Ok(())
        })
        .unwrap();
        let diffs = scattering_diagnostic(&snaps).unwrap();
        // skip the first difference (transient), require decreasing tail
        for i in 2..diffs.len() {
            assert!(
                diffs[i] < diffs[i - 1],
                "pullback differences not decreasing: {diffs:?}"
            );
        }
    }

    #[test]
    fn strichartz_plane_wave_closed_form() {
        // |e^{it Lap} e^{ikx}| is constant: the ratio is
        // T^{1/4} (2L)^{-1/2} (1 + |k|^4)^{1/4} / (1 + |k|^2)^{1/2}
        let grid = GridSpec::new(128, 4.0).unwrap();
        let (mx, my) = (3i64, 2i64);
        let u = Field::plane_wave(grid, mx, my);
        let t = 1.0;
        let got = strichartz_ratio(&u, t, 16).unwrap();
        let k2 = (std::f64::consts::PI / 4.0).powi(2) * ((mx * mx + my * my) as f64);
        let two_l = 2.0 * grid.half_width();
        let expected =
            t.powf(0.25) * (1.0 + k2 * k2).powf(0.25) / ((1.0 + k2).sqrt() * two_l.sqrt());
        assert!(
            (got - expected).abs() / expected < 1e-6,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn strichartz_zero_field_and_invariances() {
        let grid = GridSpec::new(64, 4.0).unwrap();
        assert_eq!(strichartz_ratio(&Field::zeros(grid), 1.0, 8).unwrap(), 0.0);
        let u = random_band_limited(grid, 42);
        let base = strichartz_ratio(&u, 1.0, 16).unwrap();
        let rotated = strichartz_ratio(&u.phase_rotate(0.9), 1.0, 16).unwrap();
        assert!((rotated - base).abs() <= 1e-10 * base);
        let shifted = strichartz_ratio(&u.translate_cells(5, -7), 1.0, 16).unwrap();
        assert!((shifted - base).abs() <= 1e-10 * base);
    }

    #[test]
    fn strichartz_ensemble_is_reproducible() {
        let grid = GridSpec::new(64, 4.0).unwrap();
        let a = strichartz_probe(8, grid, 1.0, 7).unwrap();
        let b = strichartz_probe(8, grid, 1.0, 7).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
        assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0);
    }

    #[test]
    fn strichartz_regression_value_is_reseed_stable() {
        let grid = GridSpec::new(128, 10.0).unwrap();
        for seed in [0u64, 1, 2] {
            let rep = strichartz_probe(32, grid, 1.0, seed).unwrap();
            let rel = (rep.max_ratio - STRICHARTZ_44_REGRESSION).abs() / STRICHARTZ_44_REGRESSION;
            assert!(
                rel < 0.05,
                "seed {seed}: max_ratio {} deviates {rel:.3} from the pinned value",
                rep.max_ratio
            );
        }
    }
}
