//! Subcommand orchestration: init -> classify -> evolve -> monitors -> outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use snls_core::diagnostics::{
    concentration_monitor, localized_mass_monitor, strichartz_probe, Recorder,
};
use snls_core::evolve::{evolve_strang, picard_solve, EvolveConfig, Integrator};
use snls_core::field::Field;
use snls_core::functionals::{
    hamiltonian, hardy_check, hardy_integral, log_estimate_probe, moser_profile,
    moser_trudinger_sweep, strauss_probe, Criticality, EnergyReport, MtNormalization, STRAUSS_C_P2,
    STRAUSS_C_P4,
};
use snls_core::grid::GridSpec;
use snls_core::nonlin::PhysParams;
use snls_core::norms::lp_norm;
use snls_core::rearrange::{polya_szego_check, schwarz_symmetrization};
use snls_core::weight::SingularWeight;

use crate::config::{InitKind, RunConfig};
use crate::error::{CliError, Result};
use crate::snapshot::{read_snapshot, write_snapshot, SnapshotMeta};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub quiet: bool,
}

impl RunOptions {
    fn say(&self, line: &str) {
        if !self.quiet {
            println!("{line}");
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

fn ensure_out_dir(opts: &RunOptions) -> Result<()> {
    fs::create_dir_all(&opts.out_dir)?;
    Ok(())
}

/// Build the initial state described by the config.
pub fn build_initial_field(cfg: &RunConfig, base: Option<&Path>) -> Result<Field> {
    let grid =
        GridSpec::new(cfg.grid_n, cfg.half_width).map_err(|e| CliError::Config(e.to_string()))?;
    match cfg.init.kind {
        InitKind::Gaussian => Ok(Field::gaussian(grid, cfg.init.amplitude, cfg.init.center)),
        InitKind::Ring => Ok(Field::ring(grid, cfg.init.amplitude, cfg.init.center)),
        InitKind::Moser => {
            let m = moser_profile(cfg.init.moser_param, grid)?;
            Ok(m.scale(cfg.init.amplitude))
        }
        InitKind::File => {
            let rel = cfg.init.path.as_ref().expect("validated by parse_config");
            let path = match base {
                Some(dir) => dir.join(rel),
                None => PathBuf::from(rel),
            };
            let bytes = fs::read(&path)?;
            let (field, _meta) = read_snapshot(&bytes)?;
            if field.grid().n() != cfg.grid_n || field.grid().half_width() != cfg.half_width {
                return Err(CliError::Config(format!(
                    "snapshot grid {}x{} (L={}) does not match config grid {}x{} (L={})",
                    field.grid().n(),
                    field.grid().n(),
                    field.grid().half_width(),
                    cfg.grid_n,
                    cfg.grid_n,
                    cfg.half_width
                )));
            }
            Ok(field)
        }
    }
}

fn format_report(report: &EnergyReport) -> String {
    format!(
        "{} H={}\nmass={:.15e}\nkinetic={:.15e}\npotential={:.15e}\nhamiltonian={:.15e}\n",
        report.class,
        report.hamiltonian,
        report.mass,
        report.kinetic,
        report.potential,
        report.hamiltonian
    )
}

/// classify: energy report of the configured initial state.
pub fn classify_cmd(
    cfg: &RunConfig,
    opts: &RunOptions,
    config_dir: Option<&Path>,
) -> Result<String> {
    let u0 = build_initial_field(cfg, config_dir)?;
    let grid = u0.grid();
    let w = SingularWeight::new(grid, cfg.b)?;
    let p = PhysParams::new(cfg.b)?;
    let report = hamiltonian(&u0, &w, &p)?;
    let line = format!("{} H={}", report.class, report.hamiltonian);
    opts.say(&line);
    Ok(line)
}

/// simulate: evolve, record observables, persist snapshots and CSV.
pub fn simulate_cmd(cfg: &RunConfig, opts: &RunOptions, config_dir: Option<&Path>) -> Result<()> {
    ensure_out_dir(opts)?;
    let u0 = build_initial_field(cfg, config_dir)?;
    let grid = u0.grid();
    let w = SingularWeight::new(grid, cfg.b)?;
    let p = PhysParams::new(cfg.b)?;
    let report = hamiltonian(&u0, &w, &p)?;
    opts.say(&format!(
        "initial state: {} H={}",
        report.class, report.hamiltonian
    ));
    if report.class == Criticality::Supercritical {
        opts.say("warning: supercritical data (H > 1); run is flagged, blow-up aborts");
    }
    fs::write(opts.path("energy.txt"), format_report(&report))?;

    let (s, sp) = cfg.localized_mass;
    let mut recorder = Recorder::new(w.clone(), p, s, sp);
    let evolve_cfg = EvolveConfig {
        dt: cfg.dt,
        t_final: cfg.t_final,
        integrator: cfg.integrator,
        picard_iters: cfg.picard_iters,
        snapshot_stride: cfg.snapshot_stride,
    };

    match cfg.integrator {
        Integrator::Strang => {
            let io_failure = std::cell::RefCell::new(None);
            let outcome = evolve_strang(&u0, &evolve_cfg, &w, &p, |state| {
                recorder.record(state.t, &state.u)?;
                let bytes = write_snapshot(
                    &state.u,
                    SnapshotMeta {
                        b: cfg.b,
                        t: state.t,
                    },
                );
                let name = format!("snapshot_{:06}.snls", state.step_index);
                if let Err(e) = std::fs::write(opts.out_dir.join(name), bytes) {
                    *io_failure.borrow_mut() = Some(e);
                    return Err(snls_core::CoreError::EmptyInput("snapshot sink"));
                }
                Ok(())
            });
            if let Some(e) = io_failure.into_inner() {
                return Err(CliError::Io(e));
            }
            outcome?;
        }
        Integrator::Picard => {
            recorder.record(0.0, &u0)?;
            let bytes = write_snapshot(&u0, SnapshotMeta { b: cfg.b, t: 0.0 });
            fs::write(opts.path("snapshot_000000.snls"), bytes)?;
            let outcome = picard_solve(&u0, cfg.t_final, &evolve_cfg, &w, &p)?;
            recorder.record(cfg.t_final, &outcome.u_final)?;
            let steps = (cfg.t_final / cfg.dt).round().max(1.0) as usize;
            let bytes = write_snapshot(
                &outcome.u_final,
                SnapshotMeta {
                    b: cfg.b,
                    t: cfg.t_final,
                },
            );
            fs::write(opts.path(&format!("snapshot_{steps:06}.snls")), bytes)?;
            opts.say(&format!(
                "picard difference norms: {:?}",
                outcome.difference_norms
            ));
            opts.say(&format!(
                "picard contraction ratios: {:?}",
                outcome.contraction_ratios
            ));
        }
    }

    fs::write(opts.path("observables.csv"), recorder.series.to_csv())?;

    let energy = report.hamiltonian + report.mass;
    let violations = localized_mass_monitor(&recorder.series, energy);
    opts.say(&format!("localized_mass violations: {}", violations.len()));
    let conc = concentration_monitor(&recorder.series);
    opts.say(&format!(
        "concentration: sup_grad={:.6} min_quartic={:.6} coupled_bound_ok={}",
        conc.sup_grad, conc.min_quartic, conc.coupled_bound_ok
    ));
    let last = recorder.series.records.last().unwrap();
    let drift = (last.mass - report.mass).abs() / report.mass.max(f64::MIN_POSITIVE);
    opts.say(&format!("relative mass drift: {drift:.3e}"));
    Ok(())
}

/// mt-sweep: Moser-Trudinger threshold scan for one exponent.
pub fn mt_sweep_cmd(b: f64, grid_n: usize, opts: &RunOptions) -> Result<()> {
    if !(b > 0.0 && b < 2.0) {
        return Err(CliError::Config(format!(
            "mt-sweep requires 0 < b < 2, got {b}"
        )));
    }
    if grid_n < 8 || !grid_n.is_power_of_two() {
        return Err(CliError::Config(format!(
            "grid n must be a power of two >= 8, got {grid_n}"
        )));
    }
    ensure_out_dir(opts)?;
    let grid = GridSpec::new(grid_n, 2.0)?;
    let a_star = 2.0 * std::f64::consts::PI * (2.0 - b);
    let alphas: Vec<f64> = [0.6, 0.8, 1.0, 1.2, 1.4]
        .iter()
        .map(|t| t * a_star)
        .collect();
    let n_params = [2u32, 4, 8, 16, 32, 64, 128];
    let sweep = moser_trudinger_sweep(b, &alphas, &n_params, grid, MtNormalization::GradientBall)?;
    fs::write(opts.path("mt_sweep.csv"), sweep.to_csv())?;
    for row in &sweep.rows {
        opts.say(&format!(
            "alpha = {:.6} ({}x alpha*): {}",
            row.alpha,
            row.alpha / a_star,
            row.verdict
        ));
    }
    Ok(())
}

/// rearrange: Schwarz symmetrization of |u| for the configured state.
pub fn rearrange_cmd(cfg: &RunConfig, opts: &RunOptions, config_dir: Option<&Path>) -> Result<()> {
    ensure_out_dir(opts)?;
    let u0 = build_initial_field(cfg, config_dir)?;
    let modulus = u0.map(|z| Complex64::new(z.norm(), 0.0));
    let sym = schwarz_symmetrization(&modulus)?;
    let bytes = write_snapshot(&sym, SnapshotMeta { b: cfg.b, t: 0.0 });
    fs::write(opts.path("rearranged.snls"), bytes)?;
    for p in [1.0, 2.0, 4.0] {
        let before = lp_norm(&modulus, p);
        let after = lp_norm(&sym, p);
        opts.say(&format!(
            "L{p} norm: before={before:.12e} after={after:.12e} rel_diff={:.3e}",
            (after - before).abs() / before.max(f64::MIN_POSITIVE)
        ));
    }
    let ps = polya_szego_check(&modulus)?;
    opts.say(&format!(
        "polya_szego: grad_before={:.6e} grad_after={:.6e} holds={}",
        ps.grad_before, ps.grad_after, ps.holds
    ));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Strichartz,
    LogEstimate,
    Strauss,
    Hardy,
}

impl ProbeKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "strichartz" => Ok(ProbeKind::Strichartz),
            "log-estimate" => Ok(ProbeKind::LogEstimate),
            "strauss" => Ok(ProbeKind::Strauss),
            "hardy" => Ok(ProbeKind::Hardy),
            other => Err(CliError::Usage(format!(
                "unknown probe '{other}' (strichartz|log-estimate|strauss|hardy)"
            ))),
        }
    }
}

pub fn probe_cmd(kind: ProbeKind, opts: &RunOptions) -> Result<()> {
    ensure_out_dir(opts)?;
    match kind {
        ProbeKind::Strichartz => {
            let grid = GridSpec::new(128, 10.0)?;
            let report = strichartz_probe(32, grid, 1.0, opts.seed)?;
            let mut csv = String::from("sample,ratio\n");
            for (i, r) in report.ratios.iter().enumerate() {
                let _ = writeln!(csv, "{i},{r:.15e}");
            }
            fs::write(opts.path("strichartz.csv"), csv)?;
            opts.say(&format!("strichartz max_ratio = {:.9}", report.max_ratio));
        }
        ProbeKind::LogEstimate => {
            let lambda = 2.0 / std::f64::consts::PI;
            let mut csv = String::from("family,param,needed_c\n");
            let mut max_c = f64::NEG_INFINITY;
            let grid = GridSpec::new(128, 10.0)?;
            for i in 0..=29 {
                let a = 0.1 + 0.1 * i as f64;
                let probe =
                    log_estimate_probe(&Field::gaussian(grid, a, (0.0, 0.0)), lambda, 1.0, 0.5)?;
                let _ = writeln!(csv, "gaussian,{a},{:.15e}", probe.needed_c);
                max_c = max_c.max(probe.needed_c);
            }
            let grid2 = GridSpec::new(512, 2.0)?;
            for nu in [4u32, 16] {
                let probe = log_estimate_probe(&moser_profile(nu, grid2)?, lambda, 1.0, 0.5)?;
                let _ = writeln!(csv, "moser,{nu},{:.15e}", probe.needed_c);
                max_c = max_c.max(probe.needed_c);
            }
            for k in 0..2 {
                let u = snls_core::diagnostics::random_band_limited(
                    grid,
                    opts.seed.wrapping_add(k + 1),
                );
                let probe = log_estimate_probe(&u, lambda, 1.0, 0.5)?;
                let _ = writeln!(csv, "random,{k},{:.15e}", probe.needed_c);
                max_c = max_c.max(probe.needed_c);
            }
            fs::write(opts.path("log_estimate.csv"), csv)?;
            opts.say(&format!("log-estimate family max needed_C = {max_c:.9}"));
        }
        ProbeKind::Strauss => {
            let mut csv = String::from("family,param,p,ratio\n");
            let mut worst2 = 0.0f64;
            let mut worst4 = 0.0f64;
            let grid = GridSpec::new(256, 10.0)?;
            for a in [0.3, 1.0, 2.0] {
                let u = Field::gaussian(grid, a, (0.0, 0.0));
                let r2 = strauss_probe(&u, 2.0)?;
                let r4 = strauss_probe(&u, 4.0)?;
                let _ = writeln!(csv, "gaussian,{a},2,{r2:.15e}");
                let _ = writeln!(csv, "gaussian,{a},4,{r4:.15e}");
                worst2 = worst2.max(r2);
                worst4 = worst4.max(r4);
            }
            let grid2 = GridSpec::new(512, 2.0)?;
            for nu in [2u32, 4, 8, 16, 32] {
                let m = moser_profile(nu, grid2)?;
                let r2 = strauss_probe(&m, 2.0)?;
                let r4 = strauss_probe(&m, 4.0)?;
                let _ = writeln!(csv, "moser,{nu},2,{r2:.15e}");
                let _ = writeln!(csv, "moser,{nu},4,{r4:.15e}");
                worst2 = worst2.max(r2);
                worst4 = worst4.max(r4);
            }
            fs::write(opts.path("strauss.csv"), csv)?;
            opts.say(&format!(
                "strauss: max ratio p=2: {worst2:.9} (pinned {STRAUSS_C_P2}), p=4: {worst4:.9} (pinned {STRAUSS_C_P4})"
            ));
            if worst2 > STRAUSS_C_P2 || worst4 > STRAUSS_C_P4 {
                return Err(CliError::Runtime(
                    "strauss probe exceeded its pinned constant".into(),
                ));
            }
        }
        ProbeKind::Hardy => {
            let mut csv = String::from("b,gamma,n,value,kind\n");
            for b in [0.25, 0.5, 0.75] {
                for gamma in [2.0, 4.0] {
                    for n in [128usize, 256, 512] {
                        let grid = GridSpec::new(n, 10.0)?;
                        let u = Field::gaussian(grid, 1.0, (0.0, 0.0));
                        let ratio = hardy_check(&u, b, gamma)?;
                        let _ = writeln!(csv, "{b},{gamma},{n},{ratio:.15e},ratio");
                    }
                }
            }
            // failure regime: plateau function, b = 2
            let mut prev = 0.0;
            let mut increasing = true;
            for n in [128usize, 256, 512] {
                let grid = GridSpec::new(n, 4.0)?;
                let u = Field::from_fn(grid, |x, y| {
                    let r = x.hypot(y);
                    Complex64::new(1.0 - snls_core::util::smoothstep(r - 1.0), 0.0)
                });
                let integral = hardy_integral(&u, 2.0, 2.0)?;
                let _ = writeln!(csv, "2.0,2.0,{n},{integral:.15e},divergence");
                if integral <= prev {
                    increasing = false;
                }
                prev = integral;
            }
            fs::write(opts.path("hardy.csv"), csv)?;
            opts.say(&format!(
                "hardy: ratios bounded for b < 1; b = 2 integral strictly increasing under refinement: {increasing}"
            ));
        }
    }
    Ok(())
}
