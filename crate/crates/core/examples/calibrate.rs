//! Dev-time calibration sweeps: prints the empirical constants that get
//! pinned as regression values. Not part of the test suite.

use num_complex::Complex64;
use snls_core::diagnostics::strichartz_probe;
use snls_core::evolve::{evolve_strang, EvolveConfig, Integrator};
use snls_core::field::Field;
use snls_core::functionals::{
    hamiltonian, moser_profile, moser_trudinger_sweep, strauss_probe, MtNormalization,
};
use snls_core::grid::GridSpec;
use snls_core::nonlin::{calibrate_difference_constant, PhysParams};
use snls_core::norms::norms;
use snls_core::weight::SingularWeight;

fn cfg(dt: f64, t_final: f64) -> EvolveConfig {
    EvolveConfig {
        dt,
        t_final,
        integrator: Integrator::Strang,
        picard_iters: 6,
        snapshot_stride: 1_000_000,
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "all" || which == "diff" {
        let alpha = 3.0 * std::f64::consts::PI;
        let c = calibrate_difference_constant(0.1, alpha, 20_000, 0).unwrap();
        println!("DIFF_BOUND_C_EPS01_B05 = {c:.6}");
    }

    if which == "all" || which == "strauss" {
        let mut worst2 = 0.0f64;
        let mut worst4 = 0.0f64;
        for (n, l, a) in [(256usize, 10.0, 0.3), (256, 10.0, 1.0), (512, 10.0, 2.0)] {
            let grid = GridSpec::new(n, l).unwrap();
            let u = Field::gaussian(grid, a, (0.0, 0.0));
            worst2 = worst2.max(strauss_probe(&u, 2.0).unwrap());
            worst4 = worst4.max(strauss_probe(&u, 4.0).unwrap());
        }
        for nu in [2u32, 4, 8, 16, 32] {
            let grid = GridSpec::new(512, 2.0).unwrap();
            let m = moser_profile(nu, grid).unwrap();
            worst2 = worst2.max(strauss_probe(&m, 2.0).unwrap());
            worst4 = worst4.max(strauss_probe(&m, 4.0).unwrap());
        }
        println!("STRAUSS_C_P2 = {:.6} (pinned = max * 1.05)", worst2 * 1.05);
        println!("STRAUSS_C_P4 = {:.6}", worst4 * 1.05);
    }

    if which == "all" || which == "strichartz" {
        for seed in [0u64, 1, 2] {
            let grid = GridSpec::new(128, 10.0).unwrap();
            let rep = strichartz_probe(32, grid, 1.0, seed).unwrap();
            println!("strichartz seed={seed}: max_ratio = {:.6}", rep.max_ratio);
        }
    }

    if which == "all" || which == "amplitude" {
        // H(A) for the gaussian family at b = 0.5, n = 256, L = 10
        let grid = GridSpec::new(256, 10.0).unwrap();
        let w = SingularWeight::new(grid, 0.5).unwrap();
        let p = PhysParams::new(0.5).unwrap();
        for a in [0.2, 0.3, 0.37, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.86, 0.9] {
            let u = Field::gaussian(grid, a, (0.0, 0.0));
            let r = hamiltonian(&u, &w, &p).unwrap();
            println!(
                "A={a}: H={:.6} kin={:.6} pot={:.6} M={:.6}",
                r.hamiltonian, r.kinetic, r.potential, r.mass
            );
        }
    }

    if which == "all" || which == "drift" {
        // endpoint |H(T)-H(0)| at several dt for the acceptance-style run
        let grid = GridSpec::new(256, 10.0).unwrap();
        let w = SingularWeight::new(grid, 0.5).unwrap();
        let p = PhysParams::new(0.5).unwrap();
        for a in [0.37f64, 0.4] {
            let u = Field::gaussian(grid, a, (0.0, 0.0));
            let h0 = hamiltonian(&u, &w, &p).unwrap().hamiltonian;
            let mut prev: Option<f64> = None;
            for dt in [4e-3, 2e-3, 1e-3, 5e-4] {
                let end = evolve_strang(&u, &cfg(dt, 1.0), &w, &p, |_| Ok(())).unwrap();
                let d = (hamiltonian(&end.u, &w, &p).unwrap().hamiltonian - h0).abs();
                let ratio = prev.map(|pd| pd / d).unwrap_or(f64::NAN);
                println!("A={a} dt={dt:.0e}: |dH|={d:.3e} ratio_from_prev={ratio:.3}");
                prev = Some(d);
            }
        }
    }

    if which == "all" || which == "order" {
        let grid = GridSpec::new(256, 10.0).unwrap();
        let w = SingularWeight::new(grid, 0.5).unwrap();
        let p = PhysParams::new(0.5).unwrap();
        let u = Field::gaussian(grid, 0.37, (0.0, 0.0));
        let t = 0.5;
        let dt = 2e-3;
        let run = |dt: f64| {
            evolve_strang(&u, &cfg(dt, t), &w, &p, |_| Ok(()))
                .unwrap()
                .u
        };
        let ref_u = run(dt / 8.0);
        let e1 = norms(&run(dt).sub(&ref_u).unwrap()).h1;
        let e2 = norms(&run(dt / 2.0).sub(&ref_u).unwrap()).h1;
        println!(
            "order study: e(dt)={e1:.3e} e(dt/2)={e2:.3e} order={:.3}",
            (e1 / e2).log2()
        );
    }

    if which == "all" || which == "sweep" {
        for n in [1024usize, 2048] {
            let grid = GridSpec::new(n, 2.0).unwrap();
            for b in [0.25f64, 0.5, 0.75] {
                let a_star = 2.0 * std::f64::consts::PI * (2.0 - b);
                let n_params: Vec<u32> = if n == 1024 {
                    vec![2, 4, 8, 16, 32]
                } else {
                    vec![2, 4, 8, 16, 32, 64, 128, 256]
                };
                let sweep = moser_trudinger_sweep(
                    b,
                    &[0.8 * a_star, 1.0 * a_star, 1.2 * a_star],
                    &n_params,
                    grid,
                    MtNormalization::GradientBall,
                )
                .unwrap();
                for row in &sweep.rows {
                    let first = row.ratios.first().unwrap().1;
                    let last = row.ratios.last().unwrap().1;
                    let monotone = row.ratios.windows(2).all(|v| v[1].1 > v[0].1);
                    println!(
                        "n={n} b={b} alpha/a*={:.2}: growth={:.2} monotone={monotone} verdict={} ratios={:?}",
                        row.alpha / a_star,
                        last / first,
                        row.verdict,
                        row.ratios.iter().map(|(_, r)| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    if which == "all" || which == "profilenorm" {
        for n in [1024usize, 2048] {
            let grid = GridSpec::new(n, 2.0).unwrap();
            for nu in [2u32, 8, 32, 64, 128] {
                let m = moser_profile(nu, grid).unwrap();
                let g = norms(&m).grad_l2;
                println!("n={n} nu={nu}: grad norm = {g:.5}");
            }
        }
    }

    if which == "all" || which == "logest" {
        let grid = GridSpec::new(128, 10.0).unwrap();
        let lambda = 2.0 / std::f64::consts::PI;
        let mut max_c = f64::NEG_INFINITY;
        for i in 0..=29 {
            let a = 0.1 + i as f64 * 0.1;
            let u = Field::gaussian(grid, a, (0.0, 0.0));
            let probe = snls_core::functionals::log_estimate_probe(&u, lambda, 1.0, 0.5).unwrap();
            max_c = max_c.max(probe.needed_c);
        }
        println!("log estimate gaussians: max needed_C = {max_c:.6}");
        let grid2 = GridSpec::new(512, 2.0).unwrap();
        for nu in [4u32, 16] {
            let m = moser_profile(nu, grid2).unwrap();
            let probe = snls_core::functionals::log_estimate_probe(&m, lambda, 1.0, 0.5).unwrap();
            println!(
                "log estimate moser nu={nu}: needed_C = {:.6}",
                probe.needed_c
            );
            max_c = max_c.max(probe.needed_c);
        }
        for seed in [1u64, 2] {
            let u = snls_core::diagnostics::random_band_limited(
                GridSpec::new(128, 10.0).unwrap(),
                seed,
            );
            let probe = snls_core::functionals::log_estimate_probe(&u, lambda, 1.0, 0.5).unwrap();
            println!(
                "log estimate random seed={seed}: needed_C = {:.6}",
                probe.needed_c
            );
            max_c = max_c.max(probe.needed_c);
        }
        println!("log estimate family max = {max_c:.6}");
    }

    if which == "all" || which == "gaussianfree" {
        // check the modulus law under e^{it Lap} for both gaussian widths
        let grid = GridSpec::new(256, 10.0).unwrap();
        let t = 0.7f64;
        let narrow = Field::gaussian(grid, 0.8, (0.0, 0.0));
        let ut = snls_core::evolve::linear_propagator(&narrow, t);
        let spread = 1.0 + 4.0 * t * t;
        let mut worst = 0.0f64;
        for idx in 0..grid.len() {
            let (i, j) = grid.pair_of(idx);
            let r2 = grid.radius(i, j).powi(2);
            let expected = 0.8 / spread.sqrt() * (-r2 / (2.0 * spread)).exp();
            worst = worst.max((ut.values()[idx].norm() - expected).abs());
        }
        println!("narrow gaussian (1+4t^2) law: max deviation {worst:.3e}");
        let wide = Field::from_fn(grid, |x, y| {
            Complex64::new(0.8 * (-0.25 * (x * x + y * y)).exp(), 0.0)
        });
        let ut = snls_core::evolve::linear_propagator(&wide, t);
        let spread = 1.0 + t * t;
        let mut worst = 0.0f64;
        for idx in 0..grid.len() {
            let (i, j) = grid.pair_of(idx);
            let r2 = grid.radius(i, j).powi(2);
            let expected = 0.8 / spread.sqrt() * (-r2 / (4.0 * spread)).exp();
            worst = worst.max((ut.values()[idx].norm() - expected).abs());
        }
        println!("wide gaussian (1+t^2) law: max deviation {worst:.3e}");
    }
}
