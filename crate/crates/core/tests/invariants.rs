//! Property-based invariants spanning modules: transform isometries,
//! rearrangement norm preservation, and gauge structure of the flow.

use num_complex::Complex64;
use proptest::prelude::*;
use snls_core::field::Field;
use snls_core::functionals::mass;
use snls_core::grid::GridSpec;
use snls_core::norms::{lp_norm, norms};
use snls_core::rearrange::{hardy_littlewood_check, schwarz_symmetrization};
use snls_core::spectral::{forward_transform, inverse_transform};

fn random_field(grid: GridSpec, seed: u64, scale: f64) -> Field {
    let mut rng = snls_core::rng::Rng::new(seed);
    Field::new(
        grid,
        (0..grid.len())
            .map(|_| Complex64::new(rng.normal() * scale, rng.normal() * scale))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_round_trip(seed in 0u64..10_000) {
        let grid = GridSpec::new(32, 3.0).unwrap();
        let f = random_field(grid, seed, 1.0);
        let spec = forward_transform(&f);
        let phys_norm = f.abs2_integral();
        prop_assert!((spec.l2_norm_sq() - phys_norm).abs() <= 1e-12 * phys_norm);
        let back = inverse_transform(&spec);
        let err = f.sub(&back).unwrap().abs2_integral().sqrt();
        prop_assert!(err <= 1e-12 * phys_norm.sqrt());
    }

    #[test]
    fn symmetrization_preserves_lp_norms(seed in 0u64..10_000, p in 1.0f64..6.0) {
        let grid = GridSpec::new(16, 2.0).unwrap();
        let mut rng = snls_core::rng::Rng::new(seed);
        let f = Field::new(
            grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.uniform() * 2.0, 0.0))
                .collect(),
        )
        .unwrap();
        let sym = schwarz_symmetrization(&f).unwrap();
        let a = lp_norm(&f, p);
        let b = lp_norm(&sym, p);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-30));
    }

    #[test]
    fn hardy_littlewood_on_random_pairs(seed in 0u64..10_000) {
        let grid = GridSpec::new(16, 2.0).unwrap();
        let mut rng = snls_core::rng::Rng::new(seed);
        let f = Field::new(
            grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.uniform() * 4.0, 0.0))
                .collect(),
        )
        .unwrap();
        let g = Field::new(
            grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.uniform() * 2.5, 0.0))
                .collect(),
        )
        .unwrap();
        prop_assert!(hardy_littlewood_check(&f, &g).unwrap().holds);
    }

    #[test]
    fn mass_is_phase_and_translation_invariant(seed in 0u64..10_000, theta in 0.0f64..6.3, di in -5i64..5, dj in -5i64..5) {
        let grid = GridSpec::new(16, 2.0).unwrap();
        let f = random_field(grid, seed, 0.8);
        let m = mass(&f);
        let m_rot = mass(&f.phase_rotate(theta));
        prop_assert!((m_rot - m).abs() <= 1e-12 * m.max(1e-30));
        let m_shift = mass(&f.translate_cells(di, dj));
        prop_assert!((m_shift - m).abs() <= 1e-12 * m.max(1e-30));
    }

    #[test]
    fn h1_norm_dominates_l2(seed in 0u64..10_000) {
        let grid = GridSpec::new(16, 2.0).unwrap();
        let f = random_field(grid, seed, 1.0);
        let n = norms(&f);
        prop_assert!(n.h1 >= n.l2);
        prop_assert!(n.h1 >= n.grad_l2);
    }
}
