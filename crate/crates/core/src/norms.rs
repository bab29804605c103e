//! Discrete norms: L2, H1, Lp, L-infinity, the interpolation norm H_mu and a
//! windowed Hoelder seminorm estimator.

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::field::Field;
use crate::rng::Rng;
use crate::spectral::forward_transform;

/// Window half-width (in cells) for the Hoelder pair scan.
const HOLDER_WINDOW: usize = 8;
/// Fixed stream for the far-pair sample so the estimator is a pure function.
const HOLDER_SEED: u64 = 0x484f_4c44_4552;

/// The basic norms of a field, gradients taken spectrally.
#[derive(Debug, Clone, Copy)]
pub struct FieldNorms {
    pub l2: f64,
    pub grad_l2: f64,
    pub h1: f64,
    pub linf: f64,
}

pub fn norms(f: &Field) -> FieldNorms {
    let spec = forward_transform(f);
    let l2_sq = spec.l2_norm_sq();
    let grad_sq = spec.grad_norm_sq();
    FieldNorms {
        l2: l2_sq.sqrt(),
        grad_l2: grad_sq.sqrt(),
        h1: (l2_sq + grad_sq).sqrt(),
        linf: f.max_abs(),
    }
}

impl FieldNorms {
    /// ||u||_{H_mu}^2 = ||grad u||^2 + mu^2 ||u||^2, exact by construction
    /// from the stored components.
    pub fn h_mu_sq(&self, mu: f64) -> f64 {
        self.grad_l2 * self.grad_l2 + mu * mu * self.l2 * self.l2
    }

    pub fn h_mu(&self, mu: f64) -> f64 {
        self.h_mu_sq(mu).sqrt()
    }
}

/// (h^2 sum |u|^p)^{1/p}.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    f.grid()
        .quadrature(f.values().iter().map(|z| z.norm().powf(p)))
        .powf(1.0 / p)
}

/// Hoelder seminorm estimate sup |u(x)-u(y)| / |x-y|^beta over all pairs
/// within an 8-cell window plus 10n seeded far pairs. Distances are taken in
/// the plane (not periodically); the fields of interest are supported away
/// from the boundary where nearby pairs dominate the seminorm.
pub fn holder_seminorm(f: &Field, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(CoreError::ParamDomain {
            name: "beta",
            value: beta,
            domain: "(0, 1]",
        });
    }
    let grid = f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let vals = f.values();

    let windowed = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for j in 0..n {
                let a = vals[i * n + j];
                for di in 0..=HOLDER_WINDOW {
                    if i + di >= n {
                        break;
                    }
                    let j_lo = if di == 0 {
                        j + 1
                    } else {
                        j.saturating_sub(HOLDER_WINDOW)
                    };
                    for jj in j_lo..=(j + HOLDER_WINDOW).min(n - 1) {
                        if di == 0 && jj <= j {
                            continue;
                        }
                        let b = vals[(i + di) * n + jj];
                        let dj = jj as f64 - j as f64;
                        let dist = h * ((di * di) as f64 + dj * dj).sqrt();
                        let ratio = (a - b).norm() / dist.powf(beta);
                        if ratio > best {
                            best = ratio;
                        }
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);

    let mut rng = Rng::new(HOLDER_SEED);
    let mut far = 0.0f64;
    for _ in 0..10 * n {
        let a = rng.index(n * n);
        let b = rng.index(n * n);
        if a == b {
            continue;
        }
        let (ai, aj) = grid.pair_of(a);
        let (bi, bj) = grid.pair_of(b);
        let dist = h * (((ai as f64 - bi as f64).powi(2)) + (aj as f64 - bj as f64).powi(2)).sqrt();
        let ratio = (vals[a] - vals[b]).norm() / dist.powf(beta);
        if ratio > far {
            far = ratio;
        }
    }
    Ok(windowed.max(far))
}

/// Full C^beta norm: L-infinity plus the Hoelder seminorm.
pub fn holder_norm(f: &Field, beta: f64) -> Result<f64> {
    Ok(f.max_abs() + holder_seminorm(f, beta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::rng::Rng;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn zero_field_has_zero_norms() {
        let f = Field::zeros(GridSpec::new(32, 4.0).unwrap());
        let n = norms(&f);
        assert_eq!(n.l2, 0.0);
        assert_eq!(n.grad_l2, 0.0);
        assert_eq!(n.h1, 0.0);
        assert_eq!(n.linf, 0.0);
        assert_eq!(holder_seminorm(&f, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_l2_and_gradient_closed_forms() {
        // u = A exp(-|x|^2/2): ||u||^2 = pi A^2 and ||grad u||^2 = pi A^2.
        let grid = GridSpec::new(256, 10.0).unwrap();
        let a = 1.3;
        let f = Field::gaussian(grid, a, (0.0, 0.0));
        let n = norms(&f);
        let exact = std::f64::consts::PI * a * a;
        assert!((n.l2 * n.l2 - exact).abs() / exact < 1e-10);
        assert!((n.grad_l2 * n.grad_l2 - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn h_mu_is_exact_composition() {
        let grid = GridSpec::new(64, 5.0).unwrap();
        let mut rng = Rng::new(5);
        let f = Field::new(
            grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.normal(), rng.normal()))
                .collect(),
        )
        .unwrap();
        let n = norms(&f);
        let lhs = n.h_mu_sq(1.0);
        let rhs = n.grad_l2 * n.grad_l2 + n.l2 * n.l2;
        assert_eq!(lhs, rhs);
        assert!((n.h_mu(1.0) - n.h1).abs() < 1e-12 * n.h1);
    }

    #[test]
    fn holder_seminorm_of_linear_ramp() {
        // u = x has |u(x)-u(y)|/|x-y| <= 1 with equality on axis pairs.
        let grid = GridSpec::new(64, 2.0).unwrap();
        let f = Field::from_fn(grid, |x, _| Complex64::new(x, 0.0));
        let s = holder_seminorm(&f, 1.0).unwrap();
        assert!((s - 1.0).abs() < 1e-12, "got {s}");
    }

    #[test]
    fn holder_rejects_bad_beta() {
        let f = Field::zeros(GridSpec::new(16, 1.0).unwrap());
        assert!(holder_seminorm(&f, 0.0).is_err());
        assert!(holder_seminorm(&f, 1.5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn holder_seminorm_scales_linearly(c in 0.05f64..20.0, seed in 0u64..500) {
            let grid = GridSpec::new(16, 2.0).unwrap();
            let mut rng = Rng::new(seed);
            let f = Field::new(
                grid,
                (0..grid.len())
                    .map(|_| Complex64::new(rng.normal(), rng.normal()))
                    .collect(),
            )
            .unwrap();
            let s1 = holder_seminorm(&f, 0.5).unwrap();
            let s2 = holder_seminorm(&f.scale(c), 0.5).unwrap();
            prop_assert!((s2 - c * s1).abs() <= 1e-12 * s2.max(1.0));
        }
    }
}
