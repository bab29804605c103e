//! Conserved quantities, the criticality classifier, and the functional
//! inequalities: weighted Moser-Trudinger, Hardy-type, log estimate, Strauss.

use std::fmt;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::nonlin::{hamiltonian_density, PhysParams};
use crate::norms::{holder_norm, norms};
use crate::spectral::forward_transform;
use crate::util::smoothstep;
use crate::weight::{origin_cell_average, SingularWeight};

/// Half-width of the decision band around H = 1: quadrature noise makes
/// exact equality meaningless, the band makes the trichotomy decidable.
pub const CRITICALITY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criticality::Subcritical => write!(f, "Subcritical"),
            Criticality::Critical => write!(f, "Critical"),
            Criticality::Supercritical => write!(f, "Supercritical"),
        }
    }
}

pub fn classify(hamiltonian: f64) -> Criticality {
    if (hamiltonian - 1.0).abs() <= CRITICALITY_BAND {
        Criticality::Critical
    } else if hamiltonian < 1.0 {
        Criticality::Subcritical
    } else {
        Criticality::Supercritical
    }
}

/// Mass, kinetic and potential energy, and the criticality class of a state.
#[derive(Debug, Clone, Copy)]
pub struct EnergyReport {
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub hamiltonian: f64,
    pub class: Criticality,
}

/// M(u) = ||u||_L2^2.
pub fn mass(u: &Field) -> f64 {
    u.abs2_integral()
}

/// H(u) = ||grad u||^2 + (1/alpha) int w (e^{alpha|u|^2} - 1 - alpha|u|^2).
pub fn hamiltonian(u: &Field, w: &SingularWeight, p: &PhysParams) -> Result<EnergyReport> {
    u.grid().check_same(&w.grid())?;
    if w.b() != p.b() {
        return Err(CoreError::ParamMismatch {
            weight_b: w.b(),
            param_b: p.b(),
        });
    }
    let alpha = p.alpha();
    let kinetic = forward_transform(u).grad_norm_sq();
    let mut density_err: Option<CoreError> = None;
    let potential = u
        .grid()
        .quadrature(u.values().iter().zip(w.values().iter()).map(|(&z, &wv)| {
            match hamiltonian_density(z, alpha) {
                Ok(d) => wv * d,
                Err(e) => {
                    density_err = Some(e);
                    0.0
                }
            }
        }));
    if let Some(e) = density_err {
        return Err(e);
    }
    let h = kinetic + potential;
    Ok(EnergyReport {
        mass: mass(u),
        kinetic,
        potential,
        hamiltonian: h,
        class: classify(h),
    })
}

/// Weighted integral int |u|^gamma / |x|^b. For b < 2 the origin cell uses
/// the exact cell average of the weight; for b >= 2 (the failure regime of
/// the Hardy estimate) the cell average diverges, so the origin cell is
/// excluded and the punctured sum alone exhibits the unbounded growth.
pub fn hardy_integral(u: &Field, b: f64, gamma: f64) -> Result<f64> {
    if gamma < 2.0 {
        return Err(CoreError::ParamDomain {
            name: "gamma",
            value: gamma,
            domain: "[2, inf)",
        });
    }
    if !(b > 0.0) {
        return Err(CoreError::ParamDomain {
            name: "b",
            value: b,
            domain: "(0, inf)",
        });
    }
    let grid = u.grid();
    let o = grid.n() / 2;
    let origin = if b < 2.0 {
        origin_cell_average(grid.spacing(), b)
    } else {
        0.0
    };
    Ok(grid.quadrature((0..grid.len()).map(|idx| {
        let (i, j) = grid.pair_of(idx);
        let w = if i == o && j == o {
            origin
        } else {
            grid.radius(i, j).powf(-b)
        };
        w * u.values()[idx].norm().powf(gamma)
    })))
}

/// hardy_integral(u) / ||u||_{H1}^gamma: bounded uniformly for b < 2.
pub fn hardy_check(u: &Field, b: f64, gamma: f64) -> Result<f64> {
    let integral = hardy_integral(u, b, gamma)?;
    let h1 = norms(u).h1;
    if h1 == 0.0 {
        return Err(CoreError::EmptyInput("hardy_check on the zero field"));
    }
    Ok(integral / h1.powf(gamma))
}

/// Truncated-logarithm Moser profile with parameter nu >= 2:
/// sqrt(log nu / 2 pi) on r <= 1/nu, log(1/r)/sqrt(2 pi log nu) on
/// 1/nu < r <= 1, zero outside, blended over one cell at both seams.
/// The continuum profile has unit Dirichlet energy.
pub fn moser_profile(n_param: u32, grid: GridSpec) -> Result<Field> {
    if n_param < 2 {
        return Err(CoreError::ParamDomain {
            name: "n_param",
            value: n_param as f64,
            domain: "[2, inf)",
        });
    }
    let lambda = (n_param as f64).ln();
    let peak = (lambda / std::f64::consts::TAU).sqrt();
    let scale = 1.0 / (std::f64::consts::TAU * lambda).sqrt();
    let h = grid.spacing();
    let inner = 1.0 / n_param as f64;
    Ok(Field::from_fn(grid, |x, y| {
        let r = x.hypot(y);
        let log_branch = if r > 0.0 {
            (1.0 / r).ln() * scale
        } else {
            peak
        };
        // inner seam: plateau -> log branch across one cell
        let s_in = smoothstep((r - (inner - 0.5 * h)) / h);
        let v = (1.0 - s_in) * peak + s_in * log_branch;
        // outer seam: fade to zero across one cell around r = 1
        let s_out = 1.0 - smoothstep((r - (1.0 - 0.5 * h)) / h);
        Complex64::new(v.max(0.0) * s_out, 0.0)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Diverging,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Bounded => write!(f, "Bounded"),
            Verdict::Diverging => write!(f, "Diverging"),
        }
    }
}

/// Which unit ball the sweep profiles are normalized into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtNormalization {
    /// ||grad u|| <= 1 (sharp threshold alpha < 2 pi (2-b)).
    GradientBall,
    /// ||u||_{H1} <= 1 (the threshold becomes admissible).
    H1Ball,
}

/// One alpha row of a Moser-Trudinger sweep.
#[derive(Debug, Clone)]
pub struct MoserSweepRow {
    pub alpha: f64,
    /// (n_param, ratio) per concentration step; ratio is the weighted
    /// exponential integral over alpha times the weighted L2 integral, so
    /// the linearized regime sits at ratio = 1.
    pub ratios: Vec<(u32, f64)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct MoserSweepResult {
    pub b: f64,
    pub rows: Vec<MoserSweepRow>,
}

impl MoserSweepResult {
    /// CSV with the columns b, alpha, n_param, ratio, verdict.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("b,alpha,n_param,ratio,verdict\n");
        for row in &self.rows {
            for &(nu, ratio) in &row.ratios {
                out.push_str(&format!(
                    "{},{},{},{:.15e},{}\n",
                    self.b, row.alpha, nu, ratio, row.verdict
                ));
            }
        }
        out
    }
}

/// Divergence heuristic: a ratio sequence is Diverging when it grows
/// monotonically and its last value exceeds 10x its first.
const SWEEP_GROWTH_FACTOR: f64 = 10.0;

fn sweep_verdict(ratios: &[(u32, f64)]) -> Verdict {
    let monotone = ratios.windows(2).all(|w| w[1].1 > w[0].1);
    let grown = ratios.last().unwrap().1 > SWEEP_GROWTH_FACTOR * ratios[0].1;
    if monotone && grown {
        Verdict::Diverging
    } else {
        Verdict::Bounded
    }
}

/// Probe the weighted Moser-Trudinger inequality with the concentrating
/// profile family. For each alpha the ratio
///   int w (e^{alpha |u|^2} - 1) / (alpha int w |u|^2)
/// is tracked along n_params; the sharp threshold alpha* = 2 pi (2 - b)
/// separates bounded ratio sequences from divergent ones.
pub fn moser_trudinger_sweep(
    b: f64,
    alphas: &[f64],
    n_params: &[u32],
    grid: GridSpec,
    normalization: MtNormalization,
) -> Result<MoserSweepResult> {
    if !(b > 0.0 && b < 2.0) {
        return Err(CoreError::WeightExponent(b));
    }
    if alphas.is_empty() {
        return Err(CoreError::EmptyInput("alphas"));
    }
    if n_params.is_empty() {
        return Err(CoreError::EmptyInput("n_params"));
    }
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(CoreError::ParamDomain {
            name: "alpha",
            value: *alphas.iter().find(|&&a| !(a > 0.0)).unwrap(),
            domain: "(0, inf)",
        });
    }
    let w = SingularWeight::new(grid, b)?;

    // per profile: the weighted L2 integral and, per alpha, the weighted
    // exponential integral of the normalized profile
    let mut rows: Vec<MoserSweepRow> = alphas
        .iter()
        .map(|&alpha| MoserSweepRow {
            alpha,
            ratios: Vec::with_capacity(n_params.len()),
            verdict: Verdict::Bounded,
        })
        .collect();

    for &nu in n_params {
        let raw = moser_profile(nu, grid)?;
        let nn = norms(&raw);
        let scale = match normalization {
            MtNormalization::GradientBall => {
                if nn.grad_l2 > 1.0 {
                    1.0 / nn.grad_l2
                } else {
                    1.0
                }
            }
            MtNormalization::H1Ball => 1.0 / nn.h1,
        };
        let profile = raw.scale(scale);
        let weighted_l2 = w.weighted_power_integral(&profile, 2.0)?;
        for row in rows.iter_mut() {
            let alpha = row.alpha;
            let lhs = grid.quadrature(
                profile
                    .values()
                    .iter()
                    .zip(w.values().iter())
                    .map(|(z, &wv)| wv * (alpha * z.norm_sqr()).exp_m1()),
            );
            row.ratios.push((nu, lhs / (alpha * weighted_l2)));
        }
    }
    for row in rows.iter_mut() {
        row.verdict = sweep_verdict(&row.ratios);
    }
    Ok(MoserSweepResult { b, rows })
}

/// Result of a log-estimate probe: needed_C is the smallest constant making
///   ||u||_inf^2 <= lambda ||u||_{H_mu}^2 log(C + 8^beta mu^-beta ||u||_{C^beta} / ||u||_{H_mu})
/// hold for this field.
#[derive(Debug, Clone, Copy)]
pub struct LogEstimateProbe {
    pub lhs: f64,
    pub needed_c: f64,
}

pub fn log_estimate_probe(u: &Field, lambda: f64, mu: f64, beta: f64) -> Result<LogEstimateProbe> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::ParamDomain {
            name: "beta",
            value: beta,
            domain: "(0, 1)",
        });
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(CoreError::ParamDomain {
            name: "mu",
            value: mu,
            domain: "(0, 1]",
        });
    }
    let threshold = 1.0 / (std::f64::consts::TAU * beta);
    if !(lambda > threshold) {
        return Err(CoreError::ParamDomain {
            name: "lambda",
            value: lambda,
            domain: "(1/(2 pi beta), inf)",
        });
    }
    let n = norms(u);
    let h_mu = n.h_mu(mu);
    if h_mu == 0.0 {
        return Err(CoreError::EmptyInput(
            "log_estimate_probe on the zero field",
        ));
    }
    let c_beta = holder_norm(u, beta)?;
    let lhs = n.linf * n.linf;
    let needed_c =
        (lhs / (lambda * h_mu * h_mu)).exp() - 8f64.powf(beta) * mu.powf(-beta) * c_beta / h_mu;
    Ok(LogEstimateProbe { lhs, needed_c })
}

/// Strauss decay probe for radial fields: max over r > h of
/// |u(r)| r^{2/(2+p)} / ||u||_{H1}. The input must be radial within a
/// 1e-8-relative tolerance.
pub fn strauss_probe(u: &Field, p: f64) -> Result<f64> {
    if p < 2.0 {
        return Err(CoreError::ParamDomain {
            name: "p",
            value: p,
            domain: "[2, inf)",
        });
    }
    let grid = u.grid();
    let linf = u.max_abs();
    if linf == 0.0 {
        return Ok(0.0);
    }
    // radial tolerance: compare the four axis reflections of each cell
    let n = grid.n();
    let mut asym: f64 = 0.0;
    for i in 1..n {
        for j in 1..n {
            let a = u.value(i, j);
            let b = u.value(n - i, j);
            let c = u.value(i, n - j);
            asym = asym.max((a - b).norm()).max((a - c).norm());
        }
    }
    if asym > 1e-8 * linf {
        return Err(CoreError::NotRadial(asym / linf));
    }
    let h1 = norms(u).h1;
    let h = grid.spacing();
    let expo = 2.0 / (2.0 + p);
    let mut worst: f64 = 0.0;
    for idx in 0..grid.len() {
        let (i, j) = grid.pair_of(idx);
        let r = grid.radius(i, j);
        if r > h {
            let v = u.values()[idx].norm() * r.powf(expo);
            if v > worst {
                worst = v;
            }
        }
    }
    Ok(worst / h1)
}

/// Calibrated Strauss constants (observed max x 1.05 over the Gaussian and
/// Moser families at n = 512, L = 2..10), pinned as regression values.
pub const STRAUSS_C_P2: f64 = 0.2744;
pub const STRAUSS_C_P4: f64 = 0.2953;
