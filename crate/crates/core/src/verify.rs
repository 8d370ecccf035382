//! Reference checks shared by the `verify` subcommand and the acceptance
//! tests. Each check records measured vs expected value and its tolerance.

use crate::dvr::{self, DvrConfig, SolverError};
use crate::hofd::{self, HofdConfig};
use crate::orthopoly::{self, JacobiParams, PolyError};
use crate::potentials::{self, HyperbolicParams, Phase, Potential, PotentialError, TrigParams};
use crate::tra::{self, TraError};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Tra(#[from] TraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// How `measured` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Absolute,
    Relative,
    /// `measured` is already an error measure; passes when `≤ tolerance`.
    Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub metric: Metric,
    /// Reported but never failing.
    pub diagnostic: bool,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, measured: f64, expected: f64, tolerance: f64, metric: Metric) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            expected,
            tolerance,
            metric,
            diagnostic: false,
        }
    }

    fn bound(criterion: u8, name: impl Into<String>, error: f64, tolerance: f64) -> Self {
        Self::new(criterion, name, error, 0.0, tolerance, Metric::Bound)
    }

    fn count(criterion: u8, name: impl Into<String>, found: usize, expected: usize) -> Self {
        Self::new(criterion, name, found as f64, expected as f64, 0.0, Metric::Absolute)
    }

    pub fn error(&self) -> f64 {
        match self.metric {
            Metric::Absolute => (self.measured - self.expected).abs(),
            Metric::Relative => (self.measured - self.expected).abs() / self.expected.abs(),
            Metric::Bound => self.measured.abs(),
        }
    }

    /// NaN errors fail.
    pub fn passed(&self) -> bool {
        self.diagnostic || self.error() <= self.tolerance
    }
}

/// Check groups selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Table2,
    FreeBox,
    Polys,
    Tra,
    Isospectral,
    Spd,
    All,
}

pub fn run(suite: Suite) -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Table1 {
        out.extend(table1_dvr()?);
        out.extend(table1_hofd()?);
    }
    if all || suite == Suite::Table2 {
        out.extend(table2()?);
    }
    if all || suite == Suite::FreeBox {
        out.extend(free_box()?);
    }
    if all || suite == Suite::Polys {
        out.extend(polynomial_identities(POLY_SEED, POLY_CASES)?);
    }
    if all || suite == Suite::Tra {
        out.extend(tra_consistency()?);
    }
    if all || suite == Suite::Isospectral {
        out.extend(isospectrality()?);
    }
    if all || suite == Suite::Spd {
        out.extend(spd_necessary_condition()?);
    }
    Ok(out)
}

pub fn s1() -> HyperbolicParams {
    HyperbolicParams::new(10.0, -20.0, -30.0, 1.0).expect("valid parameters")
}
pub fn s2() -> HyperbolicParams {
    HyperbolicParams::new(5.0, 2.0, -60.0, 1.0).expect("valid parameters")
}
pub fn s3() -> TrigParams {
    TrigParams::new(5.0, -10.0, 2.0, 1.0).expect("valid parameters")
}
pub fn s4() -> TrigParams {
    TrigParams::new(5.0, -2.0, 2.0, 1.0).expect("valid parameters")
}

/// Published bound-state energies of the hyperbolic well, per set:
/// `[DVR column, HOFD column]`.
pub const TABLE1_S1: [[f64; 3]; 2] = [
    [-17.292792568552, -6.137201742096, -0.888027613576],
    [-17.292792568575, -6.137201742113, -0.888027616853],
];
pub const TABLE1_S2: [[f64; 3]; 2] = [
    [-15.992869980420, -6.101528843700, -1.000393053814],
    [-15.992869980437, -6.101528843717, -1.000393054957],
];

/// Published lowest ten levels of the trigonometric well.
pub const TABLE2_S3: [[f64; 10]; 2] = [
    [
        16.797026, 53.186883, 103.396936, 166.730521, 242.759201, 331.187625, 431.796715, 544.415737, 668.906827,
        805.155660,
    ],
    [
        16.797032, 53.186917, 103.397040, 166.730761, 242.759670, 331.188444, 431.798037, 544.417750, 668.909756,
        805.159769,
    ],
];
pub const TABLE2_S4: [[f64; 10]; 2] = [
    [
        29.961374, 68.685118, 120.819954, 185.823763, 263.346993, 353.139727, 455.011712, 568.811809, 694.416181,
        831.720941,
    ],
    [
        29.961382, 68.685159, 120.820074, 185.824031, 263.347504, 353.140605, 455.013113, 568.813926, 694.419241,
        831.725211,
    ],
];

const POLY_SEED: u64 = 0x5eed_2021;
const POLY_CASES: usize = 200;

fn compare_levels(criterion: u8, label: &str, got: &[f64], want: &[f64], tol: impl Fn(usize) -> f64) -> Vec<Check> {
    let mut out = vec![Check::count(criterion, format!("{label} level count"), got.len(), want.len())];
    for (n, w) in want.iter().enumerate() {
        let g = got.get(n).copied().unwrap_or(f64::NAN);
        out.push(Check::new(criterion, format!("{label} n={n}"), g, *w, tol(n), Metric::Absolute));
    }
    out
}

fn dvr_hyperbolic(p: &HyperbolicParams) -> Result<Vec<f64>, VerifyError> {
    Ok(dvr::hyperbolic_bound_states(p, &DvrConfig::HYPERBOLIC_DEFAULT)?.eigenvalues)
}

fn hofd_hyperbolic(p: &HyperbolicParams) -> Result<Vec<f64>, VerifyError> {
    let cfg = HofdConfig::new(HofdConfig::DEFAULT_M, HofdConfig::DEFAULT_K)?;
    Ok(hofd::hyperbolic_bound_states(p, &cfg, 10)?.eigenvalues)
}

/// DVR at `M = 200`, `b = 10` against the published DVR column.
pub fn table1_dvr() -> Result<Vec<Check>, VerifyError> {
    let tol = |n: usize| if n < 2 { 1e-8 } else { 1e-6 };
    let mut out = Vec::new();
    for (label, p, table) in [("S1 DVR", s1(), TABLE1_S1), ("S2 DVR", s2(), TABLE1_S2)] {
        out.extend(compare_levels(1, label, &dvr_hyperbolic(&p)?, &table[0], tol));
    }
    Ok(out)
}

/// HOFD at `M = 500` with the default stencil against the published HOFD
/// column, plus DVR/HOFD agreement for the two lowest levels.
pub fn table1_hofd() -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    for (label, p, table) in [("S1", s1(), TABLE1_S1), ("S2", s2(), TABLE1_S2)] {
        let hofd = hofd_hyperbolic(&p)?;
        out.extend(compare_levels(2, format!("{label} HOFD").as_str(), &hofd, &table[1], |_| 1e-7));
        let dvr = dvr_hyperbolic(&p)?;
        for n in 0..2 {
            let (d, h) = (dvr.get(n).copied().unwrap_or(f64::NAN), hofd.get(n).copied().unwrap_or(f64::NAN));
            out.push(Check::new(2, format!("{label} DVR vs HOFD n={n}"), h, d, 2e-8, Metric::Absolute));
        }
    }
    Ok(out)
}

/// Lowest ten trigonometric levels from DVR (`M = 300`) and HOFD (`M = 500`).
pub fn table2() -> Result<Vec<Check>, VerifyError> {
    let tol = |n: usize| if n <= 4 { 1e-4 } else { 1e-3 };
    let cfg = HofdConfig::new(HofdConfig::DEFAULT_M, HofdConfig::DEFAULT_K)?;
    let mut out = Vec::new();
    for (label, p, table) in [("S3", s3(), TABLE2_S3), ("S4", s4(), TABLE2_S4)] {
        let dvr = dvr::trig_spectrum(&p, DvrConfig::TRIG_DEFAULT_M, 10, false)?.eigenvalues;
        out.extend(compare_levels(3, &format!("{label} DVR"), &dvr, &table[0], tol));
        let hofd = hofd::box_spectrum(&p, &cfg, 10)?.eigenvalues;
        out.extend(compare_levels(3, &format!("{label} HOFD"), &hofd, &table[1], tol));
    }
    Ok(out)
}

/// `V ≡ 0` on `(0, 1)` with HOFD at `M = 300`, `k = 4`: levels `n²π²/2`.
pub fn free_box() -> Result<Vec<Check>, VerifyError> {
    let cfg = HofdConfig::new(300, 4)?;
    let op = hofd::box_operator_with(&cfg, 1.0, |_| 0.0)?;
    let levels = hofd::spectrum_of(&op, &cfg, 5)?.eigenvalues;
    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let n = (i + 1) as f64;
            Check::new(4, format!("free box n={}", i + 1), *e, n * n * PI * PI / 2.0, 1e-6, Metric::Relative)
        })
        .collect())
}

/// Random admissible `(μ, ν, N)` with `μ + ν ≤ −2N − 1 − margin`.
fn draw_params(rng: &mut StdRng, max_n: usize, margin: f64) -> (f64, f64, usize) {
    let n_max = rng.random_range(0..=max_n);
    let mu = rng.random_range(-0.95..4.0);
    let nu = -2.0 * n_max as f64 - 1.0 - mu - rng.random_range(margin..margin + 4.0);
    (mu, nu, n_max)
}

/// Recursion vs hypergeometric sum, the differential equation, Gram
/// orthogonality and Favard positivity.
pub fn polynomial_identities(seed: u64, cases: usize) -> Result<Vec<Check>, VerifyError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst_oracle = 0.0_f64;
    let mut worst_ode = 0.0_f64;
    let mut favard_violations = 0usize;
    for _ in 0..cases {
        let (mu, nu, n_max) = draw_params(&mut rng, 6, 0.05);
        let jp = JacobiParams::new(mu, nu, n_max)?;
        let n = rng.random_range(0..=n_max);
        let y = 10f64.powf(rng.random_range(0.0..2.0));
        let rec = orthopoly::jacobi_q(n, &jp, y)?;
        let oracle = orthopoly::jacobi_q_oracle(n, &jp, y)?;
        worst_oracle = worst_oracle.max((rec - oracle).abs() / oracle.abs().max(1.0));

        let y_ode = rng.random_range(1.5..50.0);
        worst_ode = worst_ode.max(ode_residual(n, &jp, y_ode)?);

        for k in 0..n_max {
            let c = orthopoly::jacobi_recurrence(k + 1, mu, nu)?.a;
            let d = orthopoly::jacobi_recurrence(k, mu, nu)?.d;
            if !(c * d > 0.0) {
                favard_violations += 1;
            }
        }
    }
    let mut out = vec![
        Check::bound(5, format!("recursion vs hypergeometric sum ({cases} cases)"), worst_oracle, 1e-10),
        Check::bound(5, format!("differential equation residual ({cases} cases)"), worst_ode, 1e-7),
        Check::count(5, format!("Favard c_n d_n <= 0 count ({cases} cases)"), favard_violations, 0),
    ];
    out.extend(gram_checks()?);
    Ok(out)
}

/// Relative residual of the Jacobi differential equation at `y`, with both
/// derivatives from a 9-point central stencil (exact for the degrees used,
/// up to rounding).
pub fn ode_residual(n: usize, jp: &JacobiParams, y: f64) -> Result<f64, VerifyError> {
    let h = 0.05 * y;
    let offsets: Vec<i64> = (-4..=4).collect();
    let w1 = hofd::fd_weights_int(1, &offsets, 0)?;
    let w2 = hofd::fd_weights_int(2, &offsets, 0)?;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (j, o) in offsets.iter().enumerate() {
        let q = orthopoly::jacobi_q(n, jp, y + *o as f64 * h)?;
        d1 += w1[j] * q;
        d2 += w2[j] * q;
    }
    d1 /= h;
    d2 /= h * h;
    let (mu, nu) = (jp.mu(), jp.nu());
    let q = orthopoly::jacobi_q(n, jp, y)?;
    let terms = [
        (y * y - 1.0) * d2,
        ((mu + nu + 2.0) * y + mu - nu) * d1,
        -(n as f64) * (n as f64 + mu + nu + 1.0) * q,
    ];
    // |Q| keeps the scale meaningful at n = 0, where all three terms vanish
    let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(q.abs());
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

/// `∫₁^∞ (y−1)^μ (y+1)^ν Q_n Q_m dy` by tanh-sinh quadrature after
/// `y = 1 + (u/(1−u))^r`, `u ∈ (0, 1)`.
///
/// The power `r` is picked so the transformed integrand vanishes at both ends
/// at least linearly; the quadrature nodes cannot resolve distances to the
/// endpoints below machine epsilon, so integrable singularities left there
/// would cost about `eps^(exponent+1)` in accuracy.
pub fn gram_entry(n: usize, m: usize, jp: &JacobiParams) -> Result<f64, VerifyError> {
    let deg = n.max(m);
    let (mu, nu) = (jp.mu(), jp.nu());
    // integrand ~ (y−1)^μ near 1 and y^decay at infinity
    let decay = mu + nu + (n + m) as f64;
    let slack = (mu + 1.0).min(-(decay + 1.0));
    let r = (2.0 / slack).ceil().max(1.0);
    let failure = std::cell::Cell::new(None);
    let integrand = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u;
        let ln_t = (u / w).ln();
        let ln_ym1 = r * ln_t;
        let y = 1.0 + ln_ym1.exp();
        let ln_jac = r.ln() + (r - 1.0) * ln_t - 2.0 * w.ln();
        let ln_weight = mu * ln_ym1 + nu * (y + 1.0).ln() + ln_jac;
        match orthopoly::jacobi_q_all(deg, jp, y) {
            Ok(q) => ln_weight.exp() * q[n] * q[m],
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let out = quadrature::double_exponential::integrate(integrand, 0.0, 1.0, 1e-15);
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    Ok(out.integral)
}

/// Parameter sets for the Gram checks: `(μ, ν, N)`.
pub const GRAM_CASES: [(f64, f64, usize); 4] = [(0.5, -8.0, 3), (-0.4, -6.5, 2), (2.0, -12.0, 4), (1.2, -7.3, 2)];

fn gram_checks() -> Result<Vec<Check>, VerifyError> {
    let mut worst_off = 0.0_f64;
    let mut worst_diag = 0.0_f64;
    let mut worst_a5 = 0.0_f64;
    for (mu, nu, n_max) in GRAM_CASES {
        let jp = JacobiParams::new(mu, nu, n_max)?;
        let norms = (0..=n_max)
            .map(|n| orthopoly::jacobi_q_norm(n, &jp))
            .collect::<Result<Vec<_>, _>>()?;
        for n in 0..=n_max {
            let diag = gram_entry(n, n, &jp)?;
            worst_diag = worst_diag.max((diag - norms[n]).abs() / norms[n]);
            // at integer ν the sine form is 0 · ∞ and says nothing
            if nu.fract() != 0.0 {
                worst_a5 = worst_a5.max((norm_sine_form(n, mu, nu) - norms[n]).abs() / norms[n]);
            }
            for m in 0..n {
                let off = gram_entry(n, m, &jp)?;
                worst_off = worst_off.max(off.abs() / (norms[n] * norms[m]).sqrt());
            }
        }
    }
    let mut a5 = Check::bound(5, "sine-ratio norm form vs gamma form at non-integer nu (diagnostic)", worst_a5, 1e-8);
    a5.diagnostic = true;
    Ok(vec![
        Check::bound(5, "Gram off-diagonal leakage", worst_off, 1e-8),
        Check::bound(5, "Gram diagonal vs closed-form norm", worst_diag, 1e-6),
        a5,
    ])
}

/// The squared norm written with `sin πν / sin π(μ+ν+1)` instead of the
/// reflected Γ factors.
pub fn norm_sine_form(n: usize, mu: f64, nu: f64) -> f64 {
    use statrs::function::gamma::gamma;
    let nf = n as f64;
    2f64.powf(mu + nu + 1.0) / (2.0 * nf + mu + nu + 1.0) * gamma(nf + mu + 1.0) * gamma(nf + nu + 1.0)
        / (gamma(nf + 1.0) * gamma(nf + mu + nu + 1.0))
        * (PI * nu).sin()
        / (PI * (mu + nu + 1.0)).sin()
}

/// Fine sampling grid for node counting.
pub fn node_grid(p: &Potential) -> Vec<f64> {
    match p {
        Potential::Hyperbolic(h) => (1..20_000).map(|i| i as f64 * 5e-4 * 10.0 / h.kappa()).collect(),
        Potential::Trigonometric(t) => (1..20_000).map(|i| i as f64 * t.width() / 20_000.0).collect(),
    }
}

/// Rayleigh quotient and node count of each TRA wavefunction, using the DVR
/// energies and Hamiltonians of Tables 1 and 2.
pub fn tra_consistency() -> Result<Vec<Check>, VerifyError> {
    let mut out = Vec::new();
    let sets: [(&str, Potential); 4] = [
        ("S1", Potential::Hyperbolic(s1())),
        ("S2", Potential::Hyperbolic(s2())),
        ("S3", Potential::Trigonometric(s3())),
        ("S4", Potential::Trigonometric(s4())),
    ];
    for (label, p) in sets {
        let (h, grid, energies) = match &p {
            Potential::Hyperbolic(hp) => {
                let cfg = DvrConfig::HYPERBOLIC_DEFAULT;
                let h = dvr::hyperbolic_hamiltonian(hp, &cfg)?;
                (h, cfg.grid(), dvr_hyperbolic(hp)?)
            }
            Potential::Trigonometric(tp) => {
                let cfg = DvrConfig::new(DvrConfig::TRIG_DEFAULT_M, tp.width())?;
                let h = dvr::trig_hamiltonian(tp, cfg.m, false)?;
                let e = dvr::trig_spectrum(tp, cfg.m, 10, false)?.eigenvalues;
                (h, cfg.grid(), e)
            }
        };
        let fine = node_grid(&p);
        for (m, e) in energies.iter().enumerate() {
            let sol = tra::assemble_solution(&p, *e)?;
            let psi = tra::eval_wavefunction(&sol, &p, &grid)?;
            let rq = tra::rayleigh_quotient(&h, &psi.psi);
            out.push(Check::new(6, format!("{label} m={m} Rayleigh quotient"), rq, *e, 1e-3, Metric::Relative));
            let nodes = tra::eval_wavefunction(&sol, &p, &fine)?.node_count();
            out.push(Check::count(6, format!("{label} m={m} node count"), nodes, m));
        }
    }
    Ok(out)
}

/// The well and its mirror image share the DVR spectrum (`M = 300`).
pub fn isospectrality() -> Result<Vec<Check>, VerifyError> {
    let p = s3();
    let m = DvrConfig::TRIG_DEFAULT_M;
    let a = dvr::trig_spectrum(&p, m, m - 1, false)?.eigenvalues;
    let b = dvr::trig_spectrum(&p, m, m - 1, true)?.eigenvalues;
    let worst = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / x.abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::count(7, "mirror spectrum size", b.len(), a.len()),
        Check::bound(7, "S3 vs mirror, worst relative gap", worst, 1e-10),
    ])
}

/// No node with `A + B ≥ 0` is classified as bound-only.
pub fn spd_necessary_condition() -> Result<Vec<Check>, VerifyError> {
    let grid = potentials::spd_grid(10.0, 1.0, (-60.0, 40.0), (-60.0, 40.0), 200)?;
    let mut violations = 0;
    let mut bound = 0;
    for (i, a) in grid.a_values.iter().enumerate() {
        for (j, b) in grid.b_values.iter().enumerate() {
            let phase = grid.phases[i][j];
            if phase == Phase::B {
                bound += 1;
                if a + b >= 0.0 {
                    violations += 1;
                }
            }
        }
    }
    let mut populated = Check::new(8, "nodes classified B (diagnostic)", bound as f64, 0.0, 0.0, Metric::Bound);
    populated.diagnostic = true;
    Ok(vec![Check::count(8, "B nodes with A + B >= 0", violations, 0), populated])
}
