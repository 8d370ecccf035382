//! Tridiagonal-representation series for the bound states.
//!
//! Given a bound-state energy (from [`crate::dvr`] or [`crate::hofd`]), the
//! wavefunction is a finite sum over the Jacobi basis
//!
//! ```text
//! φ_n(y) = (y − 1)^α (y + 1)^(−β) Q_n^(μ,ν)(y)
//! ```
//!
//! with expansion coefficients `H_n / G_n` (or `H̃_n / G_n`), where `H_n` is a
//! TRA polynomial and `G_n` the scale from [`orthopoly::g_factor`]. The
//! hyperbolic family uses `y = 1 + 2/sinh²(κx)`, the trigonometric family
//! `y = 1 + 2 tan²(ρx)`. The overall factor `f_0(z)` has no known closed form
//! and is set to one, so every wavefunction here is un-normalized.

use crate::linalg::DenseMatrix;
use crate::orthopoly::{self, largest_integer_below, JacobiParams, PolyError, TraBranch, TraPolyParams};
use crate::potentials::{HyperbolicParams, Potential, TrigParams};
use serde::Serialize;
use thiserror::Error;

/// γ of the TRA polynomials for both potential families (γ² = 1/16).
pub const GAMMA: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraError {
    #[error("energy {energy} is outside the TRA validity window: {reason}")]
    OutsideValidity { energy: f64, reason: &'static str },
    #[error("energy {energy} gives truncation N = {n}; no TRA bound state is representable")]
    NotRepresentable { energy: f64, n: i64 },
    #[error("{name} = {value} lies on a branch boundary; z or θ is degenerate")]
    BranchBoundary { name: &'static str, value: f64 },
    #[error("no TRA branch covers {name} = {value}")]
    NoBranch { name: &'static str, value: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Potential family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hyperbolic,
    Trigonometric,
}

impl Family {
    pub fn of(p: &Potential) -> Family {
        match p {
            Potential::Hyperbolic(_) => Family::Hyperbolic,
            Potential::Trigonometric(_) => Family::Trigonometric,
        }
    }
}

/// Jacobi-basis parameters for one bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraBasisParams {
    pub family: Family,
    pub mu: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `2E/κ²` or `2E/ρ²`, depending on the family.
    pub epsilon: f64,
    /// Highest degree in the series.
    pub n_max: usize,
}

impl TraBasisParams {
    pub fn jacobi(&self) -> Result<JacobiParams, PolyError> {
        JacobiParams::new(self.mu, self.nu, self.n_max)
    }
}

fn truncation(energy: f64, w: f64) -> Result<usize, TraError> {
    let n = largest_integer_below(w);
    if n < 0 {
        return Err(TraError::NotRepresentable { energy, n });
    }
    Ok(n as usize)
}

/// Basis for the hyperbolic well at energy `E < 0`:
/// `μ = √(−ε)`, `ν = −√(1/4 − 2B/κ²)`, `2α = μ`, `2β = −ν − 1/2`.
pub fn hyperbolic_basis(p: &HyperbolicParams, energy: f64) -> Result<TraBasisParams, TraError> {
    let k2 = p.kappa() * p.kappa();
    if !(energy < 0.0) {
        return Err(TraError::OutsideValidity {
            energy,
            reason: "hyperbolic bound states need E < 0",
        });
    }
    if p.b() > k2 / 8.0 {
        return Err(TraError::OutsideValidity {
            energy,
            reason: "needs B <= kappa^2/8",
        });
    }
    let epsilon = 2.0 * energy / k2;
    let mu = (-epsilon).sqrt();
    let root = (0.25 - 2.0 * p.b() / k2).max(0.0).sqrt();
    let nu = -root;
    let n_max = truncation(energy, 0.5 * (root - mu - 1.0))?;
    Ok(TraBasisParams {
        family: Family::Hyperbolic,
        mu,
        nu,
        alpha: mu / 2.0,
        beta: (-nu - 0.5) / 2.0,
        epsilon,
        n_max,
    })
}

/// Basis for the trigonometric well at energy `E > 0`:
/// `μ = √(1/4 + 2D/ρ²)`, `ν = −√ε`, `2α = μ + 1/2`, `2β = −ν`.
pub fn trig_basis(p: &TrigParams, energy: f64) -> Result<TraBasisParams, TraError> {
    if !(energy > 0.0) {
        return Err(TraError::OutsideValidity {
            energy,
            reason: "trigonometric levels need E > 0",
        });
    }
    let r2 = p.rho() * p.rho();
    let epsilon = 2.0 * energy / r2;
    let mu = (0.25 + 2.0 * p.d() / r2).sqrt();
    let nu = -epsilon.sqrt();
    let n_max = truncation(energy, 0.5 * (-mu + epsilon.sqrt() - 1.0))?;
    Ok(TraBasisParams {
        family: Family::Trigonometric,
        mu,
        nu,
        alpha: (mu + 0.5) / 2.0,
        beta: -nu / 2.0,
        epsilon,
        n_max,
    })
}

pub fn basis(p: &Potential, energy: f64) -> Result<TraBasisParams, TraError> {
    match p {
        Potential::Hyperbolic(h) => hyperbolic_basis(h, energy),
        Potential::Trigonometric(t) => trig_basis(t, energy),
    }
}

/// Argument `z`, angle `θ` and branch of the TRA polynomials.
///
/// `θ` is the principal value (`[0, π]` or `≥ 0`). The sign of `z` is fixed
/// by matching the polynomial recursion to the expansion-coefficient
/// recursion: it makes `z sin θ = −4κ²/V0` (resp. `−4ρ²/V0`), so `z ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesParams {
    pub z: f64,
    pub theta: f64,
    pub gamma: f64,
    pub branch: TraBranch,
}

fn branch_from_cos(cos_theta: f64, z2: f64) -> SeriesParams {
    let (theta, branch) = if cos_theta.abs() <= 1.0 {
        (cos_theta.acos(), TraBranch::Trig)
    } else {
        (cos_theta.acosh(), TraBranch::Hyper)
    };
    SeriesParams {
        z: -z2.sqrt(),
        theta,
        gamma: GAMMA,
        branch,
    }
}

/// Hyperbolic well: trig branch for `0 < A < V0`, hyper branch for `A < 0`.
pub fn hyperbolic_series_params(p: &HyperbolicParams) -> Result<SeriesParams, TraError> {
    let (v0, a) = (p.v0(), p.a());
    let k4 = p.kappa().powi(4);
    if a == 0.0 || a == v0 {
        return Err(TraError::BranchBoundary { name: "A", value: a });
    }
    if a > v0 {
        return Err(TraError::NoBranch { name: "A", value: a });
    }
    let cos_theta = 1.0 - 2.0 * a / v0;
    let z2 = if a > 0.0 {
        4.0 * k4 / (a * (v0 - a))
    } else {
        4.0 * k4 / (a * (a - v0))
    };
    Ok(branch_from_cos(cos_theta, z2))
}

/// Trigonometric well: trig branch for `−V0 < C < 0`, hyper branch for
/// `C < −V0`.
pub fn trig_series_params(p: &TrigParams) -> Result<SeriesParams, TraError> {
    let (v0, c) = (p.v0(), p.c());
    let r4 = p.rho().powi(4);
    if c == 0.0 || c == -v0 {
        return Err(TraError::BranchBoundary { name: "C", value: c });
    }
    if c > 0.0 {
        return Err(TraError::NoBranch { name: "C", value: c });
    }
    let cos_theta = -(2.0 * c / v0 + 1.0);
    let z2 = if c > -v0 {
        -4.0 * r4 / (c * (c + v0))
    } else {
        4.0 * r4 / (c * (c + v0))
    };
    Ok(branch_from_cos(cos_theta, z2))
}

pub fn series_params(p: &Potential) -> Result<SeriesParams, TraError> {
    match p {
        Potential::Hyperbolic(h) => hyperbolic_series_params(h),
        Potential::Trigonometric(t) => trig_series_params(t),
    }
}

/// The node-less factor `W(y) = scale · (y + shift)` of the TRA constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodelessFactor {
    pub scale: f64,
    pub shift: f64,
}

/// Coefficients of the expansion-coefficient recursion
/// `g_n F_n + d_{n−1} F_{n−1} + c_n F_{n+1} = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionCoefficients {
    /// `n = 0…N`.
    pub g: Vec<f64>,
    /// `n = 0…N−1`.
    pub c: Vec<f64>,
    /// `n = 0…N−1`.
    pub d: Vec<f64>,
    pub weight: NodelessFactor,
}

pub fn recursion_coefficients(p: &Potential, basis: &TraBasisParams) -> Result<RecursionCoefficients, TraError> {
    let (mu, nu) = (basis.mu, basis.nu);
    // g_n = scale · [(n + (μ+ν+1)/2)² − 1/16 + offset] + b_n
    let (scale, offset, weight) = match p {
        Potential::Hyperbolic(h) => {
            let k2 = h.kappa().powi(2);
            (
                -4.0 * k2 / h.v0(),
                (h.v0() - 2.0 * h.a()) / (4.0 * k2),
                NodelessFactor { scale: h.v0() / 4.0, shift: -1.0 },
            )
        }
        Potential::Trigonometric(t) => {
            let r2 = t.rho().powi(2);
            (
                -4.0 * r2 / t.v0(),
                -(t.v0() + 2.0 * t.c()) / (4.0 * r2),
                NodelessFactor { scale: t.v0() / 4.0, shift: 1.0 },
            )
        }
    };
    let n_max = basis.n_max;
    let mut g = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let half = n as f64 + (mu + nu + 1.0) / 2.0;
        let b = orthopoly::jacobi_recurrence(n, mu, nu)?.b;
        g.push(scale * (half * half - 1.0 / 16.0 + offset) + b);
    }
    let mut c = Vec::with_capacity(n_max);
    let mut d = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let nf = n as f64;
        let s = 2.0 * nf + mu + nu;
        let denom_c = (s + 2.0) * (s + 3.0);
        let denom_d = (s + 1.0) * (s + 2.0);
        if denom_c == 0.0 || denom_d == 0.0 {
            return Err(PolyError::SingularParameters { mu, nu, n }.into());
        }
        c.push(2.0 * (nf + mu + 1.0) * (nf + nu + 1.0) / denom_c);
        d.push(2.0 * (nf + 1.0) * (nf + mu + nu + 1.0) / denom_d);
    }
    Ok(RecursionCoefficients { g, c, d, weight })
}

/// `F_0 … F_N` straight from the expansion-coefficient recursion with
/// `F_0 = 1`. Independent of the TRA polynomial route.
pub fn direct_coefficients(rc: &RecursionCoefficients) -> Vec<f64> {
    let n_max = rc.g.len() - 1;
    let mut f = vec![1.0];
    for n in 0..n_max {
        let prev = if n == 0 { 0.0 } else { rc.d[n - 1] * f[n - 1] };
        f.push(-(rc.g[n] * f[n] + prev) / rc.c[n]);
    }
    f
}

/// A reconstructed bound state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    pub family: Family,
    pub energy: f64,
    pub basis: TraBasisParams,
    pub series: SeriesParams,
    /// `H_n / G_n` for `n = 0…N`.
    pub coeffs: Vec<f64>,
}

/// Builds the series for the bound state at `energy`.
pub fn assemble_solution(p: &Potential, energy: f64) -> Result<SeriesSolution, TraError> {
    let basis = basis(p, energy)?;
    let series = series_params(p)?;
    let tp = TraPolyParams {
        mu: basis.mu,
        nu: basis.nu,
        gamma: series.gamma,
        z: series.z,
        theta: series.theta,
        branch: series.branch,
    };
    let h = orthopoly::tra_poly_coeffs(&tp, basis.n_max)?;
    let coeffs = h
        .iter()
        .enumerate()
        .map(|(n, hn)| Ok(hn / orthopoly::g_factor(n, basis.mu, basis.nu)?))
        .collect::<Result<Vec<_>, PolyError>>()?;
    Ok(SeriesSolution {
        family: Family::of(p),
        energy,
        basis,
        series,
        coeffs,
    })
}

/// Wavefunction samples; points on or outside the domain boundary are
/// skipped and listed in `excluded`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wavefunction {
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub excluded: Vec<f64>,
}

impl Wavefunction {
    /// Interior sign changes, ignoring samples below `1e-10 · max|ψ|`.
    pub fn node_count(&self) -> usize {
        let peak = self.psi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut last = 0.0_f64;
        let mut nodes = 0;
        for &v in &self.psi {
            if v.abs() <= 1e-10 * peak {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
        nodes
    }

    /// Rescales to unit `L²` norm with the trapezoid rule over the samples.
    pub fn normalize_l2(&mut self) {
        let mut integral = 0.0;
        for i in 1..self.x.len() {
            integral += 0.5 * (self.psi[i].powi(2) + self.psi[i - 1].powi(2)) * (self.x[i] - self.x[i - 1]);
        }
        if integral > 0.0 {
            let s = integral.sqrt();
            self.psi.iter_mut().for_each(|v| *v /= s);
        }
    }
}

/// `ln` of the basis prefactor and the Jacobi argument `y` at `x`, or `None`
/// outside the open domain.
fn prefactor_and_y(p: &Potential, sol: &SeriesSolution, x: f64) -> Option<(f64, f64)> {
    let (mu, nu) = (sol.basis.mu, sol.basis.nu);
    let ln_sqrt2 = 0.5 * std::f64::consts::LN_2;
    match p {
        Potential::Hyperbolic(h) => {
            if !(x > 0.0 && x.is_finite()) {
                return None;
            }
            let kx = h.kappa() * x;
            let (sh, ch) = (kx.sinh(), kx.cosh());
            let ln_pref = (mu + nu + 0.5) * ln_sqrt2 + (nu + 0.5) * ch.ln() - (mu + nu + 0.5) * sh.ln();
            Some((ln_pref, 1.0 + 2.0 / (sh * sh)))
        }
        Potential::Trigonometric(t) => {
            if !(x > 0.0 && x < t.width()) {
                return None;
            }
            let (sn, cs) = (t.rho() * x).sin_cos();
            if sn <= 0.0 || cs <= 0.0 {
                return None;
            }
            let ln_pref = (mu + nu + 0.5) * ln_sqrt2 + (mu + 0.5) * sn.ln() - (mu + nu + 0.5) * cs.ln();
            let tn = sn / cs;
            Some((ln_pref, 1.0 + 2.0 * tn * tn))
        }
    }
}

/// Samples `ψ_m` on `x_grid` (un-normalized, `f_0 = 1`).
pub fn eval_wavefunction(sol: &SeriesSolution, p: &Potential, x_grid: &[f64]) -> Result<Wavefunction, TraError> {
    let jp = sol.basis.jacobi()?;
    let n = sol.coeffs.len() - 1;
    let mut out = Wavefunction {
        x: Vec::with_capacity(x_grid.len()),
        psi: Vec::with_capacity(x_grid.len()),
        excluded: Vec::new(),
    };
    for &x in x_grid {
        let Some((ln_pref, y)) = prefactor_and_y(p, sol, x) else {
            out.excluded.push(x);
            continue;
        };
        let q = orthopoly::jacobi_q_all(n, &jp, y)?;
        let series: f64 = q.iter().zip(&sol.coeffs).map(|(qn, cn)| qn * cn).sum();
        out.x.push(x);
        out.psi.push(ln_pref.exp() * series);
    }
    Ok(out)
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` for grid samples `psi` of a DVR Hamiltonian `h`.
pub fn rayleigh_quotient(h: &DenseMatrix, psi: &[f64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    let hv = h * &v;
    v.dot(&hv) / v.dot(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> Potential {
        Potential::Hyperbolic(HyperbolicParams::new(10.0, -20.0, -30.0, 1.0).unwrap())
    }
    fn s3() -> Potential {
        Potential::Trigonometric(TrigParams::new(5.0, -10.0, 2.0, 1.0).unwrap())
    }
    fn s4() -> Potential {
        Potential::Trigonometric(TrigParams::new(5.0, -2.0, 2.0, 1.0).unwrap())
    }

    #[test]
    fn s1_ground_state_basis() {
        let b = basis(&s1(), -17.292792568552).unwrap();
        assert!((b.epsilon + 34.585585137104).abs() < 1e-9);
        assert!((b.mu - 34.585585137104f64.sqrt()).abs() < 1e-12);
        assert!((b.nu + 60.25f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.n_max, 0);
        assert!((2.0 * b.alpha - b.mu).abs() < 1e-15);
        assert!((2.0 * b.beta + b.nu + 0.5).abs() < 1e-15);
    }

    #[test]
    fn s1_top_state_basis() {
        let b = basis(&s1(), -0.888027613576).unwrap();
        assert!((b.mu - 1.33269).abs() < 1e-5);
        assert_eq!(b.n_max, 2);
    }

    #[test]
    fn hyperbolic_validity() {
        assert!(matches!(basis(&s1(), 0.5), Err(TraError::OutsideValidity { .. })));
        let high_b = Potential::Hyperbolic(HyperbolicParams::new(1.0, -1.0, 0.2, 1.0).unwrap());
        assert!(matches!(basis(&high_b, -1.0), Err(TraError::OutsideValidity { .. })));
        let edge = Potential::Hyperbolic(HyperbolicParams::new(1.0, -1.0, 0.125, 1.0).unwrap());
        let err = basis(&edge, -1.0).unwrap_err();
        // ν = 0 is accepted; the state is simply not representable (N < 0)
        assert!(matches!(err, TraError::NotRepresentable { .. }));
    }

    #[test]
    fn s3_levels() {
        let b = basis(&s3(), 16.797026).unwrap();
        let rho2 = std::f64::consts::PI.powi(2) / 4.0;
        assert!((b.epsilon - 2.0 * 16.797026 / rho2).abs() < 1e-13);
        assert!((b.epsilon - 13.6150).abs() < 1e-3);
        assert!((b.mu - (0.25 + 4.0 / rho2).sqrt()).abs() < 1e-14);
        assert!((b.mu - 1.36790).abs() < 1e-5);
        assert!((b.nu + b.epsilon.sqrt()).abs() < 1e-15);
        assert_eq!(b.n_max, 0);
        assert_eq!(basis(&s3(), 805.155660).unwrap().n_max, 11);
        assert!(matches!(basis(&s3(), -1.0), Err(TraError::OutsideValidity { .. })));
    }

    #[test]
    fn small_d_limit() {
        let p = Potential::Trigonometric(TrigParams::new(5.0, -2.0, 1e-12, 1.0).unwrap());
        assert!((basis(&p, 500.0).unwrap().mu - 0.5).abs() < 1e-9);
    }

    #[test]
    fn branches() {
        let half = HyperbolicParams::new(4.0, 2.0, -10.0, 1.5).unwrap();
        let sp = hyperbolic_series_params(&half).unwrap();
        assert_eq!(sp.branch, TraBranch::Trig);
        assert!((sp.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((sp.z * sp.z - 16.0 * 1.5f64.powi(4) / 16.0).abs() < 1e-12);

        let sp = series_params(&s3()).unwrap();
        assert_eq!(sp.branch, TraBranch::Hyper);
        assert!((sp.theta.cosh() - 3.0).abs() < 1e-14);
        let rho = std::f64::consts::FRAC_PI_2;
        assert!((sp.z * sp.z - 4.0 * rho.powi(4) / 50.0).abs() < 1e-13);

        let sp = series_params(&s4()).unwrap();
        assert_eq!(sp.branch, TraBranch::Trig);
        assert!((sp.theta.cos() + 0.2).abs() < 1e-15);
    }

    #[test]
    fn branch_errors() {
        let on_edge = Potential::Hyperbolic(HyperbolicParams::new(4.0, 4.0, -1.0, 1.0).unwrap());
        assert!(matches!(series_params(&on_edge), Err(TraError::BranchBoundary { .. })));
        let zero = Potential::Hyperbolic(HyperbolicParams::new(4.0, 0.0, -1.0, 1.0).unwrap());
        assert!(matches!(series_params(&zero), Err(TraError::BranchBoundary { .. })));
        let above = Potential::Hyperbolic(HyperbolicParams::new(4.0, 5.0, -1.0, 1.0).unwrap());
        assert!(matches!(series_params(&above), Err(TraError::NoBranch { .. })));
        let c_pos = Potential::Trigonometric(TrigParams::new(4.0, 1.0, 1.0, 1.0).unwrap());
        assert!(matches!(series_params(&c_pos), Err(TraError::NoBranch { .. })));
        let c_edge = Potential::Trigonometric(TrigParams::new(4.0, -4.0, 1.0, 1.0).unwrap());
        assert!(matches!(series_params(&c_edge), Err(TraError::BranchBoundary { .. })));
    }

    #[test]
    fn single_term_series() {
        let sol = assemble_solution(&s1(), -17.292792568552).unwrap();
        assert_eq!(sol.coeffs, vec![1.0]);
        let sol = assemble_solution(&s3(), 16.797026).unwrap();
        assert_eq!(sol.coeffs, vec![1.0]);
        let rc = recursion_coefficients(&s1(), &sol_basis(&s1(), -17.292792568552)).unwrap();
        assert_eq!(rc.g.len(), 1);
        assert!(rc.c.is_empty() && rc.d.is_empty());
    }

    fn sol_basis(p: &Potential, e: f64) -> TraBasisParams {
        basis(p, e).unwrap()
    }

    #[test]
    fn polynomial_route_matches_direct_recursion() {
        for (p, e) in [
            (s1(), -0.888027613576),
            (s3(), 805.155660),
            (s4(), 831.720941),
            (
                Potential::Hyperbolic(HyperbolicParams::new(5.0, 2.0, -60.0, 1.0).unwrap()),
                -1.000393053814,
            ),
        ] {
            let sol = assemble_solution(&p, e).unwrap();
            let direct = direct_coefficients(&recursion_coefficients(&p, &sol.basis).unwrap());
            assert_eq!(direct.len(), sol.coeffs.len());
            for (a, b) in direct.iter().zip(&sol.coeffs) {
                assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{direct:?} vs {:?}", sol.coeffs);
            }
        }
    }

    #[test]
    fn favard_positivity() {
        for (p, e) in [(s1(), -0.888027613576), (s3(), 805.155660), (s4(), 831.720941)] {
            let rc = recursion_coefficients(&p, &sol_basis(&p, e)).unwrap();
            assert!(rc.c.iter().zip(&rc.d).all(|(c, d)| c * d > 0.0));
        }
    }

    #[test]
    fn recursion_matches_jacobi_coefficients() {
        let b = sol_basis(&s3(), 805.155660);
        let rc = recursion_coefficients(&s3(), &b).unwrap();
        for n in 0..2 {
            let next = orthopoly::jacobi_recurrence(n + 1, b.mu, b.nu).unwrap();
            let here = orthopoly::jacobi_recurrence(n, b.mu, b.nu).unwrap();
            assert!((rc.c[n] - next.a).abs() < 1e-14);
            assert!((rc.d[n] - here.d).abs() < 1e-14);
        }
        assert_eq!(rc.weight, NodelessFactor { scale: 1.25, shift: 1.0 });
    }

    #[test]
    fn hyperbolic_decay() {
        let p = s1();
        let sol = assemble_solution(&p, -6.137201742096).unwrap();
        let grid: Vec<f64> = (1..=3000).map(|i| i as f64 * 0.01).collect();
        let wf = eval_wavefunction(&sol, &p, &grid).unwrap();
        let peak = wf.psi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(wf.psi.last().unwrap().abs() < 1e-8 * peak);
        // near the origin ψ ~ x^(−μ−ν−1/2−2N), and that exponent exceeds 1/2
        let near = eval_wavefunction(&sol, &p, &[1e-4]).unwrap();
        assert!(near.psi[0].abs() < 1e-4 * peak);
        let excluded = eval_wavefunction(&sol, &p, &[0.0, -1.0, 1.0]).unwrap();
        assert_eq!(excluded.excluded, vec![0.0, -1.0]);
        assert_eq!(excluded.psi.len(), 1);
    }

    #[test]
    fn trig_wall_decay() {
        let p = s4();
        let sol = assemble_solution(&p, 68.685118).unwrap();
        let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
        let wf = eval_wavefunction(&sol, &p, &grid).unwrap();
        let peak = wf.psi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let edges = eval_wavefunction(&sol, &p, &[1e-4, 1.0 - 1e-4]).unwrap();
        assert!(edges.psi.iter().all(|v| v.abs() < 1e-3 * peak), "{edges:?}");
        let all = eval_wavefunction(&sol, &p, &[0.0, 1.0]).unwrap();
        assert_eq!(all.excluded.len(), 2);
    }

    #[test]
    fn normalization() {
        let p = s1();
        let sol = assemble_solution(&p, -17.292792568552).unwrap();
        let grid: Vec<f64> = (1..=2000).map(|i| i as f64 * 0.005).collect();
        let mut wf = eval_wavefunction(&sol, &p, &grid).unwrap();
        wf.normalize_l2();
        let mut integral = 0.0;
        for i in 1..wf.x.len() {
            integral += 0.5 * (wf.psi[i].powi(2) + wf.psi[i - 1].powi(2)) * (wf.x[i] - wf.x[i - 1]);
        }
        assert!((integral - 1.0).abs() < 1e-12);
    }
}
