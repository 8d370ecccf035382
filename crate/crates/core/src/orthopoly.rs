//! Jacobi polynomials on the semi-infinite line `y ≥ 1` and the two TRA
//! polynomial families, all evaluated by forward three-term recursion.
//!
//! `Q_n^(μ,ν)(y)` is the finite family orthogonal on `[1, ∞)` with weight
//! `(y − 1)^μ (y + 1)^ν`; it exists for `n ≤ N` when `μ > −1` and
//! `μ + ν < −2N − 1`.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("parameters (mu = {mu}, nu = {nu}) violate the admissibility window for degree {n}")]
    Inadmissible { mu: f64, nu: f64, n: usize },
    #[error("degree {n} exceeds the maximal admissible degree {max}")]
    DegreeTooHigh { n: usize, max: usize },
    #[error("argument y = {y} is outside [1, inf)")]
    Argument { y: f64 },
    #[error("derivative relation is singular at y = 1")]
    SingularPoint,
    #[error("vanishing denominator at degree {n} for (mu = {mu}, nu = {nu})")]
    SingularParameters { mu: f64, nu: f64, n: usize },
    #[error("recursion breaks down at degree {n}: leading coefficient vanishes")]
    RecursionBreakdown { n: usize },
}

/// `(μ, ν)` with the largest degree `N` they admit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiParams {
    mu: f64,
    nu: f64,
    n_max: usize,
}

/// Largest integer strictly less than `z`. Differs from `floor` at integers.
pub fn largest_integer_below(z: f64) -> i64 {
    z.ceil() as i64 - 1
}

impl JacobiParams {
    pub fn new(mu: f64, nu: f64, n_max: usize) -> Result<Self, PolyError> {
        let inadmissible = PolyError::Inadmissible { mu, nu, n: n_max };
        if !(mu.is_finite() && nu.is_finite()) || !(mu > -1.0) || !(mu + nu < -2.0 * n_max as f64 - 1.0) {
            return Err(inadmissible);
        }
        Ok(Self { mu, nu, n_max })
    }

    /// Uses the largest `N` the window allows.
    pub fn with_max_degree(mu: f64, nu: f64) -> Result<Self, PolyError> {
        let n = largest_integer_below(-(mu + nu + 1.0) / 2.0);
        if n < 0 {
            return Err(PolyError::Inadmissible { mu, nu, n: 0 });
        }
        Self::new(mu, nu, n as usize)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

/// Coefficients of `y Q_n = b_n Q_n + a_n Q_{n−1} + d_n Q_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiRecurrence {
    pub b: f64,
    pub a: f64,
    pub d: f64,
}

/// Recursion coefficients at degree `n`. At `n = 0` the `Q_{−1}` weight is
/// reported as zero and `b_0` uses the cancelled form `(ν − μ)/(μ + ν + 2)`.
pub fn jacobi_recurrence(n: usize, mu: f64, nu: f64) -> Result<JacobiRecurrence, PolyError> {
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    let singular = PolyError::SingularParameters { mu, nu, n };
    if (s + 1.0) == 0.0 || (s + 2.0) == 0.0 {
        return Err(singular);
    }
    let (b, a) = if n == 0 {
        ((nu - mu) / (mu + nu + 2.0), 0.0)
    } else {
        if s == 0.0 {
            return Err(singular);
        }
        (
            (nu * nu - mu * mu) / (s * (s + 2.0)),
            2.0 * (nf + mu) * (nf + nu) / (s * (s + 1.0)),
        )
    };
    let d = 2.0 * (nf + 1.0) * (nf + mu + nu + 1.0) / ((s + 1.0) * (s + 2.0));
    Ok(JacobiRecurrence { b, a, d })
}

fn check_degree(n: usize, jp: &JacobiParams) -> Result<(), PolyError> {
    if n > jp.n_max {
        return Err(PolyError::DegreeTooHigh { n, max: jp.n_max });
    }
    Ok(())
}

/// `[Q_0(y), …, Q_n(y)]` by forward recursion, without window checks.
fn q_values_raw(n: usize, mu: f64, nu: f64, y: f64) -> Result<Vec<f64>, PolyError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    let mut prev = 0.0;
    for k in 0..n {
        let r = jacobi_recurrence(k, mu, nu)?;
        if r.d == 0.0 {
            return Err(PolyError::RecursionBreakdown { n: k });
        }
        let cur = out[k];
        let next = ((y - r.b) * cur - r.a * prev) / r.d;
        prev = cur;
        out.push(next);
    }
    Ok(out)
}

/// `[Q_0(y), …, Q_n(y)]`.
pub fn jacobi_q_all(n: usize, jp: &JacobiParams, y: f64) -> Result<Vec<f64>, PolyError> {
    check_degree(n, jp)?;
    if !(y >= 1.0) {
        return Err(PolyError::Argument { y });
    }
    q_values_raw(n, jp.mu, jp.nu, y)
}

/// `Q_n^(μ,ν)(y)` by forward recursion from `Q_0 = 1`, `Q_{−1} = 0`.
pub fn jacobi_q(n: usize, jp: &JacobiParams, y: f64) -> Result<f64, PolyError> {
    Ok(jacobi_q_all(n, jp, y)?[n])
}

/// Rising factorial `(x)_n`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// `Q_n` from its terminating hypergeometric sum,
/// `(μ+1)_n / n! · Σ_k (−n)_k (n+μ+ν+1)_k / ((μ+1)_k k!) ((1−y)/2)^k`.
///
/// Shares nothing with the recursion path beyond the parameters.
pub fn jacobi_q_oracle(n: usize, jp: &JacobiParams, y: f64) -> Result<f64, PolyError> {
    check_degree(n, jp)?;
    jacobi_q_hypergeometric(n, jp.mu, jp.nu, y)
}

/// The hypergeometric sum without the admissibility window, for any real `y`.
pub fn jacobi_q_hypergeometric(n: usize, mu: f64, nu: f64, y: f64) -> Result<f64, PolyError> {
    let nf = n as f64;
    let arg = (1.0 - y) / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let denom = (mu + 1.0 + kf) * (kf + 1.0);
        if denom == 0.0 {
            return Err(PolyError::SingularParameters { mu, nu, n });
        }
        term *= (-nf + kf) * (nf + mu + nu + 1.0 + kf) / denom * arg;
        sum += term;
    }
    let mut prefactor = 1.0;
    for k in 0..n {
        prefactor *= (mu + 1.0 + k as f64) / (k as f64 + 1.0);
    }
    Ok(prefactor * sum)
}

/// `dQ_n/dy` from the differential relation
/// `(y²−1) Q_n' = 2(n+μ+ν+1)[ (ν−μ)n/(s(s+2)) Q_n − (n+μ)(n+ν)/(s(s+1)) Q_{n−1}
/// + n(n+1)/((s+1)(s+2)) Q_{n+1} ]`, `s = 2n+μ+ν`.
pub fn jacobi_q_derivative(n: usize, jp: &JacobiParams, y: f64) -> Result<f64, PolyError> {
    check_degree(n, jp)?;
    if !(y >= 1.0) {
        return Err(PolyError::Argument { y });
    }
    if y == 1.0 {
        return Err(PolyError::SingularPoint);
    }
    if n == 0 {
        return Ok(0.0);
    }
    let (mu, nu) = (jp.mu, jp.nu);
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    if s == 0.0 || s + 1.0 == 0.0 || s + 2.0 == 0.0 {
        return Err(PolyError::SingularParameters { mu, nu, n });
    }
    let q = q_values_raw(n + 1, mu, nu, y)?;
    let bracket = (nu - mu) * nf / (s * (s + 2.0)) * q[n]
        - (nf + mu) * (nf + nu) / (s * (s + 1.0)) * q[n - 1]
        + nf * (nf + 1.0) / ((s + 1.0) * (s + 2.0)) * q[n + 1];
    Ok(2.0 * (nf + mu + nu + 1.0) * bracket / (y * y - 1.0))
}

/// Squared norm `∫₁^∞ (y−1)^μ (y+1)^ν Q_n² dy` in closed form.
///
/// The Γ ratios are folded into Pochhammer products so that only
/// `Γ(μ+1) Γ(−μ−ν) / Γ(−ν)`, all at positive arguments inside the window,
/// remains.
pub fn jacobi_q_norm(n: usize, jp: &JacobiParams) -> Result<f64, PolyError> {
    check_degree(n, jp)?;
    let (mu, nu) = (jp.mu, jp.nu);
    let nf = n as f64;
    let s1 = 2.0 * nf + mu + nu + 1.0;
    let tail = pochhammer(-nf - mu - nu, n);
    if s1 == 0.0 || tail == 0.0 {
        return Err(PolyError::SingularParameters { mu, nu, n });
    }
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let ratio = pochhammer(mu + 1.0, n) * pochhammer(nu + 1.0, n) / (pochhammer(1.0, n) * tail);
    let log_gamma = ln_gamma(mu + 1.0) + ln_gamma(-mu - nu) - ln_gamma(-nu);
    Ok(sign * 2f64.powf(mu + nu + 1.0) / s1 * ratio * log_gamma.exp())
}

/// `G_n = (μ+1)_n (ν+1)_n / (n! (μ+ν+1)_n) · (μ+ν+1)/(2n+μ+ν+1)`, the scale
/// relating the TRA expansion coefficients to the TRA polynomials.
pub fn g_factor(n: usize, mu: f64, nu: f64) -> Result<f64, PolyError> {
    let singular = PolyError::SingularParameters { mu, nu, n };
    let nf = n as f64;
    let tail = 2.0 * nf + mu + nu + 1.0;
    if tail == 0.0 {
        return Err(singular);
    }
    let mut g = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let denom = (kf + 1.0) * (mu + nu + 1.0 + kf);
        if denom == 0.0 {
            return Err(singular);
        }
        g *= (mu + 1.0 + kf) * (nu + 1.0 + kf) / denom;
    }
    Ok(g * (mu + nu + 1.0) / tail)
}

/// Which of the two TRA polynomial recursions to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraBranch {
    /// `H_n`, circular functions of θ.
    Trig,
    /// `H̃_n`, hyperbolic functions of θ.
    Hyper,
}

impl TraBranch {
    pub fn label(&self) -> &'static str {
        match self {
            TraBranch::Trig => "trig",
            TraBranch::Hyper => "hyper",
        }
    }
}

/// Arguments of `H_n^(μ,ν)(z; γ, θ)` or `H̃_n^(μ,ν)(z; γ, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraPolyParams {
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    pub z: f64,
    pub theta: f64,
    pub branch: TraBranch,
}

/// `[H_0, …, H_nmax]` (or `H̃`) by forward recursion:
///
/// ```text
/// cos θ H_n = {[(n + (μ+ν+1)/2)² − γ²] z sin θ + b_n} H_n + a_n H_{n−1} + d_n H_{n+1}
/// ```
///
/// with cosh/sinh in place of cos/sin for the hyperbolic branch.
pub fn tra_poly_coeffs(tp: &TraPolyParams, nmax: usize) -> Result<Vec<f64>, PolyError> {
    let (c, s) = match tp.branch {
        TraBranch::Trig => (tp.theta.cos(), tp.theta.sin()),
        TraBranch::Hyper => (tp.theta.cosh(), tp.theta.sinh()),
    };
    let gamma2 = tp.gamma * tp.gamma;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    let mut prev = 0.0;
    for n in 0..nmax {
        let r = jacobi_recurrence(n, tp.mu, tp.nu)?;
        if r.d == 0.0 || !r.d.is_finite() {
            return Err(PolyError::RecursionBreakdown { n });
        }
        let half = n as f64 + (tp.mu + tp.nu + 1.0) / 2.0;
        let diag = (half * half - gamma2) * tp.z * s + r.b;
        let cur = out[n];
        let next = ((c - diag) * cur - r.a * prev) / r.d;
        prev = cur;
        out.push(next);
    }
    Ok(out)
}
