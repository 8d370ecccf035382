//! Higher-order finite differences on the unit interval.
//!
//! The hyperbolic problem is compactified with `s = (2/π) arctan(ζx)`, turning
//! `−½ψ'' + Vψ = Eψ` on `(0, ∞)` into
//!
//! ```text
//! −(2ζ²/π²) cos⁴(πs/2) ψ'' + (2ζ²/π) cos³(πs/2) sin(πs/2) ψ' + V ψ = E ψ
//! ```
//!
//! on `(0, 1)`; the trigonometric well is simply rescaled from `(0, a)`.
//! Derivatives at the `M` interior nodes `s_i = i/(M+1)` use `2k+1`-point
//! stencils of maximal consistency order, centred in the interior and shifted
//! to one side within `k` nodes of either wall. Dirichlet values
//! `ψ_0 = ψ_{M+1} = 0` drop the boundary columns.

use crate::dvr::{GridSnapshot, Method, SolverError, SpectrumResult};
use crate::linalg::{self, DenseMatrix};
use crate::potentials::{HyperbolicParams, TrigParams};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Stencil scaling `ζ(j) = 0.6 j^(−0.7)` for eigenvalue index `j ≥ 1`.
pub fn zeta(j: usize) -> f64 {
    0.6 * (j as f64).powf(-0.7)
}

/// Grid and stencil settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HofdConfig {
    /// Number of interior nodes.
    pub m: usize,
    /// Stencil half-width; interior stencils have `2k + 1` nodes.
    pub k: usize,
}

impl HofdConfig {
    pub const DEFAULT_M: usize = 500;
    pub const DEFAULT_K: usize = 4;

    pub fn new(m: usize, k: usize) -> Result<Self, SolverError> {
        if k < 1 {
            return Err(SolverError::Config("stencil half-width k must be at least 1".into()));
        }
        if m < 2 * k + 2 {
            return Err(SolverError::Config(format!(
                "M = {m} is too small for stencil half-width k = {k} (need M >= {})",
                2 * k + 2
            )));
        }
        Ok(Self { m, k })
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.m + 1) as f64
    }

    /// Interior nodes `s_1 … s_M`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.m).map(|i| i as f64 * self.h()).collect()
    }

    /// Grid indices (into `0…M+1`) used by the stencil of row `i`.
    pub fn stencil_window(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        let (m, k) = (self.m, self.k);
        if i < k {
            0..=2 * k
        } else if i <= m + 1 - k {
            i - k..=i + k
        } else {
            let t = m + 1 - 2 * k;
            t..=t + 2 * k
        }
    }
}

/// Weights `w` with `Σ_j w_j (x_j − x₀)^p = p! δ_{p,l}` for `p < nodes.len()`,
/// i.e. the `l`-th derivative at `x₀` exact on polynomials of the highest
/// degree the nodes allow.
///
/// Computed with Fornberg's recursion, which stays accurate for the wide
/// stencils used here where a direct Vandermonde solve loses digits.
pub fn fd_weights(l: usize, nodes: &[f64], x0: f64) -> Result<Vec<f64>, SolverError> {
    let n = nodes.len();
    if n < l + 1 {
        return Err(SolverError::Config(format!(
            "{n} nodes cannot resolve derivative order {l}"
        )));
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(SolverError::Config(format!("repeated stencil node {a}")));
        }
    }

    // c[j][d]: weight of node j for derivative d, updated as nodes are added.
    let mut c = vec![vec![0.0; l + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(l);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[i][d] = c1 * (d as f64 * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for d in (1..=mn).rev() {
                c[j][d] = (c4 * c[j][d] - d as f64 * c[j][d - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    Ok(c.into_iter().map(|row| row[l]).collect())
}

/// Integer-offset convenience wrapper around [`fd_weights`].
pub fn fd_weights_int(l: usize, offsets: &[i64], eval_offset: i64) -> Result<Vec<f64>, SolverError> {
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    fd_weights(l, &nodes, eval_offset as f64)
}

/// First- and second-derivative matrices `Δ1`, `Δ2` (`M × M`, already divided
/// by `h` and `h²`).
pub fn delta_matrices(cfg: &HofdConfig) -> Result<(DenseMatrix, DenseMatrix), SolverError> {
    let cfg = HofdConfig::new(cfg.m, cfg.k)?;
    let m = cfg.m;
    let h = cfg.h();
    let mut d1 = DenseMatrix::zeros(m, m);
    let mut d2 = DenseMatrix::zeros(m, m);
    for i in 1..=m {
        let window: Vec<usize> = cfg.stencil_window(i).collect();
        let offsets: Vec<i64> = window.iter().map(|&g| g as i64).collect();
        let w1 = fd_weights_int(1, &offsets, i as i64)?;
        let w2 = fd_weights_int(2, &offsets, i as i64)?;
        for (idx, &g) in window.iter().enumerate() {
            if g == 0 || g == m + 1 {
                continue;
            }
            d1[(i - 1, g - 1)] = w1[idx] / h;
            d2[(i - 1, g - 1)] = w2[idx] / (h * h);
        }
    }
    Ok((d1, d2))
}

/// `J = ÃΔ2 + B̃Δ1 + C̃` for the compactified hyperbolic problem with
/// `ζ = ζ(j)`.
pub fn hyperbolic_operator(p: &HyperbolicParams, cfg: &HofdConfig, j: usize) -> Result<DenseMatrix, SolverError> {
    if j < 1 {
        return Err(SolverError::Config("eigenvalue index j starts at 1".into()));
    }
    let (d1, d2) = delta_matrices(cfg)?;
    hyperbolic_operator_with(p, cfg, zeta(j), &d1, &d2)
}

fn hyperbolic_operator_with(
    p: &HyperbolicParams,
    cfg: &HofdConfig,
    zeta: f64,
    d1: &DenseMatrix,
    d2: &DenseMatrix,
) -> Result<DenseMatrix, SolverError> {
    let m = cfg.m;
    let mut j_op = DenseMatrix::zeros(m, m);
    let z2 = zeta * zeta;
    for (r, &s) in cfg.nodes().iter().enumerate() {
        let (sn, cs) = (PI * s / 2.0).sin_cos();
        let a_coef = -(2.0 * z2 / (PI * PI)) * cs.powi(4);
        let b_coef = (2.0 * z2 / PI) * cs.powi(3) * sn;
        let x = (PI * s / 2.0).tan() / zeta;
        let v = p.eval_unchecked(x);
        if !v.is_finite() {
            return Err(SolverError::GridSingularity { x });
        }
        for c in 0..m {
            j_op[(r, c)] = a_coef * d2[(r, c)] + b_coef * d1[(r, c)];
        }
        j_op[(r, r)] += v;
    }
    Ok(j_op)
}

/// `J = −Δ2 / (2a²) + diag(V_II(a s_i))` on the rescaled well.
pub fn box_operator(p: &TrigParams, cfg: &HofdConfig) -> Result<DenseMatrix, SolverError> {
    box_operator_with(cfg, p.width(), |x| p.eval_unchecked(x, false))
}

/// Box operator for an arbitrary potential on `(0, a)`.
pub fn box_operator_with(cfg: &HofdConfig, a: f64, potential: impl Fn(f64) -> f64) -> Result<DenseMatrix, SolverError> {
    let (_, d2) = delta_matrices(cfg)?;
    let mut j_op = d2 * (-0.5 / (a * a));
    for (r, &s) in cfg.nodes().iter().enumerate() {
        let x = a * s;
        let v = potential(x);
        if !v.is_finite() {
            return Err(SolverError::GridSingularity { x });
        }
        j_op[(r, r)] += v;
    }
    Ok(j_op)
}

/// Near-real eigenvalues of `op`, ascending.
fn real_spectrum(op: &DenseMatrix) -> Result<Vec<f64>, SolverError> {
    let all = linalg::eig_general(op)?;
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut real: Vec<f64> = all
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * radius)
        .map(|z| z.re)
        .collect();
    real.sort_by(f64::total_cmp);
    Ok(real)
}

fn checked_residual(op: &DenseMatrix, lambda: f64) -> Result<f64, SolverError> {
    let (_, residual) = linalg::real_eigenvector(op, lambda)?;
    Ok(residual)
}

/// The `j`-th level of the hyperbolic well, from the operator built with
/// `ζ(j)`. Returns the eigenvalue and its eigenpair residual.
pub fn hyperbolic_level(p: &HyperbolicParams, cfg: &HofdConfig, j: usize) -> Result<(f64, f64, f64), SolverError> {
    let op = hyperbolic_operator(p, cfg, j)?;
    let real = real_spectrum(&op)?;
    let lambda = *real.get(j - 1).ok_or(SolverError::Extraction {
        found: real.len(),
        needed: j,
    })?;
    Ok((lambda, checked_residual(&op, lambda)?, linalg::norm_inf(&op)))
}

/// The `count` lowest hyperbolic levels, one operator per index.
pub fn hyperbolic_spectrum(p: &HyperbolicParams, cfg: &HofdConfig, count: usize) -> Result<SpectrumResult, SolverError> {
    let levels = (1..=count)
        .into_par_iter()
        .map(|j| hyperbolic_level(p, cfg, j))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(collect(levels, cfg))
}

/// Hyperbolic levels below the asymptote, adding indices until one is not
/// bound (or `limit` is reached).
pub fn hyperbolic_bound_states(p: &HyperbolicParams, cfg: &HofdConfig, limit: usize) -> Result<SpectrumResult, SolverError> {
    let mut levels = Vec::new();
    for j in 1..=limit {
        let level = hyperbolic_level(p, cfg, j)?;
        if level.0 >= p.asymptote() {
            break;
        }
        levels.push(level);
    }
    Ok(collect(levels, cfg))
}

/// The `count` lowest levels of the trigonometric well from a single build.
pub fn box_spectrum(p: &TrigParams, cfg: &HofdConfig, count: usize) -> Result<SpectrumResult, SolverError> {
    let op = box_operator(p, cfg)?;
    spectrum_of(&op, cfg, count)
}

/// Lowest `count` near-real eigenvalues of a ready-made operator.
pub fn spectrum_of(op: &DenseMatrix, cfg: &HofdConfig, count: usize) -> Result<SpectrumResult, SolverError> {
    let real = real_spectrum(op)?;
    if real.len() < count {
        return Err(SolverError::Extraction {
            found: real.len(),
            needed: count,
        });
    }
    let norm = linalg::norm_inf(op);
    let levels = real[..count]
        .par_iter()
        .map(|&lambda| Ok((lambda, checked_residual(op, lambda)?, norm)))
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(collect(levels, cfg))
}

fn collect(levels: Vec<(f64, f64, f64)>, cfg: &HofdConfig) -> SpectrumResult {
    SpectrumResult {
        method: Method::Hofd,
        eigenvalues: levels.iter().map(|l| l.0).collect(),
        grid: GridSnapshot {
            m: cfg.m,
            length: None,
            stencil_k: Some(cfg.k),
        },
        max_residual: levels.iter().map(|l| l.1).fold(0.0, f64::max),
        matrix_norm: levels.iter().map(|l| l.2).fold(0.0, f64::max),
    }
}
