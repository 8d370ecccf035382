//! Discrete variable representation of `H = −½ d²/dx² + V(x)` on a uniform
//! grid, using the particle-in-a-box kinetic matrices (and their
//! semi-infinite limit).

use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::potentials::{HyperbolicParams, TrigParams};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid grid configuration: {0}")]
    Config(String),
    #[error("potential is not finite at grid point x = {x}")]
    GridSingularity { x: f64 },
    #[error("found only {found} usable eigenvalues, needed {needed}")]
    Extraction { found: usize, needed: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which solver produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Dvr,
    Hofd,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Dvr => "DVR",
            Method::Hofd => "HOFD",
        }
    }
}

/// Uniform DVR grid: `M − 1` interior points `x_i = i L / M` on `(0, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DvrConfig {
    pub m: usize,
    /// Box length `b` (semi-infinite problems) or well width `a`.
    pub length: f64,
}

impl DvrConfig {
    pub const HYPERBOLIC_DEFAULT: DvrConfig = DvrConfig { m: 200, length: 10.0 };
    pub const TRIG_DEFAULT_M: usize = 300;

    pub fn new(m: usize, length: f64) -> Result<Self, SolverError> {
        if m < 3 {
            return Err(SolverError::Config(format!("grid size M = {m} must be at least 3")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(SolverError::Config(format!("length {length} must be positive")));
        }
        Ok(Self { m, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.m as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (1..self.m).map(|i| i as f64 * self.length / self.m as f64).collect()
    }
}

/// Grid metadata recorded alongside a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSnapshot {
    pub m: usize,
    pub length: Option<f64>,
    pub stencil_k: Option<usize>,
}

/// Eigenvalues from one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub method: Method,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub grid: GridSnapshot,
    /// Largest eigenpair residual ‖Hv − λv‖ among the reported values.
    pub max_residual: f64,
    /// ‖H‖_∞ of the operator(s) the residuals refer to.
    pub matrix_norm: f64,
}

/// Kinetic matrix on `(0, ∞)` with spacing `b / M`, indices `1…M−1`.
pub fn kinetic_semiinfinite(m: usize, b: f64) -> Result<DenseMatrix, SolverError> {
    let cfg = DvrConfig::new(m, b)?;
    let dx2 = cfg.spacing().powi(2);
    let n = m - 1;
    let mut t = DenseMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i..=n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let (fi, fj) = (i as f64, j as f64);
            let v = if i == j {
                PI * PI / 6.0 - 1.0 / (4.0 * fi * fi)
            } else {
                1.0 / (fi - fj).powi(2) - 1.0 / (fi + fj).powi(2)
            };
            let entry = sign * v / dx2;
            t[(i - 1, j - 1)] = entry;
            t[(j - 1, i - 1)] = entry;
        }
    }
    Ok(t)
}

/// Kinetic matrix on the box `(0, a)` with `M − 1` interior points.
pub fn kinetic_box(m: usize, a: f64) -> Result<DenseMatrix, SolverError> {
    DvrConfig::new(m, a)?;
    let n = m - 1;
    let mf = m as f64;
    let pref = PI * PI / (4.0 * a * a);
    let mut t = DenseMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i..=n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = if i == j {
                (2.0 * mf * mf + 1.0) / 3.0 - 1.0 / (i as f64 * PI / mf).sin().powi(2)
            } else {
                let d = (j - i) as f64;
                let s = (i + j) as f64;
                1.0 / (d * PI / (2.0 * mf)).sin().powi(2) - 1.0 / (s * PI / (2.0 * mf)).sin().powi(2)
            };
            let entry = sign * pref * v;
            t[(i - 1, j - 1)] = entry;
            t[(j - 1, i - 1)] = entry;
        }
    }
    Ok(t)
}

/// `H = T + diag(V)`.
pub fn hamiltonian(kinetic: &DenseMatrix, potential: &[f64]) -> Result<DenseMatrix, SolverError> {
    if kinetic.nrows() != potential.len() || kinetic.ncols() != potential.len() {
        return Err(SolverError::Config(format!(
            "kinetic matrix is {}x{} but {} potential samples were given",
            kinetic.nrows(),
            kinetic.ncols(),
            potential.len()
        )));
    }
    if let Some(i) = potential.iter().position(|v| !v.is_finite()) {
        return Err(SolverError::GridSingularity { x: i as f64 });
    }
    let mut h = kinetic.clone();
    for (i, v) in potential.iter().enumerate() {
        h[(i, i)] += v;
    }
    Ok(h)
}

/// The `count` lowest eigenvalues of a symmetric Hamiltonian.
pub fn solve_spectrum(h: &DenseMatrix, count: usize) -> Result<SpectrumResult, SolverError> {
    let eig = linalg::eig_symmetric(h)?;
    let count = count.min(eig.eigenvalues.len());
    Ok(SpectrumResult {
        method: Method::Dvr,
        eigenvalues: eig.eigenvalues[..count].to_vec(),
        grid: GridSnapshot {
            m: h.nrows() + 1,
            length: None,
            stencil_k: None,
        },
        max_residual: eig.max_residual,
        matrix_norm: linalg::norm_inf(h),
    })
}

fn sample(grid: &[f64], f: impl Fn(f64) -> f64) -> Result<Vec<f64>, SolverError> {
    grid.iter()
        .map(|&x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(SolverError::GridSingularity { x })
            }
        })
        .collect()
}

/// DVR Hamiltonian of the hyperbolic well on `(0, b)`.
pub fn hyperbolic_hamiltonian(p: &HyperbolicParams, cfg: &DvrConfig) -> Result<DenseMatrix, SolverError> {
    let t = kinetic_semiinfinite(cfg.m, cfg.length)?;
    let v = sample(&cfg.grid(), |x| p.eval_unchecked(x))?;
    hamiltonian(&t, &v)
}

/// DVR Hamiltonian of the trigonometric well (or its mirror image) on `(0, a)`.
pub fn trig_hamiltonian(p: &TrigParams, m: usize, reflected: bool) -> Result<DenseMatrix, SolverError> {
    let cfg = DvrConfig::new(m, p.width())?;
    let t = kinetic_box(cfg.m, cfg.length)?;
    let v = sample(&cfg.grid(), |x| p.eval_unchecked(x, reflected))?;
    hamiltonian(&t, &v)
}

/// Bound states of the hyperbolic well: eigenvalues below the `x → ∞`
/// asymptote. Higher eigenvalues discretize the continuum inside the box.
pub fn hyperbolic_bound_states(p: &HyperbolicParams, cfg: &DvrConfig) -> Result<SpectrumResult, SolverError> {
    let h = hyperbolic_hamiltonian(p, cfg)?;
    let mut res = solve_spectrum(&h, h.nrows())?;
    res.eigenvalues.retain(|&e| e < p.asymptote());
    res.grid.length = Some(cfg.length);
    Ok(res)
}

/// The `count` lowest levels of the trigonometric well at grid size `m`.
pub fn trig_spectrum(p: &TrigParams, m: usize, count: usize, reflected: bool) -> Result<SpectrumResult, SolverError> {
    let h = trig_hamiltonian(p, m, reflected)?;
    let mut res = solve_spectrum(&h, count)?;
    res.grid.length = Some(p.width());
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semiinfinite_entries() {
        let t = kinetic_semiinfinite(10, 10.0).unwrap();
        assert!((t[(0, 0)] - (PI * PI / 6.0 - 0.25)).abs() < 1e-15);
        assert!((t[(0, 1)] + 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(linalg::max_asymmetry(&t), 0.0);
    }

    #[test]
    fn box_entries_symmetric_positive_diagonal() {
        let t = kinetic_box(300, 1.0).unwrap();
        assert_eq!(linalg::max_asymmetry(&t), 0.0);
        assert!((0..299).all(|i| t[(i, i)] > 0.0));
    }

    #[test]
    fn box_tends_to_semiinfinite() {
        let (m, a) = (2000, 2000.0);
        let tb = kinetic_box(m, a).unwrap();
        let ts = kinetic_semiinfinite(m, a).unwrap();
        assert!((tb[(0, 0)] - ts[(0, 0)]).abs() <= 1e-4 * ts[(0, 0)].abs());
    }

    #[test]
    fn config_errors() {
        assert!(kinetic_box(2, 1.0).is_err());
        assert!(kinetic_semiinfinite(10, 0.0).is_err());
    }

    #[test]
    fn zero_potential_is_kinetic() {
        let t = kinetic_box(20, 1.0).unwrap();
        let h = hamiltonian(&t, &[0.0; 19]).unwrap();
        assert_eq!(h, t);
        let v: Vec<f64> = (0..19).map(|i| i as f64 * 0.5 - 3.0).collect();
        let h = hamiltonian(&t, &v).unwrap();
        for i in 0..19 {
            assert_eq!(h[(i, i)] - t[(i, i)], v[i]);
        }
        assert!(hamiltonian(&t, &[0.0; 5]).is_err());
        let mut bad = vec![0.0; 19];
        bad[3] = f64::INFINITY;
        assert!(matches!(hamiltonian(&t, &bad), Err(SolverError::GridSingularity { .. })));
    }

    #[test]
    fn diagonal_spectrum() {
        let h = DenseMatrix::from_row_slice(2, 2, &[5.0, 0.0, 0.0, -1.0]);
        let r = solve_spectrum(&h, 2).unwrap();
        assert_eq!(r.eigenvalues, vec![-1.0, 5.0]);
    }
}
