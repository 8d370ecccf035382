//! The two potential families, the critical-point cubic of the hyperbolic
//! well, and the spectral-phase classifier built on it.
//!
//! Hyperbolic family (x > 0):
//!
//! ```text
//! V_I(x) = V0 / sinh⁴(κx) + A / sinh²(κx) + B / cosh²(κx)
//! ```
//!
//! Trigonometric family (0 < x < a, ρ = π / 2a):
//!
//! ```text
//! V_II(x) = V0 / cos⁴(ρx) + C / cos²(ρx) + D / sin²(ρx)
//! ```
//!
//! and its mirror image `Ṽ_II(x) = V_II(a − x)`, which swaps sin and cos.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("x = {x} is outside the open domain ({lower}, {upper})")]
    Domain { x: f64, lower: f64, upper: f64 },
}

fn require(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), PotentialError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter { name, value, reason })
    }
}

/// Parameters `{V0, A, B, κ}` of the hyperbolic well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicParams {
    v0: f64,
    a: f64,
    b: f64,
    kappa: f64,
}

impl HyperbolicParams {
    pub fn new(v0: f64, a: f64, b: f64, kappa: f64) -> Result<Self, PotentialError> {
        require("V0", v0, v0 > 0.0, "must be positive")?;
        require("A", a, true, "must be finite")?;
        require("B", b, true, "must be finite")?;
        require("kappa", kappa, kappa > 0.0, "must be positive")?;
        Ok(Self { v0, a, b, kappa })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `V_I(x)` for `x > 0`.
    pub fn eval(&self, x: f64) -> Result<f64, PotentialError> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(PotentialError::Domain {
                x,
                lower: 0.0,
                upper: f64::INFINITY,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let kx = self.kappa * x;
        let s2 = kx.sinh().powi(2);
        let c2 = kx.cosh().powi(2);
        self.v0 / (s2 * s2) + self.a / s2 + self.b / c2
    }

    /// The potential written in the variable `s = sinh²(κx)`.
    pub fn eval_in_s(&self, s: f64) -> f64 {
        self.v0 / (s * s) + self.a / s + self.b / (1.0 + s)
    }

    /// Coefficients of the cubic in `s = sinh²(κx)` whose positive roots are
    /// the critical points of `V_I`.
    pub fn critical_cubic(&self) -> Cubic {
        Cubic {
            c3: self.a + self.b,
            c2: 2.0 * (self.v0 + self.a),
            c1: 4.0 * self.v0 + self.a,
            c0: 2.0 * self.v0,
        }
    }

    /// Limit of `V_I(x)` as `x → ∞`. Every term decays, so this is zero
    /// regardless of the parameters.
    pub fn asymptote(&self) -> f64 {
        0.0
    }
}

/// `V_I(x)`; errors for `x ≤ 0`.
pub fn eval_hyperbolic(p: &HyperbolicParams, x: f64) -> Result<f64, PotentialError> {
    p.eval(x)
}

/// Parameters `{V0, C, D, a}` of the trigonometric well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigParams {
    v0: f64,
    c: f64,
    d: f64,
    a: f64,
}

impl TrigParams {
    pub fn new(v0: f64, c: f64, d: f64, a: f64) -> Result<Self, PotentialError> {
        require("V0", v0, v0 > 0.0, "must be positive")?;
        require("C", c, true, "must be finite")?;
        require("D", d, d > 0.0, "must be positive")?;
        require("a", a, a > 0.0, "must be positive")?;
        Ok(Self { v0, c, d, a })
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn width(&self) -> f64 {
        self.a
    }
    /// ρ = π / 2a.
    pub fn rho(&self) -> f64 {
        PI / (2.0 * self.a)
    }

    /// `V_II(x)`, or the mirrored `Ṽ_II(x)` when `reflected` is set.
    pub fn eval(&self, x: f64, reflected: bool) -> Result<f64, PotentialError> {
        if !(x > 0.0 && x < self.a) {
            return Err(PotentialError::Domain {
                x,
                lower: 0.0,
                upper: self.a,
            });
        }
        Ok(self.eval_unchecked(x, reflected))
    }

    pub(crate) fn eval_unchecked(&self, x: f64, reflected: bool) -> f64 {
        let (sn, cs) = (self.rho() * x).sin_cos();
        let (sn2, cs2) = if reflected {
            (cs * cs, sn * sn)
        } else {
            (sn * sn, cs * cs)
        };
        self.v0 / (cs2 * cs2) + self.c / cs2 + self.d / sn2
    }
}

/// `V_II(x)` or `Ṽ_II(x)`; errors outside `0 < x < a`.
pub fn eval_trig(p: &TrigParams, x: f64, reflected: bool) -> Result<f64, PotentialError> {
    p.eval(x, reflected)
}

/// Either potential family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Potential {
    Hyperbolic(HyperbolicParams),
    Trigonometric(TrigParams),
}

impl Potential {
    /// Potential value; `V_II` (not the mirror) for the trigonometric family.
    pub fn eval(&self, x: f64) -> Result<f64, PotentialError> {
        match self {
            Potential::Hyperbolic(p) => p.eval(x),
            Potential::Trigonometric(p) => p.eval(x, false),
        }
    }
}

/// `c3 s³ + c2 s² + c1 s + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Cubic {
    pub fn eval(&self, s: f64) -> f64 {
        ((self.c3 * s + self.c2) * s + self.c1) * s + self.c0
    }

    pub fn derivative(&self, s: f64) -> f64 {
        (3.0 * self.c3 * s + 2.0 * self.c2) * s + self.c1
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.c3.abs().max(self.c2.abs()).max(self.c1.abs()).max(self.c0.abs())
    }

    pub fn positive_real_roots(&self) -> Vec<f64> {
        positive_real_roots(self.c3, self.c2, self.c1, self.c0)
    }
}

const ROOT_DEDUP_REL: f64 = 1e-9;

/// Real roots of `c0 + c1 x` / quadratic / cubic, unsorted, not deduplicated.
fn real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        if c2 == 0.0 {
            if c1 == 0.0 {
                return Vec::new();
            }
            return vec![-c0 / c1];
        }
        return quadratic_roots(c2, c1, c0);
    }

    // Monic form s³ + a s² + b s + c, then depressed t³ + p t + q with s = t − a/3.
    let (a, b, c) = (c2 / c3, c1 / c3, c0 / c3);
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let scale = 1.0 + a.abs().max(b.abs().sqrt()).max(c.abs().cbrt());
    if p == 0.0 && q == 0.0 {
        return vec![-shift];
    }
    if disc > 1e-14 * scale.powi(6) {
        // one real root
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        vec![u + v - shift]
    } else if disc < -1e-14 * scale.powi(6) {
        // three distinct real roots
        let r = (-p / 3.0).sqrt();
        let arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi - 2.0 * PI * k as f64) / 3.0).cos() - shift)
            .collect()
    } else {
        // repeated root
        let u = (-q / 2.0).cbrt();
        vec![2.0 * u - shift, -u - shift]
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-14 * (b * b).max((4.0 * a * c).abs()) {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    let q = -0.5 * (b + disc.sqrt().copysign(b));
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// All real roots `s > 0` of the cubic (degrading to quadratic or linear when
/// leading coefficients vanish), ascending, with near-coincident roots merged.
pub fn positive_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let cubic = Cubic { c3, c2, c1, c0 };
    let mut roots: Vec<f64> = real_roots(c3, c2, c1, c0)
        .into_iter()
        .filter(|r| r.is_finite())
        .map(|r| {
            // one Newton polish, kept only if it helps
            let d = cubic.derivative(r);
            if d != 0.0 {
                let polished = r - cubic.eval(r) / d;
                if polished.is_finite() && cubic.eval(polished).abs() <= cubic.eval(r).abs() {
                    return polished;
                }
            }
            r
        })
        .filter(|&r| r > 0.0)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|later, earlier| (*later - *earlier).abs() <= ROOT_DEDUP_REL * earlier.abs().max(*later));
    roots
}

/// Regions of the spectral phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    /// Bound states only.
    B,
    /// Bound states and resonances.
    BR,
    /// Resonances only.
    R,
    /// Scattering states only.
    S,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::B => "B",
            Phase::BR => "B&R",
            Phase::R => "R",
            Phase::S => "S",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A phase together with the critical-point evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralPhase {
    pub phase: Phase,
    /// Positive roots `s = sinh²(κx)` of the critical cubic, ascending.
    pub positive_roots: Vec<f64>,
    /// Potential at the well minimum, if there is one.
    pub min_value: Option<f64>,
    /// Potential at the barrier top, if there is one.
    pub max_value: Option<f64>,
    /// Set for R and B&R, whose mutual boundary rests on necessary
    /// conditions only.
    pub heuristic: bool,
}

/// Classifies `V_I` into one of the four spectral phases.
///
/// `dV/ds = −cubic(s) / (s³ (1 + s)²)`, so a root where the cubic falls
/// through zero is a minimum and one where it rises is a maximum. Pure bound
/// spectra additionally require `A + B < 0`.
pub fn classify_phase(p: &HyperbolicParams) -> SpectralPhase {
    let cubic = p.critical_cubic();
    let roots = cubic.positive_real_roots();

    let mut min_value = None;
    let mut max_value = None;
    for &s in &roots {
        let slope = cubic.derivative(s);
        if slope < 0.0 && min_value.is_none() {
            min_value = Some(p.eval_in_s(s));
        } else if slope > 0.0 && min_value.is_some() && max_value.is_none() {
            max_value = Some(p.eval_in_s(s));
        }
    }

    let asymptote = p.asymptote();
    let phase = match (min_value, max_value) {
        (Some(vmin), None) if vmin < 0.0 && cubic.c3 < 0.0 => Phase::B,
        (Some(vmin), Some(vmax)) if vmin < 0.0 && vmax > asymptote => Phase::BR,
        (Some(vmin), Some(vmax)) if vmin >= 0.0 && vmax > asymptote && vmax > vmin => Phase::R,
        _ => Phase::S,
    };

    SpectralPhase {
        phase,
        positive_roots: roots,
        min_value,
        max_value: max_value.filter(|_| phase != Phase::S),
        heuristic: matches!(phase, Phase::BR | Phase::R),
    }
}

/// Phase classification over a rectangular `(A, B)` grid.
#[derive(Debug, Clone, Serialize)]
pub struct SpdGrid {
    pub v0: f64,
    pub kappa: f64,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// `phases[i][j]` is the node `(a_values[i], b_values[j])`.
    pub phases: Vec<Vec<Phase>>,
    /// Upper edge `B = κ²/8` of the TRA solution rectangle.
    pub tra_b_limit: f64,
    /// Right edge `A = V0` of the TRA solution rectangle.
    pub tra_a_limit: f64,
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    let (lo, hi) = range;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Evaluates [`classify_phase`] on `resolution × resolution` nodes spanning
/// `a_range × b_range` (endpoints included).
pub fn spd_grid(
    v0: f64,
    kappa: f64,
    a_range: (f64, f64),
    b_range: (f64, f64),
    resolution: usize,
) -> Result<SpdGrid, PotentialError> {
    require("resolution", resolution as f64, resolution >= 2, "need at least 2 nodes per axis")?;
    HyperbolicParams::new(v0, 0.0, 0.0, kappa)?;
    let a_values = linspace(a_range, resolution);
    let b_values = linspace(b_range, resolution);
    let phases = a_values
        .par_iter()
        .map(|&a| {
            b_values
                .iter()
                .map(|&b| {
                    HyperbolicParams::new(v0, a, b, kappa)
                        .map(|p| classify_phase(&p).phase)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpdGrid {
        v0,
        kappa,
        a_values,
        b_values,
        phases,
        tra_b_limit: kappa * kappa / 8.0,
        tra_a_limit: v0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> HyperbolicParams {
        HyperbolicParams::new(10.0, -20.0, -30.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HyperbolicParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(HyperbolicParams::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(TrigParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(TrigParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(HyperbolicParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn hyperbolic_unit_argument() {
        let p = HyperbolicParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!((p.eval(1f64.asinh()).unwrap() - 1.0).abs() < 1e-14);

        let p = HyperbolicParams::new(3.0, -2.0, 5.0, 2.0).unwrap();
        let x = 1f64.asinh() / 2.0;
        assert!((p.eval(x).unwrap() - (3.0 - 2.0 + 2.5)).abs() < 1e-13);
    }

    #[test]
    fn hyperbolic_rejects_origin() {
        assert!(matches!(s1().eval(0.0), Err(PotentialError::Domain { .. })));
        assert!(s1().eval(-1.0).is_err());
    }

    #[test]
    fn hyperbolic_decays_to_zero() {
        let p = s1();
        let v = p.eval(30.0 / p.kappa()).unwrap();
        assert!((v - p.asymptote()).abs() < 1e-12);
    }

    #[test]
    fn trig_midpoint() {
        let p = TrigParams::new(1.5, -0.7, 2.5, 3.0).unwrap();
        let expected = 1.5 * 4.0 - 0.7 * 2.0 + 2.5 * 2.0;
        let mid = p.eval(1.5, false).unwrap();
        assert!((mid - expected).abs() < 1e-12);
        assert!((p.eval(1.5, true).unwrap() - mid).abs() < 1e-12);
    }

    #[test]
    fn trig_domain() {
        let p = TrigParams::new(5.0, -10.0, 2.0, 1.0).unwrap();
        assert!(p.eval(0.0, false).is_err());
        assert!(p.eval(1.0, true).is_err());
        assert!((p.rho() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn trig_reflection() {
        let p = TrigParams::new(5.0, -10.0, 2.0, 1.0).unwrap();
        let a = p.eval(0.25, false).unwrap();
        let b = p.eval(0.75, true).unwrap();
        assert!((a - b).abs() <= 1e-14 * a.abs());
    }

    #[test]
    fn cubic_coefficients() {
        let c = s1().critical_cubic();
        assert_eq!((c.c3, c.c2, c.c1, c.c0), (-50.0, -20.0, 20.0, 20.0));
        let p = HyperbolicParams::new(2.0, 0.0, 0.0, 1.0).unwrap();
        let c = p.critical_cubic();
        assert_eq!((c.c3, c.c2, c.c1, c.c0), (0.0, 4.0, 8.0, 4.0));
        assert!(c.positive_real_roots().is_empty());
    }

    #[test]
    fn factored_cubic_roots() {
        let r = positive_real_roots(1.0, -6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_quadratic_is_negative() {
        assert!(positive_real_roots(0.0, 2.0, 4.0, 2.0).is_empty());
    }

    #[test]
    fn degenerate_forms() {
        assert_eq!(positive_real_roots(0.0, 0.0, -2.0, 4.0), vec![2.0]);
        let r = positive_real_roots(0.0, 1.0, -3.0, 2.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[1] - 2.0).abs() < 1e-14);
        // (s - 1)^2 (s - 4)
        let r = positive_real_roots(1.0, -6.0, 9.0, -4.0);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] - 1.0).abs() < 1e-6 && (r[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn s1_single_positive_root() {
        let c = s1().critical_cubic();
        let roots = c.positive_real_roots();
        assert_eq!(roots.len(), 1);

        // sign-change scan + bisection oracle
        let f = |s: f64| c.eval(s);
        let mut brackets = Vec::new();
        let mut prev = 1e-6;
        for i in 1..=200_000 {
            let s = 1e-6 + i as f64 * 1e-4;
            if f(prev).signum() != f(s).signum() {
                brackets.push((prev, s));
            }
            prev = s;
        }
        assert_eq!(brackets.len(), 1);
        let (mut lo, mut hi) = brackets[0];
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo).signum() == f(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((roots[0] - 0.5 * (lo + hi)).abs() < 1e-12);
        assert!(c.eval(roots[0]).abs() <= 1e-10 * c.max_abs_coefficient());
    }

    #[test]
    fn s1_is_pure_bound() {
        let ph = classify_phase(&s1());
        assert_eq!(ph.phase, Phase::B);
        assert!(ph.min_value.unwrap() < 0.0);
        assert!(!ph.heuristic);
    }

    #[test]
    fn repulsive_potential_scatters() {
        let p = HyperbolicParams::new(4.0, 4.0, 4.0, 1.0).unwrap();
        let ph = classify_phase(&p);
        assert_eq!(ph.phase, Phase::S);
        assert!(ph.min_value.is_none());
    }

    #[test]
    fn barrier_phases() {
        // deep well behind a barrier
        let br = HyperbolicParams::new(1.0, -10.0, 20.0, 1.0).unwrap();
        let ph = classify_phase(&br);
        assert_eq!(ph.positive_roots.len(), 2);
        assert_eq!(ph.phase, Phase::BR, "{ph:?}");
        assert!(ph.heuristic);
    }

    #[test]
    fn spd_grid_shape_and_lines() {
        let g = spd_grid(10.0, 1.0, (-60.0, 40.0), (-60.0, 40.0), 11).unwrap();
        assert_eq!(g.phases.len(), 11);
        assert!(g.phases.iter().all(|row| row.len() == 11));
        assert_eq!(g.tra_b_limit, 0.125);
        assert_eq!(g.tra_a_limit, 10.0);
        assert!(spd_grid(10.0, 1.0, (0.0, 1.0), (0.0, 1.0), 1).is_err());
    }

    #[test]
    fn spd_node_s1() {
        let g = spd_grid(10.0, 1.0, (-20.0, 0.0), (-30.0, 0.0), 2).unwrap();
        assert_eq!(g.phases[0][0], Phase::B);
        let again = spd_grid(10.0, 1.0, (-20.0, 0.0), (-30.0, 0.0), 2).unwrap();
        assert_eq!(g.phases, again.phases);
    }
}
