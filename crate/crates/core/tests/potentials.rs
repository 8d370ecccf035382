use proptest::prelude::*;
use ptbound::potentials::{self, Phase};
use ptbound::{HyperbolicParams, TrigParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn nonnegative_a_plus_b_is_never_pure_bound(
        v0 in 0.1f64..100.0,
        a in -60.0f64..60.0,
        excess in 0.0f64..60.0,
        kappa in 0.2f64..3.0,
    ) {
        let b = -a + excess;
        let p = HyperbolicParams::new(v0, a, b, kappa).unwrap();
        prop_assert_ne!(potentials::classify_phase(&p).phase, Phase::B);
    }

    #[test]
    fn critical_roots_solve_the_cubic(
        v0 in 0.1f64..100.0,
        a in -60.0f64..60.0,
        b in -60.0f64..60.0,
        kappa in 0.2f64..3.0,
    ) {
        let p = HyperbolicParams::new(v0, a, b, kappa).unwrap();
        let cubic = p.critical_cubic();
        for s in cubic.positive_real_roots() {
            prop_assert!(s > 0.0);
            prop_assert!(cubic.eval(s).abs() <= 1e-10 * cubic.max_abs_coefficient() * s.powi(3).max(1.0));
        }
    }

    #[test]
    fn mirror_well_is_the_reflection(
        v0 in 0.1f64..100.0,
        c in -50.0f64..50.0,
        d in 0.1f64..20.0,
        width in 0.2f64..3.0,
        frac in 0.01f64..0.99,
    ) {
        let p = TrigParams::new(v0, c, d, width).unwrap();
        let x = frac * width;
        let direct = p.eval(x, false).unwrap();
        let mirror = p.eval(width - x, true).unwrap();
        prop_assert!((direct - mirror).abs() <= 1e-10 * direct.abs().max(1.0));
    }
}

#[test]
fn hyperbolic_well_flattens_to_zero() {
    let p = HyperbolicParams::new(50.0, -30.0, -20.0, 1.2).unwrap();
    let far = p.eval(30.0 / 1.2).unwrap();
    assert!((far - p.asymptote()).abs() < 1e-20);
    assert_eq!(p.asymptote(), 0.0);
}

#[test]
fn walls_are_rejected() {
    let p = TrigParams::new(1.0, -0.5, 1.0, 1.0).unwrap();
    assert!(p.eval(0.0, false).is_err());
    assert!(p.eval(1.0, false).is_err());
    assert!(HyperbolicParams::new(1.0, 0.0, 0.0, 1.0).unwrap().eval(0.0).is_err());
}

#[test]
fn phase_grid_has_every_region() {
    let grid = potentials::spd_grid(5.0, 1.0, (-60.0, 40.0), (-60.0, 40.0), 60).unwrap();
    let seen: std::collections::HashSet<Phase> = grid.phases.iter().flatten().copied().collect();
    for phase in [Phase::B, Phase::BR, Phase::S] {
        assert!(seen.contains(&phase), "{phase} missing from {seen:?}");
    }
}
