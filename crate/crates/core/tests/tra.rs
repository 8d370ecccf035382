use proptest::prelude::*;
use ptbound::dvr;
use ptbound::orthopoly::TraBranch;
use ptbound::tra::{self, TraError};
use ptbound::verify;
use ptbound::{HyperbolicParams, Potential, TrigParams};

fn trig_case() -> impl Strategy<Value = (TrigParams, f64)> {
    (1.0f64..100.0, prop_oneof![0.1f64..0.9, 1.1f64..3.0], 0.5f64..10.0, 0.5f64..2.0, 0.1f64..10.0).prop_map(
        |(v0, c_frac, d, a, t)| {
            let p = TrigParams::new(v0, -c_frac * v0, d, a).unwrap();
            let mu = (0.25 + 2.0 * d / p.rho().powi(2)).sqrt();
            let energy = 0.5 * p.rho().powi(2) * (mu + 1.0 + t).powi(2);
            (p, energy)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomial_route_matches_direct_recursion((p, energy) in trig_case()) {
        let pot = Potential::Trigonometric(p);
        let sol = tra::assemble_solution(&pot, energy);
        prop_assume!(sol.is_ok());
        let sol = sol.unwrap();
        let rc = tra::recursion_coefficients(&pot, &sol.basis).unwrap();
        let direct = tra::direct_coefficients(&rc);
        let scale = direct.iter().fold(1.0f64, |m, f| m.max(f.abs()));
        for (a, b) in sol.coeffs.iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn trig_well_branch_follows_c(v0 in 1.0f64..100.0, c_frac in prop_oneof![0.01f64..0.99, 1.01f64..5.0]) {
        let p = TrigParams::new(v0, -c_frac * v0, 1.0, 1.0).unwrap();
        let branch = tra::trig_series_params(&p).unwrap().branch;
        prop_assert_eq!(branch, if c_frac < 1.0 { TraBranch::Trig } else { TraBranch::Hyper });
    }

    #[test]
    fn hyperbolic_well_branch_follows_a(v0 in 1.0f64..100.0, a_frac in prop_oneof![0.01f64..0.99, -5.0f64..-0.01]) {
        let p = HyperbolicParams::new(v0, a_frac * v0, -5.0, 1.0).unwrap();
        let branch = tra::hyperbolic_series_params(&p).unwrap().branch;
        prop_assert_eq!(branch, if a_frac > 0.0 { TraBranch::Trig } else { TraBranch::Hyper });
    }
}

#[test]
fn truncation_grows_with_level() {
    let p = verify::s3();
    let levels = dvr::trig_spectrum(&p, 300, 10, false).unwrap().eigenvalues;
    let pot = Potential::Trigonometric(p);
    let sizes: Vec<usize> = levels.iter().map(|&e| tra::basis(&pot, e).unwrap().n_max).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
}

#[test]
fn hyperbolic_levels_have_a_basis() {
    let p = verify::s1();
    let levels = dvr::hyperbolic_bound_states(&p, &dvr::DvrConfig::HYPERBOLIC_DEFAULT).unwrap().eigenvalues;
    let pot = Potential::Hyperbolic(p);
    for e in levels {
        let b = tra::basis(&pot, e).unwrap();
        assert!(b.mu > 0.0 && b.nu < 0.0);
        assert!(b.mu + b.nu <= -2.0 * b.n_max as f64 - 1.0);
    }
}

#[test]
fn positive_energy_has_no_hyperbolic_basis() {
    let pot = Potential::Hyperbolic(verify::s1());
    assert!(matches!(tra::basis(&pot, 0.5), Err(TraError::OutsideValidity { .. })));
}

#[test]
fn branch_boundary_is_rejected() {
    let p = TrigParams::new(10.0, -10.0, 1.0, 1.0).unwrap();
    assert!(matches!(tra::trig_series_params(&p), Err(TraError::BranchBoundary { .. })));
}
