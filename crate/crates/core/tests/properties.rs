use num_complex::Complex64;
use proptest::prelude::*;

use su11_core::bargmann::{build_matrix, rel_deviation, v_alt, v_general, v_standard};
use su11_core::classical::{default_init, solve_classical, SolveOptions};
use su11_core::coeffs::{CoefficientProfile, Constants};
use su11_core::group::{disentangle, mat_dist, GroupElement};

fn element() -> impl Strategy<Value = GroupElement> {
    (0.01f64..4.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(s, th, ps)| GroupElement::from_polar(s, th, ps))
}

fn bargmann_index() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.25), Just(0.75), 0.3f64..2.5]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn disentangling_round_trips(g in element()) {
        let p = disentangle(&g).unwrap();
        let back = p.reconstruct();
        prop_assert!(mat_dist(&back.matrix(), &g.matrix()) < 1e-12 * (1.0 + g.s()));
    }

    #[test]
    fn closed_forms_agree(g in element(), k in bargmann_index(), mp in 0u32..7, m in 0u32..7) {
        let a = v_standard(k, mp, m, &g).unwrap();
        let b = v_alt(k, mp, m, &g).unwrap();
        let c = v_general(k, mp, m, &g).unwrap();
        prop_assert!(rel_deviation(a, b) < 1e-9, "{a} vs {b}");
        prop_assert!(rel_deviation(a, c) < 1e-9, "{a} vs {c}");
    }

    #[test]
    fn column_probabilities_never_exceed_one(g in element(), k in bargmann_index()) {
        let n = 24;
        let mat = build_matrix(k, &g, n, 1e-12).unwrap();
        for m in 0..n {
            let sums = mat.column_partial_sums(m);
            prop_assert!(sums.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!(sums[n - 1] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn wronskian_invariant_survives_integration(
        a0 in 1.0f64..3.0,
        ratio in 0.0f64..0.8,
        a in -0.1f64..0.1,
    ) {
        // A₁ < A₀ keeps the mass positive and the motion oscillatory
        let c = Constants::new(1.0, 1.0, 0.25).unwrap();
        let profile = CoefficientProfile::constant(a0, ratio * a0, a, c.w_c);
        let init = default_init(&profile, &c, 0.0).unwrap();
        let tr = solve_classical(&profile, &c, &init, 0.0, 10.0, &SolveOptions::new(1e-12, 0.05)).unwrap();
        prop_assert!(tr.omega_drift() <= 1e-9);
        prop_assert!(tr.rho.iter().all(|r| *r > 0.0));
    }
}

#[test]
fn identity_acts_trivially() {
    let g = GroupElement::identity();
    for k in [0.25, 0.75, 1.4] {
        for mp in 0..6 {
            for m in 0..6 {
                let want = if m == mp { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                assert!((v_standard(k, mp, m, &g).unwrap() - want).norm() < 1e-15);
            }
        }
    }
}
