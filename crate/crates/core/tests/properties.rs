use std::f64::consts::PI;

use proptest::prelude::*;

use tws_persist::abelian::{default_options, melnikov_at, monomial_j, MonomialPerturbation, PerturbationSpec};
use tws_persist::catalog::{make_sine_gordon, Forcing};
use tws_persist::designer::condition_number;
use tws_persist::model::harmonic;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn harmonic_monomials_match_beta_function(q in 0u32..4, p in 1u32..4, h in 0.01f64..10.0) {
        // ∮ x^{2q} y^{2p−1} dx = r^{2q+2p} ∫₀^{2π} cos^{2q} sin^{2p} with r² = 2h
        let r2 = 2.0 * h;
        let trig = {
            let (a, b) = (q as usize, p as usize);
            let mut num = 1.0;
            for k in 0..a { num *= (2 * k + 1) as f64; }
            for k in 0..b { num *= (2 * k + 1) as f64; }
            let mut den = 1.0;
            for k in 1..=(a + b) { den *= (2 * k) as f64; }
            2.0 * PI * num / den
        };
        let expect = r2.powi((q + p) as i32) * trig;
        let got = monomial_j(&harmonic(), q, p, h, &default_options()).unwrap().value;
        prop_assert!((got - expect).abs() <= 1e-9 * expect.abs().max(1.0));
    }

    #[test]
    fn melnikov_is_linear_in_coefficients(a in -2.0f64..2.0, b in -2.0f64..2.0, frac in 0.05f64..0.95) {
        let sg = make_sine_gordon(2f64.sqrt(), Forcing::Zero).unwrap();
        let h = frac * sg.model.h_ceiling();
        let opts = default_options();
        let basis = |coeffs: &[f64]| {
            let m = MonomialPerturbation::from_parts(&[(0, 1), (1, 1)], coeffs).unwrap();
            melnikov_at(&sg.model, &PerturbationSpec::Monomials(m), h, &opts).unwrap().value
        };
        let combined = basis(&[a, b]);
        let split = a * basis(&[1.0, 0.0]) + b * basis(&[0.0, 1.0]);
        prop_assert!((combined - split).abs() < 1e-9);
    }

    #[test]
    fn condition_number_is_scale_invariant(s in 0.01f64..100.0, x in -1.0f64..1.0) {
        let rows = vec![vec![1.0, x], vec![x, 2.0]];
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * s).collect()).collect();
        let (k1, k2) = (condition_number(&rows), condition_number(&scaled));
        prop_assert!(k1 >= 1.0);
        prop_assert!((k1 - k2).abs() <= 1e-9 * k1);
    }
}
