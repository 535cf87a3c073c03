//! Closed-form torsional roots against the exact two-inertia characteristic equation.

mod oracles;

use proptest::prelude::*;

use driveshaft::torsional::{torsional_frequencies, TorsionalSystem};
use oracles::torsional::exact_roots;

fn system(jg: f64, jt: f64, js: f64) -> TorsionalSystem<f64> {
    TorsionalSystem { j_g: jg, j_t: jt, j_s: js, l: 7.41, g: 16e9, rho: 1800.0 }
}

#[test]
fn approximation_tracks_exact_roots_in_case_study_regime() {
    let (jg, jt) = (0.94, 3.76);
    let mut worst = 0.0f64;
    for js in [0.01, 0.02, 0.03, 0.04, 0.06] {
        let exact = exact_roots(jg, jt, js, 4);
        let sys = system(jg, jt, js);
        for (i, u) in exact.iter().enumerate() {
            let approx = sys.upsilon(i as u32 + 1);
            let err = (approx / u - 1.0).abs();
            worst = worst.max(err);
            assert!(err < 0.05, "J_s {js}, mode {}: closed form {approx}, exact {u}", i + 1);
        }
    }
    println!("worst relative error {:.3}%", 100.0 * worst);
}

#[test]
fn light_shaft_approaches_free_free_roots() {
    let (jg, jt) = (1.0, 1.0);
    let js = 1e-4;
    let sys = system(jg, jt, js);
    let exact = exact_roots(jg, jt, js, 5);
    for n in 2..=5u32 {
        let target = (n - 1) as f64 * std::f64::consts::PI;
        let u = sys.upsilon(n);
        assert!((u / target - 1.0).abs() < 0.01, "mode {n}: {u} vs {target}");
        assert!((exact[n as usize - 1] / target - 1.0).abs() < 0.01);
    }
}

#[test]
fn exact_first_root_matches_rigid_shaft_limit() {
    // a very light shaft is a spring between two inertias:
    // υ² = J_s (1/J_G + 1/J_T)
    let (jg, jt, js) = (0.94, 3.76, 1e-6);
    let u = exact_roots(jg, jt, js, 1)[0];
    let spring = (js * (1.0 / jg + 1.0 / jt)).sqrt();
    assert!((u / spring - 1.0).abs() < 1e-3);
    assert!((system(jg, jt, js).upsilon(1) / spring - 1.0).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn frequencies_are_ordered(jg in 0.1..5.0f64, jt in 0.1..5.0f64, js in 1e-3..0.2f64) {
        let w = torsional_frequencies(&system(jg, jt, js), 6).unwrap();
        prop_assert!(w.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn swapping_end_inertias_changes_nothing(jg in 0.1..5.0f64, jt in 0.1..5.0f64, js in 1e-3..0.2f64) {
        let a = torsional_frequencies(&system(jg, jt, js), 4).unwrap();
        let b = torsional_frequencies(&system(jt, jg, js), 4).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x / y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frequency_is_inverse_in_length(l in 0.5..10.0f64, js in 1e-3..0.2f64) {
        let mut s = system(0.94, 3.76, js);
        let w1 = torsional_frequencies(&s, 3).unwrap();
        s.l = 2.0 * l;
        let w2 = torsional_frequencies(&s, 3).unwrap();
        s.l = l;
        let w3 = torsional_frequencies(&s, 3).unwrap();
        for i in 0..3 {
            prop_assert!((w3[i] / w2[i] - 2.0).abs() < 1e-12);
            prop_assert!(w1[i] > 0.0);
        }
    }
}
