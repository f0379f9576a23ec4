use std::f64::consts::PI;

use hookamp::amplitude::{
    char_poly_from_roots, companion_transpose_step, hook_content_amplitude, interp_coeffs,
    max_amplitude_polydisc, refined_bound, repeated_root_closed_form,
    simulated_extremal_amplitude, simulate, AmplitudeQuery, InterpMethod,
};
use hookamp::Complex64;
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0f64..1.0, 0.0f64..(2.0 * PI)).prop_map(|(r, a)| Complex64::from_polar(r.sqrt(), a))
}

fn simple_grid(max_n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(disc_point(), 1..=max_n).prop_filter("well separated", |z| {
        z.iter()
            .enumerate()
            .all(|(i, a)| z[..i].iter().all(|b| (a - b).norm() > 0.05))
    })
}

fn rel_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().map(|c| c.norm()).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn three_routes_agree(z in simple_grid(8), extra in 0usize..=32) {
        let t = z.len() + extra;
        let v = interp_coeffs(&z, t, InterpMethod::Vandermonde).unwrap();
        let r = interp_coeffs(&z, t, InterpMethod::Recurrence).unwrap();
        let s = interp_coeffs(&z, t, InterpMethod::Schur).unwrap();
        prop_assert!(rel_dev(&r.psi, &v.psi) <= 1e-7);
        prop_assert!(rel_dev(&r.psi, &s.psi) <= 1e-7);
    }

    #[test]
    fn companion_step_advances_time(z in simple_grid(8), extra in 0usize..=30) {
        let t = z.len() + extra;
        let f = char_poly_from_roots(&z).unwrap();
        let now = interp_coeffs(&z, t, InterpMethod::Schur).unwrap();
        let next = interp_coeffs(&z, t + 1, InterpMethod::Schur).unwrap();
        let stepped = companion_transpose_step(&now.psi, f.coeffs());
        prop_assert!(rel_dev(&next.psi, &stepped) <= 1e-8);
    }

    #[test]
    fn trajectory_matches_interpolation(
        z in simple_grid(6),
        init in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        extra in 0usize..=25,
    ) {
        let n = z.len();
        let t = n + extra;
        let x0: Vec<Complex64> = init[..n].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let spec = char_poly_from_roots(&z).unwrap();
        let traj = simulate(&spec, &x0, t).unwrap();
        let psi = interp_coeffs(&z, t, InterpMethod::Recurrence).unwrap();
        let dot: Complex64 = psi.psi.iter().zip(&x0).map(|(p, x)| p * x).sum();
        let scale = psi.psi.iter().zip(&x0).map(|(p, x)| (p * x).norm()).sum::<f64>().max(1.0);
        prop_assert!((traj[t] - dot).norm() <= 1e-8 * scale);
    }

    #[test]
    fn exact_below_refined(n in 1usize..=8, extra in 0usize..=32, r in 0.01f64..=1.0) {
        let t = n + extra;
        let q = AmplitudeQuery::new(t, vec![r; n], vec![1.0; n]).unwrap();
        let exact = max_amplitude_polydisc(&q).unwrap();
        let refined = refined_bound(n, r, t);
        prop_assert!(exact <= refined * (1.0 + 1e-12));
        if t > n {
            prop_assert!(exact < refined);
        }
    }

    #[test]
    fn hook_content_matches_closed_form(n in 1usize..=8, extra in 0usize..=32, r in 0.05f64..=2.0) {
        let t = n + extra;
        let a = hook_content_amplitude(n, r, t);
        let b = repeated_root_closed_form(n, r, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * b.abs());
    }

    #[test]
    fn cophase_simulation_attains(
        radii in prop::collection::vec(0.05f64..=1.5, 1..=6),
        weights in prop::collection::vec(0.1f64..=2.0, 6),
        extra in 0usize..=24,
        which in 0usize..3,
    ) {
        let n = radii.len();
        let theta = [0.0, PI / 3.0, PI][which];
        let q = AmplitudeQuery::new(n + extra, radii, weights[..n].to_vec()).unwrap();
        let exact = max_amplitude_polydisc(&q).unwrap();
        let sim = simulated_extremal_amplitude(&q, theta).unwrap();
        prop_assert!((sim - exact).abs() <= 1e-9 * exact);
    }
}
