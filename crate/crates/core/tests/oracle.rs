use hookamp::oracle::{brute_force_max, OracleConfig};
use proptest::prelude::*;

fn config(phase_grid: usize, random_trials: usize, seed: u64) -> OracleConfig<f64> {
    OracleConfig { phase_grid, radial_grid: 2, random_trials, seed, tolerance: 1e-9 }
}

fn instance() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            n..=(n + 4).min(10),
            prop::collection::vec(0.1f64..=1.5, n),
            prop::collection::vec(0.1f64..=2.0, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn brute_force_never_exceeds_closed_form((t, r, w) in instance(), seed in any::<u64>()) {
        let res = brute_force_max(t, &r, &w, &config(16, 500, seed)).unwrap();
        prop_assert!(res.brute_max <= res.closed_form + 1e-9 * res.closed_form.max(1.0));
    }

    #[test]
    fn refining_phase_grid_is_monotone((t, r, w) in instance(), seed in any::<u64>()) {
        let mut prev: Option<(f64, f64)> = None;
        for m in [4usize, 8, 16, 32] {
            let res = brute_force_max(t, &r, &w, &config(m, 200, seed)).unwrap();
            if let Some((b, g)) = prev {
                prop_assert!(res.brute_max >= b - 1e-12);
                prop_assert!(res.gap <= g + 1e-12);
            }
            prev = Some((res.brute_max, res.gap));
        }
    }
}

#[test]
fn identical_seed_is_bit_identical() {
    let cfg = config(32, 2000, 42);
    let a = brute_force_max(4, &[0.9, 0.7, 0.5], &[1.0, 2.0, 0.5], &cfg).unwrap();
    let b = brute_force_max(4, &[0.9, 0.7, 0.5], &[1.0, 2.0, 0.5], &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.brute_max.to_bits(), b.brute_max.to_bits());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
