use hookamp::amplitude::{max_amplitude_polydisc, AmplitudeQuery};
use hookamp::reinhardt::{
    dominated_vertex_filter, e_q_ones_closed, f_t, h_q_ones_closed, vertex_method,
    LogAffineRootDomain, PolydiscOracle, StandardOracle, WeightedL1Oracle,
};
use hookamp::SymTable64;
use num_bigint::BigUint;
use proptest::prelude::*;

fn positive(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..=1.8, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polydisc_reduction((r, w, extra) in (1usize..=6).prop_flat_map(|n| (positive(n), positive(n), 0usize..=24))) {
        let n = r.len();
        let t = n + extra;
        let domain = LogAffineRootDomain::polydisc(&r);
        let sol = vertex_method(&domain, &PolydiscOracle { bounds: w.clone() }, t).unwrap();
        let exact = max_amplitude_polydisc(&AmplitudeQuery::new(t, r, w).unwrap()).unwrap();
        prop_assert!((sol.value - exact).abs() <= 1e-10 * exact);
    }

    #[test]
    fn amplitude_nondecreasing_in_log_radii(
        (v, dv, w, extra) in (1usize..=5).prop_flat_map(|n| (
            prop::collection::vec(-1.5f64..=0.5, n),
            prop::collection::vec(0.0f64..=0.7, n),
            positive(n),
            0usize..=20,
        ))
    ) {
        let t = v.len() + extra;
        let lo: Vec<f64> = v.iter().map(|x| x.exp()).collect();
        let hi: Vec<f64> = v.iter().zip(&dv).map(|(x, d)| (x + d).exp()).collect();
        let a = f_t(&lo, &w, t).unwrap();
        let b = f_t(&hi, &w, t).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn filter_preserves_value(
        (verts, a, extra) in (1usize..=4).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(-1.0f64..=0.3, n), 1..=8),
            positive(n),
            0usize..=16,
        ))
    ) {
        let n = a.len();
        let t = n + extra;
        let oracle = WeightedL1Oracle { a };
        let full = LogAffineRootDomain::new(verts.clone(), "full").unwrap();
        let kept = LogAffineRootDomain::new(dominated_vertex_filter(&verts), "kept").unwrap();
        let x = vertex_method(&full, &oracle, t).unwrap();
        let y = vertex_method(&kept, &oracle, t).unwrap();
        prop_assert_eq!(x.value, y.value);
    }
}

#[test]
fn shifted_ones_closed_forms() {
    for q in [2u64, 3] {
        for n in 1..=8usize {
            let mut point = vec![q as f64];
            point.extend(std::iter::repeat(1.0).take(n));
            let table = SymTable64::build_real(&point, 8).unwrap();
            for d in 0..=8usize {
                let e = table.e(d as isize);
                let h = table.h(d as isize).unwrap();
                assert_eq!(e.im, 0.0);
                assert_eq!(h.im, 0.0);
                assert_eq!(BigUint::from(e.re as u64), e_q_ones_closed(q, n, d), "e q={q} n={n} d={d}");
                assert_eq!(BigUint::from(h.re as u64), h_q_ones_closed(q, n, d), "h q={q} n={n} d={d}");
            }
        }
    }
}

#[test]
fn cube_around_ones_collapses() {
    let domain = LogAffineRootDomain::<f64>::shifted_cube(3, 0.5);
    let kept = dominated_vertex_filter(&domain.vertices);
    assert_eq!(kept.len(), 1);
    let oracle = StandardOracle::polydisc(vec![1.0; 3]).unwrap();
    let a = vertex_method(&domain, &oracle, 7).unwrap();
    let b = vertex_method(&LogAffineRootDomain::new(kept, "kept").unwrap(), &oracle, 7).unwrap();
    assert_eq!(a.value, b.value);
}
