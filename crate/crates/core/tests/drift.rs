use kinstab::diagnostics::regularity_witness;
use kinstab::drift::{drift_eval, holder_seminorm_estimate, DriftSpec};
use kinstab::kinetic::PhasePoint;
use kinstab::rng::RngStream;
use proptest::prelude::*;

fn specs() -> Vec<DriftSpec> {
    vec![
        DriftSpec::separable_holder(1.0, 1.5, 0.6, 1).unwrap(),
        DriftSpec::separable_holder(2.5, 1.8, 0.9, 3).unwrap(),
        DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 12, 0).unwrap(),
        DriftSpec::multiscale(0.7, 1.5, 0.3, 2, 12, 5).unwrap(),
    ]
}

#[test]
fn drifts_respect_documented_bound() {
    let mut rng = RngStream::new(21, 0);
    for spec in specs() {
        let d = spec.dim();
        let mut out = vec![0.0; d];
        let mut sup = 0.0f64;
        for k in 0..1_000_000 {
            let r = [1.0, 10.0, 1e4][k % 3];
            let x: Vec<f64> = (0..d).map(|_| r * (2.0 * rng.open01() - 1.0)).collect();
            let v: Vec<f64> = (0..d).map(|_| r * (2.0 * rng.open01() - 1.0)).collect();
            spec.eval_into(&x, &v, &mut out);
            sup = sup.max(out.iter().map(|c| c * c).sum::<f64>().sqrt());
        }
        assert!(
            sup <= spec.sup_bound() * (1.0 + 1e-14),
            "{:?}: {sup} > {}",
            spec.kind(),
            spec.sup_bound()
        );
    }
}

#[test]
fn separable_seminorm_is_bounded_and_stable() {
    for d in [1usize, 2] {
        let spec = DriftSpec::separable_holder(1.0, 1.5, 0.6, d).unwrap();
        let bound = 4.0 * (d as f64).sqrt() + 0.01;
        let mut est = Vec::new();
        for (i, pairs) in [1_000usize, 10_000, 100_000].into_iter().enumerate() {
            let e = holder_seminorm_estimate(&spec, pairs, 4.0, &mut RngStream::new(22, i as u64));
            assert!(e <= bound, "d={d} pairs={pairs}: {e}");
            est.push(e);
        }
        assert!(est[2] <= 1.5 * est[0], "estimate keeps growing: {est:?}");
    }
}

#[test]
fn multiscale_is_exactly_beta_regular_in_velocity() {
    let spec = DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 12, 0).unwrap();
    let (c, f) = regularity_witness(&spec, 0.8, 5_000, 4.0, 23);
    assert!(f >= 2.0 * c, "rough exponent ratio only grew {c} -> {f}");
    let (c, f) = regularity_witness(&spec, 0.6, 5_000, 4.0, 23);
    assert!(f <= 1.5 * c, "exact exponent ratio grew {c} -> {f}");
}

proptest! {
    #[test]
    fn separable_is_odd(x in -5.0..5.0f64, v in -5.0..5.0f64, x2 in -5.0..5.0f64, v2 in -5.0..5.0f64) {
        let spec = DriftSpec::separable_holder(1.7, 1.4, 0.5, 2).unwrap();
        let p = drift_eval(&spec, &PhasePoint::new(vec![x, x2], vec![v, v2]).unwrap()).unwrap();
        let m = drift_eval(&spec, &PhasePoint::new(vec![-x, -x2], vec![-v, -v2]).unwrap()).unwrap();
        prop_assert_eq!(p[0], -m[0]);
        prop_assert_eq!(p[1], -m[1]);
    }
}
