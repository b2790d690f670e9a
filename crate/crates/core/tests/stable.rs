use kinstab::diagnostics::{noise_moment_slope, scalar_increments};
use kinstab::rng::RngStream;
use kinstab::stable::{
    empirical_cf, exact_cf, sample_isotropic_stable_increment, sample_one_sided_stable,
    StableParams,
};
use kinstab::stats::{ks_one_sample, ks_two_sample, tail_slope};
use statrs::function::erf::erfc;

fn one_sided(a: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n)
        .map(|_| sample_one_sided_stable(a, &mut rng).unwrap())
        .collect()
}

#[test]
fn half_stable_matches_levy_distribution() {
    // For a = 1/2, S has the law of 1/(2N²): P(S ≤ s) = erfc(1 / (2√s)).
    let s = one_sided(0.5, 10_000, 1);
    let d = ks_one_sample(&s, |x| if x <= 0.0 { 0.0 } else { erfc(0.5 / x.sqrt()) }).unwrap();
    assert!(d <= 0.02, "KS = {d}");
}

#[test]
fn half_stable_matches_levy_by_construction() {
    // Same oracle through an independent route: sample 1/(2N²) directly.
    use rand_distr::{Distribution, StandardNormal};
    let s = one_sided(0.5, 10_000, 2);
    let mut rng = RngStream::new(2, 1);
    let levy: Vec<f64> = (0..10_000)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            1.0 / (2.0 * g * g)
        })
        .collect();
    let d = ks_two_sample(&s, &levy).unwrap();
    assert!(d <= 0.025, "KS = {d}");
}

#[test]
fn laplace_transform_at_unit_lambda() {
    for a in [0.5, 0.75] {
        let s = one_sided(a, 100_000, 3);
        let m = s.iter().map(|x| (-x).exp()).sum::<f64>() / s.len() as f64;
        assert!((m - (-1.0f64).exp()).abs() <= 0.01, "a = {a}: {m}");
        assert!(s.iter().all(|x| *x > 0.0));
    }
}

#[test]
fn one_sided_rejects_bad_index() {
    let mut rng = RngStream::new(0, 0);
    for a in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
        assert!(sample_one_sided_stable(a, &mut rng).is_err());
    }
}

#[test]
fn gaussian_limit_has_variance_two_dt() {
    let p = StableParams::new(2.0, 1).unwrap();
    let mut rng = RngStream::new(4, 0);
    let n = 100_000;
    let xs: Vec<f64> = (0..n)
        .map(|_| sample_isotropic_stable_increment(&p, 1.0, &mut rng).unwrap()[0])
        .collect();
    let var = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
    assert!((var - 2.0).abs() < 0.03, "var = {var}");
}

#[test]
fn params_and_step_are_validated() {
    assert!(StableParams::new(1.0, 1).is_err());
    assert!(StableParams::new(2.1, 1).is_err());
    assert!(StableParams::new(1.5, 0).is_err());
    let p = StableParams::new(1.5, 1).unwrap();
    let mut rng = RngStream::new(0, 0);
    assert!(sample_isotropic_stable_increment(&p, 0.0, &mut rng).is_err());
    assert!(sample_isotropic_stable_increment(&p, -1.0, &mut rng).is_err());
}

#[test]
fn characteristic_function_of_unit_increment() {
    for alpha in [1.2, 1.5] {
        let xs: Vec<Vec<f64>> = scalar_increments(alpha, 1.0, 100_000, 5, 0)
            .unwrap()
            .into_iter()
            .map(|x| vec![x])
            .collect();
        let cf = empirical_cf(&xs, &[1.0]).unwrap();
        assert!(
            (cf.re - (-1.0f64).exp()).abs() <= 0.01,
            "alpha {alpha}: {cf}"
        );
        assert!(cf.im.abs() <= 3.0 / (xs.len() as f64).sqrt());
    }
}

#[test]
fn isotropic_cf_in_three_dimensions() {
    // Rotation invariance: the CF depends on |ξ| only.
    let p = StableParams::new(1.5, 3).unwrap();
    let mut rng = RngStream::new(6, 0);
    let xs: Vec<Vec<f64>> = (0..100_000)
        .map(|_| sample_isotropic_stable_increment(&p, 1.0, &mut rng).unwrap())
        .collect();
    let s = 1.0 / 3f64.sqrt();
    for xi in [
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
        [s, s, s],
        [0.0, -0.6, 0.8],
    ] {
        let cf = empirical_cf(&xs, &xi).unwrap();
        assert!(
            (cf.re - exact_cf(1.5, 1.0, &xi)).abs() <= 0.01,
            "{xi:?}: {cf}"
        );
    }
}

#[test]
fn empirical_cf_trivial_cases() {
    let zeros = vec![vec![0.0, 0.0]; 10];
    let cf = empirical_cf(&zeros, &[3.0, -1.0]).unwrap();
    assert_eq!((cf.re, cf.im), (1.0, 0.0));
    let any = vec![vec![1.3], vec![-7.0]];
    let cf = empirical_cf(&any, &[0.0]).unwrap();
    assert_eq!((cf.re, cf.im), (1.0, 0.0));
    assert!(empirical_cf::<Vec<f64>>(&[], &[1.0]).is_err());
    assert!(empirical_cf(&any, &[1.0, 2.0]).is_err());
}

#[test]
fn self_similarity_quarter_time() {
    let short = scalar_increments(1.5, 0.25, 10_000, 7, 0).unwrap();
    let scaled: Vec<f64> = scalar_increments(1.5, 1.0, 10_000, 7, 1)
        .unwrap()
        .into_iter()
        .map(|x| 0.25f64.powf(1.0 / 1.5) * x)
        .collect();
    // Two-sample KS critical value at significance 0.01 is 0.023 here.
    assert!(ks_two_sample(&short, &scaled).unwrap() <= 0.023);
}

#[test]
fn tail_index_is_alpha() {
    let xs = scalar_increments(1.5, 1.0, 1_000_000, 8, 0).unwrap();
    let abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let fit = tail_slope(&abs, 2.0, 50.0, 20).unwrap();
    assert!((fit.slope + 1.5).abs() <= 0.15, "tail slope {}", fit.slope);
}

#[test]
fn truncated_moment_scales_like_sqrt_t() {
    let slope = noise_moment_slope(1.5, 1.0, 2.0, 20_000, 9).unwrap();
    assert!(slope >= (1.0f64 / 1.5).min(0.5) - 0.1, "slope {slope}");
}

#[test]
fn identical_streams_give_identical_samples() {
    let p = StableParams::new(1.7, 2).unwrap();
    let draw = || {
        let mut rng = RngStream::new(10, 3);
        (0..500)
            .flat_map(|_| sample_isotropic_stable_increment(&p, 0.01, &mut rng).unwrap())
            .map(f64::to_bits)
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(), draw());
    let mut other = RngStream::new(10, 4);
    let first = sample_isotropic_stable_increment(&p, 0.01, &mut other).unwrap();
    assert_ne!(first[0].to_bits(), draw()[0]);
}
