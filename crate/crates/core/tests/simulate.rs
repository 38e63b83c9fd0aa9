mod common;

use hawkes::gof::{ks_exp_test, ks_two_sample, residual_transform};
use hawkes::intensity::mean_intensity;
use hawkes::simulate::{
    hawkes_by_clusters_with, multivariate_by_thinning, poisson_by_thinning, simulate, Algorithm,
    ClusterDepth, SimulationConfig,
};
use hawkes::{rng, EventSequence, HawkesError, HawkesModel, MultivariateHawkesModel};

fn run(algo: Algorithm, model: &HawkesModel, horizon: f64, seed: u64, index: u64) -> EventSequence {
    simulate(algo, horizon, model, &mut rng::replicate(seed, index), &SimulationConfig::default()).unwrap()
}

fn assert_valid(ev: &EventSequence) {
    let t = ev.times();
    assert!(t.windows(2).all(|w| w[0] < w[1]));
    assert!(t.iter().all(|&x| x > 0.0 && x <= ev.horizon()));
}

#[test]
fn constant_rate_thinning_mean_count() {
    let reps = 10_000;
    let total: usize = (0..reps)
        .map(|i| poisson_by_thinning(10.0, |_| 4.0, 4.0, &mut rng::replicate(1, i)).unwrap().len())
        .sum();
    let mean = total as f64 / reps as f64;
    assert!((mean - 40.0).abs() < 3.0 * (40.0 / reps as f64).sqrt(), "{mean}");
}

#[test]
fn sinusoidal_rate_passes_time_change_ks() {
    let ev = poisson_by_thinning(50.0, |t| 2.0 + t.sin(), 4.0, &mut rng::seeded(2)).unwrap();
    assert_valid(&ev);
    let big = |t: f64| 2.0 * t + 1.0 - t.cos();
    let mut prev = 0.0;
    let gaps: Vec<f64> = ev
        .times()
        .iter()
        .map(|&t| {
            let g = big(t) - prev;
            prev = big(t);
            g
        })
        .collect();
    assert!(ks_exp_test(&gaps).unwrap().p_value > 0.05);
}

#[test]
fn long_run_rate_matches_mean_intensity() {
    let model = HawkesModel::exponential(1.0, 1.0, 1.1).unwrap();
    let horizon = 20_000.0;
    let ev = run(Algorithm::Thinning, &model, horizon, 3, 0);
    let rate = ev.len() as f64 / horizon;
    // Standard error of N(T)/T from the count variance lambda T / (1 - n)^3.
    let se = (1.0 * horizon * 1331.0).sqrt() / horizon;
    assert!((rate - 11.0).abs() < 3.0 * se, "{rate} (se {se})");
}

#[test]
fn every_simulator_returns_valid_sequences() {
    let models = [
        HawkesModel::exponential(0.5, 2.0, 2.1).unwrap(),
        HawkesModel::exponential(2.0, 0.0, 1.0).unwrap(),
        HawkesModel::power_law(1.0, 0.4, 0.5, 1.8).unwrap(),
    ];
    for model in &models {
        for algo in Algorithm::ALL {
            for i in 0..5 {
                assert_valid(&run(algo, model, 40.0, 4, i));
            }
            assert!(run(algo, model, 0.0, 4, 0).is_empty());
        }
    }
}

#[test]
fn first_generation_cluster_mean() {
    // With one generation only, each immigrant brings Poi(n) children: E N = lambda T (1 + n).
    let model = HawkesModel::exponential(1.0, 1.0, 2.0).unwrap();
    let config = SimulationConfig { cluster_depth: ClusterDepth::FirstGeneration, ..Default::default() };
    let reps = 200;
    let horizon = 500.0;
    let counts: Vec<f64> = (0..reps)
        .map(|i| hawkes_by_clusters_with(horizon, &model, &mut rng::replicate(5, i), &config).unwrap().len() as f64)
        .collect();
    // Children of immigrants near the horizon fall outside; that loss is O(1 / beta).
    let expected = horizon * 1.5 - 0.5 / 2.0;
    let m = common::mean(&counts);
    let se = (common::variance(&counts) / reps as f64).sqrt();
    assert!((m - expected).abs() < 3.0 * se, "{m} vs {expected} (se {se})");

    let full = (0..reps)
        .map(|i| run(Algorithm::Cluster, &model, horizon, 5, i).len() as f64)
        .sum::<f64>()
        / reps as f64;
    assert!(full > m + 100.0, "recursion adds later generations: {full} vs {m}");
}

#[test]
fn cluster_mean_count_grows_at_stationary_rate() {
    // n = 5/6, so the stationary rate is lambda / (1 - n) = 6.
    let model = HawkesModel::exponential(1.0, 1.0, 1.2).unwrap();
    let rate = mean_intensity(&model).unwrap();
    assert!((rate - 6.0).abs() < 1e-12);
    let horizon = 2000.0;
    let counts: Vec<f64> = (0..100).map(|i| run(Algorithm::Cluster, &model, horizon, 6, i).len() as f64).collect();
    let m = common::mean(&counts);
    let se = (common::variance(&counts) / counts.len() as f64).sqrt();
    assert!((m / horizon - 6.0).abs() < 3.0 * se / horizon + 0.01, "{}", m / horizon);
}

#[test]
fn inversion_and_cluster_counts_agree() {
    let model = HawkesModel::exponential(0.5, 2.0, 2.1).unwrap();
    // Counts per unit window on the interval (10, 11].
    let window = |algo, seed| -> Vec<f64> {
        (0..500).map(|i| run(algo, &model, 11.0, seed, i).count_in(10.0, 11.0) as f64).collect()
    };
    let p = ks_two_sample(&window(Algorithm::Inversion, 7), &window(Algorithm::Cluster, 8)).unwrap().p_value;
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn inversion_paths_are_self_consistent() {
    let model = HawkesModel::exponential(0.5, 2.0, 2.1).unwrap();
    let passes = (0..200)
        .filter(|&i| {
            let ev = run(Algorithm::Inversion, &model, 60.0, 9, i);
            let transformed = residual_transform(&model, &ev).unwrap();
            !ks_exp_test(&transformed.interarrivals()).unwrap().rejects(0.05)
        })
        .count();
    assert!(passes >= 180, "{passes}/200");
}

#[test]
fn multivariate_with_one_component_matches_univariate() {
    let uni = HawkesModel::exponential(0.7, 1.0, 2.0).unwrap();
    let multi = MultivariateHawkesModel::new(vec![0.7], vec![vec![1.0]], vec![vec![2.0]]).unwrap();
    let a: Vec<f64> = (0..1000).map(|i| run(Algorithm::Thinning, &uni, 30.0, 10, i).len() as f64).collect();
    let b: Vec<f64> = (0..1000)
        .map(|i| multivariate_by_thinning(30.0, &multi, &mut rng::replicate(11, i)).unwrap()[0].len() as f64)
        .collect();
    let p = ks_two_sample(&a, &b).unwrap().p_value;
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn independent_components_are_uncorrelated() {
    let model = MultivariateHawkesModel::new(vec![3.0, 1.5], vec![vec![0.0; 2]; 2], vec![vec![1.0; 2]; 2]).unwrap();
    let streams = multivariate_by_thinning(10_000.0, &model, &mut rng::seeded(12)).unwrap();
    let a: Vec<f64> = common::unit_window_counts(&streams[0]).into_iter().map(|c| c as f64).collect();
    let b: Vec<f64> = common::unit_window_counts(&streams[1]).into_iter().map(|c| c as f64).collect();
    let (ma, mb) = (common::mean(&a), common::mean(&b));
    let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() as f64 - 1.0);
    let corr = cov / (common::variance(&a) * common::variance(&b)).sqrt();
    assert!(corr.abs() < 3.0 / (a.len() as f64).sqrt(), "corr = {corr}");
    assert!((ma - 3.0).abs() < 0.1 && (mb - 1.5).abs() < 0.1);
}

#[test]
fn symmetric_two_component_example() {
    let model = MultivariateHawkesModel::symmetric(2, 1.0, 2.0, 8.0).unwrap();
    assert!((model.spectral_radius() - 0.5).abs() < 1e-12);
    let both = (0..100)
        .filter(|&i| {
            let s = multivariate_by_thinning(10.0, &model, &mut rng::replicate(13, i)).unwrap();
            s.iter().all(|e| !e.is_empty())
        })
        .count();
    assert!(both >= 99);
}

#[test]
fn unstable_models_are_rejected() {
    let explosive = HawkesModel::exponential(1.0, 3.0, 2.0).unwrap();
    assert!(matches!(
        simulate(Algorithm::Cluster, 10.0, &explosive, &mut rng::seeded(0), &SimulationConfig::default()),
        Err(HawkesError::NonStationary { .. })
    ));
    let unstable = MultivariateHawkesModel::symmetric(2, 1.0, 5.0, 8.0).unwrap();
    assert!(multivariate_by_thinning(10.0, &unstable, &mut rng::seeded(0)).is_err());
}

#[test]
fn bound_violations_are_reported() {
    let err = poisson_by_thinning(100.0, |t| if t > 50.0 { 9.0 } else { 1.0 }, 4.0, &mut rng::seeded(14));
    assert!(matches!(err, Err(HawkesError::BoundViolation { .. })));
}
