use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srosi::transport::*;
use srosi::weights::{knn_weights, Dataset, WeightVector};
use srosi::Norm;

fn m1(points: &[(f64, f64)]) -> DiscreteMeasure {
    DiscreteMeasure::new(points.iter().map(|p| vec![p.0]).collect(), points.iter().map(|p| p.1).collect()).unwrap()
}

/// `∫|F_μ − F_ν|` for one-dimensional measures by sweeping the merged atoms.
fn cdf_integral(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let mut ev: Vec<(f64, f64)> = mu.atoms.iter().zip(&mu.probs).map(|(a, p)| (a[0], *p)).collect();
    ev.extend(nu.atoms.iter().zip(&nu.probs).map(|(a, p)| (a[0], -*p)));
    ev.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut diff = 0.0;
    let mut total = 0.0;
    for w in 0..ev.len() {
        diff += ev[w].1;
        if w + 1 < ev.len() {
            total += diff.abs() * (ev[w + 1].0 - ev[w].0);
        }
    }
    total
}

/// Quantile-coupling integral against `U[a, b]` by a fine midpoint rule.
fn quantile_vs_uniform(mu: &DiscreteMeasure, a: f64, b: f64) -> f64 {
    let mut pts: Vec<(f64, f64)> = mu.atoms.iter().map(|x| x[0]).zip(mu.probs.iter().copied()).collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let steps = 200_000;
    let mut total = 0.0;
    for s in 0..steps {
        let u = (s as f64 + 0.5) / steps as f64;
        let mut acc = 0.0;
        let mut q = pts.last().unwrap().0;
        for &(x, p) in &pts {
            acc += p;
            if acc >= u {
                q = x;
                break;
            }
        }
        total += (q - (a + u * (b - a))).abs();
    }
    total / steps as f64
}

#[test]
fn empirical_conditional_examples() {
    let d = Dataset::new(vec![vec![0.0], vec![1.0]], vec![vec![3.0], vec![4.0]], vec![1]).unwrap();
    let m = empirical_conditional(&d, &WeightVector::new(vec![1.0, 0.0]).unwrap()).unwrap();
    assert_eq!(m.probs, vec![1.0, 0.0]);
    assert_eq!(m.atoms, vec![vec![3.0], vec![4.0]]);
    let d4 = Dataset::new(vec![vec![0.0]; 4], vec![vec![1.0]; 4], vec![1]).unwrap();
    assert_eq!(empirical_conditional(&d4, &WeightVector::uniform(4)).unwrap().probs, vec![0.25; 4]);
    let d3 =
        Dataset::new(vec![vec![0.0], vec![1.0], vec![5.0]], vec![vec![1.0], vec![2.0], vec![3.0]], vec![1]).unwrap();
    let w = knn_weights(&d3, &[0.9], 2).unwrap();
    assert_eq!(empirical_conditional(&d3, &w).unwrap().probs, vec![0.5, 0.5, 0.0]);
    assert!(empirical_conditional(&d3, &WeightVector::uniform(2)).is_err());
}

#[test]
fn wasserstein_examples() {
    let mu = DiscreteMeasure::new(vec![vec![1.0, 2.0], vec![-1.0, 0.5]], vec![0.3, 0.7]).unwrap();
    for norm in [Norm::L1, Norm::L2, Norm::LInf] {
        assert!(wasserstein1(&mu, &mu, norm).unwrap().abs() < 1e-12);
    }
    let x = DiscreteMeasure::new(vec![vec![1.0, 2.0]], vec![1.0]).unwrap();
    let y = DiscreteMeasure::new(vec![vec![4.0, -2.0]], vec![1.0]).unwrap();
    assert!((wasserstein1(&x, &y, Norm::L2).unwrap() - 5.0).abs() < 1e-12);
    assert!((wasserstein1(&x, &y, Norm::L1).unwrap() - 7.0).abs() < 1e-12);
    assert!((wasserstein1(&x, &y, Norm::LInf).unwrap() - 4.0).abs() < 1e-12);
    let a = m1(&[(0.0, 1.0)]);
    let b = m1(&[(0.0, 0.5), (2.0, 0.5)]);
    assert!((wasserstein1(&a, &b, Norm::L1).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn one_dimensional_uniform_examples() {
    let (a, b) = (2.0, 5.0);
    let mid = m1(&[((a + b) / 2.0, 1.0)]);
    assert!((wasserstein1_1d_vs_uniform(&mid, a, b).unwrap() - (b - a) / 4.0).abs() < 1e-14);
    let grid: Vec<(f64, f64)> = (1..=10).map(|i| (a + (i as f64 - 0.5) * (b - a) / 10.0, 0.1)).collect();
    assert!((wasserstein1_1d_vs_uniform(&m1(&grid), a, b).unwrap() - (b - a) / 40.0).abs() < 1e-12);
    assert!((wasserstein1_1d_vs_uniform(&m1(&[(0.0, 1.0)]), 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    assert!(wasserstein1_1d_vs_uniform(&mid, 1.0, 1.0).is_err());
}

#[test]
fn one_dimensional_uniform_matches_quantile_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = rng.random_range(1..6);
        let mut p: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        let pts: Vec<(f64, f64)> = p.iter().map(|&q| (rng.random_range(-1.0..3.0), q)).collect();
        let mu = m1(&pts);
        let exact = wasserstein1_1d_vs_uniform(&mu, 0.0, 2.0).unwrap();
        assert!((exact - quantile_vs_uniform(&mu, 0.0, 2.0)).abs() < 1e-4, "{exact}");
    }
}

#[test]
fn ball_supremum_examples() {
    let center = m1(&[(0.0, 1.0)]);
    let support = vec![vec![0.0], vec![1.0]];
    assert!((w1_dro_sup_finite(&center, &support, &[0.0, 10.0], 0.3, Norm::L1).unwrap() - 3.0).abs() < 1e-12);
    let c2 = m1(&[(0.0, 0.25), (1.0, 0.75)]);
    let f = [2.0, -1.0, 4.0];
    let s3 = vec![vec![0.0], vec![1.0], vec![3.0]];
    assert!((w1_dro_sup_finite(&c2, &s3, &f, 0.0, Norm::L1).unwrap() - (0.25 * 2.0 - 0.75)).abs() < 1e-12);
    assert!((w1_dro_sup_finite(&c2, &s3, &f, 3.0, Norm::L1).unwrap() - 4.0).abs() < 1e-12);
    assert!(w1_dro_sup_finite(&m1(&[(0.5, 1.0)]), &support, &[0.0, 1.0], 0.1, Norm::L1).is_err());
}

fn random_measure(rng: &mut ChaCha8Rng, m: usize, d: usize) -> DiscreteMeasure {
    let atoms = (0..m).map(|_| (0..d).map(|_| rng.random_range(-2i32..3) as f64 * 0.5).collect()).collect();
    let mut p: Vec<f64> =
        (0..m).map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.05..1.0) }).collect();
    if p.iter().all(|&v| v == 0.0) {
        p[0] = 1.0;
    }
    let s: f64 = p.iter().sum();
    DiscreteMeasure::new(atoms, p.into_iter().map(|v| v / s).collect()).unwrap()
}

#[test]
fn metric_axioms_and_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..200 {
        let d = rng.random_range(1..4);
        let norm = [Norm::L1, Norm::L2, Norm::LInf][trial % 3];
        let (ma, mb, mc) = (rng.random_range(1..9), rng.random_range(1..9), rng.random_range(1..9));
        let a = random_measure(&mut rng, ma, d);
        let b = random_measure(&mut rng, mb, d);
        let c = random_measure(&mut rng, mc, d);
        let ab = transport_plan(&a, &b, norm).unwrap();
        let ba = wasserstein1(&b, &a, norm).unwrap();
        assert!((ab.distance - ba).abs() <= 1e-9);
        let tri = wasserstein1(&a, &c, norm).unwrap() - ab.distance - wasserstein1(&b, &c, norm).unwrap();
        assert!(tri <= 1e-7);
        assert!((ab.distance - ab.dual_value).abs() <= 1e-7);
        assert!(ab.dual_violation(&cost_matrix(&a.atoms, &b.atoms, norm)) <= 1e-9);
        for (j, row) in ab.coupling.iter().enumerate() {
            assert!((row.iter().sum::<f64>() - a.probs[j]).abs() <= 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn one_dimensional_lp_matches_cdf_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ma, mb) = (rng.random_range(1..9), rng.random_range(1..9));
        let a = random_measure(&mut rng, ma, 1);
        let b = random_measure(&mut rng, mb, 1);
        let lp = wasserstein1(&a, &b, Norm::L1).unwrap();
        prop_assert!((lp - cdf_integral(&a, &b)).abs() <= 1e-8);
    }

    #[test]
    fn ball_supremum_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.random_range(1..3);
        let n = rng.random_range(1..5);
        let center = random_measure(&mut rng, n, d);
        let mut support = center.atoms.clone();
        for _ in 0..rng.random_range(1..6) {
            support.push((0..d).map(|_| rng.random_range(-3.0..3.0)).collect());
        }
        let f: Vec<f64> = support.iter().map(|_| rng.random_range(-5.0..5.0)).collect();
        let theta2 = rng.random_range(0.01..3.0);
        let theta1 = rng.random_range(0.0..0.5) * theta2;
        let norm = [Norm::L1, Norm::L2, Norm::LInf][rng.random_range(0..3)];
        let lhs = w1_dro_sup_finite(&center, &support, &f, theta1, norm).unwrap();
        let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let local: f64 = center.atoms.iter().zip(&center.probs).map(|(xi, p)| {
            let best = support.iter().zip(&f).filter(|(z, _)| norm.dist(z, xi) <= theta2).map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
            p * best
        }).sum();
        prop_assert!(lhs <= local + 4.0 * theta1 / theta2 * fmax + 1e-9);
    }
}
