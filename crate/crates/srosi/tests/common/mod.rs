//! Random small multi-stage instances shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srosi::srolp::{DynamicProblem, Support, PROBLEM_SCHEMA_VERSION};
use srosi::weights::{Dataset, WeightVector};

/// A random instance with its data and weights.
pub struct Instance {
    pub prob: DynamicProblem,
    pub data: Dataset,
    pub w: WeightVector,
    pub support: Support,
}

/// Generalized inventory: every stage has one or two pairs of rows
/// `α(Px − Qξ) − y ≤ d₁` and `−β(Px − Qξ) − y ≤ d₂` on its own recourse
/// variable, with `P ≥ 0` over current and earlier decisions and `Q` over
/// current and earlier uncertain coordinates. Decisions are nonnegative and
/// cost `f ≥ 0`, so the program is bounded and every scenario has recourse.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_max = rng.random_range(1..=2);
    let x_dims: Vec<usize> = (0..t_max).map(|_| rng.random_range(1..=2)).collect();
    let xi_dims: Vec<usize> = (0..t_max).map(|_| rng.random_range(1..=2)).collect();
    let y_dims: Vec<usize> = (0..t_max).map(|_| rng.random_range(1..=2)).collect();
    let row_dims: Vec<usize> = y_dims.iter().map(|p| 2 * p).collect();
    let dx: usize = x_dims.iter().sum();
    let dxi: usize = xi_dims.iter().sum();
    let dy: usize = y_dims.iter().sum();
    let stage = |dims: &[usize]| -> Vec<usize> {
        dims.iter().enumerate().flat_map(|(t, &n)| std::iter::repeat_n(t, n)).collect()
    };
    let (xs, ks) = (stage(&x_dims), stage(&xi_dims));
    let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut y_at = 0;
    for t in 0..t_max {
        for _ in 0..y_dims[t] {
            let p: Vec<f64> = xs.iter().map(|&s| if s <= t { rng.random_range(0.0..1.0) } else { 0.0 }).collect();
            let mut q: Vec<f64> = ks.iter().map(|&s| if s <= t { rng.random_range(0.0..1.0) } else { 0.0 }).collect();
            let last = ks.iter().rposition(|&s| s == t).unwrap();
            q[last] += 0.5;
            let alpha = rng.random_range(0.2..2.0);
            let beta = rng.random_range(0.5..3.0);
            for scale in [alpha, -beta] {
                a.push(p.iter().map(|v| scale * v).collect());
                b.push(q.iter().map(|v| -scale * v).collect());
                let mut cr = vec![0.0; dy];
                cr[y_at] = -1.0;
                c.push(cr);
                d.push(rng.random_range(-0.5..0.5));
            }
            y_at += 1;
        }
    }
    let prob = DynamicProblem {
        version: PROBLEM_SCHEMA_VERSION,
        x_dims,
        xi_dims: xi_dims.clone(),
        y_dims,
        row_dims,
        f: (0..dx).map(|_| rng.random_range(0.0..1.0)).collect(),
        g: (0..dxi).map(|_| rng.random_range(-0.5..0.5)).collect(),
        h: (0..dy).map(|_| rng.random_range(0.5..1.5)).collect(),
        a,
        b,
        c,
        d,
        x_nonneg: true,
    };
    prob.validate().unwrap();
    let n = rng.random_range(1..=5);
    let support = if rng.random_bool(0.7) { Support::NonnegOrthant } else { Support::Free };
    let lo = if support == Support::Free { -1.0 } else { 0.0 };
    let xis: Vec<Vec<f64>> = (0..n).map(|_| (0..dxi).map(|_| rng.random_range(lo..2.0)).collect()).collect();
    let gammas = (0..n).map(|i| vec![i as f64]).collect();
    let data = Dataset::new(gammas, xis, xi_dims).unwrap();
    let mut raw: Vec<f64> =
        (0..n).map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.1..1.0) }).collect();
    if raw.iter().all(|&v| v == 0.0) {
        raw[0] = 1.0;
    }
    let s: f64 = raw.iter().sum();
    let w = WeightVector::new(raw.iter().map(|v| v / s).collect()).unwrap();
    Instance { prob, data, w, support }
}
