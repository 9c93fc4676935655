//! Wasserstein-1 distances with their dual certificates, and a worst-case
//! expectation over a Wasserstein ball on a finite support.

use srosi::transport::{transport_plan, w1_dro_sup_finite, wasserstein1_1d_vs_uniform, DiscreteMeasure};
use srosi::Norm;

fn main() -> srosi::Result<()> {
    let mu = DiscreteMeasure::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![0.5, 0.5])?;
    let nu = DiscreteMeasure::new(vec![vec![0.0, 1.0], vec![2.0, 0.0], vec![1.0, 1.0]], vec![0.2, 0.3, 0.5])?;
    for norm in [Norm::L1, Norm::L2, Norm::LInf] {
        let plan = transport_plan(&mu, &nu, norm)?;
        println!("{norm:?}: W1 = {:.6}, dual = {:.6}", plan.distance, plan.dual_value);
    }
    let line = DiscreteMeasure::new(vec![vec![0.6], vec![1.1], vec![1.4]], vec![0.3, 0.4, 0.3])?;
    println!("W1 to U[0.5, 1.5]: {:.6}", wasserstein1_1d_vs_uniform(&line, 0.5, 1.5)?);

    let support: Vec<Vec<f64>> = (0..=20).map(|k| vec![k as f64 * 0.1]).collect();
    let cost: Vec<f64> = support.iter().map(|z| (z[0] - 1.0).abs()).collect();
    for theta in [0.0, 0.05, 0.2] {
        println!("sup over ball of radius {theta}: {:.6}", w1_dro_sup_finite(&line, &support, &cost, theta, Norm::L1)?);
    }
    Ok(())
}
