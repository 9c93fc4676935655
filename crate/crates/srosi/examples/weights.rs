//! Sample weights of the four learners at one query, plus the asymptotic
//! kNN schedule at a few sample sizes.

use srosi::harness::gen_newsvendor;
use srosi::weights::{
    cart_weights, default_schedules, fit_cart, fit_forest, kernel_weights, knn_weights, ForestParams, KernelKind,
    ScheduleParams,
};

fn main() -> srosi::Result<()> {
    let data = gen_newsvendor(12, 1);
    let query = [0.5];
    let forest = fit_forest(&data, ForestParams { n_trees: 50, min_leaf: 2, ..ForestParams::defaults(1) }, 7)?;
    let rows = [
        ("knn k=4", knn_weights(&data, &query, 4)?),
        ("kernel h=0.2", kernel_weights(&data, &query, 0.2, KernelKind::Gaussian)?),
        ("cart", cart_weights(&fit_cart(&data, 3, 4)?, &query)?),
        ("forest", srosi::weights::rf_weights(&forest, &query)?),
    ];
    println!("gamma: {:.2?}", data.gammas.iter().map(|g| g[0]).collect::<Vec<_>>());
    for (name, w) in rows {
        println!("{name:>12}: {:.3?}", w.as_slice());
    }
    let params = ScheduleParams::Knn { k1: 1.0, k3: 1.0, delta: 0.75, p: 0.08 };
    for n in [50, 800, 12800] {
        println!("N={n}: {:?}", default_schedules(n, 1, 1, params)?);
    }
    Ok(())
}
