//! Multi-policy linear decision rules for the two-supplier inventory
//! problem at one query point, evaluated on fresh conditional draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use srosi::harness::{gen_inventory, Generator, SeasonalDemandGen};
use srosi::srolp::{evaluate_policy, solve_sro_with, SetEncoding, SroOptions, Support, UncertaintySpec};
use srosi::weights::knn_weights;
use srosi::Norm;

fn main() -> srosi::Result<()> {
    let (data, prob) = gen_inventory(20, 3)?;
    let query = [0.5, -0.5, 0.0];
    let w = knn_weights(&data, &query, 8)?;
    let gen = SeasonalDemandGen { len: 12, staged: true };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let draws: Vec<Vec<f64>> = (0..200).map(|_| gen.sample_xi(&query, &mut rng)).collect();
    for eps in [0.0, 10.0, 30.0] {
        let u = UncertaintySpec::new(eps, Norm::L1, Support::NonnegOrthant)?;
        let opts = SroOptions { encoding: SetEncoding::Vertices, ..SroOptions::default() };
        let sol = solve_sro_with(&prob, &data, &w, &u, &opts)?;
        let oos = draws.iter().map(|z| evaluate_policy(&prob, &sol.policy.primary, z)).sum::<srosi::Result<f64>>()?
            / draws.len() as f64;
        println!(
            "eps {eps:>4}: bound {:.2}, out-of-sample cost {oos:.2}, first orders {:.1?}",
            sol.objective,
            &sol.policy.primary.x0[..2]
        );
    }
    Ok(())
}
