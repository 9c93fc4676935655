//! A small newsvendor experiment comparing the four method families, written as CSV.

use srosi::harness::{run_experiment, sign_test, write_csv, ExperimentConfig, GeneratorKind, GeneratorSpec};

fn main() -> srosi::Result<()> {
    let methods = ["SAA", "SRO", "PtP-knn", "SROSI-knn"].iter().map(|m| m.parse()).collect::<srosi::Result<_>>()?;
    let mut cfg = ExperimentConfig::new(
        GeneratorSpec { kind: GeneratorKind::Newsvendor, seed: 1 },
        methods,
        vec![0.02, 0.05],
        vec![40],
        10,
    );
    cfg.test_queries = 10;
    cfg.test_draws = 50;
    let rows = run_experiment(&cfg)?;
    write_csv(&rows, std::io::stdout())?;
    let cost = |m: &str| rows.iter().filter(|r| r.method == m).filter_map(|r| r.oos_cost).collect::<Vec<_>>();
    let t = sign_test(&cost("SROSI-knn"), &cost("SAA"), 1e-12)?;
    eprintln!("SROSI-knn vs SAA: {} wins, {} losses, p = {:.3}", t.wins, t.losses, t.p_value);
    Ok(())
}
