//! Mean-cVaR portfolios from kernel weights, with and without robustness.

use srosi::harness::{gen_portfolio, PORTFOLIO_ASSETS};
use srosi::singleperiod::{dro_value_fixed_decision, solve_cvar_portfolio, PortfolioProblem};
use srosi::weights::{kernel_weights, KernelKind};
use srosi::Norm;

fn main() -> srosi::Result<()> {
    let data = gen_portfolio(60, 2);
    let prob = PortfolioProblem::new(PORTFOLIO_ASSETS, 0.05, 1.0)?;
    let w = kernel_weights(&data, &[1.0, 0.0, -1.0], 1.0, KernelKind::Gaussian)?;
    for eps in [0.0, 0.005, 0.02] {
        let s = solve_cvar_portfolio(&prob, &data, &w, eps, Norm::L1)?;
        let check = dro_value_fixed_decision(&s.x, s.beta, &prob, &data, &w, eps, Norm::L1)?;
        println!("eps {eps:<5}: value {:.5} (evaluated {check:.5}), x {:.3?}", s.value, s.x);
    }
    Ok(())
}
