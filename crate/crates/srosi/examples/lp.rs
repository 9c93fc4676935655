//! A small production LP solved by both backends, with its dual and MPS form.

use srosi::lp::{certificate_report, solve, to_mps, Backend, LpModel, Sense};

fn main() -> srosi::Result<()> {
    // max 3a + 5b  s.t.  a ≤ 4, 2b ≤ 12, 3a + 2b ≤ 18, a, b ≥ 0
    let mut m = LpModel::new();
    let a = m.add_nonneg(-3.0);
    let b = m.add_nonneg(-5.0);
    m.add_row(vec![(a, 1.0)], Sense::Le, 4.0);
    m.add_row(vec![(b, 2.0)], Sense::Le, 12.0);
    m.add_row(vec![(a, 3.0), (b, 2.0)], Sense::Le, 18.0);
    for backend in [Backend::Simplex, Backend::Interior] {
        let r = solve(&m, backend)?.into_optimal()?;
        println!("{backend:?}: value {:.6} at {:.6?}, duals {:.6?}", r.value, r.point, r.duals);
        println!("  certificate: {:?}", certificate_report(&m, &r));
    }
    print!("{}", to_mps(&m, "production"));
    Ok(())
}
