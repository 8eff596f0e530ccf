//! Three independent routes to the Mott boundary of lobe 1: variational
//! minimization over ψ with bisection in t, the Landau-curvature expansion,
//! and (for comparison of shape only) the Bose-Hubbard closed form with the
//! same lobe width.

use polariton::meanfield::{bhm_boundary_oracle, curvature_boundary, MeanField};
use polariton::params::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelParams::new(8, 4, 0.0)?;
    let solver = MeanField::new(model);
    let lobe = solver.mott_lobe_mu_range(1)?;
    println!("   mu/g        variational   curvature     rel. diff   Bose-Hubbard shape");
    for k in 1..10 {
        let mu = lobe.lower + lobe.width() * k as f64 / 10.0;
        let t_var = solver.boundary_tunneling(1, mu)?;
        let t_curv = curvature_boundary(&model, 1, mu)?;
        // BHM lobe 1 spans (0, u) in its own μ
        let t_bhm = bhm_boundary_oracle(lobe.width(), 4, 1, mu - lobe.lower)?;
        println!(
            "{mu:+.6}   {t_var:.8}    {t_curv:.8}    {:.2e}    {t_bhm:.8}",
            ((t_var - t_curv) / t_curv).abs()
        );
    }
    Ok(())
}
