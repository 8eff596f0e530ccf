//! Critical tunneling at the tip of the first lobe versus impurity number,
//! and the ratio U / (|c_ph|² t_c) approaching the Bose-Hubbard value
//! 4(3 + 2√2) ≈ 23.31 for z = 4.

use polariton::meanfield::{curvature_critical, MeanField};
use polariton::observables::{interaction_energy, polariton_fractions};
use polariton::params::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bhm = 4.0 * (3.0 + 2.0 * 2f64.sqrt());
    println!("   N   t_c/g        mu_tip/g     t_c (curvature)  ratio");
    for big_n in [1, 3, 8, 20, 50] {
        let model = ModelParams::new(big_n, 4, 0.0)?;
        let cp = MeanField::new(model).critical_tunneling(1)?;
        let (_, t_curv) = curvature_critical(&model, 1, 1e-6)?;
        let u = interaction_energy(&model)?;
        let ratio = u / (polariton_fractions(&model).c_ph_sq * cp.t_c);
        println!("{big_n:>4}   {:.8}   {:+.6}    {t_curv:.8}       {ratio:.3}", cp.t_c, cp.mu_tip);
    }
    println!("Bose-Hubbard limit: {bhm:.3}");
    Ok(())
}
