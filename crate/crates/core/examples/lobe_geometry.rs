//! Zero-hopping structure: manifold energies E(n), Mott-lobe μ ranges and the
//! polariton interaction U = E(2) − 2E(1), checked against the closed form
//! g(2√N − √(4N − 2)) at zero detuning.

use polariton::meanfield::MeanField;
use polariton::model::manifold_energy;
use polariton::observables::interaction_energy;
use polariton::params::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelParams::new(8, 4, 0.0)?;
    println!("N = 8, Δ = 0: manifold energies (units of g)");
    for n in 0..=4 {
        println!("  E({n}) = {:+.6}", manifold_energy(&model, n)?);
    }
    let solver = MeanField::new(model);
    for n in 1..=3 {
        let lobe = solver.mott_lobe_mu_range(n)?;
        println!("  lobe {n}: mu in ({:.5}, {:.5}), width {:.6}", lobe.lower, lobe.upper, lobe.width());
    }

    println!("\n   N   U (numeric)      U (closed form)");
    for big_n in [1, 2, 3, 8, 20, 50] {
        let u = interaction_energy(&ModelParams::new(big_n, 4, 0.0)?)?;
        let n = big_n as f64;
        println!("{big_n:>4}   {u:.12}   {:.12}", 2.0 * n.sqrt() - (4.0 * n - 2.0).sqrt());
    }
    Ok(())
}
