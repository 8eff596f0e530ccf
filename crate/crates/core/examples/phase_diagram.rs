//! Mean-field phase diagram of the N = 8, Δ = 0, z = 4 lattice as ASCII art:
//! digits mark Mott lobes (filling), `.` the superfluid.

use polariton::meanfield::{MeanField, Phase};
use polariton::params::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = MeanField::new(ModelParams::new(8, 4, 0.0)?);
    let t_axis: Vec<f64> = (0..40).map(|i| 0.02 * i as f64 / 39.0).collect();
    let mu_axis: Vec<f64> = (0..24).map(|i| -2.9 + 0.7 * i as f64 / 23.0).collect();
    let grid = solver.phase_diagram(&t_axis, &mu_axis)?;

    println!("mu - w_ex (g)   t/g: 0 .. 0.02 ->");
    for i_mu in (0..mu_axis.len()).rev() {
        let line: String = (0..t_axis.len())
            .map(|i_t| match grid.cell(i_t, i_mu).phase {
                Phase::MottInsulator { filling } => char::from_digit(filling as u32 % 10, 10).unwrap(),
                Phase::Superfluid => '.',
            })
            .collect();
        println!("{:>8.4}  {line}", mu_axis[i_mu]);
    }
    println!("largest order parameter: {:.4}", grid.max_psi());
    Ok(())
}
