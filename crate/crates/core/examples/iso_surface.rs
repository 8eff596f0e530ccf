//! Coarse scan of the three disorder widths for the surface beyond which the
//! disordered lobe's tunneling no longer beats the polariton loss
//! (⟨N⟩ = 3, Δ = 12 g, Q = 10⁶). Prints the single-axis intercepts.
//!
//! Run with `--release`; a 16³ grid at 10⁴ samples takes a few minutes.

use polariton::disorder::{iso_surface, IsoGrid, IsoSettings};
use polariton::params::{FrequencyConvention, SystemParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let conv = FrequencyConvention::Ordinary;
    let base = SystemParams::reference_defaults(3, 12.0)?;
    let n = 8;
    let axis = |max: f64| (0..n).map(move |i| max * i as f64 / (n - 1) as f64);
    let grid = IsoGrid {
        sigma_omega: axis(60.0).map(|x| conv.to_angular(x)).collect(),
        delta_g: axis(0.28).collect(),
        n_sigma: axis(1.2).collect(),
    };
    let mut settings = IsoSettings::new(3.0);
    settings.spec.sample_count = 2_000;
    let iso = iso_surface(&base, &grid, &settings)?;

    println!("clean lobe: t_c = {:.3e} rad/s, U = {:.3e} rad/s", iso.clean.t_c, iso.clean.u);
    println!("loss rate Γ = {:.3e} 1/s, boundary points: {}", iso.loss_rate, iso.boundary.len());
    let units = ["GHz", "g (std-dev)", "impurities"];
    for (ic, unit) in iso.intercepts.iter().zip(units) {
        let v = ic.crossing.map(|c| if ic.axis == "sigma_omega" { conv.from_angular(c) } else { c });
        match v {
            Some(v) => println!("  {:<12} intercept {v:.4} {unit}", ic.axis),
            None => println!("  {:<12} no crossing in range", ic.axis),
        }
    }
    if let Some(c) = iso.intercepts[2].crossing {
        println!("  n_sigma / <N> = {:.3}", c / 3.0);
    }
    Ok(())
}
