//! Cavity quality factor needed for the polariton tunneling to exceed the
//! loss rate, for an 817 nm exciton line with g = 2π × 33.3 GHz, τ_e = 1 ns
//! and Purcell factor 0.2, plus the matching impurity doping density.

use polariton::meanfield::MeanField;
use polariton::observables::{doping_density, polariton_loss_rate, required_q, LossParams, RequiredQ};
use polariton::params::SystemParams;

fn show(q: RequiredQ) -> String {
    match q {
        RequiredQ::Reachable(q) => format!("{q:.3e}"),
        RequiredQ::Unreachable => "unreachable".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loss = LossParams::default();
    println!("   N   Δ/g    t_c (GHz)   Q_r(η=1)     Q_r(η=10)    Γ at Q=1e6 (1/s)");
    for (big_n, det) in [(3, 12.0), (3, 0.0), (8, 0.0), (8, 4.0)] {
        let params = SystemParams::reference_defaults(big_n, det)?;
        let t_c = MeanField::new(params.model()).critical_tunneling(1)?.t_c * params.g();
        println!(
            "{big_n:>4}  {det:>4.1}   {:>9.3}   {:<11}  {:<11}  {:.3e}",
            t_c / (2.0 * std::f64::consts::PI * 1e9),
            show(required_q(&params, &loss, t_c)),
            show(required_q(&params, &loss.with_eta(10.0), t_c)),
            polariton_loss_rate(&params, &loss),
        );
    }
    println!("\ndoping density for N = 8 at 817 nm, n = 3.6: {:.3e} cm^-3", doping_density(8.0, 817.0, 3.6));
    Ok(())
}
