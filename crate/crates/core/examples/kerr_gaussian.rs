//! Dispersive-limit Bose-Hubbard parameters for a Gaussian mode in a uniform
//! medium. Writes the mode in both field formats, reads it back, and compares
//! the quadrature with the closed forms.

use polariton::kerr::format::{read_field, write_binary, write_text};
use polariton::kerr::{effective_bhm_with_error, gaussian, MaterialMaps, ScalarField3D};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (sigma, k, chi3) = (0.3e-6, 12.96, 1e-18);
    let n = 65;
    let half = 6.0 * sigma;
    let h = 2.0 * half / (n - 1) as f64;
    let phi = ScalarField3D::from_fn([n; 3], [h; 3], [-half; 3], |[x, y, z]| {
        (-(x * x + y * y + z * z) / (2.0 * sigma * sigma)).exp()
    })?;

    let dir = std::env::temp_dir().join("polariton_kerr_example");
    std::fs::create_dir_all(&dir)?;
    write_binary(&phi, &dir.join("phi.bin"))?;
    let small = ScalarField3D::from_fn([3, 3, 3], [h; 3], [-h; 3], |[x, _, _]| 1.0 + x / h)?;
    write_text(&small, &dir.join("small.txt"))?;
    let phi = read_field(&dir.join("phi.bin"))?;
    println!("fields written to {}", dir.display());

    let maps = MaterialMaps::uniform(&phi, k, chi3)?;
    let d = 12.0 * h;
    let est = effective_bhm_with_error(&maps, &phi, [d, 0.0, 0.0])?;
    let a = est.fine.normalization;
    let t_exact = gaussian::hopping(k, a, sigma, d);
    let u_exact = gaussian::kerr_u(chi3, a, sigma);
    println!("t = {:.8} (closed form {t_exact:.8}, half-resolution change {:.1e})", est.fine.t, est.t_error);
    println!("U = {:.6e} (closed form {u_exact:.6e}, half-resolution change {:.1e})", est.fine.u, est.u_error);
    println!("U / t = {:.4e}", est.fine.u / est.fine.t);
    Ok(())
}
