//! Bessel functions of imaginary order and the deformed eigenmodes.

use hlobachevsky::special::{bessel_k_imag, bessel_k_real};
use hlobachevsky::spectral::{classical_mode, eigen_residual, mode, ModeParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("K_0(1) = {:.15}", bessel_k_real(0.0, 1.0)?);
    for kappa in [0.5, 2.0, 10.0] {
        let row: Vec<String> = [0.1, 1.0, 5.0, 20.0]
            .iter()
            .map(|&x| format!("{:.6e}", bessel_k_imag(kappa, x).unwrap()))
            .collect();
        println!("K_i{kappa}(0.1, 1, 5, 20) = {}", row.join(", "));
    }

    let (k, kappa) = (0.3, 2.0);
    for h in [0.2, 0.05, 0.01] {
        let p = ModeParams::new(k, 0, kappa, h)?;
        let res = eigen_residual(&p, &[0.5, 1.0, 2.0])?;
        let v = mode(&p, 0.5, 1.0)?;
        let c = classical_mode(k, kappa, 0.5, 1.0)?;
        println!("h = {h}: L-(k) = {:.6}, φ(0.5, 1) = {v:.6}, undeformed {c:.6}, radial residual {res:.1e}", p.l_minus());
    }
    Ok(())
}
