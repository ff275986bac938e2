//! The invariant state on Gaussian-type test functions: closed forms against
//! quadrature, invariance under the isometry action, and the sector inner
//! products.

use hlobachevsky::state::{self, Gaussian, TestFunction, YProfile};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // x^2 y e^{-x^2} e^{-y - 1/y}
    let f = TestFunction::monomial(
        Complex64::new(1.0, 0.0),
        2,
        1,
        Gaussian::centered(1.0, 0.0),
        YProfile::new(1.0, 1.0),
    );
    let a = state::state(&f)?;
    let b = state::state_by_quadrature(&f)?;
    println!("⟨{f}⟩ = {} (closed form), {} (quadrature)", a.value, b.value);

    let h = 0.1;
    let shifted = f.shift_x(Complex64::new(0.0, h));
    println!("⟨f(x + ih)⟩ = {}", state::state(&shifted)?.value);

    let family = state::random_family(6, 1);
    print!("{}", state::verify_invariance_conditions(&family, h, 1e-9)?);
    print!("{}", state::verify_action_symmetry(&family, h, 1e-8)?);
    let g = &family[0];
    for sector in [0, 1] {
        println!("⟨g, g⟩_({sector}) = {:.6e}", state::inner_product(g, g, sector, h)?.value.re);
    }
    Ok(())
}
