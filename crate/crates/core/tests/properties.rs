use hlobachevsky::hopf::uh::{UhElement, UhLetter};
use hlobachevsky::special::{bessel_k_imag, bessel_k_imag_scaled, bessel_k_real};
use hlobachevsky::state::{self, Gaussian, TestFunction, YProfile};
use num_complex::Complex64;
use proptest::prelude::*;

fn uh_word(letters: &[u8]) -> UhElement {
    letters.iter().fold(UhElement::one(), |acc, &l| {
        let l = match l % 5 {
            0 => UhLetter::G,
            1 => UhLetter::GInv,
            2 => UhLetter::Jm,
            3 => UhLetter::J3,
            _ => UhLetter::Jp,
        };
        acc.mul(&UhElement::letter(l))
    })
}

fn letters() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..5, 0..4)
}

fn test_function() -> impl Strategy<Value = TestFunction> {
    let term = (-1.0..1.0f64, -1.0..1.0f64, 0u32..3, -1i32..3, 0.3..2.0f64, -1.5..1.5f64, 0.5..2.0f64, 0.2..1.5f64);
    prop::collection::vec(term, 1..4).prop_map(|ts| {
        ts.into_iter().fold(TestFunction::zero(), |acc, (re, im, xa, yb, p, c, q, r)| {
            acc.add(&TestFunction::monomial(Complex64::new(re, im), xa, yb, Gaussian::centered(p, c), YProfile::new(q, r)))
        })
    })
}

fn close(a: Complex64, b: Complex64, scale: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * scale.max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_and_antipode_reverse_products(a in letters(), b in letters()) {
        let (x, y) = (uh_word(&a), uh_word(&b));
        let xy = x.mul(&y);
        prop_assert_eq!(xy.star(), y.star().mul(&x.star()));
        prop_assert_eq!(xy.star().star(), xy.clone());
        prop_assert_eq!(xy.antipode(), y.antipode().mul(&x.antipode()));
    }

    #[test]
    fn coproduct_and_counit_are_multiplicative(a in letters(), b in letters()) {
        let (x, y) = (uh_word(&a), uh_word(&b));
        let xy = x.mul(&y);
        prop_assert_eq!(xy.coproduct(), x.coproduct().mul(&y.coproduct()));
        prop_assert_eq!(xy.counit(), &x.counit() * &y.counit());
    }

    #[test]
    fn state_is_translation_invariant(f in test_function(), s in -2.0..2.0f64, t in -0.5..0.5f64) {
        let v = state::state(&f).unwrap();
        let real = state::state(&f.shift_x(Complex64::new(s, 0.0))).unwrap();
        let complex = state::state(&f.shift_x(Complex64::new(s, t))).unwrap();
        prop_assert!(close(v.value, real.value, v.scale.max(real.scale), 1e-11), "{} vs {}", v.value, real.value);
        prop_assert!(close(v.value, complex.value, v.scale.max(complex.scale), 1e-11), "{} vs {}", v.value, complex.value);
    }

    #[test]
    fn state_kills_finite_differences(f in test_function(), h in 0.05..0.5f64) {
        let d = state::state(&f.finite_difference(h)).unwrap();
        let scale = d.scale.max(state::state(&f).unwrap().scale / h);
        prop_assert!(d.value.norm() <= 1e-11 * scale, "{} (scale {scale})", d.value);
    }

    #[test]
    fn state_commutes_with_conjugation(f in test_function()) {
        let v = state::state(&f).unwrap();
        let c = state::state(&f.conj()).unwrap();
        prop_assert!(close(c.value, v.value.conj(), v.scale, 1e-13));
    }

    #[test]
    fn state_matches_quadrature(f in test_function()) {
        let exact = state::state(&f).unwrap();
        let quad = state::state_by_quadrature(&f).unwrap();
        prop_assert!(close(exact.value, quad.value, exact.scale, 1e-10), "{} vs {}", exact.value, quad.value);
    }

    #[test]
    fn real_order_recurrence(nu in 0.5..6.0f64, x in 0.1..30.0f64) {
        // K_{ν+1} = K_{ν-1} + (2ν/x) K_ν
        let (a, b, c) = (bessel_k_real(nu - 1.0, x).unwrap(), bessel_k_real(nu, x).unwrap(), bessel_k_real(nu + 1.0, x).unwrap());
        prop_assert!((c - a - 2.0 * nu / x * b).abs() <= 1e-11 * c, "{} vs {}", c, a + 2.0 * nu / x * b);
    }

    #[test]
    fn imaginary_order_solves_bessel_equation(kappa in 0.0..20.0f64, x in 0.05..40.0f64) {
        // with x = e^u: K_uu = (x^2 - κ^2) K; five-point stencil in u
        let k = |u: f64| bessel_k_imag_scaled(kappa, u.exp()).unwrap();
        let (u, d) = (x.ln(), 2e-3);
        let f: Vec<f64> = (-2..=2).map(|j| k(u + j as f64 * d)).collect();
        let kuu = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * d * d);
        let rhs = (x * x - kappa * kappa) * f[2];
        let scale = kuu.abs() + (x * x * f[2]).abs() + (kappa * kappa * f[2]).abs();
        let sum = kuu - rhs;
        prop_assert!(sum.abs() <= 1e-6 * scale, "residual {sum} of {scale}");
    }

    #[test]
    fn imaginary_order_is_even(kappa in 0.0..30.0f64, x in 0.05..40.0f64) {
        prop_assert_eq!(bessel_k_imag(kappa, x).unwrap(), bessel_k_imag(-kappa, x).unwrap());
    }

    #[test]
    fn order_zero_is_positive_and_decreasing(x in 0.01..50.0f64, dx in 0.01..5.0f64) {
        let (a, b) = (bessel_k_imag(0.0, x).unwrap(), bessel_k_imag(0.0, x + dx).unwrap());
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }
}
