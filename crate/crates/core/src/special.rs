//! Modified Bessel functions of the second kind for real and imaginary
//! order, and the argument of the complex Gamma function.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument must be positive and finite, got {0}")]
    Argument(f64),
    #[error("order must be finite, got {0}")]
    Order(f64),
}

fn check(x: f64, nu: f64) -> Result<(), SpecialError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(SpecialError::Argument(x));
    }
    if !nu.is_finite() {
        return Err(SpecialError::Order(nu));
    }
    Ok(())
}

// B_{2k} / (2k (2k - 1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// `arg Γ(1 + iκ)` on the branch continuous from `κ = 0`.
pub fn arg_gamma_one_plus_i(kappa: f64) -> f64 {
    // Γ(1 + iκ) = Γ(n + 1 + iκ) / Π_{j=1}^{n} (j + iκ), then Stirling.
    let n = 16;
    let mut phase = 0.0;
    for j in 1..=n {
        phase -= kappa.atan2(j as f64);
    }
    let w = num_complex::Complex64::new(n as f64 + 1.0, kappa);
    let lw = w.ln();
    let mut s = (w - 0.5) * lw - w;
    let w2 = w * w;
    let mut wp = w;
    for c in STIRLING {
        s += c / wp;
        wp *= w2;
    }
    phase + s.im
}

/// Trapezoid rule for `∫_0^∞ g(t) dt` of an even function analytic in a
/// strip, with step `step`, stopped once `stop(t)` holds.
fn trapezoid(step: f64, mut g: impl FnMut(f64) -> f64, stop: impl Fn(f64) -> bool) -> f64 {
    let mut sum = 0.5 * g(0.0);
    let mut k = 1usize;
    loop {
        let t = step * k as f64;
        sum += g(t);
        if stop(t) || k > 200_000 {
            break;
        }
        k += 1;
    }
    sum * step
}

/// Step giving roughly `e^-40` relative discretisation error when the
/// integrand is analytic in a strip of half-width `s` and grows at most by
/// `e^growth` at its edge.
fn step_for(s: f64, growth: f64) -> f64 {
    2.0 * PI * s / (40.0 + growth.max(0.0))
}

/// `K_ν(x)` for real order via `∫_0^∞ e^{-x cosh t} cosh(νt) dt`.
pub fn bessel_k_real(nu: f64, x: f64) -> Result<f64, SpecialError> {
    check(x, nu)?;
    let nu = nu.abs();
    // upper edge of the strip: e^{-x cosh t cos s} grows by x (1 - cos s)
    let mut best = (0.0, 0.0);
    for i in 1..=40 {
        let s = 1.5 * i as f64 / 40.0;
        let h = step_for(s, x * (1.0 - s.cos()));
        if h > best.0 {
            best = (h, s);
        }
    }
    let h = best.0;
    let v = trapezoid(
        h,
        |t| (-x * (t.cosh() - 1.0) + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp()),
        |t| x * (t.cosh() - 1.0) - nu * t > 45.0,
    );
    Ok(v * (-x).exp())
}

/// `e^{πκ/2} K_{iκ}(x)`, of order one for `x < κ` and decaying like
/// `e^{-x}` beyond.
pub fn bessel_k_imag_scaled(kappa: f64, x: f64) -> Result<f64, SpecialError> {
    KImag::new(kappa)?.scaled(x)
}

/// `K_{iκ}(x)`.
pub fn bessel_k_imag(kappa: f64, x: f64) -> Result<f64, SpecialError> {
    Ok(bessel_k_imag_scaled(kappa, x)? * (-FRAC_PI_2 * kappa.abs()).exp())
}

/// `e^{πκ/2} K_{iκ}` at fixed order, for many arguments.
///
/// Small arguments use the ascending series
/// `K_{iκ}(x) = -π Im[I_{iκ}(x)] / sinh(πκ)` with `|Γ(1 + iκ)|^2 = πκ / sinh(πκ)`;
/// the scaled terms are bounded by `min(e^{2x}, e^{x^2/4κ})` while the value
/// itself falls off like `e^{κ-x}` past `x = κ`, so the series is used where
/// the ratio stays below `e^9`. Elsewhere a trapezoid rule on a shifted
/// contour is used.
#[derive(Clone, Debug)]
pub struct KImag {
    kappa: f64,
    series_max: f64,
    lambda: f64,
    arg_gamma: f64,
    // 1 / (k (k + iκ)); the first entry is unused
    coefs: Vec<num_complex::Complex64>,
}

impl KImag {
    pub fn new(kappa: f64) -> Result<Self, SpecialError> {
        if !kappa.is_finite() {
            return Err(SpecialError::Order(kappa));
        }
        let kappa = kappa.abs();
        let use_series = kappa >= 0.01;
        let series_max = if use_series { 4.5f64.max(6.0 * kappa.sqrt()) } else { 0.0 };
        let mut coefs = Vec::new();
        let mut lambda = 0.0;
        let mut arg_gamma = 0.0;
        if use_series {
            use num_complex::Complex64;
            // sized for z up to series_max^2 / 4
            let zmax = 0.25 * series_max * series_max;
            coefs.push(Complex64::new(1.0, 0.0));
            let mut peak = 1.0f64;
            let mut size = 1.0f64;
            let mut k = 1.0;
            loop {
                let d = Complex64::new(k * k, k * kappa);
                coefs.push(d.inv());
                size *= zmax / d.norm();
                peak = peak.max(size);
                if k > zmax && size < 1e-18 * peak {
                    break;
                }
                k += 1.0;
            }
            let log_lambda = FRAC_PI_2 * kappa - 0.5 * (PI * kappa).ln() - 0.5 * log_sinh(PI * kappa);
            lambda = log_lambda.exp();
            arg_gamma = arg_gamma_one_plus_i(kappa);
        }
        Ok(Self { kappa, series_max, lambda, arg_gamma, coefs })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn scaled(&self, x: f64) -> Result<f64, SpecialError> {
        check(x, self.kappa)?;
        if x <= self.series_max && self.series_loss(x) <= 9.0 {
            Ok(self.ascending(x))
        } else {
            Ok(contour(self.kappa, x))
        }
    }

    /// Log of the cancellation in the ascending series at `x`.
    fn series_loss(&self, x: f64) -> f64 {
        (2.0 * x).min(0.25 * x * x / self.kappa) + (x - self.kappa).max(0.0)
    }

    fn ascending(&self, x: f64) -> f64 {
        use num_complex::Complex64;
        let z = 0.25 * x * x;
        let mut sum = Complex64::new(1.0, 0.0);
        let mut t = sum;
        let mut largest = 1.0f64;
        for (k, inv) in self.coefs.iter().enumerate().skip(1) {
            t = t * inv * z;
            sum += t;
            let n = t.norm();
            largest = largest.max(n);
            if k as f64 > z && n < 1e-18 * largest {
                break;
            }
        }
        let phase = self.kappa * (0.5 * x).ln() - self.arg_gamma;
        let im = (Complex64::from_polar(1.0, phase) * sum).im;
        -PI * self.lambda * im
    }
}

#[cfg(test)]
fn ascending(kappa: f64, x: f64) -> f64 {
    KImag::new(kappa).unwrap().ascending(x)
}

fn log_sinh(a: f64) -> f64 {
    if a > 20.0 {
        a - 2f64.ln() + (-2.0 * a).exp().ln_1p()
    } else {
        a.sinh().ln()
    }
}

/// Trapezoid rule on `Im t = θ`:
/// `K_{iκ}(x) = e^{-κθ} ∫_0^∞ e^{-x cos θ cosh t} cos(κt - x sin θ sinh t) dt`.
fn contour(kappa: f64, x: f64) -> f64 {
    let delta_min = if kappa > 0.0 { (4.0 / kappa).min(0.5) } else { 0.5 };
    let theta = if kappa <= 1.0 {
        0.0
    } else if x >= kappa {
        (kappa / x).asin().min(FRAC_PI_2 - delta_min)
    } else {
        FRAC_PI_2 - delta_min
    };
    let (c, s) = (theta.cos(), theta.sin());
    // strip of half-width w around the line; the lower edge gains e^{κw},
    // the upper edge loses decay of the exponential
    let mut best = 0.0f64;
    for i in 1..=40 {
        let w = 0.95 * (FRAC_PI_2 - theta) * i as f64 / 40.0;
        let growth = (kappa * w).max(x * (c - (theta + w).cos()));
        best = best.max(step_for(w, growth));
    }
    let a = x * c;
    let v = trapezoid(
        best,
        |t| (-a * (t.cosh() - 1.0)).exp() * (kappa * t - x * s * t.sinh()).cos(),
        |t| a * (t.cosh() - 1.0) > 45.0,
    );
    v * (kappa * (FRAC_PI_2 - theta) - a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_order_half_is_elementary() {
        for x in [0.01, 0.3, 1.0, 7.0, 40.0] {
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let v = bessel_k_real(0.5, x).unwrap();
            assert!((v / exact - 1.0).abs() < 1e-13, "x={x} {v} {exact}");
        }
    }

    #[test]
    fn imaginary_order_zero_matches_real_order() {
        for x in [0.02, 1.0, 5.0] {
            let a = bessel_k_imag(0.0, x).unwrap();
            let b = bessel_k_real(0.0, x).unwrap();
            assert!((a / b - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn series_and_contour_agree() {
        for &kappa in &[0.05, 0.7, 2.0, 9.0, 20.0, 45.0, 70.0] {
            for &x in &[0.01, 0.5, 3.0, 4.4, 12.0, 30.0] {
                if x > 4.5 && x * x > 36.0 * kappa {
                    continue;
                }
                let a = ascending(kappa, x);
                let b = contour(kappa, x);
                assert!((a - b).abs() <= 1e-11 * a.abs().max(1e-2), "κ={kappa} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn contour_matches_direct_quadrature_at_large_argument() {
        let rule = crate::quad::Rule::standard();
        for &(kappa, x) in &[(0.3, 12.0), (2.0, 30.0), (5.0, 60.0)] {
            let direct: f64 = rule.composite(0.0, 6.0, 60, |t| (-x * t.cosh()).exp() * (kappa * t).cos());
            let v = bessel_k_imag(kappa, x).unwrap();
            assert!((v / direct - 1.0).abs() < 1e-11, "κ={kappa} x={x}");
        }
    }

    #[test]
    fn arg_gamma_small_and_large() {
        // arg Γ(1 + iκ) ≈ -γκ for small κ
        let k = 1e-4;
        assert!((arg_gamma_one_plus_i(k) + 0.5772156649015329 * k).abs() < 1e-11);
        // Γ(1 + i) = 0.4980156681183560 - 0.1549498283018107 i
        let arg = (-0.1549498283018107f64).atan2(0.498015668118356);
        assert!((arg_gamma_one_plus_i(1.0) - arg).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_k_imag(1.0, 0.0).is_err());
        assert!(bessel_k_real(f64::NAN, 1.0).is_err());
    }
}
