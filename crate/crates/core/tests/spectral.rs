use std::f64::consts::PI;

use hlobachevsky::spectral::{self, Controls, ModeParams, PropagatorQuery, Sector, SpectralError};

/// Resolvent kernel of `-Δ + μ^2` on the hyperbolic plane,
/// `Q_ν(cosh d) / 2π` with `ν(ν + 1) = μ^2`, from
/// `Q_ν(cosh d) = ∫_d^∞ e^{-(ν + 1/2)t} (2 cosh t - 2 cosh d)^{-1/2} dt`
/// after `t = d + u^2`, by composite Simpson.
fn resolvent_kernel(cosh_d: f64, mu: f64) -> f64 {
    let nu = -0.5 + (0.25 + mu * mu).sqrt();
    let d = cosh_d.acosh();
    let a = nu + 0.5;
    let f = |u: f64| {
        if u == 0.0 {
            return 2.0 * (-a * d).exp() / (2.0 * d.sinh()).sqrt();
        }
        let w = u * u;
        // 2 cosh(d + w) - 2 cosh d = 4 sinh(d + w/2) sinh(w/2)
        2.0 * u * (-a * (d + w)).exp() / (4.0 * (d + 0.5 * w).sinh() * (0.5 * w).sinh()).sqrt()
    };
    let (end, n) = (8.0, 20_000);
    let step = end / n as f64;
    let mut sum = f(0.0) + f(end);
    for i in 1..n {
        sum += f(i as f64 * step) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * step / 3.0 / (2.0 * PI)
}

#[test]
fn oracle_reproduces_a_known_value() {
    // μ = 0 is the Laplacian itself: Q_0(z) = ½ ln((z + 1)/(z - 1))
    let z: f64 = 1.5;
    let q0 = 0.5 * ((z + 1.0) / (z - 1.0)).ln() / (2.0 * PI);
    assert!((resolvent_kernel(z, 0.0) / q0 - 1.0).abs() < 1e-12);
}

#[test]
fn extended_propagator_is_the_resolvent_kernel() {
    let ctl = Controls::default();
    for (q, budget) in [(PropagatorQuery::new(1.0, 1.0, 1.0, 1.0, 0.1), 1e-9), (PropagatorQuery::new(0.0, 1.0, 4.0, 1.0, 0.3), 1e-8)] {
        let v = spectral::propagator_all(&q, &ctl).unwrap();
        let exact = resolvent_kernel(q.cosh_distance(), q.mu);
        let err = (v.extended - exact).norm();
        assert!(err / exact < budget, "{q:?}: {} vs {exact}", v.extended);
        // the internal estimate is honest to within a small factor
        assert!(err <= 5.0 * v.error(Sector::Extended) + 1e-14, "error {err:e} vs estimate {:e}", v.error(Sector::Extended));
        assert!((v.sector0 + v.sector1 - v.extended).norm() < 1e-12 * exact);
    }
}

#[test]
fn sector_zero_depends_on_more_than_the_distance() {
    let ctl = Controls::default();
    let pairs = spectral::equal_distance_pairs(1.5, 2, 1.0, 0.5);
    let a = spectral::propagator_all(&pairs[0], &ctl).unwrap();
    let b = spectral::propagator_all(&pairs[1], &ctl).unwrap();
    assert!((a.extended - b.extended).norm() < 1e-8 * a.extended.norm());
    assert!((a.sector0 - b.sector0).norm() > 1e-3 * a.sector0.norm());
}

#[test]
fn near_coincident_points_are_rejected() {
    let q = PropagatorQuery::new(0.0, 1.0, 1.001, 1.0, 0.1);
    assert!(matches!(spectral::propagator_all(&q, &Controls::default()), Err(SpectralError::Coincident(_))));
    let q = PropagatorQuery::new(0.0, -1.0, 1.0, 1.0, 0.1);
    assert!(matches!(spectral::propagator_all(&q, &Controls::default()), Err(SpectralError::Domain(..))));
}

#[test]
fn deformed_modes_solve_the_separated_equation() {
    let ys = [0.2, 0.7, 1.5, 3.0];
    for sector in [0, 1] {
        for &(t, kappa, h) in &[(0.4, 0.5, 0.1), (-1.3, 3.0, 0.25), (2.0, 8.0, 0.05)] {
            let p = ModeParams::new(t, sector, kappa, h).unwrap();
            let r = spectral::eigen_residual(&p, &ys).unwrap();
            assert!(r < 1e-6, "sector {sector} t={t} κ={kappa} h={h}: {r:e}");
        }
    }
}

#[test]
fn sector_one_modes_stay_finite_as_t_varies() {
    // |L₋| ≥ 1/2h in sector 1, so the radial factor never reaches K at 0
    for t in [-3.0, 0.0, 3.0] {
        let p = ModeParams::new(t, 1, 1.0, 0.2).unwrap();
        assert!(p.l_minus().abs() >= 1.0 / (2.0 * 0.2) - 1e-12);
        assert!(spectral::mode(&p, 0.3, 1.0).unwrap().norm().is_finite());
    }
}

#[test]
fn small_h_modes_approach_classical_ones() {
    let (t, kappa, x, y) = (0.8, 2.0, 0.4, 1.3);
    let classical = spectral::classical_mode(t, kappa, x, y).unwrap();
    let mut last = f64::INFINITY;
    for h in [0.1, 0.01, 0.001] {
        let p = ModeParams::new(t, 0, kappa, h).unwrap();
        let dev = (spectral::mode(&p, x, y).unwrap() - classical).norm() / classical.norm();
        assert!(dev < last);
        last = dev;
    }
    assert!(last < 1e-2);
}
