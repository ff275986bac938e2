//! Laplacian eigenmodes on the deformed plane, their smeared
//! orthonormality, and the sector propagators.
//!
//! Modes are `π^{-3/2} sqrt(κ sinh πκ) e^{ikx} sqrt(y) K_{iκ}(|L₋(k)| y)` with
//! `L₋(k) = (e^{-2hk} - 1) / 2h`. Sector 0 has real `k`, so `L₋` covers
//! `(-1/2h, ∞)`; sector 1 has `k = t + iπ/2h`, covering `(-∞, -1/2h)`.
//! After the change of variables `p = L₊(k)` the propagators are
//!
//! ```text
//! G = π^-3 ∫dp ∫_0^∞ dκ κ sinh(πκ) / (κ^2 + 1/4 + μ^2) e^{ipδx} sqrt(y y') K_{iκ}(|p|y) K_{iκ}(|p|y')
//! ```
//!
//! with `p` over `(-1/2h, ∞)` for sector 0, `(-∞, -1/2h)` for sector 1 and
//! the whole line for the extended space.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{averaged_limit, Rule};
use crate::report::{Report, Status};
use crate::special::{KImag, SpecialError};

const SUITE: &str = "spectral";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("{0} must be positive and finite, got {1}")]
    Domain(&'static str, f64),
    #[error("points are too close to coincidence (cosh d - 1 = {0:e}); the propagator diverges there")]
    Coincident(f64),
    #[error("sector must be 0 or 1, got {0}")]
    Sector(u8),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

fn positive(name: &'static str, v: f64) -> Result<f64, SpectralError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(SpectralError::Domain(name, v))
    }
}

/// Momentum `t` (plus `iπ/2h` in sector 1), spectral parameter `κ`, and `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeParams {
    pub t: f64,
    pub sector: u8,
    pub kappa: f64,
    pub h: f64,
}

impl ModeParams {
    pub fn new(t: f64, sector: u8, kappa: f64, h: f64) -> Result<Self, SpectralError> {
        if sector > 1 {
            return Err(SpectralError::Sector(sector));
        }
        positive("kappa", kappa)?;
        positive("h", h)?;
        if !t.is_finite() {
            return Err(SpectralError::Domain("t", t));
        }
        Ok(Self { t, sector, kappa, h })
    }

    pub fn k(&self) -> Complex64 {
        Complex64::new(self.t, self.sector as f64 * PI / (2.0 * self.h))
    }

    /// `L₋(k) = (e^{-2hk} - 1) / 2h`; real in both sectors.
    pub fn l_minus(&self) -> f64 {
        let e = (-2.0 * self.h * self.t).exp();
        if self.sector == 0 {
            (e - 1.0) / (2.0 * self.h)
        } else {
            -(e + 1.0) / (2.0 * self.h)
        }
    }
}

/// `sqrt(κ sinh πκ) K_{iκ}(x)` from the scaled Bessel function.
fn normalized_k(k: &KImag, x: f64) -> Result<f64, SpectralError> {
    let kappa = k.kappa();
    let w = (0.5 * kappa * -(-2.0 * PI * kappa).exp_m1()).sqrt();
    Ok(w * k.scaled(x)?)
}

/// `φ_{k,κ}(x, y)` with `|L₋(k)|` in the Bessel argument.
pub fn mode(params: &ModeParams, x: f64, y: f64) -> Result<Complex64, SpectralError> {
    positive("y", y)?;
    let k = KImag::new(params.kappa)?;
    let l = params.l_minus().abs();
    let radial = normalized_k(&k, l * y)? * y.sqrt();
    Ok(PI.powf(-1.5) * (Complex64::i() * params.k() * x).exp() * radial)
}

/// The undeformed mode `π^{-3/2} sqrt(κ sinh πκ) e^{ikx} sqrt(y) K_{iκ}(|k| y)`.
pub fn classical_mode(k: f64, kappa: f64, x: f64, y: f64) -> Result<Complex64, SpectralError> {
    positive("y", y)?;
    positive("|k|", k.abs())?;
    let kb = KImag::new(kappa)?;
    let radial = normalized_k(&kb, k.abs() * y)? * y.sqrt();
    Ok(PI.powf(-1.5) * Complex64::from_polar(1.0, k * x) * radial)
}

/// Relative residual of `y^2 (L₋^2 g - g'') = (κ^2 + 1/4) g` for the radial
/// factor `g(y) = sqrt(y) K_{iκ}(|L₋| y)`, by central differences.
pub fn eigen_residual(params: &ModeParams, ys: &[f64]) -> Result<f64, SpectralError> {
    let k = KImag::new(params.kappa)?;
    let l = params.l_minus();
    let g = |y: f64| -> Result<f64, SpectralError> { Ok(y.sqrt() * k.scaled(l.abs() * y)?) };
    let lambda = params.kappa * params.kappa + 0.25;
    let mut worst = 0.0f64;
    for &y in ys {
        positive("y", y)?;
        // g varies on the scales y / κ and 1 / |L₋|
        let d = 1e-3 * y / (1.0 + l.abs() * y + params.kappa);
        let (gm, g0, gp) = (g(y - d)?, g(y)?, g(y + d)?);
        let g2 = (gp - 2.0 * g0 + gm) / (d * d);
        let lhs = y * y * (l * l * g0 - g2);
        let scale = (y * y * l * l * g0).abs() + (y * y * g2).abs() + (lambda * g0).abs();
        worst = worst.max((lhs - lambda * g0).abs() / scale);
    }
    Ok(worst)
}

/// Relative residual of `-y^2 (∂x^2 + ∂y^2) φ = (κ^2 + 1/4) φ` for the
/// undeformed mode on the given points.
pub fn classical_eigen_residual(k: f64, kappa: f64, points: &[(f64, f64)]) -> Result<f64, SpectralError> {
    let lambda = kappa * kappa + 0.25;
    let phi = |x: f64, y: f64| classical_mode(k, kappa, x, y);
    let mut worst = 0.0f64;
    for &(x, y) in points {
        let d = 1e-3 * y.min(1.0);
        let c = phi(x, y)?;
        let dxx = (phi(x + d, y)? - 2.0 * c + phi(x - d, y)?) / (d * d);
        let dyy = (phi(x, y + d)? - 2.0 * c + phi(x, y - d)?) / (d * d);
        let lhs = -(dxx + dyy) * y * y;
        let scale = (dxx * y * y).norm() + (dyy * y * y).norm() + lambda * c.norm();
        worst = worst.max((lhs - c * lambda).norm() / scale);
    }
    Ok(worst)
}

/// Gaussian spectral profile `b(κ) = exp(-(κ - center)^2 / 2 width^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Packet {
    pub center: f64,
    pub width: f64,
}

impl Packet {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width }
    }

    pub fn profile(&self, kappa: f64) -> f64 {
        let z = (kappa - self.center) / self.width;
        (-0.5 * z * z).exp()
    }

    fn support(&self) -> (f64, f64) {
        ((self.center - 9.0 * self.width).max(0.0), self.center + 9.0 * self.width)
    }
}

/// Overlap of two wave packets `w = ∫∫ a(k) b(κ) φ_{k,κ} dk dκ`, per unit of
/// `∫ conj(a) a' dk`.
///
/// The `x` integral is a Fourier pairing, so the state reduces to
/// `2π π^-3 ∫ dy/y conj(B(|L₋|y)) B'(|L₋|y)` with
/// `B(u) = ∫ b(κ) sqrt(κ sinh πκ) K_{iκ}(u) dκ`, independent of `|L₋|`. The
/// `y` integral is done in `log u`. Returns `(overlap, ∫ b b' dκ)`, which
/// agree when the modes are delta-normalized.
pub fn packet_overlap(a: &Packet, b: &Packet) -> Result<(f64, f64), SpectralError> {
    let rule = Rule::standard();
    let lo = a.support().0.min(b.support().0);
    let hi = a.support().1.max(b.support().1);
    let width = a.width.min(b.width);
    // log u where the packets have decayed
    let s_min = -(2.0 + (hi + 1.0).ln() + 7.0 / width);
    let s_max = (hi + 60.0).ln();
    // the κ-integrand oscillates like cos(κ log u)
    let freq = s_min.abs().max(s_max) + (hi + 2.0).ln() + 2.0;
    let panels = ((hi - lo) * freq / 8.0).ceil() as usize;
    let nodes: Vec<(f64, f64, KImag)> = {
        let w = (hi - lo) / panels as f64;
        let mut v = Vec::new();
        for i in 0..panels {
            let p0 = lo + w * i as f64;
            for (k, wt) in rule.mapped(p0, p0 + w) {
                v.push((k, wt, KImag::new(k)?));
            }
        }
        v
    };
    let transform = |pk: &Packet, u: f64| -> Result<f64, SpectralError> {
        let mut s = 0.0;
        for (k, wt, kb) in &nodes {
            s += wt * pk.profile(*k) * normalized_k(kb, u)?;
        }
        Ok(s)
    };
    let s_panels = ((s_max - s_min) * (hi + 2.0) / 8.0).ceil() as usize;
    let sw = (s_max - s_min) / s_panels as f64;
    let mut overlap = 0.0;
    for i in 0..s_panels {
        let s0 = s_min + sw * i as f64;
        for (s, wt) in rule.mapped(s0, s0 + sw) {
            let u = s.exp();
            overlap += wt * transform(a, u)? * transform(b, u)?;
        }
    }
    overlap *= 2.0 / (PI * PI);
    let direct: f64 = rule.composite(lo, hi, 40, |k| a.profile(k) * b.profile(k));
    Ok((overlap, direct))
}

/// Smeared orthonormality: equal packets, disjoint packets, and evenness of
/// the Bessel function under `κ -> -κ`.
pub fn orthonormality_check(packets: &[Packet], tol: f64) -> Result<Report, SpectralError> {
    let mut rep = Report::new();
    for (i, a) in packets.iter().enumerate() {
        for b in &packets[i..] {
            let (lhs, rhs) = packet_overlap(a, b)?;
            let norms = (packet_overlap(a, a)?.1 * packet_overlap(b, b)?.1).sqrt();
            let witness = Some(format!("overlap {lhs:e}, expected {rhs:e}"));
            if rhs.abs() > 1e-6 * norms {
                let name = format!("⟨w({}), w({})⟩ = ∫ b b' dκ", a.center, b.center);
                rep.numeric(SUITE, name, (lhs - rhs).abs() / rhs.abs(), tol, witness);
            } else {
                let name = format!("disjoint packets {} and {} are orthogonal", a.center, b.center);
                rep.numeric(SUITE, name, lhs.abs() / norms, 1e-6, witness);
            }
        }
    }
    let mut worst = 0.0f64;
    for &kappa in &[0.3, 2.0, 7.5] {
        let (p, m) = (KImag::new(kappa)?, KImag::new(-kappa)?);
        for &x in &[0.05, 1.0, 6.0] {
            worst = worst.max((p.scaled(x)? - m.scaled(x)?).abs());
        }
    }
    rep.numeric(SUITE, "K_{iκ} = K_{-iκ}", worst, 0.0, None);
    Ok(rep)
}

/// Which propagator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Zero,
    One,
    Extended,
}

impl Sector {
    pub fn label(self) -> &'static str {
        match self {
            Sector::Zero => "0",
            Sector::One => "1",
            Sector::Extended => "extended",
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "0" | "zero" => Ok(Sector::Zero),
            "1" | "one" => Ok(Sector::One),
            "extended" | "ext" => Ok(Sector::Extended),
            _ => Err(format!("unknown sector {s:?} (expected 0, 1 or extended)")),
        }
    }
}

/// Quadrature controls for the propagator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Controls {
    /// `κ` below which the integrand is integrated directly.
    pub kappa_direct: f64,
    /// Number of half-period panels in the `κ` tail.
    pub tail_panels: usize,
    /// Largest `κ` the tail may reach; closer points are rejected.
    pub kappa_max: f64,
    /// Gauss points per tail panel.
    pub tail_points: usize,
    /// Averaging passes over the tail partial sums.
    pub levels: usize,
    /// Radians per panel in the `log p` integral.
    pub phase_per_panel: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Self { kappa_direct: 12.0, tail_panels: 24, kappa_max: 400.0, tail_points: 12, levels: 10, phase_per_panel: 10.0 }
    }
}

/// One propagator evaluation: points `(x, y)`, `(x', y')` with `δx = x - x'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropagatorQuery {
    pub dx: f64,
    pub y: f64,
    pub yp: f64,
    pub mu: f64,
    pub h: f64,
}

impl PropagatorQuery {
    pub fn new(dx: f64, y: f64, yp: f64, mu: f64, h: f64) -> Self {
        Self { dx, y, yp, mu, h }
    }

    /// `cosh d = 1 + (δx^2 + (y - y')^2) / 2yy'`.
    pub fn cosh_distance(&self) -> f64 {
        1.0 + (self.dx * self.dx + (self.y - self.yp).powi(2)) / (2.0 * self.y * self.yp)
    }

    fn validate(&self) -> Result<(), SpectralError> {
        positive("y", self.y)?;
        positive("y'", self.yp)?;
        positive("h", self.h)?;
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(SpectralError::Domain("mu", self.mu));
        }
        if !self.dx.is_finite() {
            return Err(SpectralError::Domain("dx", self.dx));
        }
        let c = self.cosh_distance() - 1.0;
        if c < 1e-4 {
            return Err(SpectralError::Coincident(c));
        }
        Ok(())
    }
}

/// All three propagators at one query, with an error estimate from the
/// change in the accelerated `κ` tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectorValues {
    pub sector0: Complex64,
    pub sector1: Complex64,
    pub extended: Complex64,
    /// Error estimates for sector 0, sector 1 and the extended propagator.
    pub est_error: [f64; 3],
}

impl SectorValues {
    pub fn get(&self, s: Sector) -> Complex64 {
        match s {
            Sector::Zero => self.sector0,
            Sector::One => self.sector1,
            Sector::Extended => self.extended,
        }
    }

    pub fn error(&self, s: Sector) -> f64 {
        match s {
            Sector::Zero => self.est_error[0],
            Sector::One => self.est_error[1],
            Sector::Extended => self.est_error[2],
        }
    }
}

/// Argument beyond which `e^{πκ/2} K_{iκ}` is below `e^-36` of its size.
fn decay_point(kappa: f64) -> f64 {
    let exponent = |x: f64| {
        if x <= kappa {
            0.0
        } else {
            (x * x - kappa * kappa).sqrt() - kappa * (kappa / x).acos()
        }
    };
    let mut x = kappa + 1.0;
    while exponent(x) < 36.0 {
        x *= 1.1;
    }
    x
}

/// `[∫_0^∞ e^{ipδx} F dp, ∫_0^a e^{-ipδx} F dp, ∫_a^∞ e^{-ipδx} F dp]` with
/// `F = K̃(py) K̃(py')` and `a = 1/2h`, on one shared grid in `log p`.
fn p_integrals(k: &KImag, q: &PropagatorQuery, ctl: &Controls) -> Result<[Complex64; 3], SpectralError> {
    let rule = Rule::standard();
    let ymax = q.y.max(q.yp);
    let s_lo = (1e-12 / ymax).ln();
    let s_hi = (decay_point(k.kappa()) / ymax).ln();
    let s_a = (1.0 / (2.0 * q.h)).ln().clamp(s_lo, s_hi);
    let adx = q.dx.abs();
    let mut out = [Complex64::default(); 3];
    let mut s = s_lo;
    while s < s_hi {
        let omega = 2.0 * k.kappa() + 2.0 + (s + 0.5).exp() * adx;
        let mut next = (s + (ctl.phase_per_panel / omega).min(0.5)).min(s_hi);
        if s < s_a && next > s_a {
            next = s_a;
        }
        let below = next <= s_a;
        for (u, w) in rule.mapped(s, next) {
            let p = u.exp();
            let f = k.scaled(p * q.y)? * k.scaled(p * q.yp)? * p * w;
            let e = Complex64::from_polar(f, p * q.dx);
            out[0] += e;
            out[if below { 1 } else { 2 }] += e.conj();
        }
        s = next;
    }
    Ok(out)
}

fn kappa_weight(kappa: f64, mu: f64) -> f64 {
    0.5 * kappa * -(-2.0 * PI * kappa).exp_m1() / (kappa * kappa + 0.25 + mu * mu)
}

/// Partial sums of the three `κ` integrals: one after the direct range and
/// one after each tail panel, with the `κ` where each ends.
pub fn kappa_partial_sums(q: &PropagatorQuery, ctl: &Controls) -> Result<(Vec<f64>, Vec<[Complex64; 3]>), SpectralError> {
    q.validate()?;
    let rule = Rule::standard();
    let pref = PI.powi(-3) * (q.y * q.yp).sqrt();
    let piece = |kappa: f64| -> Result<[Complex64; 3], SpectralError> {
        let k = KImag::new(kappa)?;
        let v = p_integrals(&k, q, ctl)?;
        let w = kappa_weight(kappa, q.mu) * pref;
        Ok(v.map(|c| c * w))
    };
    let panel = |rule: &Rule, lo: f64, hi: f64| -> Result<[Complex64; 3], SpectralError> {
        let mut acc = [Complex64::default(); 3];
        for (k, w) in rule.mapped(lo, hi) {
            acc = add3(acc, piece(k)?.map(|c| c * w));
        }
        Ok(acc)
    };
    let mut head = [Complex64::default(); 3];
    let n_direct = (0.5 * ctl.kappa_direct).ceil().max(1.0) as usize;
    let step = ctl.kappa_direct / n_direct as f64;
    for i in 0..n_direct {
        head = add3(head, panel(rule, step * i as f64, step * (i + 1) as f64)?);
    }
    // tail in half periods of the dominant oscillation cos(κ d)
    let half = PI / q.cosh_distance().acosh();
    if ctl.kappa_direct + half * ctl.tail_panels as f64 > ctl.kappa_max {
        return Err(SpectralError::Coincident(q.cosh_distance() - 1.0));
    }
    let tail_rule = Rule::new(ctl.tail_points);
    let mut ends = vec![ctl.kappa_direct];
    let mut partial = vec![head];
    for _ in 0..ctl.tail_panels {
        let lo = *ends.last().expect("nonempty");
        partial.push(add3(*partial.last().expect("nonempty"), panel(&tail_rule, lo, lo + half)?));
        ends.push(lo + half);
    }
    Ok((ends, partial))
}

fn add3(a: [Complex64; 3], b: [Complex64; 3]) -> [Complex64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn accelerate(ends: &[f64], partial: &[[Complex64; 3]], levels: usize) -> ([Complex64; 3], [Complex64; 3]) {
    // Averaging removes the alternating part of the tail; the remaining
    // monotone part decays like 1/κ and is removed by extrapolating the
    // averaged limits of three prefixes in 1/κ. The second array is a
    // cruder value (linear fit, one averaging pass less) for error estimates.
    let n = partial.len();
    let col = |j: usize, m: usize, lv: usize| averaged_limit(&partial[..m].iter().map(|p| p[j]).collect::<Vec<_>>(), lv);
    let mut best = [Complex64::default(); 3];
    let mut crude = [Complex64::default(); 3];
    if n < levels + 6 {
        for j in 0..3 {
            best[j] = col(j, n, levels);
            crude[j] = col(j, n, levels.saturating_sub(1));
        }
        return (best, crude);
    }
    let ms = [n - 4, n - 2, n];
    let u: Vec<f64> = ms.iter().map(|&m| 1.0 / ends[m - 1]).collect();
    // Lagrange weights at u = 0 for the quadratic and the linear fit
    let w2 = [
        u[1] * u[2] / ((u[0] - u[1]) * (u[0] - u[2])),
        u[0] * u[2] / ((u[1] - u[0]) * (u[1] - u[2])),
        u[0] * u[1] / ((u[2] - u[0]) * (u[2] - u[1])),
    ];
    let w1 = [-u[2] / (u[1] - u[2]), u[1] / (u[1] - u[2])];
    for j in 0..3 {
        let l: Vec<Complex64> = ms.iter().map(|&m| col(j, m, levels)).collect();
        best[j] = l[0] * w2[0] + l[1] * w2[1] + l[2] * w2[2];
        let lin = l[1] * w1[0] + l[2] * w1[1];
        crude[j] = lin + (col(j, n, levels - 1) - l[2]);
    }
    (best, crude)
}

/// `G^(0)`, `G^(1)` and the extended propagator at one query.
pub fn propagator_all(q: &PropagatorQuery, ctl: &Controls) -> Result<SectorValues, SpectralError> {
    let (ends, partial) = kappa_partial_sums(q, ctl)?;
    let (b, c) = accelerate(&ends, &partial, ctl.levels.max(1));
    let sectors = |v: [Complex64; 3]| [v[0] + v[1], v[2], v[0] + v[1] + v[2]];
    let (best, crude) = (sectors(b), sectors(c));
    Ok(SectorValues {
        sector0: best[0],
        sector1: best[1],
        extended: best[2],
        est_error: [0, 1, 2].map(|i| (best[i] - crude[i]).norm()),
    })
}

pub fn propagator(q: &PropagatorQuery, sector: Sector, ctl: &Controls) -> Result<Complex64, SpectralError> {
    Ok(propagator_all(q, ctl)?.get(sector))
}

/// Point pairs at hyperbolic distance `acosh(cosh_d)`: `y = 1` and `y'`
/// spread from 1 to the value with `δx = 0`.
pub fn equal_distance_pairs(cosh_d: f64, n: usize, mu: f64, h: f64) -> Vec<PropagatorQuery> {
    let ymax = cosh_d + (cosh_d * cosh_d - 1.0).sqrt();
    (0..n)
        .map(|j| {
            let yp = if n == 1 { 1.0 } else { 1.0 + (ymax - 1.0) * j as f64 / (n - 1) as f64 };
            let dx2 = (2.0 * yp * (cosh_d - 1.0) - (yp - 1.0).powi(2)).max(0.0);
            PropagatorQuery::new(dx2.sqrt(), 1.0, yp, mu, h)
        })
        .collect()
}

/// Propagators along one set of equal-distance pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceScan {
    pub cosh_d: f64,
    pub queries: Vec<PropagatorQuery>,
    pub values: Vec<SectorValues>,
}

impl InvarianceScan {
    /// `max |G_i - G_j| / mean |G|` for one sector.
    pub fn spread(&self, s: Sector) -> f64 {
        let v: Vec<Complex64> = self.values.iter().map(|x| x.get(s)).collect();
        let mean = v.iter().map(|z| z.norm()).sum::<f64>() / v.len() as f64;
        let mut worst = 0.0f64;
        for a in &v {
            for b in &v {
                worst = worst.max((a - b).norm());
            }
        }
        worst / mean
    }
}

pub fn invariance_scan(cosh_d: f64, pairs: usize, mu: f64, h: f64, ctl: &Controls) -> Result<InvarianceScan, SpectralError> {
    let queries = equal_distance_pairs(cosh_d, pairs, mu, h);
    let values = queries.iter().map(|q| propagator_all(q, ctl)).collect::<Result<Vec<_>, _>>()?;
    Ok(InvarianceScan { cosh_d, queries, values })
}

/// Relative residual of `(-y^2 (∂x^2 + ∂y^2) + μ^2) G^ext` in `(δx, y)` on a
/// five-point stencil of spacing `step`.
pub fn classical_residual(q: &PropagatorQuery, step: f64, ctl: &Controls) -> Result<f64, SpectralError> {
    if step >= q.y {
        return Err(SpectralError::Domain("stencil step (must be below y)", step));
    }
    let g = |dx: f64, y: f64| -> Result<f64, SpectralError> {
        Ok(propagator_all(&PropagatorQuery { dx, y, ..*q }, ctl)?.extended.re)
    };
    let c = g(q.dx, q.y)?;
    let gxx = (g(q.dx + step, q.y)? - 2.0 * c + g(q.dx - step, q.y)?) / (step * step);
    let gyy = (g(q.dx, q.y + step)? - 2.0 * c + g(q.dx, q.y - step)?) / (step * step);
    let y2 = q.y * q.y;
    let lhs = -y2 * (gxx + gyy) + q.mu * q.mu * c;
    let scale = (y2 * gxx).abs() + (y2 * gyy).abs() + (q.mu * q.mu * c).abs();
    Ok(lhs.abs() / scale)
}

/// Tolerances for [`propagator_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteTolerances {
    pub additivity: f64,
    pub invariance: f64,
    pub residual: f64,
    pub h_independence: f64,
    pub symmetry: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self { additivity: 1e-10, invariance: 1e-5, residual: 1e-3, h_independence: 1e-8, symmetry: 1e-8 }
    }
}

/// Additivity of the sectors, equal-distance invariance of the extended
/// propagator (and its failure for sector 0), the classical residual,
/// `h`-independence and the exchange symmetry.
pub fn propagator_suite(ctl: &Controls, tol: &SuiteTolerances) -> Result<Report, SpectralError> {
    let mut rep = Report::new();
    let mut additivity = 0.0f64;
    for cosh_d in [1.2, 1.5, 3.0] {
        let scan = invariance_scan(cosh_d, 5, 1.0, 0.5, ctl)?;
        for v in &scan.values {
            additivity = additivity.max((v.sector0 + v.sector1 - v.extended).norm() / v.extended.norm());
        }
        let ext = scan.spread(Sector::Extended);
        rep.numeric(SUITE, format!("extended propagator spread at cosh d = {cosh_d} (5 pairs)"), ext, tol.invariance, None);
        let s0 = scan.spread(Sector::Zero);
        let floor = 10.0 * tol.invariance;
        rep.push(crate::report::CheckResult {
            suite: SUITE.into(),
            check: format!("sector-0 propagator spread at cosh d = {cosh_d} exceeds {floor:e}"),
            status: if s0 > floor { Status::Pass } else { Status::Fail },
            max_error: s0,
            witness: (s0 <= floor).then(|| format!("spread {s0:e} is within {floor:e}")),
        });
    }
    rep.numeric(SUITE, "G0 + G1 = G_ext", additivity, tol.additivity, None);

    let q = PropagatorQuery::new(1.0, 1.0, 2.0, 1.0, 0.1);
    let r = classical_residual(&q, 0.02, ctl)?;
    rep.numeric(SUITE, "classical operator residual on G_ext at (1, 1, 2)", r, tol.residual, None);

    let a = propagator_all(&PropagatorQuery { h: 0.05, ..q }, ctl)?.extended;
    let b = propagator_all(&PropagatorQuery { h: 0.2, ..q }, ctl)?.extended;
    let dev = (a - b).norm() / a.norm();
    rep.numeric(SUITE, "G_ext at h = 0.05 and h = 0.2", dev, tol.h_independence, Some(format!("{a} vs {b}")));

    let s = propagator_all(&PropagatorQuery { dx: -q.dx, y: q.yp, yp: q.y, ..q }, ctl)?.extended;
    let dev = (s - b).norm() / b.norm();
    rep.numeric(SUITE, "G_ext symmetric under y <-> y', dx -> -dx", dev, tol.symmetry, Some(format!("{s} vs {b}")));
    Ok(rep)
}

/// CSV with columns `sector, dx, y, yprime, mu, h, value, value_im, est_error`.
pub fn write_propagator_csv<W: Write>(
    rows: &[(PropagatorQuery, SectorValues)],
    sectors: &[Sector],
    out: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sector", "dx", "y", "yprime", "mu", "h", "value", "value_im", "est_error"])?;
    for (q, v) in rows {
        for &s in sectors {
            let z = v.get(s);
            w.write_record([
                s.label().to_string(),
                q.dx.to_string(),
                q.y.to_string(),
                q.yp.to_string(),
                q.mu.to_string(),
                q.h.to_string(),
                format!("{:.15e}", z.re),
                format!("{:.15e}", z.im),
                format!("{:.3e}", v.error(s)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_one_momentum() {
        let m = ModeParams::new(0.0, 1, 1.0, 0.5).unwrap();
        assert!((m.l_minus() + 2.0).abs() < 1e-15);
        assert!(m.l_minus() < -1.0 / (2.0 * m.h));
        let m0 = ModeParams::new(-3.0, 0, 1.0, 0.5).unwrap();
        assert!(m0.l_minus() > -1.0);
    }

    #[test]
    fn modes_satisfy_the_radial_equation() {
        let ys = [0.2, 0.7, 1.5, 3.0];
        for (t, sector) in [(0.3, 0u8), (-1.2, 0), (0.0, 1), (0.8, 1)] {
            let m = ModeParams::new(t, sector, 2.0, 0.5).unwrap();
            assert!(eigen_residual(&m, &ys).unwrap() < 1e-4);
        }
        let pts = [(0.0, 0.5), (0.4, 1.3), (-1.0, 2.5)];
        assert!(classical_eigen_residual(0.8, 1.7, &pts).unwrap() < 1e-4);
    }

    #[test]
    fn modes_tend_to_the_classical_ones() {
        let (t, kappa, x, y) = (0.6, 1.5, 0.3, 1.1);
        let classical = classical_mode(t, kappa, x, y).unwrap();
        let mut last = f64::INFINITY;
        for h in [0.1, 0.01, 0.001] {
            let m = mode(&ModeParams::new(t, 0, kappa, h).unwrap(), x, y).unwrap();
            let dev = (m - classical).norm();
            assert!(dev < 3.0 * h, "h={h} dev={dev}");
            assert!(dev < last);
            last = dev;
        }
    }

    #[test]
    fn coincident_points_are_rejected() {
        let q = PropagatorQuery::new(0.0, 1.0, 1.0, 1.0, 0.1);
        assert!(matches!(propagator_all(&q, &Controls::default()), Err(SpectralError::Coincident(_))));
    }

    #[test]
    fn equal_distance_pairs_have_the_distance() {
        for q in equal_distance_pairs(1.5, 5, 1.0, 0.1) {
            assert!((q.cosh_distance() - 1.5).abs() < 1e-12);
        }
        let last = equal_distance_pairs(1.5, 5, 1.0, 0.1)[4];
        assert!(last.dx.abs() < 1e-7 && (last.yp - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }
}
