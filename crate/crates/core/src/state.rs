//! The invariant state `⟨f⟩ = ∫ f(x|y) y^-2 dx dy` on a family of test
//! functions, sector inner products, and numeric checks of invariance.
//!
//! A test function is a finite sum of terms
//! `c x^a y^b exp(-p x^2 + βx + γ) exp(-qy - r/y)` with `p, q, r > 0`,
//! understood as the normal-ordered symbol `f(x|y)` (all `x` left of all `y`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hopf::uh::{UhElement, UhLetter};
use crate::plane::AlgebraElement;
use crate::quad::Rule;
use crate::report::Report;
use crate::special::{bessel_k_real, SpecialError};

const SUITE: &str = "state";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("term {0} is not integrable against y^-2 dx dy (need p, q, r > 0)")]
    NotIntegrable(usize),
    #[error("the weight e^(nπx/h) overwhelms the Gaussian decay (exponent {0:.1})")]
    Dominance(f64),
    #[error("prefactor must live in a single plane copy with scalar coefficients evaluable at h")]
    Prefactor,
    #[error("sector must be 0 or 1, got {0}")]
    Sector(u8),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// `exp(-p x^2 + βx + γ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gaussian {
    pub p: f64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl Gaussian {
    pub fn new(p: f64, beta: Complex64, gamma: Complex64) -> Self {
        Self { p, beta, gamma }
    }

    /// `exp(-p (x - center)^2)`.
    pub fn centered(p: f64, center: f64) -> Self {
        Self::new(p, Complex64::new(2.0 * p * center, 0.0), Complex64::new(-p * center * center, 0.0))
    }

    fn shifted(self, s: Complex64) -> Self {
        // -p (x+s)^2 + β(x+s) + γ
        Self::new(self.p, self.beta - 2.0 * self.p * s, self.gamma - self.p * s * s + self.beta * s)
    }

    fn conj(self) -> Self {
        Self::new(self.p, self.beta.conj(), self.gamma.conj())
    }

    fn times(self, o: Self) -> Self {
        Self::new(self.p + o.p, self.beta + o.beta, self.gamma + o.gamma)
    }

    fn eval(self, x: f64) -> Complex64 {
        (-self.p * x * x + self.beta * x + self.gamma).exp()
    }
}

/// `exp(-qy - r/y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YProfile {
    pub q: f64,
    pub r: f64,
}

impl YProfile {
    pub fn new(q: f64, r: f64) -> Self {
        Self { q, r }
    }

    fn times(self, o: Self) -> Self {
        Self::new(self.q + o.q, self.r + o.r)
    }

    fn eval(self, y: f64) -> f64 {
        (-self.q * y - self.r / y).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coef: Complex64,
    pub xa: u32,
    pub yb: i32,
    pub gauss: Gaussian,
    pub yprof: YProfile,
}

impl Term {
    fn key(&self) -> (u32, i32, [u64; 7]) {
        let g = &self.gauss;
        let bits = [g.p, g.beta.re, g.beta.im, g.gamma.re, g.gamma.im, self.yprof.q, self.yprof.r].map(f64::to_bits);
        (self.xa, self.yb, bits)
    }

    fn with(&self, coef: Complex64, xa: u32, yb: i32) -> Self {
        Self { coef, xa, yb, ..*self }
    }

    fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.coef * x.powi(self.xa as i32) * y.powi(self.yb) * self.gauss.eval(x) * self.yprof.eval(y)
    }
}

/// Finite sum of terms; see the module documentation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TestFunction {
    terms: Vec<Term>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl TestFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        Self { terms: terms.into_iter().collect() }.normalized()
    }

    /// `c x^a y^b` times the profiles.
    pub fn monomial(coef: Complex64, xa: u32, yb: i32, gauss: Gaussian, yprof: YProfile) -> Self {
        Self::from_terms([Term { coef, xa, yb, gauss, yprof }])
    }

    /// The normal-ordered polynomial `prefactor` (single copy, coefficients
    /// evaluated at `h`) times the profiles.
    pub fn with_prefactor(prefactor: &AlgebraElement, h: f64, gauss: Gaussian, yprof: YProfile) -> Result<Self, StateError> {
        if prefactor.n_copies() > 1 {
            return Err(StateError::Prefactor);
        }
        let mut terms = Vec::new();
        for (m, c) in prefactor.terms() {
            let (xa, yb) = m.get(0);
            let coef = c.eval(h).map_err(|_| StateError::Prefactor)?;
            terms.push(Term { coef, xa, yb, gauss, yprof });
        }
        Ok(Self::from_terms(terms))
    }

    /// A bare polynomial symbol. Not integrable; used to compare the
    /// operators here with their exact counterparts on polynomials.
    pub fn polynomial(prefactor: &AlgebraElement, h: f64) -> Result<Self, StateError> {
        Self::with_prefactor(prefactor, h, Gaussian::new(0.0, Complex64::default(), Complex64::default()), YProfile::new(0.0, 0.0))
    }

    /// Polynomial coefficients `(a, b) -> c` of a symbol built by
    /// [`TestFunction::polynomial`].
    pub fn polynomial_coefficients(&self) -> BTreeMap<(u32, i32), Complex64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry((t.xa, t.yb)).or_insert(Complex64::default()) += t.coef * t.gauss.gamma.exp();
        }
        out.retain(|_, c: &mut Complex64| c.norm() > 0.0);
        out
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalized(self) -> Self {
        let mut map: BTreeMap<_, Term> = BTreeMap::new();
        for t in self.terms {
            map.entry(t.key()).and_modify(|e| e.coef += t.coef).or_insert(t);
        }
        Self { terms: map.into_values().filter(|t| t.coef != Complex64::default()).collect() }
    }

    fn map_terms(&self, f: impl Fn(&Term, &mut Vec<Term>)) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            f(t, &mut out);
        }
        Self { terms: out }.normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { terms: self.terms.iter().chain(&other.terms).copied().collect() }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_terms(|t, out| out.push(t.with(t.coef * c, t.xa, t.yb)))
    }

    /// `f(x + s | y)` for complex `s`.
    pub fn shift_x(&self, s: Complex64) -> Self {
        self.map_terms(|t, out| {
            let g = t.gauss.shifted(s);
            for j in 0..=t.xa {
                let c = t.coef * binomial(t.xa, j) * s.powu(t.xa - j);
                out.push(Term { coef: c, xa: j, gauss: g, ..*t });
            }
        })
    }

    /// Multiply the symbol by `x^n`.
    pub fn mul_x_pow(&self, n: u32) -> Self {
        self.map_terms(|t, out| out.push(t.with(t.coef, t.xa + n, t.yb)))
    }

    /// Multiply the symbol by `Σ_j c_j x^j`.
    pub fn mul_x_poly(&self, poly: &[Complex64]) -> Self {
        self.map_terms(|t, out| {
            for (j, &c) in poly.iter().enumerate() {
                out.push(t.with(t.coef * c, t.xa + j as u32, t.yb));
            }
        })
    }

    /// Multiply the symbol by `y^n`.
    pub fn mul_y_pow(&self, n: i32) -> Self {
        self.map_terms(|t, out| out.push(t.with(t.coef, t.xa, t.yb + n)))
    }

    /// `y ∂_y` on the symbol.
    pub fn euler_y(&self) -> Self {
        self.map_terms(|t, out| {
            let YProfile { q, r } = t.yprof;
            out.push(t.with(t.coef * t.yb as f64, t.xa, t.yb));
            out.push(t.with(t.coef * -q, t.xa, t.yb + 1));
            out.push(t.with(t.coef * r, t.xa, t.yb - 1));
        })
    }

    /// `∂_x` on the symbol.
    pub fn partial_x(&self) -> Self {
        self.map_terms(|t, out| {
            if t.xa > 0 {
                out.push(t.with(t.coef * t.xa as f64, t.xa - 1, t.yb));
            }
            out.push(t.with(t.coef * -2.0 * t.gauss.p, t.xa + 1, t.yb));
            out.push(t.with(t.coef * t.gauss.beta, t.xa, t.yb));
        })
    }

    /// `D_x f = (f(x) - f(x - 2ih)) / 2ih`.
    pub fn finite_difference(&self, h: f64) -> Self {
        let two_ih = Complex64::new(0.0, 2.0 * h);
        self.sub(&self.shift_x(-two_ih)).scale(two_ih.inv())
    }

    /// Pointwise complex conjugate of the symbol.
    pub fn conj(&self) -> Self {
        self.map_terms(|t, out| out.push(Term { coef: t.coef.conj(), gauss: t.gauss.conj(), ..*t }))
    }

    /// Pointwise product of symbols.
    pub fn mul_symbol(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                out.push(Term {
                    coef: a.coef * b.coef,
                    xa: a.xa + b.xa,
                    yb: a.yb + b.yb,
                    gauss: a.gauss.times(b.gauss),
                    yprof: a.yprof.times(b.yprof),
                });
            }
        }
        Self { terms: out }.normalized()
    }

    /// Multiply the symbol by `e^{wx}`.
    pub fn mul_exp_x(&self, w: f64) -> Self {
        self.map_terms(|t, out| {
            let g = Gaussian::new(t.gauss.p, t.gauss.beta + w, t.gauss.gamma);
            out.push(Term { gauss: g, ..*t })
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(x, y)).sum()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "({:.6}) x^{} y^{} exp(-{:.4}x^2 + ({:.4})x + ({:.4})) exp(-{:.4}y - {:.4}/y)",
                t.coef, t.xa, t.yb, t.gauss.p, t.gauss.beta, t.gauss.gamma, t.yprof.q, t.yprof.r
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// A state value with its method and an error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateValue {
    pub value: Complex64,
    pub method: Method,
    pub error_estimate: f64,
    /// Sum of the moduli of the term contributions; the natural scale for
    /// relative comparisons when terms cancel.
    pub scale: f64,
}

fn integrable(i: usize, t: &Term) -> Result<(), StateError> {
    let ok = |v: f64| v > 0.0 && v.is_finite();
    if ok(t.gauss.p) && ok(t.yprof.q) && ok(t.yprof.r) {
        Ok(())
    } else {
        Err(StateError::NotIntegrable(i))
    }
}

/// `∫ x^a exp(-p x^2 + βx + γ) dx`.
fn x_moment(a: u32, g: Gaussian) -> Complex64 {
    let mu = g.beta / (2.0 * g.p);
    let var = 1.0 / (2.0 * g.p);
    let mut e = Complex64::default();
    let mut dfact = 1.0; // (j - 1)!!
    for j in (0..=a).step_by(2) {
        if j >= 2 {
            dfact *= (j - 1) as f64;
        }
        e += binomial(a, j) * mu.powu(a - j) * var.powi(j as i32 / 2) * dfact;
    }
    (g.gamma + g.beta * g.beta / (4.0 * g.p)).exp() * (PI / g.p).sqrt() * e
}

/// `∫_0^∞ y^{b-2} exp(-qy - r/y) dy = 2 (r/q)^{(b-1)/2} K_{b-1}(2 sqrt(qr))`.
fn y_moment(b: i32, yp: YProfile) -> Result<f64, StateError> {
    let nu = (b - 1) as f64;
    Ok(2.0 * (yp.r / yp.q).powf(0.5 * nu) * bessel_k_real(nu, 2.0 * (yp.q * yp.r).sqrt())?)
}

/// `⟨f⟩` from the closed forms.
pub fn state(f: &TestFunction) -> Result<StateValue, StateError> {
    let mut value = Complex64::default();
    let mut scale = 0.0;
    for (i, t) in f.terms.iter().enumerate() {
        integrable(i, t)?;
        let v = t.coef * x_moment(t.xa, t.gauss) * y_moment(t.yb, t.yprof)?;
        value += v;
        scale += v.norm();
    }
    Ok(StateValue { value, method: Method::ClosedForm, error_estimate: 1e-14 * scale, scale })
}

/// `⟨f⟩` by composite Gauss-Legendre quadrature of each term, independent
/// of the closed forms.
pub fn state_by_quadrature(f: &TestFunction) -> Result<StateValue, StateError> {
    let rule = Rule::standard();
    let mut value = Complex64::default();
    let mut scale = 0.0;
    for (i, t) in f.terms.iter().enumerate() {
        integrable(i, t)?;
        let g = t.gauss;
        let center = g.beta.re / (2.0 * g.p);
        let half = (12.0 + t.xa as f64) / g.p.sqrt();
        let panels = 40 + (g.beta.im.abs() * half) as usize;
        let a = t.xa as i32;
        let xi: Complex64 = rule.composite(center - half, center + half, panels, |x| g.eval(x) * x.powi(a));
        // y = e^u
        let YProfile { q, r } = t.yprof;
        let s = (t.yb - 1) as f64;
        let phi = |u: f64| s * u - q * u.exp() - r * (-u).exp();
        let peak = ((s + (s * s + 4.0 * q * r).sqrt()) / (2.0 * q)).ln();
        let top = phi(peak);
        let (mut lo, mut hi) = (peak - 1.0, peak + 1.0);
        while phi(lo) > top - 50.0 {
            lo -= 1.0;
        }
        while phi(hi) > top - 50.0 {
            hi += 1.0;
        }
        let yi: f64 = rule.composite(lo, hi, 4 * (hi - lo).ceil() as usize, |u| phi(u).exp());
        let v = t.coef * xi * yi;
        value += v;
        scale += v.norm();
    }
    Ok(StateValue { value, method: Method::Quadrature, error_estimate: 1e-12 * scale, scale })
}

/// Largest exponent of the Gaussian factors, `Re γ + (Re β)^2 / 4p`.
fn peak_exponent(f: &TestFunction) -> f64 {
    f.terms
        .iter()
        .map(|t| t.gauss.gamma.re + t.gauss.beta.re * t.gauss.beta.re / (4.0 * t.gauss.p))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The integrand `conj(f) e^{nπx/h} g` of the sector-`n` inner product.
pub fn sector_integrand(f: &TestFunction, g: &TestFunction, sector: u8, h: f64) -> Result<TestFunction, StateError> {
    scaled_integrand(f, g, sector, h, 0.0)
}

fn scaled_integrand(f: &TestFunction, g: &TestFunction, sector: u8, h: f64, shift: f64) -> Result<TestFunction, StateError> {
    if sector > 1 {
        return Err(StateError::Sector(sector));
    }
    let mut prod = f.conj().mul_symbol(g).mul_exp_x(sector as f64 * PI / h);
    for t in &mut prod.terms {
        t.gauss.gamma -= shift;
    }
    let e = peak_exponent(&prod);
    if e > 600.0 {
        return Err(StateError::Dominance(e));
    }
    Ok(prod)
}

/// `⟨f, g⟩_(n) = ⟨ :f* e^{nπx/h} g: ⟩`. The normal-ordered product pairs
/// to the classical weighted pairing of the symbols: the reordering
/// corrections are total finite differences in `x` and `y ∂_y` derivatives,
/// which the state annihilates.
pub fn inner_product(f: &TestFunction, g: &TestFunction, sector: u8, h: f64) -> Result<StateValue, StateError> {
    state(&sector_integrand(f, g, sector, h)?)
}

/// `e^{-shift} ⟨f, g⟩_(n)`, for sector-1 products whose size overflows.
pub fn inner_product_scaled(f: &TestFunction, g: &TestFunction, sector: u8, h: f64, shift: f64) -> Result<StateValue, StateError> {
    state(&scaled_integrand(f, g, sector, h, shift)?)
}

/// Largest peak exponent of the sector-`n` norms of `samples`.
pub fn norm_exponent(samples: &[TestFunction], sector: u8, h: f64) -> f64 {
    samples
        .iter()
        .map(|f| peak_exponent(&f.conj().mul_symbol(f).mul_exp_x(sector as f64 * PI / h)))
        .fold(0.0, f64::max)
}

/// Which cross-product table the action uses: the standard one with the
/// constant `h^2/4` in the `J-` rule, or the one without it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Table {
    #[default]
    Standard,
    Consistent,
}

impl Table {
    fn constant(self, h: f64) -> f64 {
        match self {
            Table::Standard => 0.25 * h * h,
            Table::Consistent => 0.0,
        }
    }
}

/// `J3 G · f = -(2x - ih) D_x f - 2 y∂_y f`.
pub fn act_j3g(f: &TestFunction, h: f64) -> TestFunction {
    let ih = Complex64::new(0.0, h);
    let dx = f.finite_difference(h).mul_x_poly(&[ih, Complex64::new(-2.0, 0.0)]);
    dx.sub(&f.euler_y().scale(Complex64::new(2.0, 0.0)))
}

/// `J- G · f = -(x^2 - ihx + c) D_x f + y^2 (D_x f)(x + 2ih) - 2x y∂_y f - ih (2 (y∂_y)^2 - y∂_y) f`.
pub fn act_jmg(f: &TestFunction, h: f64, table: Table) -> TestFunction {
    let ih = Complex64::new(0.0, h);
    let c = Complex64::new(table.constant(h), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let d = f.finite_difference(h);
    let a = d.mul_x_poly(&[-c, ih, -one]);
    let b = d.shift_x(2.0 * ih).mul_y_pow(2);
    let e = f.euler_y();
    let ee = e.euler_y();
    let rest = e.mul_x_pow(1).scale(Complex64::new(2.0, 0.0)).add(&ee.scale(2.0 * ih)).sub(&e.scale(ih));
    a.add(&b).sub(&rest)
}

/// Action of one generator letter.
pub fn act_letter(l: UhLetter, f: &TestFunction, h: f64, table: Table) -> TestFunction {
    let ih = Complex64::new(0.0, h);
    match l {
        UhLetter::Jp => f.partial_x(),
        UhLetter::G => f.shift_x(-ih),
        UhLetter::GInv => f.shift_x(ih),
        UhLetter::J3 => act_j3g(&f.shift_x(ih), h),
        UhLetter::Jm => act_jmg(&f.shift_x(ih), h, table),
    }
}

/// `u · f` for `u` in normal form, letter by letter from the right.
pub fn act(u: &UhElement, f: &TestFunction, h: f64, table: Table) -> Result<TestFunction, StateError> {
    let mut out = TestFunction::zero();
    for (m, c) in u.terms() {
        let c = c.eval(h).map_err(|_| StateError::Prefactor)?;
        let mut g = f.clone();
        for l in m.to_word().into_iter().rev() {
            g = act_letter(l, &g, h, table);
        }
        out = out.add(&g.scale(c));
    }
    Ok(out)
}

/// Frame derivation `e1 f = ((f(x + 2ih) - f(x)) / 2ih) y`.
pub fn e1(f: &TestFunction, h: f64) -> TestFunction {
    let two_ih = Complex64::new(0.0, 2.0 * h);
    f.shift_x(two_ih).sub(f).scale(two_ih.inv()).mul_y_pow(1)
}

/// Frame derivation `e2 f = -y ∂_y f`.
pub fn e2(f: &TestFunction) -> TestFunction {
    f.euler_y().scale(Complex64::new(-1.0, 0.0))
}

/// Coefficient of `θ1 θ2` in `d(f θ1 + g θ2)`: `e2 f + f + e1 g`.
pub fn exterior_two_form(f: &TestFunction, g: &TestFunction, h: f64) -> TestFunction {
    e2(f).add(f).add(&e1(g, h))
}

/// Deterministic random members of the family.
pub fn random_family(n: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let terms: Vec<Term> = (0..k)
                .map(|_| Term {
                    coef: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    xa: rng.gen_range(0..=3),
                    yb: rng.gen_range(-2..=3),
                    gauss: Gaussian::new(
                        rng.gen_range(0.5..2.0),
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)),
                        Complex64::default(),
                    ),
                    yprof: YProfile::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)),
                })
                .collect();
            TestFunction::from_terms(terms)
        })
        .collect()
}

/// One compared pair of values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub check: String,
    pub sample: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

fn relative(lhs: Complex64, rhs: Complex64, scale: f64) -> f64 {
    let d = (lhs - rhs).norm();
    let s = lhs.norm().max(rhs.norm()).max(scale);
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Fold comparisons into one report entry per check name.
pub fn summarize(rows: &[Comparison], tol: f64) -> Report {
    let mut by: BTreeMap<&str, (f64, usize, usize)> = BTreeMap::new();
    for r in rows {
        let e = by.entry(&r.check).or_insert((0.0, 0, 0));
        e.2 += 1;
        if r.deviation > e.0 || r.deviation.is_nan() {
            *e = (r.deviation, r.sample, e.2);
        }
    }
    let mut rep = Report::new();
    for (check, (err, worst, n)) in by {
        let witness = Some(format!("worst sample {worst} of {n}: relative deviation {err:e}"));
        rep.numeric(SUITE, format!("{check} ({n} samples)"), err, tol, witness);
    }
    rep
}

/// `⟨f(x + ih | y)⟩ = ⟨f⟩` and `⟨y∂_y f⟩ = ⟨f⟩` on every sample.
pub fn invariance_comparisons(samples: &[TestFunction], h: f64) -> Result<Vec<Comparison>, StateError> {
    let ih = Complex64::new(0.0, h);
    let mut rows = Vec::new();
    for (i, f) in samples.iter().enumerate() {
        let base = state(f)?;
        let shifted = state(&f.shift_x(ih))?;
        let euler = state(&f.euler_y())?;
        let scale = base.scale.max(shifted.scale).max(euler.scale);
        let mut row = |check: String, lhs: Complex64| {
            rows.push(Comparison { check, sample: i, lhs, rhs: base.value, deviation: relative(lhs, base.value, scale) })
        };
        row(format!("⟨f(x+ih|y)⟩ = ⟨f⟩ at h={h}"), shifted.value);
        row(format!("⟨y∂y f⟩ = ⟨f⟩ at h={h}"), euler.value);
    }
    Ok(rows)
}

pub fn verify_invariance_conditions(samples: &[TestFunction], h: f64, tol: f64) -> Result<Report, StateError> {
    Ok(summarize(&invariance_comparisons(samples, h)?, tol))
}

/// Generators whose action is compared with its adjoint in each sector.
pub fn sector_generators(sector: u8) -> Vec<(&'static str, UhElement)> {
    let g = UhElement::g();
    let j3g = UhElement::j3().mul(&g);
    let jmg = UhElement::jm().mul(&g);
    match sector {
        0 => vec![("J+", UhElement::jp()), ("G", g), ("J3 G", j3g), ("J- G", jmg)],
        _ => vec![("G^2", UhElement::g_pow(2)), ("J3 G", j3g), ("J- G", jmg)],
    }
}

/// `⟨f, u·g⟩_(n) = ⟨u*·f, g⟩_(n)` over consecutive sample pairs. The
/// deviation is relative to the Cauchy-Schwarz bound. Both sides of a pair
/// carry the factor `e^{-S}` with `S` the peak exponent of the pair's norms,
/// which keeps sector 1 finite at small `h`.
pub fn action_symmetry_comparisons(samples: &[TestFunction], h: f64, table: Table) -> Result<Vec<Comparison>, StateError> {
    let mut rows = Vec::new();
    for sector in [0u8, 1] {
        for (name, u) in sector_generators(sector) {
            let ustar = u.star();
            for (i, pair) in samples.windows(2).enumerate() {
                let (f, g) = (&pair[0], &pair[1]);
                let shift = norm_exponent(pair, sector, h);
                let ip = |a: &TestFunction, b: &TestFunction| inner_product_scaled(a, b, sector, h, shift);
                let ug = act(&u, g, h, table)?;
                let uf = act(&ustar, f, h, table)?;
                let lhs = ip(f, &ug)?;
                let rhs = ip(&uf, g)?;
                let bound = |a: &TestFunction, b: &TestFunction| -> Result<f64, StateError> {
                    Ok((ip(a, a)?.value.re * ip(b, b)?.value.re).sqrt())
                };
                let scale = bound(f, &ug)?.max(bound(&uf, g)?);
                rows.push(Comparison {
                    check: format!("sector {sector}: ⟨f, {name}·g⟩ = ⟨({name})*·f, g⟩ at h={h}"),
                    sample: i,
                    lhs: lhs.value,
                    rhs: rhs.value,
                    deviation: relative(lhs.value, rhs.value, scale),
                });
            }
        }
    }
    Ok(rows)
}

pub fn verify_action_symmetry(samples: &[TestFunction], h: f64, tol: f64) -> Result<Report, StateError> {
    Ok(summarize(&action_symmetry_comparisons(samples, h, Table::Standard)?, tol))
}

/// `⟨dω⟩ = 0` for `ω = f θ1 + g θ2` with `(f, g)` consecutive samples,
/// and separately for `f θ1` and `g θ2`.
pub fn stokes_comparisons(samples: &[TestFunction], h: f64) -> Result<Vec<Comparison>, StateError> {
    let zero = TestFunction::zero();
    let mut rows = Vec::new();
    for (i, pair) in samples.windows(2).enumerate() {
        let (f, g) = (&pair[0], &pair[1]);
        for (label, a, b) in [("f θ1 + g θ2", f, g), ("f θ1", f, &zero), ("g θ2", &zero, g)] {
            let w = state(&exterior_two_form(a, b, h))?;
            let scale = state(a)?.scale.max(state(b).map(|s| s.scale).unwrap_or(0.0)).max(w.scale);
            rows.push(Comparison {
                check: format!("Stokes ⟨d({label})⟩ = 0 at h={h}"),
                sample: i,
                lhs: w.value,
                rhs: Complex64::default(),
                deviation: relative(w.value, Complex64::default(), scale),
            });
        }
    }
    Ok(rows)
}

pub fn stokes_check(samples: &[TestFunction], h: f64, tol: f64) -> Result<Report, StateError> {
    Ok(summarize(&stokes_comparisons(samples, h)?, tol))
}

/// Closed forms against quadrature on every sample.
pub fn quadrature_comparisons(samples: &[TestFunction]) -> Result<Vec<Comparison>, StateError> {
    let mut rows = Vec::new();
    for (i, f) in samples.iter().enumerate() {
        let a = state(f)?;
        let b = state_by_quadrature(f)?;
        rows.push(Comparison {
            check: "closed form ⟨f⟩ matches quadrature".into(),
            sample: i,
            lhs: a.value,
            rhs: b.value,
            deviation: relative(a.value, b.value, a.scale),
        });
    }
    Ok(rows)
}

/// CSV rows `(check, sample, lhs_re, lhs_im, rhs_re, rhs_im, deviation)`.
pub fn write_csv<W: Write>(rows: &[Comparison], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "sample", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "deviation"])?;
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.sample.to_string(),
            format!("{:e}", r.lhs.re),
            format!("{:e}", r.lhs.im),
            format!("{:e}", r.rhs.re),
            format!("{:e}", r.rhs.im),
            format!("{:e}", r.deviation),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Tolerances for [`state_suite_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteTolerances {
    pub quadrature: f64,
    pub invariance: f64,
    pub stokes: f64,
    pub symmetry: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self { quadrature: 1e-10, invariance: 1e-9, stokes: 1e-9, symmetry: 1e-8 }
    }
}

/// Everything in this module at the given `h` values.
pub fn state_suite(hs: &[f64], samples: usize, seed: u64) -> Result<Report, StateError> {
    state_suite_with(hs, samples, seed, Table::Standard, &SuiteTolerances::default())
}

pub fn state_suite_with(hs: &[f64], samples: usize, seed: u64, table: Table, tol: &SuiteTolerances) -> Result<Report, StateError> {
    let family = random_family(samples, seed);
    let mut rep = summarize(&quadrature_comparisons(&family)?, tol.quadrature);
    for &h in hs {
        rep.extend(verify_invariance_conditions(&family, h, tol.invariance)?);
        rep.extend(stokes_check(&family, h, tol.stokes)?);
        rep.extend(summarize(&action_symmetry_comparisons(&family, h, table)?, tol.symmetry));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus;
    use crate::crossprod;
    use crate::plane::AlgebraElement as A;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit() -> (Gaussian, YProfile) {
        (Gaussian::new(1.0, c(0.0), c(0.0)), YProfile::new(1.0, 1.0))
    }

    #[test]
    fn gaussian_bessel_example() {
        // ⟨e^{-x^2} y^2 e^{-y-1/y}⟩ = sqrt(π) 2 K_1(2)
        let (g, y) = unit();
        let f = TestFunction::monomial(c(1.0), 0, 2, g, y);
        let v = state(&f).unwrap().value;
        // K_1(2) = 0.139_865_881_816_522_43
        let expect = PI.sqrt() * 2.0 * 0.139_865_881_816_522_43;
        assert!((v - c(expect)).norm() < 1e-14);
        let q = state_by_quadrature(&f).unwrap().value;
        assert!((q - c(expect)).norm() < 1e-13);
    }

    #[test]
    fn zero_and_odd_functions() {
        assert_eq!(state(&TestFunction::zero()).unwrap().value, c(0.0));
        let (g, y) = unit();
        let f = TestFunction::monomial(c(1.0), 1, 2, g, y);
        assert!(state(&f).unwrap().value.norm() < 1e-16);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let rows = quadrature_comparisons(&random_family(25, 3)).unwrap();
        assert!(summarize(&rows, 1e-10).all_passed());
    }

    #[test]
    fn shift_and_euler_preserve_the_state() {
        for h in [0.05, 0.1, 0.5] {
            let r = verify_invariance_conditions(&random_family(20, 11), h, 1e-9).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn shift_by_real_amount_is_exact_translation() {
        let f = &random_family(1, 5)[0];
        let s = f.shift_x(c(0.7));
        let (x, y) = (0.3, 1.2);
        assert!((s.eval(x, y) - f.eval(x + 0.7, y)).norm() < 1e-13);
    }

    #[test]
    fn inner_product_is_hermitian_and_positive() {
        let fam = random_family(6, 8);
        for sector in [0, 1] {
            for f in &fam {
                let n = inner_product(f, f, sector, 0.5).unwrap().value;
                assert!(n.re > 0.0 && n.im.abs() < 1e-12 * n.re);
                for g in &fam {
                    let a = inner_product(f, g, sector, 0.5).unwrap().value;
                    let b = inner_product(g, f, sector, 0.5).unwrap().value;
                    assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn sector_one_matches_quadrature() {
        let (_, y) = unit();
        let f = TestFunction::monomial(c(1.0), 1, 1, Gaussian::centered(4.0, 0.2), y);
        let integrand = sector_integrand(&f, &f, 1, 0.5).unwrap();
        let a = state(&integrand).unwrap().value;
        let b = state_by_quadrature(&integrand).unwrap().value;
        assert!((a - b).norm() < 1e-10 * a.norm());
    }

    #[test]
    fn weight_can_defeat_the_gaussian() {
        let (g, y) = unit();
        let f = TestFunction::monomial(c(1.0), 0, 0, Gaussian::new(0.02, c(0.0), c(0.0)), y);
        let _ = g;
        assert!(matches!(inner_product(&f, &f, 1, 0.05), Err(StateError::Dominance(_))));
    }

    fn polys() -> Vec<A> {
        calculus::monomials(3).into_iter().filter(|m| m.n_copies() <= 1).collect()
    }

    fn assert_same(sym: &TestFunction, exact: &A, h: f64, what: &str) {
        let expect = TestFunction::polynomial(exact, h).unwrap().polynomial_coefficients();
        let got = sym.polynomial_coefficients();
        let keys: std::collections::BTreeSet<_> = expect.keys().chain(got.keys()).collect();
        for k in keys {
            let a = expect.get(k).copied().unwrap_or_default();
            let b = got.get(k).copied().unwrap_or_default();
            assert!((a - b).norm() < 1e-10, "{what}: coefficient {k:?}: {a} vs {b}");
        }
    }

    #[test]
    fn letter_actions_match_the_exact_cross_product() {
        let h = 0.3;
        for (table, build) in [
            (Table::Standard, crossprod::derive_base_rules as fn() -> _),
            (Table::Consistent, crossprod::derive_consistent_base_rules),
        ] {
            let alg = crossprod::CrossAlgebra::new(build().unwrap());
            for p in polys() {
                let f = TestFunction::polynomial(&p, h).unwrap();
                for l in UhLetter::ALL {
                    let exact = alg.act(&UhElement::letter(l), &p);
                    assert_same(&act_letter(l, &f, h, table), &exact, h, &format!("{table:?} {} on {p}", l.name()));
                }
                for (name, u) in crossprod::named_generators() {
                    let exact = alg.act(&u, &p);
                    assert_same(&act(&u, &f, h, table).unwrap(), &exact, h, &format!("{table:?} {name} on {p}"));
                }
            }
        }
    }

    #[test]
    fn frame_matches_the_calculus() {
        let h = 0.4;
        for p in polys() {
            let f = TestFunction::polynomial(&p, h).unwrap();
            assert_same(&e1(&f, h), &calculus::e1(&p), h, "e1");
            assert_same(&e2(&f), &calculus::e2(&p), h, "e2");
            let q = p.mul(&A::x(0));
            let g = TestFunction::polynomial(&q, h).unwrap();
            let form = calculus::Form::one_form(p.clone(), q.clone());
            assert_same(&exterior_two_form(&f, &g, h), &calculus::d(&form).f12, h, "d");
        }
    }

    #[test]
    fn action_is_symmetric_under_the_star() {
        let r = verify_action_symmetry(&random_family(6, 21), 0.5, 1e-8).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn stokes_holds() {
        let r = stokes_check(&random_family(10, 4), 0.1, 1e-9).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = invariance_comparisons(&random_family(2, 1), 0.1).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("check,sample,lhs_re"));
        assert_eq!(s.lines().count(), 1 + rows.len());
    }
}
