//! Exact scalars: Laurent polynomials in the real deformation parameter `h`
//! with Gaussian-rational coefficients.
//!
//! Every symbolic computation in the crate runs over this ring, so `h` stays a
//! symbol and identities are checked to all orders in the deformation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("evaluation at h = 0 hits the pole h^{0}")]
    Pole(i32),
    #[error("not a scalar expression: {0}")]
    NotScalar(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn zero() -> Self {
        GaussRat::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GaussRat::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn add_ref(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator/denominator: scale both down together
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Laurent polynomial in `h` with [`GaussRat`] coefficients.
///
/// Canonical: no zero coefficient is ever stored, so derived equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, GaussRat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::monomial(GaussRat::one(), 0)
    }

    /// `c * h^power`.
    pub fn monomial(c: GaussRat, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Scalar { terms }
    }

    pub fn int(n: i64) -> Self {
        Scalar::monomial(GaussRat::from_ints(n, 0), 0)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        let r = BigRational::new(num.into(), den.into());
        Scalar::monomial(GaussRat::new(r, BigRational::zero()), 0)
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::monomial(GaussRat::new(r, BigRational::zero()), 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::monomial(GaussRat::from_ints(0, 1), 0)
    }

    /// The deformation parameter.
    pub fn h() -> Self {
        Scalar::monomial(GaussRat::one(), 1)
    }

    /// `(re + i*im) * h^power` with integer parts.
    pub fn term(re: i64, im: i64, power: i32) -> Self {
        Scalar::monomial(GaussRat::from_ints(re, im), power)
    }

    /// `i*h`, the combination that appears in every commutation relation.
    pub fn ih() -> Self {
        Scalar::term(0, 1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| *c == GaussRat::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn min_power(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, power: i32) -> GaussRat {
        self.terms.get(&power).cloned().unwrap_or_else(GaussRat::zero)
    }

    fn add_term(&mut self, power: i32, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&power) {
            Some(v) => {
                *v = v.add_ref(c);
                if v.is_zero() {
                    self.terms.remove(&power);
                }
            }
            None => {
                self.terms.insert(power, c.clone());
            }
        }
    }

    /// Complex conjugation; `h` is real so only imaginary parts flip.
    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term scalar `c h^k`; `None` for sums and zero.
    pub fn inv_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Scalar::monomial(c.inv()?, -k))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let c = GaussRat::new(r.clone(), BigRational::zero());
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.mul_ref(&c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// The `h = 0` specialization, defined only without negative powers.
    pub fn at_h_zero(&self) -> Result<GaussRat, ScalarError> {
        if let Some(k) = self.min_power().filter(|k| *k < 0) {
            return Err(ScalarError::Pole(k));
        }
        Ok(self.coeff(0))
    }

    /// Floating evaluation at a numeric `h`.
    pub fn eval(&self, h: f64) -> Result<Complex64, ScalarError> {
        if h == 0.0 {
            return self.at_h_zero().map(|c| c.to_complex());
        }
        Ok(self
            .terms
            .iter()
            .map(|(k, c)| c.to_complex() * h.powi(*k))
            .sum())
    }

    /// The constant, purely rational value if this scalar is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let c = self.terms.get(&0)?;
                c.im.is_zero().then(|| c.re.clone())
            }
            _ => None,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<GaussRat> for Scalar {
    fn from(c: GaussRat) -> Self {
        Scalar::monomial(c, 0)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &GaussRat::new(-c.re.clone(), -c.im.clone()));
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, GaussRat::new(-c.re.clone(), -c.im.clone())))
                .collect(),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;

    // exponents of h add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a + b, &ca.mul_ref(cb));
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient text without surrounding parentheses: `-4`, `2*i`, `1/2+3*i`.
pub(crate) fn fmt_gauss(c: &GaussRat) -> String {
    let im_part = |im: &BigRational| -> String {
        if im.is_one() {
            "i".to_string()
        } else if (-im).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rat(im))
        }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rat(&c.re),
        (true, false) => im_part(&c.im),
        (false, false) => {
            let im = im_part(&c.im);
            if c.im.is_negative() {
                format!("{}{}", fmt_rat(&c.re), im)
            } else {
                format!("{}+{}", fmt_rat(&c.re), im)
            }
        }
    }
}

pub(crate) fn fmt_h_power(k: i32) -> String {
    match k {
        0 => String::new(),
        1 => "h".to_string(),
        _ => format!("h^{k}"),
    }
}

impl Scalar {
    /// Compact rendering used inside algebra elements: `4*i*h`, `-4*h^2`,
    /// `h^-1`, or a parenthesized sum for multi-term scalars.
    pub(crate) fn fmt_factor(&self) -> String {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            let hp = fmt_h_power(*k);
            let cs = fmt_gauss(c);
            if hp.is_empty() {
                return cs;
            }
            if c.is_one_gauss() {
                return hp;
            }
            if c.is_neg_one_gauss() {
                return format!("-{hp}");
            }
            if !c.re.is_zero() && !c.im.is_zero() {
                return format!("({cs})*{hp}");
            }
            return format!("{cs}*{hp}");
        }
        format!("({self})")
    }
}

impl GaussRat {
    fn is_one_gauss(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    fn is_neg_one_gauss(&self) -> bool {
        (-&self.re).is_one() && self.im.is_zero()
    }
}

impl fmt::Display for Scalar {
    /// Terms in descending powers of `h`: `(-4)*h^2 + (2*i)*h^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let hp = fmt_h_power(*k);
                if hp.is_empty() {
                    format!("({})", fmt_gauss(c))
                } else {
                    format!("({})*{}", fmt_gauss(c), hp)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let e = crate::text::parse_plane(s).map_err(|e| ScalarError::Parse(e.to_string()))?;
        e.as_scalar().ok_or_else(|| ScalarError::NotScalar(s.to_string()))
    }
}

pub(crate) fn bigint_factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ih_squared() {
        let a = Scalar::term(0, 2, 1);
        assert_eq!(&a * &a, Scalar::term(-4, 0, 2));
    }

    #[test]
    fn conj_flips_imaginary_only() {
        assert_eq!(Scalar::term(0, 2, 1).conj(), Scalar::term(0, -2, 1));
    }

    #[test]
    fn monomial_inverse() {
        let ih = Scalar::ih();
        let inv = ih.inv_monomial().unwrap();
        assert!((&inv * &ih).is_one());
        assert!((Scalar::ih() + Scalar::one()).inv_monomial().is_none());
    }

    #[test]
    fn evaluation() {
        let v = Scalar::term(0, 2, 1).eval(0.1).unwrap();
        assert!((v - Complex64::new(0.0, 0.2)).norm() < 1e-15);
        assert_eq!(Scalar::term(1, 0, -1).eval(0.0), Err(ScalarError::Pole(-1)));
        let s = &Scalar::one() - &Scalar::term(4, 0, 2);
        assert!(s.eval(0.5).unwrap().norm() < 1e-15);
    }

    #[test]
    fn display_descending() {
        let s = &Scalar::term(-4, 0, 2) + &Scalar::term(0, 2, -1);
        assert_eq!(s.to_string(), "(-4)*h^2 + (2*i)*h^-1");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn cancellation_is_canonical() {
        let a = Scalar::term(3, 1, 2);
        assert!((&a - &a).is_zero());
        assert_eq!(&a - &a, Scalar::zero());
    }
}
