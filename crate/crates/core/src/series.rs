//! Truncated power series in formal momenta `k, k', ...` with plane-algebra
//! coefficients, and the exponential identities they satisfy.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::calculus;
use crate::plane::AlgebraElement;
use crate::report::Report;
use crate::scalar::{bigint_factorial, Scalar};

const SUITE: &str = "series";

/// Multi-degree in the formal parameters; trailing zeros are trimmed.
pub type Degree = Vec<u32>;

fn trim(mut d: Degree) -> Degree {
    while d.last() == Some(&0) {
        d.pop();
    }
    d
}

fn total(d: &[u32]) -> u32 {
    d.iter().sum()
}

fn add_degrees(a: &[u32], b: &[u32]) -> Degree {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect())
}

fn inv_factorial(n: u32) -> Scalar {
    Scalar::rational(BigRational::new(BigInt::from(1), bigint_factorial(n)))
}

/// Series truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    order: u32,
    coeffs: BTreeMap<Degree, AlgebraElement>,
}

impl FormalSeries {
    pub fn zero(order: u32) -> Self {
        FormalSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(a: AlgebraElement, order: u32) -> Self {
        let mut s = Self::zero(order);
        s.add_term(Vec::new(), a);
        s
    }

    pub fn one(order: u32) -> Self {
        Self::constant(AlgebraElement::one(), order)
    }

    /// `a · k_param`.
    pub fn linear(param: usize, a: AlgebraElement, order: u32) -> Self {
        let mut d = vec![0; param + 1];
        d[param] = 1;
        let mut s = Self::zero(order);
        s.add_term(d, a);
        s
    }

    /// Series in one parameter from scalar coefficients `c_n k^n`.
    pub fn from_scalars(param: usize, coeffs: impl IntoIterator<Item = (u32, Scalar)>, order: u32) -> Self {
        let mut s = Self::zero(order);
        for (n, c) in coeffs {
            let mut d = vec![0; param + 1];
            d[param] = n;
            s.add_term(d, AlgebraElement::scalar(c));
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add_term(&mut self, d: Degree, a: AlgebraElement) {
        let d = trim(d);
        if total(&d) > self.order || a.is_zero() {
            return;
        }
        let e = self.coeffs.entry(d.clone()).or_default();
        *e = std::mem::take(e) + a;
        if e.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn coeff(&self, d: &[u32]) -> AlgebraElement {
        self.coeffs.get(&trim(d.to_vec())).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Degree, &AlgebraElement)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|d| total(d)).min()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut s = Self::zero(order.min(self.order));
        for (d, a) in &self.coeffs {
            s.add_term(d.clone(), a.clone());
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.truncate(self.order.min(o.order));
        for (d, a) in &o.coeffs {
            s.add_term(d.clone(), a.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|a| a.scale(c))
    }

    /// Apply a linear map to every coefficient.
    pub fn map(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Self {
        let mut s = Self::zero(self.order);
        for (d, a) in &self.coeffs {
            s.add_term(d.clone(), f(a));
        }
        s
    }

    /// Product with coefficients multiplied in order (the momenta are central).
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut s = Self::zero(order);
        for (d1, a) in &self.coeffs {
            for (d2, b) in &o.coeffs {
                if total(d1) + total(d2) <= order {
                    s.add_term(add_degrees(d1, d2), a.mul(b));
                }
            }
        }
        s
    }

    pub fn mul_element_left(&self, a: &AlgebraElement) -> Self {
        self.map(|c| a.mul(c))
    }

    pub fn mul_element_right(&self, a: &AlgebraElement) -> Self {
        self.map(|c| c.mul(a))
    }

    /// First degree at which `self` and `o` differ, with the residual.
    pub fn first_difference(&self, o: &Self) -> Option<(Degree, AlgebraElement)> {
        let diff = self.sub(o);
        diff.coeffs.iter().min_by_key(|(d, _)| (total(d), (*d).clone())).map(|(d, a)| (d.clone(), a.clone()))
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O(k^{})", self.order + 1);
        }
        let mut first = true;
        for (d, a) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({a})")?;
            for (i, &e) in d.iter().enumerate() {
                if e > 0 {
                    let name = if i == 0 { "k".to_string() } else { format!("k{}", "'".repeat(i)) };
                    if e == 1 {
                        write!(f, "*{name}")?;
                    } else {
                        write!(f, "*{name}^{e}")?;
                    }
                }
            }
        }
        write!(f, " + O(k^{})", self.order + 1)
    }
}

/// `Σ_{n<=N} arg^n / n!`. The argument must have no constant term.
pub fn exp_series(arg: &FormalSeries, order: u32) -> FormalSeries {
    assert!(arg.valuation().is_none_or(|v| v >= 1), "exponent must vanish at k = 0");
    let arg = arg.truncate(order);
    let mut out = FormalSeries::one(order);
    let mut power = FormalSeries::one(order);
    for n in 1..=order {
        power = power.mul(&arg);
        if power.is_zero() {
            break;
        }
        out = out.add(&power.scale(&inv_factorial(n)));
    }
    out
}

/// `e^{i k a}` for an element `a`.
pub fn exp_ik(param: usize, a: &AlgebraElement, order: u32) -> FormalSeries {
    exp_series(&FormalSeries::linear(param, a.scale(&Scalar::i()), order), order)
}

fn l_series(sign: i64, order: u32) -> FormalSeries {
    let two_h = Scalar::term(2 * sign, 0, 1);
    FormalSeries::from_scalars(0, (1..=order).map(|n| (n, &two_h.pow(n - 1) * &inv_factorial(n))), order)
}

/// `L₊(k) = (e^{2hk} - 1)/2h`.
pub fn lplus_series(order: u32) -> FormalSeries {
    l_series(1, order)
}

/// `L₋(k) = (e^{-2hk} - 1)/2h`.
pub fn lminus_series(order: u32) -> FormalSeries {
    l_series(-1, order)
}

fn record(rep: &mut Report, check: String, lhs: &FormalSeries, rhs: &FormalSeries) {
    let w = lhs.first_difference(rhs).map(|(d, a)| format!("first failing degree {d:?}: {a}"));
    rep.exact(SUITE, check, w);
}

/// `e^{ikx} e^{-ikx'} = e^{i L₊(k) δx}` with `δx = x - x'`, `x'` the second copy.
pub fn check_appendix_a(order: u32) -> Report {
    let mut rep = Report::new();
    let x = AlgebraElement::x(0);
    let xp = AlgebraElement::x(1);
    let lhs = exp_ik(0, &x, order).mul(&exp_ik(0, &-xp.clone(), order));
    let dx = x - xp;
    let arg = lplus_series(order).mul_element_right(&dx.scale(&Scalar::i()));
    let rhs = exp_series(&arg, order);
    record(&mut rep, format!("e^(ikx) e^(-ikx') = e^(iL+(k) δx) to order {order}"), &lhs, &rhs);
    rep
}

/// `e^{ikx} y^m = e^{2hkm} y^m e^{ikx}` for `m` in `-2..=2`.
pub fn check_comrel(order: u32) -> Report {
    let mut rep = Report::new();
    let e = exp_ik(0, &AlgebraElement::x(0), order);
    for m in -2..=2 {
        let f = AlgebraElement::y_pow(0, m);
        let lhs = e.mul_element_right(&f);
        let dilation = exp_series(
            &FormalSeries::linear(0, AlgebraElement::scalar(Scalar::term(2 * m as i64, 0, 1)), order),
            order,
        );
        let rhs = dilation.mul_element_right(&f).mul(&e);
        record(&mut rep, format!("e^(ikx) y^{m} = (e^(2hk) y)^{m} e^(ikx) to order {order}"), &lhs, &rhs);
    }
    rep
}

/// `e1 e^{ikx} = i L₊(k) y e^{ikx} = i L₋(k) e^{ikx} y`.
pub fn check_e1_eigen(order: u32) -> Report {
    let mut rep = Report::new();
    let y = AlgebraElement::y(0);
    let e = exp_ik(0, &AlgebraElement::x(0), order);
    let lhs = e.map(calculus::e1);
    let left = lplus_series(order).scale(&Scalar::i()).mul_element_right(&y).mul(&e);
    record(&mut rep, format!("e1 e^(ikx) = i L+(k) y e^(ikx) to order {order}"), &lhs, &left);
    let right = lminus_series(order).scale(&Scalar::i()).mul(&e).mul_element_right(&y);
    record(&mut rep, format!("e1 e^(ikx) = i L-(k) e^(ikx) y to order {order}"), &lhs, &right);
    rep
}

/// All exponential identities at truncation `order`.
pub fn series_suite(order: u32) -> Report {
    let mut rep = check_appendix_a(order);
    rep.extend(check_comrel(order));
    rep.extend(check_e1_eigen(order));
    let e = exp_ik(0, &AlgebraElement::x(0), order);
    let inv = exp_ik(0, &-AlgebraElement::x(0), order);
    record(&mut rep, format!("e^(ikx) e^(-ikx) = 1 to order {order}"), &e.mul(&inv), &FormalSeries::one(order));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_plane;
    use proptest::prelude::*;

    fn pe(s: &str) -> AlgebraElement {
        parse_plane(s).unwrap()
    }

    #[test]
    fn exp_to_second_order() {
        let e = exp_ik(0, &pe("x"), 2);
        assert_eq!(e.coeff(&[]), AlgebraElement::one());
        assert_eq!(e.coeff(&[1]), pe("i*x"));
        assert_eq!(e.coeff(&[2]), pe("-1/2*x^2"));
        assert_eq!(exp_series(&FormalSeries::zero(5), 5), FormalSeries::one(5));
    }

    #[test]
    fn l_series_taylor() {
        let p = lplus_series(3);
        assert_eq!(p.coeff(&[1]), pe("1"));
        assert_eq!(p.coeff(&[2]), pe("h"));
        assert_eq!(p.coeff(&[3]), pe("2/3*h^2"));
        let m = lminus_series(2);
        assert_eq!(m.coeff(&[2]), pe("-h"));
    }

    #[test]
    fn second_order_of_the_translated_exponential() {
        let dx = AlgebraElement::x(0) - AlgebraElement::x(1);
        let arg = lplus_series(2).mul_element_right(&dx.scale(&Scalar::i()));
        let k2 = exp_series(&arg, 2).coeff(&[2]);
        let expect = dx.scale(&Scalar::ih()) - dx.mul(&dx).scale(&Scalar::ratio(1, 2));
        assert_eq!(k2, expect);
    }

    #[test]
    fn comrel_first_order_for_y() {
        let e = exp_ik(0, &pe("x"), 1);
        assert_eq!(e.mul_element_right(&pe("y")).coeff(&[1]), pe("i*x*y"));
        let r = check_comrel(1);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn identities_at_order_eight() {
        let r = series_suite(8);
        assert!(r.all_passed(), "{r}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn multiplication_is_associative(a in 0u32..3, b in -1i32..2, c in 0u32..3, n in 2u32..5) {
            let s = |e: AlgebraElement| exp_ik(0, &e, n);
            let p = s(AlgebraElement::x_pow(0, a));
            let q = FormalSeries::linear(0, AlgebraElement::y_pow(0, b), n).add(&FormalSeries::one(n));
            let r = s(AlgebraElement::x_pow(0, c).mul(&AlgebraElement::y(0)));
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        }
    }
}
