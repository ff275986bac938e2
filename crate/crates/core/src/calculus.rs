//! Frame calculus on one copy of the plane.
//!
//! The frame `θ¹ = y^-1 dx`, `θ² = y^-1 dy` commutes with functions and
//! anticommutes with itself. The derivations `e1`, `e2` act on generators by
//! `e1 x = y`, `e1 y = 0`, `e2 x = 0`, `e2 y = -y`, and the deformed
//! Laplacian is `Δ_h = -(e1² + e2² + e2)`.
//!
//! `d` is fixed on generators by `dx = y θ¹`, `dy = y θ²` and extended by
//! Leibniz, which gives `df = (e1 f) θ¹ - (e2 f) θ²` on functions and
//! `dθ¹ = θ¹θ²`, `dθ² = 0`. The Hodge star is `∗1 = θ¹θ²`, `∗θ¹ = θ²`,
//! `∗θ² = -θ¹`, `∗θ¹θ² = 1`, and `δ = ∗d∗`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use crate::hopf::rmatrix;
use crate::plane::{AlgebraElement, PlaneLetter, PlaneMonomial};
use crate::report::Report;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    E1,
    E2,
}

fn on_letter(which: Frame, l: PlaneLetter) -> AlgebraElement {
    match (which, l) {
        (_, PlaneLetter::X(c) | PlaneLetter::Y(c) | PlaneLetter::YInv(c)) if c != 0 => {
            panic!("the frame calculus is defined on copy 0 only")
        }
        (Frame::E1, PlaneLetter::X(_)) => AlgebraElement::y(0),
        (Frame::E1, _) => AlgebraElement::zero(),
        (Frame::E2, PlaneLetter::X(_)) => AlgebraElement::zero(),
        (Frame::E2, PlaneLetter::Y(_)) => -AlgebraElement::y(0),
        (Frame::E2, PlaneLetter::YInv(_)) => AlgebraElement::y_inv(0),
    }
}

thread_local! {
    static FRAME_CACHE: RefCell<HashMap<(Frame, PlaneMonomial), AlgebraElement>> = RefCell::new(HashMap::new());
}

/// Derivation on a monomial: sum over letters, each replaced in place.
fn on_monomial(which: Frame, m: &PlaneMonomial) -> AlgebraElement {
    if let Some(hit) = FRAME_CACHE.with(|c| c.borrow().get(&(which, m.clone())).cloned()) {
        return hit;
    }
    let w = m.to_word();
    let mut out = AlgebraElement::zero();
    for i in 0..w.len() {
        let d = on_letter(which, w[i]);
        if d.is_zero() {
            continue;
        }
        let left = crate::plane::normal_form(&w[..i]);
        let right = crate::plane::normal_form(&w[i + 1..]);
        out = out + left.mul(&d).mul(&right);
    }
    FRAME_CACHE.with(|c| c.borrow_mut().insert((which, m.clone()), out.clone()));
    out
}

fn derivation(which: Frame, f: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in f.terms() {
        out = out + on_monomial(which, m).scale(c);
    }
    out
}

pub fn e1(f: &AlgebraElement) -> AlgebraElement {
    derivation(Frame::E1, f)
}

pub fn e2(f: &AlgebraElement) -> AlgebraElement {
    derivation(Frame::E2, f)
}

/// `Δ_h f = -(e1² + e2² + e2) f`.
pub fn laplacian_h(f: &AlgebraElement) -> AlgebraElement {
    let e2f = e2(f);
    -(e1(&e1(f)) + e2(&e2f) + e2f)
}

/// Classical `-y²(∂x² + ∂y²)` on normal-ordered symbols.
pub fn classical_laplacian(f: &AlgebraElement) -> AlgebraElement {
    let lap = f.partial_x(0).partial_x(0) + f.partial_y(0).partial_y(0);
    -lap.mul(&AlgebraElement::y_pow(0, 2))
}

/// Inhomogeneous form `f0 + f1 θ¹ + f2 θ² + f12 θ¹θ²`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Form {
    pub f0: AlgebraElement,
    pub f1: AlgebraElement,
    pub f2: AlgebraElement,
    pub f12: AlgebraElement,
}

impl Form {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn function(f: AlgebraElement) -> Self {
        Form { f0: f, ..Self::default() }
    }

    pub fn one_form(f1: AlgebraElement, f2: AlgebraElement) -> Self {
        Form { f1, f2, ..Self::default() }
    }

    pub fn two_form(f12: AlgebraElement) -> Self {
        Form { f12, ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero() && self.f2.is_zero() && self.f12.is_zero()
    }
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] + [{}] θ1 + [{}] θ2 + [{}] θ1θ2", self.f0, self.f1, self.f2, self.f12)
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, o: Form) -> Form {
        Form { f0: self.f0 + o.f0, f1: self.f1 + o.f1, f2: self.f2 + o.f2, f12: self.f12 + o.f12 }
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, o: Form) -> Form {
        self + (-o)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form { f0: -self.f0, f1: -self.f1, f2: -self.f2, f12: -self.f12 }
    }
}

/// Differential of one generator: `dx = y θ¹`, `dy = y θ²`, `dy^-1 = -y^-1 θ²`.
fn d_letter(l: PlaneLetter) -> (AlgebraElement, AlgebraElement) {
    match l {
        PlaneLetter::X(0) => (AlgebraElement::y(0), AlgebraElement::zero()),
        PlaneLetter::Y(0) => (AlgebraElement::zero(), AlgebraElement::y(0)),
        PlaneLetter::YInv(0) => (AlgebraElement::zero(), -AlgebraElement::y_inv(0)),
        _ => panic!("the frame calculus is defined on copy 0 only"),
    }
}

/// `d` on functions by Leibniz from the generator differentials.
fn d_function(f: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let mut a1 = AlgebraElement::zero();
    let mut a2 = AlgebraElement::zero();
    for (m, c) in f.terms() {
        let w = m.to_word();
        for i in 0..w.len() {
            let left = crate::plane::normal_form(&w[..i]).scale(c);
            let right = crate::plane::normal_form(&w[i + 1..]);
            let (g1, g2) = d_letter(w[i]);
            a1 = a1 + left.mul(&g1).mul(&right);
            a2 = a2 + left.mul(&g2).mul(&right);
        }
    }
    (a1, a2)
}

/// Exterior derivative. `d` of the 2-form part is zero.
pub fn d(w: &Form) -> Form {
    let (a1, a2) = d_function(&w.f0);
    // d(f1 θ¹ + f2 θ²) = df1 θ¹ + f1 θ¹θ² + df2 θ²
    let (b1, _) = d_function(&w.f2);
    let (_, c2) = d_function(&w.f1);
    Form { f0: AlgebraElement::zero(), f1: a1, f2: a2, f12: -c2 + w.f1.clone() + b1 }
}

pub fn hodge(w: &Form) -> Form {
    Form { f0: w.f12.clone(), f1: -w.f2.clone(), f2: w.f1.clone(), f12: w.f0.clone() }
}

/// `δ = ∗ d ∗`.
pub fn codifferential(w: &Form) -> Form {
    hodge(&d(&hodge(w)))
}

/// `-(δd + dδ)` on a form.
pub fn hodge_laplacian(w: &Form) -> Form {
    -(codifferential(&d(w)) + d(&codifferential(w)))
}

/// Monomials `x^a y^b` with `a + |b| <= max_degree`.
pub fn monomials(max_degree: u32) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    let m = max_degree as i32;
    for a in 0..=max_degree {
        for b in -m..=m {
            if a as i32 + b.abs() <= m {
                out.push(AlgebraElement::monomial(Scalar::one(), PlaneMonomial::single(0, a, b)));
            }
        }
    }
    out
}

/// The calculus relations from the braiding matrix (delegated), plus
/// `d² = 0`, `Δ_h = -(δd + dδ)`, and the classical limit, on all monomials
/// up to `max_degree`.
pub fn first_order_calculus_check() -> Report {
    let mut rep = Report::new();
    for r in rmatrix::rmatrix_checks().results() {
        if r.check.contains("differential") {
            let mut r = r.clone();
            r.suite = "calculus".into();
            rep.push(r);
        }
    }
    rep
}

pub fn calculus_suite(max_degree: u32) -> Report {
    const SUITE: &str = "calculus";
    let mut rep = first_order_calculus_check();
    let mut worst_dd = None;
    let mut worst_lap = None;
    let mut worst_classical = None;
    let mut worst_frame = None;
    for f in monomials(max_degree) {
        let df = d(&Form::function(f.clone()));
        let ddf = d(&df);
        if !ddf.is_zero() && worst_dd.is_none() {
            worst_dd = Some(format!("f = {f}: {ddf}"));
        }
        let framed = Form::one_form(e1(&f), -e2(&f));
        if framed != df && worst_frame.is_none() {
            worst_frame = Some(format!("f = {f}: {df} vs {framed}"));
        }
        let lap = laplacian_h(&f);
        let hl = hodge_laplacian(&Form::function(f.clone()));
        if hl != Form::function(lap.clone()) && worst_lap.is_none() {
            worst_lap = Some(format!("f = {f}: {lap} vs {hl}"));
        }
        let at0 = lap.at_h_zero();
        if at0.as_ref() != Some(&classical_laplacian(&f)) && worst_classical.is_none() {
            worst_classical = Some(format!("f = {f}: {lap}"));
        }
        // d² = 0 on one-forms built from the same monomial
        let one = Form::one_form(f.clone(), f.mul(&AlgebraElement::x(0)));
        let dd1 = d(&d(&one));
        if !dd1.is_zero() && worst_dd.is_none() {
            worst_dd = Some(format!("ω = {one}: {dd1}"));
        }
    }
    let deg = max_degree;
    rep.exact(SUITE, format!("d² = 0 on monomials to degree {deg}"), worst_dd);
    rep.exact(SUITE, format!("df = (e1 f) θ¹ - (e2 f) θ² to degree {deg}"), worst_frame);
    rep.exact(SUITE, format!("Δ_h = -(δd + dδ) to degree {deg}"), worst_lap);
    rep.exact(SUITE, format!("Δ_h at h = 0 is -y²(∂x² + ∂y²) to degree {deg}"), worst_classical);
    let mut worst_pow = None;
    for m in -(deg as i32)..=(deg as i32) {
        let f = AlgebraElement::y_pow(0, m);
        let r = laplacian_h(&f) - f.scale(&Scalar::int((m - m * m) as i64));
        if !r.is_zero() && worst_pow.is_none() {
            worst_pow = Some(format!("m = {m}: {r}"));
        }
    }
    rep.exact(SUITE, "Δ_h y^m = (m - m²) y^m", worst_pow);
    let c = e1(&e2(&AlgebraElement::x(0))) - e2(&e1(&AlgebraElement::x(0)));
    let r = c - e1(&AlgebraElement::x(0));
    rep.zero(SUITE, "[e1, e2] = e1 on x", &r, r.is_zero());
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
    fn frame_examples() {
        assert_eq!(e1(&pe("x^2")), pe("2*x*y + 2*i*h*y"));
        assert_eq!(e2(&pe("y^3")), pe("-3*y^3"));
        assert!(e1(&pe("y^-1")).is_zero());
        assert_eq!(d(&Form::function(pe("x"))), Form::one_form(pe("y"), AlgebraElement::zero()));
    }

    #[test]
    fn e1_closed_form_on_powers() {
        // e1(x^n) = ((x + 2ih)^n - x^n)/(2ih) y
        let two_ih = Scalar::term(0, 2, 1);
        for n in 0..7 {
            let xn = AlgebraElement::x_pow(0, n);
            let expect = (xn.shift_x(0, &two_ih) - xn.clone())
                .scale(&two_ih.inv_monomial().unwrap())
                .mul(&AlgebraElement::y(0));
            assert_eq!(e1(&xn), expect, "n = {n}");
        }
    }

    #[test]
    fn laplacian_examples() {
        assert!(laplacian_h(&pe("y")).is_zero());
        assert_eq!(laplacian_h(&pe("x^2")), pe("-2*y^2"));
        assert_eq!(laplacian_h(&pe("y^3")), pe("-6*y^3"));
    }

    #[test]
    fn hodge_squares() {
        let f = Form { f0: pe("x"), f1: pe("y"), f2: pe("x*y"), f12: pe("y^2") };
        let ss = hodge(&hodge(&f));
        assert_eq!(ss.f0, f.f0);
        assert_eq!(ss.f12, f.f12);
        assert_eq!(ss.f1, -f.f1.clone());
        assert_eq!(ss.f2, -f.f2.clone());
    }

    #[test]
    fn suite_passes_to_degree_five() {
        let r = calculus_suite(5);
        assert!(r.all_passed(), "{r}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn leibniz(a in 0u32..3, b in -2i32..3, c in 0u32..3, e in -2i32..3) {
            let f = AlgebraElement::monomial(Scalar::one(), PlaneMonomial::single(0, a, b))
                + AlgebraElement::x(0).scale(&Scalar::h());
            let g = AlgebraElement::monomial(Scalar::one(), PlaneMonomial::single(0, c, e));
            for op in [e1, e2] {
                prop_assert_eq!(op(&f.mul(&g)), op(&f).mul(&g) + f.mul(&op(&g)));
            }
        }
    }
}
