//! `U_h(sl(2))` in the G-presentation, `G = exp(-ih J+)`.
//!
//! Normal order is `G^a (J-)^b (J3)^c (J+)^d` with `a` any integer. The
//! ordering rules are
//!
//! ```text
//! J+ G    = G J+                     J+ G^-1 = G^-1 J+
//! J3 G    = G J3 - 1 + G^2           J3 G^-1 = G^-1 J3 - 1 + G^-2
//! J- G    = G J- + ih G J3 - ih/2 + (ih/2) G^2
//! J- G^-1 = G^-1 J- - ih G^-1 J3 + ih/2 - (ih/2) G^-2
//! J3 J-   = J- J3 - (1/2)((G + G^-1) J- + J- (G + G^-1))
//! J+ J-   = J- J+ + J3
//! J+ J3   = J3 J+ + (i/h)(G^-1 - G)
//! ```
//!
//! The last rule is `[J3, J+] = 2 sin(h J+)/h` written through `G`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::rewrite::{self, Combination, Normalizer, RewriteSystem, Strategy};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UhLetter {
    G,
    GInv,
    Jm,
    J3,
    Jp,
}

impl UhLetter {
    pub const ALL: [UhLetter; 5] = [UhLetter::G, UhLetter::GInv, UhLetter::Jm, UhLetter::J3, UhLetter::Jp];

    fn rank(self) -> u8 {
        match self {
            UhLetter::G | UhLetter::GInv => 0,
            UhLetter::Jm => 1,
            UhLetter::J3 => 2,
            UhLetter::Jp => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UhLetter::G => "G",
            UhLetter::GInv => "G^-1",
            UhLetter::Jm => "Jm",
            UhLetter::J3 => "J3",
            UhLetter::Jp => "Jp",
        }
    }
}

impl fmt::Display for UhLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The ordering rules above as an adjacent-pair system. Termination: each
/// rule either shortens the word or lowers the J-degree of the inverted
/// part, and otherwise removes one inversion.
#[derive(Clone, Copy, Debug, Default)]
pub struct UhRules;

fn term(c: Scalar, w: &[UhLetter]) -> (Scalar, Vec<UhLetter>) {
    (c, w.to_vec())
}

impl RewriteSystem for UhRules {
    type L = UhLetter;

    fn reduce_pair(&self, a: UhLetter, b: UhLetter) -> Option<Combination<UhLetter>> {
        use UhLetter::*;
        let one = Scalar::one;
        let ih = Scalar::ih();
        let half_ih = &Scalar::ih() * &Scalar::ratio(1, 2);
        let half = Scalar::ratio(1, 2);
        let rule = match (a, b) {
            (G, GInv) | (GInv, G) => vec![term(one(), &[])],
            _ if a.rank() <= b.rank() => return None,
            (Jp, G) | (Jp, GInv) => vec![term(one(), &[b, a])],
            (J3, G) => vec![term(one(), &[G, J3]), term(-one(), &[]), term(one(), &[G, G])],
            (J3, GInv) => vec![
                term(one(), &[GInv, J3]),
                term(-one(), &[]),
                term(one(), &[GInv, GInv]),
            ],
            (Jm, G) => vec![
                term(one(), &[G, Jm]),
                term(ih, &[G, J3]),
                term(-&half_ih, &[]),
                term(half_ih, &[G, G]),
            ],
            (Jm, GInv) => vec![
                term(one(), &[GInv, Jm]),
                term(-ih, &[GInv, J3]),
                term(half_ih.clone(), &[]),
                term(-half_ih, &[GInv, GInv]),
            ],
            (J3, Jm) => vec![
                term(one(), &[Jm, J3]),
                term(-&half, &[G, Jm]),
                term(-&half, &[GInv, Jm]),
                term(-&half, &[Jm, G]),
                term(-half, &[Jm, GInv]),
            ],
            (Jp, Jm) => vec![term(one(), &[Jm, Jp]), term(one(), &[J3])],
            (Jp, J3) => {
                let i_over_h = Scalar::term(0, 1, -1);
                vec![
                    term(one(), &[J3, Jp]),
                    term(i_over_h.clone(), &[GInv]),
                    term(-i_over_h, &[G]),
                ]
            }
            _ => unreachable!("every out-of-order pair has a rule"),
        };
        Some(Combination::from_terms(rule))
    }
}

/// Exponents of `G^g (J-)^jm (J3)^j3 (J+)^jp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UhMonomial {
    pub g: i32,
    pub jm: u32,
    pub j3: u32,
    pub jp: u32,
}

impl UhMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::default()
    }

    pub fn to_word(self) -> Vec<UhLetter> {
        let mut w = Vec::new();
        let gl = if self.g >= 0 { UhLetter::G } else { UhLetter::GInv };
        w.extend(std::iter::repeat_n(gl, self.g.unsigned_abs() as usize));
        w.extend(std::iter::repeat_n(UhLetter::Jm, self.jm as usize));
        w.extend(std::iter::repeat_n(UhLetter::J3, self.j3 as usize));
        w.extend(std::iter::repeat_n(UhLetter::Jp, self.jp as usize));
        w
    }

    pub(crate) fn from_normal_word(w: &[UhLetter]) -> Self {
        let mut m = Self::default();
        for l in w {
            match l {
                UhLetter::G => m.g += 1,
                UhLetter::GInv => m.g -= 1,
                UhLetter::Jm => m.jm += 1,
                UhLetter::J3 => m.j3 += 1,
                UhLetter::Jp => m.jp += 1,
            }
        }
        m
    }

    /// True when no J letter occurs.
    pub fn is_grouplike(&self) -> bool {
        self.jm == 0 && self.j3 == 0 && self.jp == 0
    }
}

impl fmt::Display for UhMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("G", self.g as i64), ("Jm", self.jm as i64), ("J3", self.j3 as i64), ("Jp", self.jp as i64)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

thread_local! {
    static UH: Normalizer<UhRules> = Normalizer::new(UhRules);
}

/// Normal-ordered element of `U_h(sl(2))`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct UhElement {
    terms: BTreeMap<UhMonomial, Scalar>,
}

impl UhElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::monomial(s, UhMonomial::one())
    }

    pub fn monomial(s: Scalar, m: UhMonomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, s);
        e
    }

    pub fn letter(l: UhLetter) -> Self {
        Self::monomial(Scalar::one(), UhMonomial::from_normal_word(&[l]))
    }

    pub fn g_pow(a: i32) -> Self {
        Self::monomial(Scalar::one(), UhMonomial { g: a, ..Default::default() })
    }

    pub fn g() -> Self {
        Self::letter(UhLetter::G)
    }

    pub fn jm() -> Self {
        Self::letter(UhLetter::Jm)
    }

    pub fn j3() -> Self {
        Self::letter(UhLetter::J3)
    }

    pub fn jp() -> Self {
        Self::letter(UhLetter::Jp)
    }

    pub fn add_term(&mut self, m: UhMonomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e += &s;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UhMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &UhMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn to_combination(&self) -> Combination<UhLetter> {
        Combination::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), m.to_word())))
    }

    pub fn from_normal_combination(c: &Combination<UhLetter>) -> Self {
        let mut out = Self::zero();
        for (w, s) in c.iter() {
            debug_assert!(UhRules.is_normal(w));
            out.add_term(UhMonomial::from_normal_word(w), s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = UH.with(|n| n.mul(&self.to_combination(), &other.to_combination()));
        Self::from_normal_combination(&c)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other) - other.mul(self)
    }

    /// Image of a free combination of letters.
    pub fn from_free(c: &Combination<UhLetter>) -> Self {
        Self::from_normal_combination(&UH.with(|n| n.normal_form(c)))
    }

    /// Counit: algebra map with `e(G) = 1` and `e(J) = 0`.
    pub fn counit(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            if m.is_grouplike() {
                out += c;
            }
        }
        out
    }

    /// Antipode: antihomomorphism with `S(G) = G^-1` and `S(X) = -G X G^-1`.
    pub fn antipode(&self) -> Self {
        self.anti_map(antipode_letter, false)
    }

    /// Star: antilinear antihomomorphism with `G* = G` and `X* = -X`.
    pub fn star(&self) -> Self {
        self.anti_map(star_letter, true)
    }

    fn anti_map(&self, f: fn(UhLetter) -> UhElement, conj: bool) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let c = if conj { c.conj() } else { c.clone() };
            let mut acc = Self::scalar(c);
            for l in m.to_word().into_iter().rev() {
                acc = acc.mul(&f(l));
            }
            out = out + acc;
        }
        out
    }

    /// Coproduct, extended multiplicatively from the generators.
    pub fn coproduct(&self) -> UhTensor {
        let mut out = UhTensor::zero();
        for (m, c) in &self.terms {
            let mut acc = UhTensor::scalar(c.clone());
            for l in m.to_word() {
                acc = acc.mul(&coproduct_letter(l));
            }
            out = out.add(&acc);
        }
        out
    }
}

pub fn antipode_letter(l: UhLetter) -> UhElement {
    match l {
        UhLetter::G => UhElement::letter(UhLetter::GInv),
        UhLetter::GInv => UhElement::g(),
        _ => -UhElement::g().mul(&UhElement::letter(l)).mul(&UhElement::letter(UhLetter::GInv)),
    }
}

pub fn star_letter(l: UhLetter) -> UhElement {
    match l {
        UhLetter::G | UhLetter::GInv => UhElement::letter(l),
        _ => -UhElement::letter(l),
    }
}

pub fn coproduct_letter(l: UhLetter) -> UhTensor {
    let one = UhElement::one;
    let lt = UhElement::letter(l);
    match l {
        UhLetter::G | UhLetter::GInv => UhTensor::pure(&lt, &lt),
        UhLetter::Jp => UhTensor::pure(&lt, &one()).add(&UhTensor::pure(&one(), &lt)),
        UhLetter::Jm | UhLetter::J3 => UhTensor::pure(&lt, &UhElement::g())
            .add(&UhTensor::pure(&UhElement::letter(UhLetter::GInv), &lt)),
    }
}

/// Normal form of a word.
pub fn uh_normal_form(word: &[UhLetter]) -> UhElement {
    UhElement::from_free(&Combination::word(word.to_vec()))
}

/// Normal form by naive whole-word rewriting.
pub fn uh_normal_form_by_rewriting(word: &[UhLetter], strategy: Strategy) -> UhElement {
    let c = rewrite::reduce(&UhRules, &Combination::word(word.to_vec()), strategy);
    UhElement::from_normal_combination(&c)
}

/// Every defining relation as `(lhs word, rhs element)`.
pub fn defining_relations() -> Vec<(Vec<UhLetter>, Combination<UhLetter>)> {
    let mut out = Vec::new();
    for a in UhLetter::ALL {
        for b in UhLetter::ALL {
            if let Some(rhs) = UhRules.reduce_pair(a, b) {
                out.push((vec![a, b], rhs));
            }
        }
    }
    out
}

impl Add for UhElement {
    type Output = UhElement;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for UhElement {
    type Output = UhElement;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for UhElement {
    type Output = UhElement;
    fn neg(self) -> Self {
        self.scale(&Scalar::int(-1))
    }
}

fn fmt_terms<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (K, &'a Scalar)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let ms = m.to_string();
        if ms == "1" {
            write!(f, "{}", c.fmt_factor())?;
        } else if c.is_one() {
            write!(f, "{ms}")?;
        } else {
            let fac = c.fmt_factor();
            if fac.starts_with('(') {
                write!(f, "{fac}*{ms}")?;
            } else {
                write!(f, "({fac})*{ms}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for UhElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter())
    }
}

/// Element of `U_h ⊗ U_h` with both legs normal-ordered.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UhTensor {
    terms: BTreeMap<(UhMonomial, UhMonomial), Scalar>,
}

struct Pair(UhMonomial, UhMonomial);

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.0, self.1)
    }
}

impl UhTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(s: Scalar) -> Self {
        let mut t = Self::zero();
        t.add_term(UhMonomial::one(), UhMonomial::one(), s);
        t
    }

    pub fn pure(a: &UhElement, b: &UhElement) -> Self {
        let mut t = Self::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                t.add_term(*ma, *mb, ca * cb);
            }
        }
        t
    }

    pub fn add_term(&mut self, a: UhMonomial, b: UhMonomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_default();
        *e += &s;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(UhMonomial, UhMonomial), &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a, *b, -c);
        }
        out
    }

    /// Componentwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &o.terms {
                let left = UhElement::monomial(Scalar::one(), *a).mul(&UhElement::monomial(Scalar::one(), *c));
                let right = UhElement::monomial(Scalar::one(), *b).mul(&UhElement::monomial(Scalar::one(), *d));
                let k = c1 * c2;
                for (ml, cl) in &left.terms {
                    for (mr, cr) in &right.terms {
                        out.add_term(*ml, *mr, &(&k * cl) * cr);
                    }
                }
            }
        }
        out
    }

    /// `m ∘ (f ⊗ g)`.
    pub fn multiply_legs(&self, f: impl Fn(&UhElement) -> UhElement, g: impl Fn(&UhElement) -> UhElement) -> UhElement {
        let mut out = UhElement::zero();
        for ((a, b), c) in &self.terms {
            let fa = f(&UhElement::monomial(Scalar::one(), *a));
            let gb = g(&UhElement::monomial(Scalar::one(), *b));
            out = out + fa.mul(&gb).scale(c);
        }
        out
    }

    /// Apply a map to each leg independently (for linear or antilinear maps
    /// the caller handles coefficients).
    pub fn map_legs(&self, f: impl Fn(&UhElement) -> UhElement, g: impl Fn(&UhElement) -> UhElement, conj: bool) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            let c = if conj { c.conj() } else { c.clone() };
            let fa = f(&UhElement::monomial(Scalar::one(), *a));
            let gb = g(&UhElement::monomial(Scalar::one(), *b));
            out = out.add(&UhTensor::pure(&fa, &gb).mul(&UhTensor::scalar(c)));
        }
        out
    }

    /// `(e ⊗ id)` or `(id ⊗ e)` collapse.
    pub fn counit_left(&self) -> UhElement {
        let mut out = UhElement::zero();
        for ((a, b), c) in &self.terms {
            let e = UhElement::monomial(Scalar::one(), *a).counit();
            out.add_term(*b, &e * c);
        }
        out
    }

    pub fn counit_right(&self) -> UhElement {
        let mut out = UhElement::zero();
        for ((a, b), c) in &self.terms {
            let e = UhElement::monomial(Scalar::one(), *b).counit();
            out.add_term(*a, &e * c);
        }
        out
    }
}

impl fmt::Display for UhTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|((a, b), c)| (Pair(*a, *b), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use UhLetter::*;

    #[test]
    fn rule_examples() {
        let expect = UhElement::g().mul(&UhElement::j3()) - UhElement::one() + UhElement::g_pow(2);
        assert_eq!(uh_normal_form(&[J3, G]), expect);
        assert_eq!(uh_normal_form(&[G, GInv]), UhElement::one());
        // [J3, J+] = (G^-1 - G)/(ih)
        let comm = UhElement::j3().commutator(&UhElement::jp());
        let inv_ih = Scalar::ih().inv_monomial().unwrap();
        assert_eq!(comm, (UhElement::g_pow(-1) - UhElement::g()).scale(&inv_ih));
    }

    #[test]
    fn coproduct_and_counit_examples() {
        let d = UhElement::j3().coproduct();
        let expect = UhTensor::pure(&UhElement::j3(), &UhElement::g())
            .add(&UhTensor::pure(&UhElement::g_pow(-1), &UhElement::j3()));
        assert_eq!(d, expect);
        assert!(UhElement::g().counit().is_one());
        assert!(UhElement::jm().counit().is_zero());
        assert_eq!(UhElement::g().star(), UhElement::g());
    }

    #[test]
    fn strategies_agree_on_a_long_word() {
        let w = [Jp, Jm, J3, G, Jp, GInv, Jm, J3];
        let a = uh_normal_form(&w);
        assert_eq!(a, uh_normal_form_by_rewriting(&w, Strategy::Leftmost));
        assert_eq!(a, uh_normal_form_by_rewriting(&w, Strategy::Rightmost));
    }
}
