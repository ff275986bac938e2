//! The h-deformed Lobachevsky plane and its braided copies.
//!
//! Each copy `j` carries hermitian generators `x_j`, `y_j` (and `y_j^-1`) with
//! `[x_j, y_j] = -2ih y_j`. Distinct copies `m < n` obey the braided relations
//!
//! ```text
//! x_n x_m = x_m x_n - 2ih x_m + 2ih x_n
//! y_n x_m = x_m y_n + 2ih y_n
//! x_n y_m = y_m x_n - 2ih y_m
//! y_n y_m = y_m y_n
//! ```
//!
//! Normal order puts lower copies to the left and, within a copy, every `x`
//! left of every `y`. Rules involving `y^-1` follow by conjugating the rules
//! above with `y^-1` and are frozen in [`PlaneRules`]:
//!
//! ```text
//! y_j^-1 x_j = x_j y_j^-1 - 2ih y_j^-1
//! y_n^-1 x_m = x_m y_n^-1 - 2ih y_n^-1
//! x_n y_m^-1 = y_m^-1 x_n + 2ih y_m^-1
//! ```
//!
//! Products are computed by a closed-form reordering on exponent vectors:
//! `y_k^b f(x_j) = f(x_j + 2ibh) y_k^b` for `j <= k`,
//! `f(x_n) y_m^b = y_m^b f(x_n - 2ibh)` for `m < n`, and
//! `x_k^a x_j = x_j (x_k - 2ih)^a + x_k^{a+1} - x_k (x_k - 2ih)^a` for `j < k`.
//! The word rewriter in [`crate::rewrite`] is the independent second route.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::rewrite::{self, Combination, RewriteSystem, Strategy};
use crate::scalar::Scalar;

/// A generator letter tagged with its copy index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaneLetter {
    X(u8),
    Y(u8),
    YInv(u8),
}

impl PlaneLetter {
    pub fn copy(self) -> u8 {
        match self {
            PlaneLetter::X(c) | PlaneLetter::Y(c) | PlaneLetter::YInv(c) => c,
        }
    }

    fn rank(self) -> (u8, u8) {
        match self {
            PlaneLetter::X(c) => (c, 0),
            PlaneLetter::Y(c) | PlaneLetter::YInv(c) => (c, 1),
        }
    }
}

impl fmt::Display for PlaneLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneLetter::X(c) => write!(f, "x{c}"),
            PlaneLetter::Y(c) => write!(f, "y{c}"),
            PlaneLetter::YInv(c) => write!(f, "y{c}^-1"),
        }
    }
}

/// Exponents `(x, y)` per copy; trailing trivial copies are trimmed so the
/// derived equality is canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PlaneMonomial {
    exps: Vec<(u32, i32)>,
}

impl PlaneMonomial {
    pub fn one() -> Self {
        PlaneMonomial::default()
    }

    pub fn new(mut exps: Vec<(u32, i32)>) -> Self {
        while exps.last() == Some(&(0, 0)) {
            exps.pop();
        }
        PlaneMonomial { exps }
    }

    pub fn single(copy: usize, xe: u32, ye: i32) -> Self {
        let mut exps = vec![(0, 0); copy + 1];
        exps[copy] = (xe, ye);
        PlaneMonomial::new(exps)
    }

    pub fn exponents(&self) -> &[(u32, i32)] {
        &self.exps
    }

    pub fn get(&self, copy: usize) -> (u32, i32) {
        self.exps.get(copy).copied().unwrap_or((0, 0))
    }

    pub fn n_copies(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn x_degree(&self) -> u32 {
        self.exps.iter().map(|e| e.0).sum()
    }

    /// Letters in normal order.
    pub fn to_word(&self) -> Vec<PlaneLetter> {
        let mut w = Vec::new();
        for (c, &(a, b)) in self.exps.iter().enumerate() {
            let c = c as u8;
            w.extend(std::iter::repeat_n(PlaneLetter::X(c), a as usize));
            let l = if b >= 0 { PlaneLetter::Y(c) } else { PlaneLetter::YInv(c) };
            w.extend(std::iter::repeat_n(l, b.unsigned_abs() as usize));
        }
        w
    }

    /// Product of monomials with disjoint copy supports, all copies of
    /// `self` below all copies of `other`.
    fn concat_disjoint(&self, other: &Self) -> Self {
        let n = self.exps.len().max(other.exps.len());
        let mut exps = vec![(0, 0); n];
        for (i, e) in self.exps.iter().enumerate() {
            exps[i] = *e;
        }
        for (i, e) in other.exps.iter().enumerate() {
            if *e != (0, 0) {
                debug_assert_eq!(exps[i], (0, 0));
                exps[i] = *e;
            }
        }
        PlaneMonomial::new(exps)
    }

    fn split_at(&self, copy: usize) -> (Self, (u32, i32), Self) {
        let below = PlaneMonomial::new(self.exps.iter().take(copy).copied().collect());
        let here = self.get(copy);
        let above = PlaneMonomial::new(
            self.exps
                .iter()
                .enumerate()
                .map(|(i, e)| if i > copy { *e } else { (0, 0) })
                .collect(),
        );
        (below, here, above)
    }
}

/// Normal-ordered element: finite sum of monomials with nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<PlaneMonomial, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::monomial(s, PlaneMonomial::one())
    }

    pub fn monomial(s: Scalar, m: PlaneMonomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, s);
        e
    }

    pub fn x(copy: usize) -> Self {
        Self::monomial(Scalar::one(), PlaneMonomial::single(copy, 1, 0))
    }

    pub fn y(copy: usize) -> Self {
        Self::y_pow(copy, 1)
    }

    pub fn y_inv(copy: usize) -> Self {
        Self::y_pow(copy, -1)
    }

    pub fn y_pow(copy: usize, e: i32) -> Self {
        Self::monomial(Scalar::one(), PlaneMonomial::single(copy, 0, e))
    }

    pub fn x_pow(copy: usize, e: u32) -> Self {
        Self::monomial(Scalar::one(), PlaneMonomial::single(copy, e, 0))
    }

    pub fn letter(l: PlaneLetter) -> Self {
        match l {
            PlaneLetter::X(c) => Self::x(c as usize),
            PlaneLetter::Y(c) => Self::y(c as usize),
            PlaneLetter::YInv(c) => Self::y_inv(c as usize),
        }
    }

    pub fn add_term(&mut self, m: PlaneMonomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &s;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, s);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlaneMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PlaneMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value if this element is a pure scalar.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&PlaneMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn n_copies(&self) -> usize {
        self.terms.keys().map(|m| m.n_copies()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    /// Product of normal-ordered elements.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (mb, cb) in &other.terms {
            for (ma, ca) in &self.terms {
                let coeff = ca * cb;
                for (m, c) in mono_product(ma, mb).terms {
                    out.add_term(m, &c * &coeff);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub_ref(&other.mul(self))
    }

    /// True when `self` commutes with `x_j`, `y_j` for every `j < n_copies`.
    pub fn is_central(&self, n_copies: usize) -> bool {
        (0..n_copies).all(|j| {
            self.commutator(&Self::x(j)).is_zero() && self.commutator(&Self::y(j)).is_zero()
        })
    }

    /// Antilinear antihomomorphism fixing every `x_j`, `y_j`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::scalar(c.conj());
            for l in m.to_word().into_iter().rev() {
                acc = acc.mul(&Self::letter(l));
            }
            out = out.add_ref(&acc);
        }
        out
    }

    /// Substitute `x_copy -> x_copy + shift` on the normal-ordered symbol.
    pub fn shift_x(&self, copy: usize, shift: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (a, b) = m.get(copy);
            for (k, bc) in binomial_expand(a, shift) {
                let mut exps = m.exps.clone();
                if exps.len() <= copy {
                    exps.resize(copy + 1, (0, 0));
                }
                exps[copy] = (k, b);
                out.add_term(PlaneMonomial::new(exps), c * &bc);
            }
        }
        out
    }

    /// `d/dx_copy` on the normal-ordered symbol.
    pub fn partial_x(&self, copy: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (a, b) = m.get(copy);
            if a == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[copy] = (a - 1, b);
            out.add_term(PlaneMonomial::new(exps), c * &Scalar::int(a as i64));
        }
        out
    }

    /// `d/dy_copy` on the normal-ordered symbol.
    pub fn partial_y(&self, copy: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (a, b) = m.get(copy);
            if b == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[copy] = (a, b - 1);
            out.add_term(PlaneMonomial::new(exps), c * &Scalar::int(b as i64));
        }
        out
    }

    /// `y d/dy` on the normal-ordered symbol.
    pub fn euler_y(&self, copy: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let b = m.get(copy).1;
            out.add_term(m.clone(), c * &Scalar::int(b as i64));
        }
        out
    }

    /// `D_x f = (f(x) - f(x - 2ih)) / 2ih` in the given copy.
    pub fn finite_difference_dx(&self, copy: usize) -> Self {
        let two_ih = Scalar::term(0, 2, 1);
        let shifted = self.shift_x(copy, &-&two_ih);
        let inv = two_ih.inv_monomial().expect("2ih is a monomial");
        self.sub_ref(&shifted).scale(&inv)
    }

    /// The `h = 0` specialization of every coefficient, if no coefficient
    /// has a pole there.
    pub fn at_h_zero(&self) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Scalar::from(c.at_h_zero().ok()?));
        }
        Some(out)
    }

    /// Word-level view (the free algebra element with the same letters).
    pub fn to_combination(&self) -> Combination<PlaneLetter> {
        Combination::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), m.to_word())))
    }

    /// Read back a combination whose words are all normal.
    pub fn from_normal_combination(c: &Combination<PlaneLetter>) -> Self {
        let mut out = Self::zero();
        for (w, s) in c.iter() {
            debug_assert!(PlaneRules.is_normal(w), "word {w:?} is not normal");
            out.add_term(word_to_monomial(w), s.clone());
        }
        out
    }
}

pub(crate) fn word_to_monomial(w: &[PlaneLetter]) -> PlaneMonomial {
    let n = w.iter().map(|l| l.copy() as usize + 1).max().unwrap_or(0);
    let mut exps = vec![(0u32, 0i32); n];
    for l in w {
        match *l {
            PlaneLetter::X(c) => exps[c as usize].0 += 1,
            PlaneLetter::Y(c) => exps[c as usize].1 += 1,
            PlaneLetter::YInv(c) => exps[c as usize].1 -= 1,
        }
    }
    PlaneMonomial::new(exps)
}

/// `(x + s)^a = sum_k C(a,k) s^{a-k} x^k`.
fn binomial_expand(a: u32, s: &Scalar) -> Vec<(u32, Scalar)> {
    let mut out = Vec::with_capacity(a as usize + 1);
    let mut binom = BigInt::from(1);
    for k in (0..=a).rev() {
        // coefficient C(a, k); iterate k downward
        let j = a - k;
        if j > 0 {
            binom = binom * BigInt::from(a - j + 1) / BigInt::from(j);
        }
        let c = s.pow(j).scale_rational(&BigRational::from_integer(binom.clone()));
        if !c.is_zero() {
            out.push((k, c));
        }
    }
    out
}

/// Normal-ordered polynomial `(x_copy + s)^a` times a fixed `y_copy` power.
fn shifted_power(copy: usize, a: u32, s: &Scalar, ye: i32) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, c) in binomial_expand(a, s) {
        out.add_term(PlaneMonomial::single(copy, k, ye), c);
    }
    out
}

/// Product of elements whose copy supports are disjoint and ordered.
fn concat_disjoint(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            out.add_term(ma.concat_disjoint(mb), ca * cb);
        }
    }
    out
}

thread_local! {
    static MONO_CACHE: RefCell<HashMap<(PlaneMonomial, PlaneMonomial), AlgebraElement>> =
        RefCell::new(HashMap::new());
}

/// Normal form of the product of two normal monomials (memoized).
fn mono_product(a: &PlaneMonomial, b: &PlaneMonomial) -> AlgebraElement {
    if b.is_one() {
        return AlgebraElement::monomial(Scalar::one(), a.clone());
    }
    if a.is_one() {
        return AlgebraElement::monomial(Scalar::one(), b.clone());
    }
    let key = (a.clone(), b.clone());
    if let Some(hit) = MONO_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut acc = AlgebraElement::monomial(Scalar::one(), a.clone());
    for (j, &(xe, ye)) in b.exps.iter().enumerate() {
        for _ in 0..xe {
            acc = right_mul_x(&acc, j);
        }
        if ye != 0 {
            acc = right_mul_y(&acc, j, ye);
        }
    }
    MONO_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 200_000 {
            c.clear();
        }
        c.insert(key, acc.clone());
    });
    acc
}

/// `elem · x_j`.
fn right_mul_x(elem: &AlgebraElement, j: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in &elem.terms {
        let (below, (a, b), above) = m.split_at(j);
        let (t, u) = resolve_above(&above, j);
        // x_j^a y_j^b (x_j t + u) = x_j^a (x_j + 2ibh) y_j^b t + x_j^a y_j^b u
        let mut here = AlgebraElement::zero();
        here.add_term(PlaneMonomial::single(j, a + 1, b), Scalar::one());
        here.add_term(PlaneMonomial::single(j, a, b), Scalar::term(0, 2 * b as i64, 1));
        let plain = AlgebraElement::monomial(Scalar::one(), PlaneMonomial::single(j, a, b));
        let tail = concat_disjoint(&here, &t).add_ref(&concat_disjoint(&plain, &u));
        let below_e = AlgebraElement::monomial(c.clone(), below);
        out = out.add_ref(&concat_disjoint(&below_e, &tail));
    }
    out
}

/// Writes `above · x_j = x_j · t + u` where `above` lives on copies `> j`.
fn resolve_above(above: &PlaneMonomial, j: usize) -> (AlgebraElement, AlgebraElement) {
    let two_ih = Scalar::term(0, 2, 1);
    // C = C_1 ... C_r by copy; from the right,
    // C x_j = (C_1..C_{r-1} x_j) t_r + C_1..C_{r-1} u_r.
    let copies: Vec<usize> = (j + 1..above.n_copies()).filter(|&k| above.get(k) != (0, 0)).collect();
    let mut t = AlgebraElement::one();
    let mut u = AlgebraElement::zero();
    for (idx, &k) in copies.iter().enumerate().rev() {
        let (ak, bk) = above.get(k);
        let tk = shifted_power(k, ak, &-&two_ih, bk);
        let mut uk = AlgebraElement::monomial(Scalar::one(), PlaneMonomial::single(k, ak + 1, bk));
        for (e, ce) in binomial_expand(ak, &-&two_ih) {
            uk.add_term(PlaneMonomial::single(k, e + 1, bk), -&ce);
        }
        uk.add_term(PlaneMonomial::single(k, ak, bk), Scalar::term(0, 2 * bk as i64, 1));
        // left part of `above` strictly below copy k
        let left = PlaneMonomial::new(
            (0..k).map(|i| if copies[..idx].contains(&i) { above.get(i) } else { (0, 0) }).collect(),
        );
        let left_e = AlgebraElement::monomial(Scalar::one(), left);
        // contribution fully ordered: left · u_k · (already resolved t on the right)
        u = u.add_ref(&concat_disjoint(&concat_disjoint(&left_e, &uk), &t));
        t = concat_disjoint(&tk, &t);
    }
    (t, u)
}

/// `elem · y_j^e`.
fn right_mul_y(elem: &AlgebraElement, j: usize, e: i32) -> AlgebraElement {
    // C y_j^e = y_j^e C[x_k -> x_k - 2ieh] for copies k > j
    let shift = Scalar::term(0, -2 * e as i64, 1);
    let mut out = AlgebraElement::zero();
    for (m, c) in &elem.terms {
        let (below, (a, b), above) = m.split_at(j);
        let mut shifted = AlgebraElement::one();
        for k in j + 1..above.n_copies() {
            let (ak, bk) = above.get(k);
            if (ak, bk) == (0, 0) {
                continue;
            }
            shifted = concat_disjoint(&shifted, &shifted_power(k, ak, &shift, bk));
        }
        let here = AlgebraElement::monomial(c.clone(), below.concat_disjoint(&PlaneMonomial::single(j, a, b + e)));
        out = out.add_ref(&concat_disjoint(&here, &shifted));
    }
    out
}

/// Adjacent-pair presentation of the plane algebra, used as the independent
/// reduction route. Each rule lowers the number of out-of-order letter pairs
/// or shortens the word; ties are broken by total x-degree of the inverted
/// part.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlaneRules;

impl RewriteSystem for PlaneRules {
    type L = PlaneLetter;

    fn reduce_pair(&self, a: PlaneLetter, b: PlaneLetter) -> Option<Combination<PlaneLetter>> {
        use PlaneLetter::*;
        let two_ih = Scalar::term(0, 2, 1);
        let swap = |k: Vec<(Scalar, Vec<PlaneLetter>)>| {
            let mut t = vec![(Scalar::one(), vec![b, a])];
            t.extend(k);
            Some(Combination::from_terms(t))
        };
        match (a, b) {
            (Y(p), YInv(q)) | (YInv(p), Y(q)) if p == q => Some(Combination::one()),
            _ if a.rank() <= b.rank() => None,
            (Y(p), X(q)) if p == q => swap(vec![(two_ih, vec![a])]),
            (YInv(p), X(q)) if p == q => swap(vec![(-two_ih, vec![a])]),
            (X(_), X(_)) => swap(vec![(-&two_ih, vec![b]), (two_ih, vec![a])]),
            (Y(_), X(_)) => swap(vec![(two_ih, vec![a])]),
            (YInv(_), X(_)) => swap(vec![(-two_ih, vec![a])]),
            (X(_), Y(_)) => swap(vec![(-two_ih, vec![b])]),
            (X(_), YInv(_)) => swap(vec![(two_ih, vec![b])]),
            _ => swap(Vec::new()),
        }
    }
}

/// Normal form of a word of generator letters.
pub fn normal_form(word: &[PlaneLetter]) -> AlgebraElement {
    word.iter()
        .fold(AlgebraElement::one(), |acc, &l| acc.mul(&AlgebraElement::letter(l)))
}

/// Normal form of a word by naive whole-word rewriting.
pub fn normal_form_by_rewriting(word: &[PlaneLetter], strategy: Strategy) -> AlgebraElement {
    let c = rewrite::reduce(&PlaneRules, &Combination::word(word.to_vec()), strategy);
    AlgebraElement::from_normal_combination(&c)
}

/// `y_m^-1 y_n^-1 ((x_m - x_n)^2 + (y_m - y_n)^2)`, central in the algebra
/// generated by both copies.
pub fn distance_invariant(m: usize, n: usize) -> AlgebraElement {
    assert_ne!(m, n, "distance needs two distinct copies");
    let dx = AlgebraElement::x(m) - AlgebraElement::x(n);
    let dy = AlgebraElement::y(m) - AlgebraElement::y(n);
    let inv = AlgebraElement::y_inv(m).mul(&AlgebraElement::y_inv(n));
    inv.mul(&(dx.mul(&dx) + dy.mul(&dy)))
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        self.scale(&Scalar::int(-1))
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, o: Self) -> AlgebraElement {
        self.add_ref(o)
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, o: Self) -> AlgebraElement {
        self.sub_ref(o)
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, o: Self) -> AlgebraElement {
        AlgebraElement::mul(self, o)
    }
}

impl From<Scalar> for AlgebraElement {
    fn from(s: Scalar) -> Self {
        AlgebraElement::scalar(s)
    }
}

impl fmt::Display for PlaneMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, self.n_copies() > 1)
    }
}

impl PlaneMonomial {
    fn render(&self, f: &mut fmt::Formatter<'_>, suffix: bool) -> fmt::Result {
        let mut first = true;
        for (c, &(a, b)) in self.exps.iter().enumerate() {
            let tag = if suffix { c.to_string() } else { String::new() };
            for (name, e) in [("x", a as i64), ("y", b as i64)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{name}{tag}")?;
                if e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let suffix = self.n_copies() > 1;
        // higher total degree first, then the monomial order reversed
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.exps.iter().map(|e| e.0 as i64 + e.1.abs() as i64).sum();
            let db: i64 = b.exps.iter().map(|e| e.0 as i64 + e.1.abs() as i64).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (m, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", c.fmt_factor())?;
                continue;
            }
            if !c.is_one() {
                let fac = c.fmt_factor();
                if fac.starts_with('(') {
                    write!(f, "{fac}*")?;
                } else {
                    write!(f, "({fac})*")?;
                }
            }
            m.render(f, suffix)?;
        }
        Ok(())
    }
}

impl FromStr for AlgebraElement {
    type Err = crate::text::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::text::parse_plane(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> AlgebraElement {
        crate::text::parse_plane(s).unwrap()
    }

    fn random_word(seed: &[(u8, u8)]) -> Vec<PlaneLetter> {
        seed.iter()
            .map(|&(kind, copy)| match kind % 3 {
                0 => PlaneLetter::X(copy),
                1 => PlaneLetter::Y(copy),
                _ => PlaneLetter::YInv(copy),
            })
            .collect()
    }

    #[test]
    fn single_copy_orderings() {
        use PlaneLetter::*;
        assert_eq!(normal_form(&[Y(0), X(0)]), p("x*y + 2*i*h*y"));
        assert_eq!(normal_form(&[Y(0), X(0), X(0)]), p("x^2*y + 4*i*h*x*y - 4*h^2*y"));
        assert_eq!(p("y*x^2").to_string(), "x^2*y + (4*i*h)*x*y + (-4*h^2)*y");
        assert_eq!(normal_form(&[Y(0), YInv(0)]), AlgebraElement::one());
    }

    #[test]
    fn braided_copies() {
        assert_eq!(p("x1*x0"), p("x0*x1 - 2*i*h*x0 + 2*i*h*x1"));
        let dx = p("x0 - x1");
        assert_eq!(dx.mul(&dx), p("x0^2 - 2*x0*x1 + x1^2 + 2*i*h*x0 - 2*i*h*x1"));
        assert_eq!(p("x").commutator(&p("y")), p("-2*i*h*y"));
        let xbar = p("(x0 + x1)/2");
        assert_eq!(xbar.commutator(&dx), dx.scale(&Scalar::term(0, -2, 1)));
        assert!(p("y0^-1*(x0 - x1)").commutator(&xbar).is_zero());
    }

    #[test]
    fn star_examples() {
        assert_eq!(p("x*y").star(), p("x*y + 2*i*h*y"));
        assert_eq!(p("2*i*h*y").star(), p("-2*i*h*y"));
    }

    #[test]
    fn star_maps_braid_relations_to_relations() {
        // each relation r = 0 must give star(r) = 0 after reordering
        let rels = [
            "x1*x0 - x0*x1 + 2*i*h*x0 - 2*i*h*x1",
            "y1*x0 - x0*y1 - 2*i*h*y1",
            "x1*y0 - y0*x1 + 2*i*h*y0",
            "y1*y0 - y0*y1",
        ];
        for r in rels {
            assert!(p(r).is_zero(), "{r}");
            assert!(p(r).star().is_zero(), "{r}");
        }
    }

    #[test]
    fn shifts_and_differences() {
        assert_eq!(p("x^2").shift_x(0, &Scalar::term(0, -1, 1)), p("x^2 - 2*i*h*x - h^2"));
        assert_eq!(p("y").shift_x(0, &Scalar::h()), p("y"));
        assert_eq!(p("x^2").finite_difference_dx(0), p("2*x - 2*i*h"));
        assert_eq!(p("x").finite_difference_dx(0), AlgebraElement::one());
        assert_eq!(p("x^2*y").partial_x(0), p("2*x*y"));
    }

    #[test]
    fn distance_is_central_and_classical() {
        let q = distance_invariant(0, 1);
        assert!(q.is_central(2));
        let classical = q.at_h_zero().unwrap();
        // commutative expansion of (dx^2 + dy^2)/(y y')
        let expect = p("x0^2*y0^-1*y1^-1 - 2*x0*y0^-1*x1*y1^-1 + x1^2*y0^-1*y1^-1 + y0*y1^-1 - 2 + y0^-1*y1");
        assert_eq!(classical, expect.at_h_zero().unwrap());
    }

    #[test]
    fn mean_and_differences_commute() {
        let ybar = p("(y0 + y1)/2");
        let dx = p("x0 - x1");
        let dy = p("y0 - y1");
        assert!(ybar.commutator(&dx).is_zero());
        assert!(ybar.commutator(&dy).is_zero());
        assert!(dx.commutator(&dy).is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn closed_form_matches_rewriting(seed in prop::collection::vec((0u8..3, 0u8..3), 0..10)) {
            let w = random_word(&seed);
            let fast = normal_form(&w);
            let left = normal_form_by_rewriting(&w, rewrite::Strategy::Leftmost);
            let right = normal_form_by_rewriting(&w, rewrite::Strategy::Rightmost);
            prop_assert_eq!(&fast, &left);
            prop_assert_eq!(&left, &right);
        }

        #[test]
        fn star_is_involutive_antihomomorphism(
            a in prop::collection::vec((0u8..3, 0u8..2), 0..5),
            b in prop::collection::vec((0u8..3, 0u8..2), 0..5),
        ) {
            let fa = normal_form(&random_word(&a)).scale(&Scalar::term(1, 2, 1));
            let fb = normal_form(&random_word(&b));
            prop_assert_eq!(fa.mul(&fb).star(), fb.star().mul(&fa.star()));
            prop_assert_eq!(fa.star().star(), fa);
        }

        #[test]
        fn shift_inverts(a in prop::collection::vec((0u8..3, 0u8..2), 0..6), c in -3i64..3) {
            let f = normal_form(&random_word(&a));
            let s = Scalar::term(c, 1, 1);
            prop_assert_eq!(f.shift_x(0, &s).shift_x(0, &-&s), f);
        }
    }
}
