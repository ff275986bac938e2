//! The cross-product algebra of `U_h(sl(2))` with braided plane copies.
//!
//! Normal order puts every plane letter to the left of every `U_h` letter.
//! A `U_h` generator is moved rightward past a plane letter by a base rule
//! from [`GeneratorCrossRules`]; the same rule serves every copy. The left
//! action `u · f` is what remains after moving `u` to the right of `f` and
//! applying the counit to the `U_h` factor.
//!
//! Base rules are derived from the composite commutators
//!
//! ```text
//! [x, J+] = -1               [y, J+] = 0
//! [x, J- G] = (x^2 - y^2 - ih x + h^2/4) G^2
//! [y, J- G] = (2xy + ih y) G^2
//! [x, J3 G] = (2x - ih) G^2  [y, J3 G] = 2y G^2
//! ```
//!
//! together with `G x = (x - ih) G` and `G y = y G` (`G` is a function of
//! `J+`, which commutes with `y`). Rules for `y^-1` follow by conjugation.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::hopf::uh::{UhElement, UhLetter, UhMonomial, UhRules};
use crate::plane::{word_to_monomial, AlgebraElement, PlaneLetter, PlaneMonomial, PlaneRules};
use crate::report::Report;
use crate::rewrite::{self, Combination, Normalizer, RewriteSystem, Strategy};
use crate::scalar::Scalar;

const SUITE: &str = "crossprod";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossError {
    #[error("base rules do not reproduce the composite relation {0}")]
    Recombination(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossLetter {
    P(PlaneLetter),
    U(UhLetter),
}

impl fmt::Display for CrossLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossLetter::P(l) => write!(f, "{l}"),
            CrossLetter::U(l) => write!(f, "{l}"),
        }
    }
}

/// Plane generator kind, independent of the copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaneKind {
    X,
    Y,
    YInv,
}

impl PlaneKind {
    pub const ALL: [PlaneKind; 3] = [PlaneKind::X, PlaneKind::Y, PlaneKind::YInv];

    fn of(l: PlaneLetter) -> (PlaneKind, u8) {
        match l {
            PlaneLetter::X(c) => (PlaneKind::X, c),
            PlaneLetter::Y(c) => (PlaneKind::Y, c),
            PlaneLetter::YInv(c) => (PlaneKind::YInv, c),
        }
    }

    fn letter(self, copy: u8) -> PlaneLetter {
        match self {
            PlaneKind::X => PlaneLetter::X(copy),
            PlaneKind::Y => PlaneLetter::Y(copy),
            PlaneKind::YInv => PlaneLetter::YInv(copy),
        }
    }
}

fn p(l: PlaneLetter) -> CrossLetter {
    CrossLetter::P(l)
}

fn u(l: UhLetter) -> CrossLetter {
    CrossLetter::U(l)
}

/// Rewrite table: `(u, kind)` gives `u · kind_0` in normal order, written
/// for copy 0 and relabelled for other copies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorCrossRules {
    table: BTreeMap<(UhLetter, PlaneKind), Combination<CrossLetter>>,
}

impl GeneratorCrossRules {
    pub fn get(&self, g: UhLetter, k: PlaneKind) -> Option<&Combination<CrossLetter>> {
        self.table.get(&(g, k))
    }

    /// Replace one entry (used to build deliberately broken fixtures).
    pub fn set(&mut self, g: UhLetter, k: PlaneKind, rule: Combination<CrossLetter>) {
        self.table.insert((g, k), rule);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(UhLetter, PlaneKind), &Combination<CrossLetter>)> {
        self.table.iter()
    }

    fn rule_for(&self, g: UhLetter, l: PlaneLetter) -> Combination<CrossLetter> {
        let (k, copy) = PlaneKind::of(l);
        let rule = self
            .table
            .get(&(g, k))
            .unwrap_or_else(|| panic!("no cross rule for {g} past {k:?}"));
        if copy == 0 {
            return rule.clone();
        }
        rule.map_letters(|m| {
            Combination::letter(match m {
                CrossLetter::P(pl) => {
                    let (kk, c) = PlaneKind::of(pl);
                    debug_assert_eq!(c, 0, "base rules involve one copy only");
                    p(kk.letter(copy))
                }
                other => other,
            })
        })
    }
}

/// Adjacent-pair rules of the cross-product algebra.
#[derive(Clone, Debug)]
pub struct CrossRules {
    base: Rc<GeneratorCrossRules>,
}

impl RewriteSystem for CrossRules {
    type L = CrossLetter;

    fn reduce_pair(&self, a: CrossLetter, b: CrossLetter) -> Option<Combination<CrossLetter>> {
        match (a, b) {
            (CrossLetter::P(x), CrossLetter::P(y)) => {
                PlaneRules.reduce_pair(x, y).map(|c| c.map_letters(|l| Combination::letter(p(l))))
            }
            (CrossLetter::U(x), CrossLetter::U(y)) => {
                UhRules.reduce_pair(x, y).map(|c| c.map_letters(|l| Combination::letter(u(l))))
            }
            (CrossLetter::P(_), CrossLetter::U(_)) => None,
            (CrossLetter::U(g), CrossLetter::P(l)) => Some(self.base.rule_for(g, l)),
        }
    }
}

/// Normal-ordered cross-product element: plane monomial times `U_h` monomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CrossElement {
    terms: BTreeMap<(PlaneMonomial, UhMonomial), Scalar>,
}

impl CrossElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, pm: PlaneMonomial, um: UhMonomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let key = (pm, um);
        let e = self.terms.entry(key.clone()).or_default();
        *e += &s;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PlaneMonomial, UhMonomial), &Scalar)> {
        self.terms.iter()
    }

    /// `f · u` for a plane element `f` and `U_h` element `u` (already normal).
    pub fn product(f: &AlgebraElement, g: &UhElement) -> Self {
        let mut out = Self::zero();
        for (pm, pc) in f.terms() {
            for (um, uc) in g.terms() {
                out.add_term(pm.clone(), *um, pc * uc);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((pm, um), c) in &o.terms {
            out.add_term(pm.clone(), *um, -c);
        }
        out
    }

    /// Apply the counit to the `U_h` factor.
    pub fn counit_right(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ((pm, um), c) in &self.terms {
            if um.is_grouplike() {
                out.add_term(pm.clone(), c.clone());
            }
        }
        out
    }

    fn from_normal_combination(c: &Combination<CrossLetter>) -> Self {
        let mut out = Self::zero();
        for (w, s) in c.iter() {
            let split = w.iter().position(|l| matches!(l, CrossLetter::U(_))).unwrap_or(w.len());
            let plane: Vec<PlaneLetter> = w[..split]
                .iter()
                .map(|l| match l {
                    CrossLetter::P(x) => *x,
                    CrossLetter::U(_) => unreachable!(),
                })
                .collect();
            let uh: Vec<UhLetter> = w[split..]
                .iter()
                .map(|l| match l {
                    CrossLetter::U(x) => *x,
                    CrossLetter::P(_) => panic!("plane letter right of a U_h letter in a normal word"),
                })
                .collect();
            out.add_term(word_to_monomial(&plane), UhMonomial::from_normal_word(&uh), s.clone());
        }
        out
    }
}

impl fmt::Display for CrossElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((pm, um), c)| format!("({c})*{pm}*{um}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Words of a plane element.
pub fn plane_combination(f: &AlgebraElement) -> Combination<CrossLetter> {
    f.to_combination().map_letters(|l| Combination::letter(p(l)))
}

/// Words of a `U_h` element.
pub fn uh_combination(g: &UhElement) -> Combination<CrossLetter> {
    g.to_combination().map_letters(|l| Combination::letter(u(l)))
}

/// Normalizing engine for one rule table.
pub struct CrossAlgebra {
    rules: CrossRules,
    n: Normalizer<CrossRules>,
    // coefficient of h^2 in [x, J- G], and the relations it was built for
    quarter: Scalar,
    relations: Vec<CompositeRelation>,
}

impl CrossAlgebra {
    /// Engine for `base`, checked against the standard composite relations.
    pub fn new(base: GeneratorCrossRules) -> Self {
        Self::with_relations(base, Scalar::ratio(1, 4))
    }

    /// Engine for `base`, checked against the relations with `quarter h^2`
    /// in `[x, J- G]`.
    pub fn with_relations(base: GeneratorCrossRules, quarter: Scalar) -> Self {
        let rules = CrossRules { base: Rc::new(base) };
        let relations = composite_relations_with(quarter.clone());
        CrossAlgebra { n: Normalizer::new(rules.clone()), rules, quarter, relations }
    }

    /// Engine derived from the consistent relations.
    pub fn consistent() -> Result<Self, CrossError> {
        Ok(Self::with_relations(derive_consistent_base_rules()?, Scalar::zero()))
    }

    pub fn relations(&self) -> &[CompositeRelation] {
        &self.relations
    }

    pub fn rules(&self) -> &GeneratorCrossRules {
        &self.rules.base
    }

    pub fn normal_form(&self, c: &Combination<CrossLetter>) -> CrossElement {
        CrossElement::from_normal_combination(&self.n.normal_form(c))
    }

    /// Normal form by naive leftmost rewriting (moves `U_h` letters before
    /// reordering the plane letters they pass).
    pub fn normal_form_leftmost(&self, c: &Combination<CrossLetter>) -> CrossElement {
        CrossElement::from_normal_combination(&rewrite::reduce(&self.rules, c, Strategy::Leftmost))
    }

    pub fn normal_form_rightmost(&self, c: &Combination<CrossLetter>) -> CrossElement {
        CrossElement::from_normal_combination(&rewrite::reduce(&self.rules, c, Strategy::Rightmost))
    }

    /// `u · f`: commute `u` to the right of `f` and apply the counit.
    pub fn act(&self, g: &UhElement, f: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (um, uc) in g.terms() {
            let uw: Vec<CrossLetter> = um.to_word().into_iter().map(u).collect();
            for (pm, pc) in f.terms() {
                let mut w = uw.clone();
                w.extend(pm.to_word().into_iter().map(p));
                let e = self.normal_form(&Combination::word(w)).counit_right();
                out = out + e.scale(&(uc * pc));
            }
        }
        out
    }

    /// `a · b` for free combinations.
    pub fn mul(&self, a: &Combination<CrossLetter>, b: &Combination<CrossLetter>) -> CrossElement {
        self.normal_form(&a.concat(b))
    }
}

/// One composite commutator `[kind, word] = rhs` from the defining table.
#[derive(Clone, Debug)]
pub struct CompositeRelation {
    pub name: &'static str,
    pub kind: PlaneKind,
    pub word: Vec<UhLetter>,
    pub commutator: Combination<CrossLetter>,
}

fn plane_times_g2(f: &str, g_power: usize) -> Combination<CrossLetter> {
    let e = crate::text::parse_plane(f).expect("fixed plane text");
    let mut g = Combination::one();
    for _ in 0..g_power {
        g = g.concat(&Combination::letter(u(UhLetter::G)));
    }
    plane_combination(&e).concat(&g)
}

/// The six composite commutators of the isometry action on `x`, `y`.
pub fn composite_relations() -> Vec<CompositeRelation> {
    composite_relations_with(Scalar::ratio(1, 4))
}

/// The composite commutators with the `h^2` constant in `[x, J- G]` set to
/// zero, the only value for which the action represents `U_h`.
pub fn consistent_composite_relations() -> Vec<CompositeRelation> {
    composite_relations_with(Scalar::zero())
}

fn composite_relations_with(quarter: Scalar) -> Vec<CompositeRelation> {
    use UhLetter::*;
    let jm_x = if quarter.is_zero() {
        ("[x, J- G] = (x^2 - y^2 - ihx) G^2", plane_times_g2("x^2 - y^2 - i*h*x", 2))
    } else {
        let c = plane_times_g2("x^2 - y^2 - i*h*x", 2)
            .add(&plane_times_g2("h^2", 2).scale(&quarter));
        ("[x, J- G] = (x^2 - y^2 - ihx + h^2/4) G^2", c)
    };
    vec![
        CompositeRelation {
            name: "[x, J+] = -1",
            kind: PlaneKind::X,
            word: vec![Jp],
            commutator: Combination::scalar(Scalar::int(-1)),
        },
        CompositeRelation { name: "[y, J+] = 0", kind: PlaneKind::Y, word: vec![Jp], commutator: Combination::zero() },
        CompositeRelation { name: jm_x.0, kind: PlaneKind::X, word: vec![Jm, G], commutator: jm_x.1 },
        CompositeRelation {
            name: "[y, J- G] = (2xy + ihy) G^2",
            kind: PlaneKind::Y,
            word: vec![Jm, G],
            commutator: plane_times_g2("2*x*y + i*h*y", 2),
        },
        CompositeRelation {
            name: "[x, J3 G] = (2x - ih) G^2",
            kind: PlaneKind::X,
            word: vec![J3, G],
            commutator: plane_times_g2("2*x - i*h", 2),
        },
        CompositeRelation {
            name: "[y, J3 G] = 2y G^2",
            kind: PlaneKind::Y,
            word: vec![J3, G],
            commutator: plane_times_g2("2*y", 2),
        },
    ]
}

/// Shift `s` in `G ℓ = (ℓ + s) G`: `-ih` for `x`, zero for `y`.
fn g_shift(kind: PlaneKind) -> Scalar {
    match kind {
        PlaneKind::X => -Scalar::ih(),
        _ => Scalar::zero(),
    }
}

/// Build the base-letter table from the composite commutators and verify
/// that it reproduces each of them.
pub fn derive_base_rules() -> Result<GeneratorCrossRules, CrossError> {
    derive_base_rules_from(&composite_relations())
}

/// Base rules from [`consistent_composite_relations`].
pub fn derive_consistent_base_rules() -> Result<GeneratorCrossRules, CrossError> {
    derive_base_rules_from(&consistent_composite_relations())
}

pub fn derive_base_rules_from(relations: &[CompositeRelation]) -> Result<GeneratorCrossRules, CrossError> {
    use UhLetter::*;
    let mut t = GeneratorCrossRules::default();
    let one = Scalar::one;
    let y0 = p(PlaneLetter::Y(0));
    let yi0 = p(PlaneLetter::YInv(0));

    // G ℓ = (ℓ + s) G and G^-1 ℓ = (ℓ - s) G^-1
    for (g, sign) in [(G, 1i64), (GInv, -1)] {
        for k in PlaneKind::ALL {
            let l = p(k.letter(0));
            let s = g_shift(k).scale_rational(&num_rational::BigRational::from_integer(sign.into()));
            let rule = Combination::from_terms([(one(), vec![l, u(g)]), (s, vec![u(g)])]);
            t.set(g, k, rule);
        }
    }

    // Jℓ = ℓJ - C G^-(n-1) - sJ where [ℓ, J G^(n-1)] = C; here n - 1 ∈ {0, 1}
    let partial = CrossAlgebra::new(t.clone());
    for rel in relations {
        let j = rel.word[0];
        let l = p(rel.kind.letter(0));
        let peeled = if rel.word.len() == 2 {
            partial.mul(&rel.commutator, &Combination::letter(u(GInv)))
        } else {
            partial.normal_form(&rel.commutator)
        };
        let mut rule = Combination::from_terms([(one(), vec![l, u(j)])]);
        for ((pm, um), c) in peeled.terms() {
            let mut w: Vec<CrossLetter> = pm.to_word().into_iter().map(p).collect();
            w.extend(um.to_word().into_iter().map(u));
            rule.add_term(w, -c);
        }
        if rel.word.len() == 2 {
            rule.add_term(vec![u(j)], -g_shift(rel.kind));
        }
        t.set(j, rel.kind, rule);
    }

    // J y^-1 = y^-1 J + y^-1 Q y^-1 where J y = y J - Q
    let partial = CrossAlgebra::new(t.clone());
    for j in [Jp, J3, Jm] {
        let jy = t.get(j, PlaneKind::Y).expect("derived above").clone();
        let q = Combination::from_terms([(one(), vec![y0, u(j)])]).sub(&jy);
        let conj = Combination::letter(yi0).concat(&q).concat(&Combination::letter(yi0));
        let nf = partial.normal_form(&conj);
        let mut rule = Combination::from_terms([(one(), vec![yi0, u(j)])]);
        for ((pm, um), c) in nf.terms() {
            let mut w: Vec<CrossLetter> = pm.to_word().into_iter().map(p).collect();
            w.extend(um.to_word().into_iter().map(u));
            rule.add_term(w, c.clone());
        }
        t.set(j, PlaneKind::YInv, rule);
    }

    let alg = CrossAlgebra::new(t.clone());
    let rep = verify_recombination_of(&alg, relations);
    if let Some(bad) = rep.failures().next() {
        return Err(CrossError::Recombination(bad.check.clone()));
    }
    Ok(t)
}

thread_local! {
    static STANDARD: CrossAlgebra =
        CrossAlgebra::new(derive_base_rules().expect("the composite relations determine the base rules"));
}

/// Run `f` with the cross-product engine built from the derived rules.
pub fn with_standard<T>(f: impl FnOnce(&CrossAlgebra) -> T) -> T {
    STANDARD.with(f)
}

/// Left action with the standard rules.
pub fn act(g: &UhElement, f: &AlgebraElement) -> AlgebraElement {
    with_standard(|alg| alg.act(g, f))
}

/// `[ℓ, u] - rhs` for each composite commutator, in normal form.
pub fn verify_recombination(alg: &CrossAlgebra) -> Report {
    verify_recombination_of(alg, alg.relations())
}

pub fn verify_recombination_of(alg: &CrossAlgebra, relations: &[CompositeRelation]) -> Report {
    let mut rep = Report::new();
    for rel in relations {
        let l = Combination::letter(p(rel.kind.letter(0)));
        let w = Combination::word(rel.word.iter().copied().map(u).collect());
        let comm = alg.normal_form(&l.concat(&w).sub(&w.concat(&l)));
        let r = comm.sub(&alg.normal_form(&rel.commutator));
        rep.zero(SUITE, format!("recombination {}", rel.name), &r, r.is_zero());
    }
    rep
}

/// Commutation with functions of one variable: `[f(x), J+] = -∂f`,
/// `[f, J3 G]`, `[f, J- G]` and `G f(x) = f(x - ih) G`, for powers of `x`
/// and of `y` (negative powers included).
pub fn verify_function_rules(alg: &CrossAlgebra, max_power: u32) -> Report {
    use UhLetter::*;
    let mut rep = Report::new();
    let g2 = UhElement::g_pow(2);
    let two_ih = Scalar::term(0, 2, 1);
    let quarter_h2 = &Scalar::term(1, 0, 2) * &alg.quarter;
    let check = |f: &AlgebraElement, word: &[UhLetter], expect: CrossElement, label: String, rep: &mut Report| {
        let fw = plane_combination(f);
        let uw = Combination::word(word.iter().copied().map(u).collect());
        let got = alg.normal_form(&fw.concat(&uw).sub(&uw.concat(&fw)));
        let r = got.sub(&expect);
        rep.zero(SUITE, label, &r, r.is_zero());
    };
    for n in 0..=max_power {
        let f = AlgebraElement::x_pow(0, n);
        let dx = f.finite_difference_dx(0);
        check(&f, &[Jp], CrossElement::product(&-f.partial_x(0), &UhElement::one()), format!("[x^{n}, J+] = -d/dx"), &mut rep);
        let lin = crate::text::parse_plane("2*x - i*h").unwrap();
        check(&f, &[J3, G], CrossElement::product(&lin.mul(&dx), &g2), format!("[x^{n}, J3 G]"), &mut rep);
        let quad = crate::text::parse_plane("x^2 - i*h*x").unwrap() + AlgebraElement::scalar(quarter_h2.clone());
        let shifted = dx.shift_x(0, &two_ih).mul(&AlgebraElement::y_pow(0, 2));
        let jm_rhs = quad.mul(&dx) - shifted;
        check(&f, &[Jm, G], CrossElement::product(&jm_rhs, &g2), format!("[x^{n}, J- G]"), &mut rep);
        let gf = alg.normal_form(&Combination::letter(u(G)).concat(&plane_combination(&f)));
        let expect = CrossElement::product(&f.shift_x(0, &-Scalar::ih()), &UhElement::g());
        let r = gf.sub(&expect);
        rep.zero(SUITE, format!("G x^{n} = (x - ih)^{n} G"), &r, r.is_zero());
    }
    let m = max_power as i32;
    for e in -m..=m {
        let f = AlgebraElement::y_pow(0, e);
        let ey = f.euler_y(0);
        check(&f, &[Jp], CrossElement::zero(), format!("[y^{e}, J+] = 0"), &mut rep);
        check(&f, &[J3, G], CrossElement::product(&ey.scale(&Scalar::int(2)), &g2), format!("[y^{e}, J3 G]"), &mut rep);
        let two_x = AlgebraElement::x(0).scale(&Scalar::int(2));
        let second = ey.euler_y(0).scale(&Scalar::int(2)) - ey.clone();
        let rhs = two_x.mul(&ey) + second.scale(&Scalar::ih());
        check(&f, &[Jm, G], CrossElement::product(&rhs, &g2), format!("[y^{e}, J- G]"), &mut rep);
    }
    rep
}

/// Plane relations as `(name, lhs word, rhs)`, over copies `0..copies`.
pub fn plane_relations(copies: u8) -> Vec<(String, Vec<PlaneLetter>, AlgebraElement)> {
    let mut out = Vec::new();
    let all = |c: u8| [PlaneLetter::X(c), PlaneLetter::Y(c), PlaneLetter::YInv(c)];
    for c1 in 0..copies {
        for c2 in 0..copies {
            for a in all(c1) {
                for b in all(c2) {
                    if let Some(rhs) = PlaneRules.reduce_pair(a, b) {
                        let rhs = AlgebraElement::from_normal_combination(&rewrite::reduce(
                            &PlaneRules,
                            &rhs,
                            Strategy::Leftmost,
                        ));
                        out.push((format!("{a}{b}"), vec![a, b], rhs));
                    }
                }
            }
        }
    }
    out
}

/// `u · (lhs - rhs)` vanishes for every plane relation and every `U_h`
/// generator, computed by leftmost rewriting so `u` crosses the unreduced
/// relation word.
pub fn verify_relations_preserved(alg: &CrossAlgebra, copies: u8) -> Report {
    let mut rep = Report::new();
    for (name, lhs, rhs) in plane_relations(copies) {
        let rel = Combination::word(lhs.into_iter().map(p).collect()).sub(&plane_combination(&rhs));
        for g in UhLetter::ALL {
            let c = Combination::letter(u(g)).concat(&rel);
            let left = alg.normal_form_leftmost(&c);
            let fast = alg.normal_form(&c);
            let ok = left.is_zero() && fast.is_zero();
            let shown = if left.is_zero() { fast } else { left };
            rep.zero(SUITE, format!("{g} respects plane relation {name}"), &shown, ok);
        }
    }
    rep
}

/// `u · (f g) = Σ (u₁ · f)(u₂ · g)` for each generator `u` and sample pairs.
pub fn verify_module_algebra(alg: &CrossAlgebra, samples: &[(AlgebraElement, AlgebraElement)]) -> Report {
    let mut rep = Report::new();
    let gens: Vec<(String, UhElement)> = vec![
        ("J+".into(), UhElement::jp()),
        ("G".into(), UhElement::g()),
        ("G^-1".into(), UhElement::g_pow(-1)),
        ("J3".into(), UhElement::j3()),
        ("J-".into(), UhElement::jm()),
        ("J3 G".into(), UhElement::j3().mul(&UhElement::g())),
        ("J- G".into(), UhElement::jm().mul(&UhElement::g())),
    ];
    for (name, g) in &gens {
        let delta = g.coproduct();
        let mut worst: Option<String> = None;
        for (f1, f2) in samples {
            let lhs = alg.act(g, &f1.mul(f2));
            let mut rhs = AlgebraElement::zero();
            for ((a, b), c) in delta.terms() {
                let ua = UhElement::monomial(Scalar::one(), *a);
                let ub = UhElement::monomial(Scalar::one(), *b);
                rhs = rhs + alg.act(&ua, f1).mul(&alg.act(&ub, f2)).scale(c);
            }
            let r = lhs - rhs;
            if !r.is_zero() && worst.is_none() {
                worst = Some(format!("f = {f1}, g = {f2}: residual {r}"));
            }
        }
        rep.exact(SUITE, format!("module algebra law for {name}"), worst);
    }
    rep
}

/// The generators the invariance checks run over, with display names.
pub fn named_generators() -> Vec<(&'static str, UhElement)> {
    vec![
        ("J+", UhElement::jp()),
        ("G", UhElement::g()),
        ("G^-1", UhElement::g_pow(-1)),
        ("J3", UhElement::j3()),
        ("J-", UhElement::jm()),
        ("J3 G", UhElement::j3().mul(&UhElement::g())),
        ("J- G", UhElement::jm().mul(&UhElement::g())),
    ]
}

/// Exact invariance checks: the distance invariant is a trivial
/// representation, every plane relation on two copies is preserved, and
/// `Δ_h` commutes with the action on monomials up to `max_degree`.
pub fn invariance_suite(alg: &CrossAlgebra, max_degree: u32) -> Report {
    let mut rep = Report::new();
    let q = crate::plane::distance_invariant(0, 1);
    for (name, g) in named_generators().into_iter().filter(|(n, _)| ["J+", "G", "J3 G", "J- G"].contains(n)) {
        let r = alg.act(&g, &q) - q.scale(&g.counit());
        rep.zero(SUITE, format!("{name} · Q = ε({name}) Q"), &r, r.is_zero());
    }
    rep.extend(verify_relations_preserved(alg, 2));
    let fs = crate::calculus::monomials(max_degree);
    for (name, g) in named_generators() {
        let mut worst = None;
        for f in &fs {
            let r = alg.act(&g, &crate::calculus::laplacian_h(f)) - crate::calculus::laplacian_h(&alg.act(&g, f));
            if !r.is_zero() {
                worst = Some(format!("f = {f}: {r}"));
                break;
            }
        }
        rep.exact(SUITE, format!("{name} · Δ_h f = Δ_h ({name} · f) to degree {max_degree}"), worst);
    }
    rep
}

/// `uv · f = u · (v · f)` and `u · 1 = ε(u)` over pairs of generators.
pub fn verify_action_laws(alg: &CrossAlgebra, samples: &[AlgebraElement]) -> Report {
    let mut rep = Report::new();
    let gens = named_generators();
    for (nu, gu) in &gens {
        let r = alg.act(gu, &AlgebraElement::one()) - AlgebraElement::scalar(gu.counit());
        rep.zero(SUITE, format!("{nu} · 1 = ε({nu})"), &r, r.is_zero());
        for (nv, gv) in &gens {
            let uv = gu.mul(gv);
            let worst = samples.iter().find_map(|f| {
                let r = alg.act(&uv, f) - alg.act(gu, &alg.act(gv, f));
                (!r.is_zero()).then(|| format!("f = {f}: {r}"))
            });
            rep.exact(SUITE, format!("({nu})({nv}) · f = {nu} · ({nv} · f)"), worst);
        }
    }
    rep
}

/// Random words reduce to the same normal form by leftmost and rightmost
/// rewriting: plane words over three copies, `U_h` words, and cross-product
/// words over one plane copy. `words` is split evenly across the families.
pub fn verify_confluence(alg: &CrossAlgebra, words: usize, max_len: usize, seed: u64) -> Report {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let per = words.div_ceil(3);
    let mut rep = Report::new();

    let mut plane_letters = Vec::new();
    for c in 0..3 {
        plane_letters.extend([PlaneLetter::X(c), PlaneLetter::Y(c), PlaneLetter::YInv(c)]);
    }
    let mut worst = None;
    for _ in 0..per {
        let len = rng.gen_range(1..=max_len);
        let w: Vec<PlaneLetter> = (0..len).map(|_| plane_letters[rng.gen_range(0..plane_letters.len())]).collect();
        let a = crate::plane::normal_form_by_rewriting(&w, Strategy::Leftmost);
        let b = crate::plane::normal_form_by_rewriting(&w, Strategy::Rightmost);
        if a != b || a != crate::plane::normal_form(&w) {
            worst = Some(format!("{w:?}"));
            break;
        }
    }
    rep.exact(SUITE, format!("{per} random plane words (3 copies) reduce confluently"), worst);

    let mut worst = None;
    for _ in 0..per {
        let len = rng.gen_range(1..=max_len);
        let w: Vec<UhLetter> = (0..len).map(|_| UhLetter::ALL[rng.gen_range(0..UhLetter::ALL.len())]).collect();
        let a = crate::hopf::uh::uh_normal_form_by_rewriting(&w, Strategy::Leftmost);
        let b = crate::hopf::uh::uh_normal_form_by_rewriting(&w, Strategy::Rightmost);
        if a != b || a != crate::hopf::uh::uh_normal_form(&w) {
            worst = Some(format!("{w:?}"));
            break;
        }
    }
    rep.exact(SUITE, format!("{per} random U_h words reduce confluently"), worst);

    let mut alphabet: Vec<CrossLetter> = vec![p(PlaneLetter::X(0)), p(PlaneLetter::Y(0)), p(PlaneLetter::YInv(0))];
    alphabet.extend(UhLetter::ALL.into_iter().map(u));
    let mut worst = None;
    for _ in 0..per {
        let len = rng.gen_range(1..=max_len);
        let w: Vec<CrossLetter> = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let c = Combination::word(w);
        let a = alg.normal_form_leftmost(&c);
        if alg.normal_form_rightmost(&c) != a {
            worst = Some(format!("{c}: leftmost {a}, rightmost {}", alg.normal_form_rightmost(&c)));
            break;
        }
    }
    rep.exact(SUITE, format!("{per} random cross-product words reduce confluently"), worst);
    rep
}

/// Each `U_h` defining relation, multiplied on the right by a plane
/// generator, rewrites to zero when the plane letter is moved first.
pub fn verify_uh_relations_preserved(alg: &CrossAlgebra) -> Report {
    let mut rep = Report::new();
    for (lhs, rhs) in crate::hopf::uh::defining_relations() {
        let name: Vec<&str> = lhs.iter().map(|l| l.name()).collect();
        let rel = Combination::word(lhs.iter().copied().map(u).collect()).sub(&rhs.map_letters(|l| Combination::letter(u(l))));
        for k in PlaneKind::ALL {
            let l = k.letter(0);
            let r = alg.normal_form_rightmost(&rel.concat(&Combination::letter(p(l))));
            rep.zero(SUITE, format!("{} relation acting on {l}", name.join(" ")), &r, r.is_zero());
        }
    }
    rep
}

/// Everything about the cross product at the default sizes.
pub fn crossprod_suite(alg: &CrossAlgebra) -> Report {
    let mut rep = verify_recombination(alg);
    rep.extend(verify_function_rules(alg, 4));
    rep.extend(verify_uh_relations_preserved(alg));
    let samples: Vec<(AlgebraElement, AlgebraElement)> = crate::calculus::monomials(2)
        .into_iter()
        .zip(crate::calculus::monomials(2).into_iter().rev())
        .collect();
    rep.extend(verify_module_algebra(alg, &samples));
    rep.extend(verify_action_laws(alg, &crate::calculus::monomials(2)));
    rep.extend(invariance_suite(alg, 6));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::distance_invariant;
    use crate::text::parse_plane;

    fn pe(s: &str) -> AlgebraElement {
        parse_plane(s).unwrap()
    }

    #[test]
    fn base_rule_examples() {
        let t = derive_base_rules().unwrap();
        let x0 = p(PlaneLetter::X(0));
        let jp_x = Combination::from_terms([(Scalar::one(), vec![x0, u(UhLetter::Jp)]), (Scalar::one(), vec![])]);
        assert_eq!(t.get(UhLetter::Jp, PlaneKind::X), Some(&jp_x));
        let g_x = Combination::from_terms([(Scalar::one(), vec![x0, u(UhLetter::G)]), (-Scalar::ih(), vec![u(UhLetter::G)])]);
        assert_eq!(t.get(UhLetter::G, PlaneKind::X), Some(&g_x));
        // J3 x = x J3 + ih J3 - (2x - ih) G
        with_standard(|alg| {
            let got = alg.normal_form(&Combination::word(vec![u(UhLetter::J3), x0]));
            let mut expect = CrossElement::product(&pe("x"), &UhElement::j3());
            for ((pm, um), c) in CrossElement::product(&pe("i*h"), &UhElement::j3())
                .terms()
                .chain(CrossElement::product(&pe("-2*x + i*h"), &UhElement::g()).terms())
            {
                expect.add_term(pm.clone(), *um, c.clone());
            }
            assert_eq!(got, expect);
        });
    }

    #[test]
    fn copy_uniform_g_rule() {
        with_standard(|alg| {
            let got = alg.normal_form(&Combination::word(vec![u(UhLetter::G), p(PlaneLetter::X(1))]));
            assert_eq!(got, CrossElement::product(&pe("x1 - i*h"), &UhElement::g()));
        });
    }

    #[test]
    fn action_examples() {
        assert_eq!(act(&UhElement::jp(), &pe("x")), AlgebraElement::one());
        assert!(act(&UhElement::jp(), &pe("y^3")).is_zero());
        assert_eq!(act(&UhElement::g(), &pe("x^2")), pe("x^2 - 2*i*h*x - h^2"));
        let j3g = UhElement::j3().mul(&UhElement::g());
        assert_eq!(act(&j3g, &pe("y")), pe("-2*y"));
        assert_eq!(act(&UhElement::one(), &pe("x*y + y^-1")), pe("x*y + y^-1"));
        assert_eq!(act(&UhElement::jm(), &AlgebraElement::one()), AlgebraElement::zero());
    }

    #[test]
    fn recombination_and_function_rules() {
        with_standard(|alg| {
            let r = verify_recombination(alg);
            assert!(r.all_passed(), "{r}");
            let r = verify_function_rules(alg, 4);
            assert!(r.all_passed(), "{r}");
        });
    }

    #[test]
    fn relations_preserved_two_copies() {
        with_standard(|alg| {
            let r = verify_relations_preserved(alg, 2);
            assert!(r.all_passed(), "{r}");
        });
    }

    #[test]
    fn distance_is_invariant() {
        let q = distance_invariant(0, 1);
        for g in [
            UhElement::jp(),
            UhElement::g(),
            UhElement::j3().mul(&UhElement::g()),
            UhElement::jm().mul(&UhElement::g()),
        ] {
            let r = act(&g, &q) - q.scale(&g.counit());
            assert!(r.is_zero(), "{g}: {r}");
        }
    }

    #[test]
    fn module_algebra_on_small_samples() {
        let samples = vec![(pe("x"), pe("y")), (pe("x^2"), pe("y^-1")), (pe("y"), pe("x*y")), (pe("x0"), pe("x1"))];
        with_standard(|alg| {
            let r = verify_module_algebra(alg, &samples);
            assert!(r.all_passed(), "{r}");
        });
    }

    #[test]
    fn corrupted_rule_is_named() {
        let mut t = derive_base_rules().unwrap();
        let y0 = p(PlaneLetter::Y(0));
        let bad = Combination::from_terms([
            (Scalar::one(), vec![y0, u(UhLetter::J3)]),
            (Scalar::int(-3), vec![y0, u(UhLetter::G)]),
        ]);
        t.set(UhLetter::J3, PlaneKind::Y, bad);
        let r = verify_recombination(&CrossAlgebra::new(t));
        let failed: Vec<_> = r.failures().map(|f| f.check.clone()).collect();
        assert!(failed.contains(&"recombination [y, J3 G] = 2y G^2".to_string()), "{failed:?}");
        assert!(failed.iter().all(|f| f.starts_with("recombination [y,")), "{failed:?}");
    }

    #[test]
    fn stated_constant_breaks_the_j3_jm_relation() {
        with_standard(|alg| {
            let r = verify_uh_relations_preserved(alg);
            let failed: Vec<_> = r.failures().map(|f| f.check.clone()).collect();
            assert_eq!(failed.len(), 1, "{r}");
            assert!(failed[0].ends_with("relation acting on x0"), "{failed:?}");
            // ([J3, J-] - rhs) x = -4c G^2 for the constant c h^2 in [x, J- G]
            let w = r.failures().next().unwrap().witness.clone().unwrap();
            assert_eq!(w, "((-1)*h^2)*1*G^2");
        });
    }

    #[test]
    fn consistent_table_restores_the_representation() {
        let alg = CrossAlgebra::new(derive_consistent_base_rules().unwrap());
        assert!(verify_uh_relations_preserved(&alg).all_passed());
        let r = verify_action_laws(&alg, &crate::calculus::monomials(2));
        assert!(r.all_passed(), "{r}");
        let r = verify_confluence(&alg, 150, 5, 7);
        assert!(r.all_passed(), "{r}");
        let failed: Vec<_> = verify_recombination(&alg).failures().map(|f| f.check.clone()).collect();
        assert_eq!(failed, vec!["recombination [x, J- G] = (x^2 - y^2 - ihx + h^2/4) G^2".to_string()]);
    }

    #[test]
    fn stated_table_fails_composition_only_through_j3_and_jm() {
        with_standard(|alg| {
            let r = verify_action_laws(alg, &crate::calculus::monomials(2));
            assert!(r.failures().count() > 0);
            for f in r.failures() {
                assert!(f.check.contains("J-"), "{}", f.check);
            }
        });
    }
}
