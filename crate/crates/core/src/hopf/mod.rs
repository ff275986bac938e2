//! Quantum group structures: `U_h(sl(2))`, `Fun_h(SL(2))`, the braiding
//! matrix and the coaction on the plane.

pub mod coaction;
pub mod fun;
pub mod rmatrix;
pub mod uh;

use std::collections::BTreeMap;

use crate::report::Report;
use crate::rewrite::Combination;
use crate::scalar::Scalar;
use uh::{UhElement, UhLetter, UhMonomial, UhTensor};

const SUITE: &str = "hopf";

fn relation_name(lhs: &[UhLetter]) -> String {
    lhs.iter().map(|l| l.name()).collect::<Vec<_>>().join(" ")
}

/// Image of a free combination under a multiplicative map into tensors.
fn free_tensor(c: &Combination<UhLetter>, f: impl Fn(UhLetter) -> UhTensor) -> UhTensor {
    let mut out = UhTensor::zero();
    for (w, s) in c.iter() {
        let mut acc = UhTensor::scalar(s.clone());
        for &l in w {
            acc = acc.mul(&f(l));
        }
        out = out.add(&acc);
    }
    out
}

/// Image of a free combination under an (anti)multiplicative map.
fn free_map(c: &Combination<UhLetter>, f: impl Fn(UhLetter) -> UhElement, anti: bool, conj: bool) -> UhElement {
    let mut out = UhElement::zero();
    for (w, s) in c.iter() {
        let s = if conj { s.conj() } else { s.clone() };
        let mut acc = UhElement::scalar(s);
        let letters: Vec<UhLetter> = if anti { w.iter().rev().copied().collect() } else { w.clone() };
        for l in letters {
            acc = acc.mul(&f(l));
        }
        out = out + acc;
    }
    out
}

type Triple = BTreeMap<(UhMonomial, UhMonomial, UhMonomial), Scalar>;

/// `(Δ ⊗ id) t` when `left` is true, else `(id ⊗ Δ) t`.
fn expand_leg(t: &UhTensor, left: bool) -> Triple {
    let mut out = Triple::new();
    for ((a, b), c) in t.terms() {
        let (split, keep) = if left { (*a, *b) } else { (*b, *a) };
        let d = UhElement::monomial(Scalar::one(), split).coproduct();
        for ((p, q), cd) in d.terms() {
            let key = if left { (*p, *q, keep) } else { (keep, *p, *q) };
            let e = out.entry(key).or_default();
            *e += &(c * cd);
            if e.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

/// Coproduct, counit, antipode and star compatibility with every defining
/// relation, plus the Hopf axioms on generators. All checks are exact.
pub fn verify_hopf_axioms() -> Report {
    let mut rep = Report::new();
    for (lhs, rhs) in uh::defining_relations() {
        let rel = Combination::word(lhs.clone()).sub(&rhs);
        let name = relation_name(&lhs);
        let d = free_tensor(&rel, uh::coproduct_letter);
        rep.zero(SUITE, format!("coproduct respects {name} relation"), &d, d.is_zero());
        let e = free_map(&rel, |l| UhElement::scalar(UhElement::letter(l).counit()), false, false);
        rep.zero(SUITE, format!("counit respects {name} relation"), &e, e.is_zero());
        let s = free_map(&rel, uh::antipode_letter, true, false);
        rep.zero(SUITE, format!("antipode respects {name} relation"), &s, s.is_zero());
        let st = free_map(&rel, uh::star_letter, true, true);
        rep.zero(SUITE, format!("star respects {name} relation"), &st, st.is_zero());
    }
    for l in UhLetter::ALL {
        let u = UhElement::letter(l);
        let d = u.coproduct();
        let eps = UhElement::scalar(u.counit());
        let left = d.multiply_legs(UhElement::antipode, Clone::clone) - eps.clone();
        rep.zero(SUITE, format!("m(S⊗id)Δ = ε on {}", l.name()), &left, left.is_zero());
        let right = d.multiply_legs(Clone::clone, UhElement::antipode) - eps;
        rep.zero(SUITE, format!("m(id⊗S)Δ = ε on {}", l.name()), &right, right.is_zero());
        let cl = d.counit_left() - u.clone();
        rep.zero(SUITE, format!("(ε⊗id)Δ = id on {}", l.name()), &cl, cl.is_zero());
        let cr = d.counit_right() - u.clone();
        rep.zero(SUITE, format!("(id⊗ε)Δ = id on {}", l.name()), &cr, cr.is_zero());
        let coassoc = expand_leg(&d, true) == expand_leg(&d, false);
        rep.exact(SUITE, format!("coassociativity on {}", l.name()), (!coassoc).then(|| d.to_string()));
        let star_d = u.star().coproduct();
        let d_star = d.map_legs(UhElement::star, UhElement::star, true);
        let diff = star_d.sub(&d_star);
        rep.zero(SUITE, format!("Δ(u*) = (*⊗*)Δu on {}", l.name()), &diff, diff.is_zero());
    }
    rep
}

/// Everything in this module: Hopf axioms, determinant, coaction and the
/// braiding matrix.
pub fn hopf_suite() -> Report {
    let mut rep = verify_hopf_axioms();
    rep.extend(fun::det_central_check());
    rep.extend(coaction::coaction_check_rs());
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_axioms_hold() {
        let r = verify_hopf_axioms();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn antipode_of_generators() {
        assert_eq!(UhElement::g().antipode(), UhElement::g_pow(-1));
        assert_eq!(UhElement::jp().antipode(), -UhElement::jp());
        let s = UhElement::g().antipode().mul(&UhElement::g());
        assert_eq!(s, UhElement::one());
    }
}
