//! `Fun_h(SL(2))`: hermitian generators `A, B, C, D` ordered `A < B < C < D`.
//!
//! ```text
//! B A = A B - ih δ + ih A^2        C A = A C - ih C^2
//! D A = A D - ih C D + ih C A      C B = B C - ih C D - ih A C
//! D B = B D - ih D^2 + ih δ        D C = C D + ih C^2
//! ```
//!
//! with `δ = A D - B C + ih A C` in normal order. The generators and the
//! determinant are not reduced by `δ = 1`; every check here is exact in the
//! unquotiented algebra.

use std::fmt;

use crate::report::Report;
use crate::rewrite::{Combination, Normalizer, RewriteSystem};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunLetter {
    A,
    B,
    C,
    D,
}

impl FunLetter {
    pub const ALL: [FunLetter; 4] = [FunLetter::A, FunLetter::B, FunLetter::C, FunLetter::D];
}

impl fmt::Display for FunLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FunRules;

/// Normal-ordered quantum determinant `A D - B C + ih A C`.
pub fn determinant() -> Combination<FunLetter> {
    use FunLetter::*;
    Combination::from_terms([
        (Scalar::one(), vec![A, D]),
        (Scalar::int(-1), vec![B, C]),
        (Scalar::ih(), vec![A, C]),
    ])
}

impl RewriteSystem for FunRules {
    type L = FunLetter;

    fn reduce_pair(&self, a: FunLetter, b: FunLetter) -> Option<Combination<FunLetter>> {
        use FunLetter::*;
        if a <= b {
            return None;
        }
        let ih = Scalar::ih();
        let w = |c: Scalar, w: &[FunLetter]| Combination::from_terms([(c, w.to_vec())]);
        let swapped = Combination::word(vec![b, a]);
        let rest = match (a, b) {
            (B, A) => determinant().scale(&-&ih).add(&w(ih, &[A, A])),
            (C, A) => w(-ih, &[C, C]),
            (D, A) => w(-&ih, &[C, D]).add(&w(ih, &[C, A])),
            (C, B) => w(-&ih, &[C, D]).add(&w(-ih, &[A, C])),
            (D, B) => w(-&ih, &[D, D]).add(&determinant().scale(&ih)),
            (D, C) => w(ih, &[C, C]),
            _ => unreachable!("a > b covers exactly six pairs"),
        };
        Some(swapped.add(&rest))
    }
}

/// Normalizing product for `Fun_h(SL(2))`.
pub struct FunAlgebra {
    n: Normalizer<FunRules>,
}

impl Default for FunAlgebra {
    fn default() -> Self {
        FunAlgebra { n: Normalizer::new(FunRules) }
    }
}

impl FunAlgebra {
    pub fn normal_form(&self, c: &Combination<FunLetter>) -> Combination<FunLetter> {
        self.n.normal_form(c)
    }

    pub fn mul(&self, a: &Combination<FunLetter>, b: &Combination<FunLetter>) -> Combination<FunLetter> {
        self.n.mul(&self.normal_form(a), &self.normal_form(b))
    }

    pub fn commutator(&self, a: &Combination<FunLetter>, b: &Combination<FunLetter>) -> Combination<FunLetter> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Antilinear antihomomorphism fixing `A, B, C, D`.
    pub fn star(&self, c: &Combination<FunLetter>) -> Combination<FunLetter> {
        self.normal_form(&c.antilinear_reverse(Combination::letter))
    }
}

/// The two determinant expressions agree, `δ` is central, and the star
/// structure maps every relation to a relation.
pub fn det_central_check() -> Report {
    use FunLetter::*;
    const SUITE: &str = "hopf";
    let alg = FunAlgebra::default();
    let mut rep = Report::new();
    let word = |w: &[FunLetter]| Combination::word(w.to_vec());
    let ih = Scalar::ih();
    let d1 = word(&[A, D]).sub(&word(&[C, B])).sub(&word(&[C, D]).scale(&ih));
    let d2 = word(&[D, A]).sub(&word(&[C, B])).sub(&word(&[C, A]).scale(&ih));
    let diff = alg.normal_form(&d1.sub(&d2));
    rep.zero(SUITE, "determinant: AD - CB - ihCD = DA - CB - ihCA", &diff, diff.is_zero());
    let d = alg.normal_form(&d1);
    let expect = determinant();
    let r = d.sub(&expect);
    rep.zero(SUITE, "determinant normal form AD - BC + ihAC", &r, r.is_zero());
    for l in FunLetter::ALL {
        let c = alg.commutator(&d, &Combination::letter(l));
        rep.zero(SUITE, format!("determinant central: [delta, {l}]"), &c, c.is_zero());
    }
    for a in FunLetter::ALL {
        for b in FunLetter::ALL {
            if let Some(rhs) = FunRules.reduce_pair(a, b) {
                let rel = word(&[a, b]).sub(&rhs);
                let s = alg.star(&rel);
                rep.zero(SUITE, format!("fun star preserves relation {b}{a}"), &s, s.is_zero());
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{reduce, Strategy};
    use FunLetter::*;

    #[test]
    fn first_relation() {
        let alg = FunAlgebra::default();
        let ba = alg.normal_form(&Combination::word(vec![B, A]));
        let expect = Combination::word(vec![A, B])
            .sub(&determinant().scale(&Scalar::ih()))
            .add(&Combination::word(vec![A, A]).scale(&Scalar::ih()));
        assert_eq!(ba, expect);
    }

    #[test]
    fn determinant_checks_pass() {
        let r = det_central_check();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn strategies_agree() {
        let w = Combination::word(vec![D, C, B, A, D, A]);
        let a = reduce(&FunRules, &w, Strategy::Leftmost);
        assert_eq!(a, reduce(&FunRules, &w, Strategy::Rightmost));
        assert_eq!(a, FunAlgebra::default().normal_form(&w));
    }
}
