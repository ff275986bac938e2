//! Covariance of the plane under `Fun_h(SL(2))` in linear coordinates.
//!
//! The `(r, s)` plane has `[r, s] = ih s^2`; the plane of the main module is
//! recovered through `x = r s^-1 + ih/2`, `y = s^-2`. The coaction is
//! `r -> A⊗r + B⊗s`, `s -> C⊗r + D⊗s`. Two braided copies `(u_i, v_i)` with
//! the same relations in each copy give `z_i = u_i v_i^-1` satisfying
//! `[z_1, z_2] = 2ih (z_1 - z_2)`.
//!
//! Tensor products `Fun ⊗ P` are modelled as one algebra in which function
//! letters commute with plane letters and sit to their left.

use std::fmt;

use crate::hopf::fun::{FunLetter, FunRules};
use crate::report::Report;
use crate::rewrite::{Combination, Letter, Normalizer, RewriteSystem};
use crate::scalar::Scalar;

const SUITE: &str = "hopf";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RsLetter {
    R,
    S,
    SInv,
}

impl fmt::Display for RsLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsLetter::R => write!(f, "r"),
            RsLetter::S => write!(f, "s"),
            RsLetter::SInv => write!(f, "s^-1"),
        }
    }
}

/// `s r = r s - ih s^2`, `s^-1 r = r s^-1 + ih`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RsRules;

impl RewriteSystem for RsRules {
    type L = RsLetter;

    fn reduce_pair(&self, a: RsLetter, b: RsLetter) -> Option<Combination<RsLetter>> {
        use RsLetter::*;
        let ih = Scalar::ih();
        Some(match (a, b) {
            (S, SInv) | (SInv, S) => Combination::one(),
            (S, R) => Combination::from_terms([(Scalar::one(), vec![R, S]), (-ih, vec![S, S])]),
            (SInv, R) => Combination::from_terms([(Scalar::one(), vec![R, SInv]), (ih, vec![])]),
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UvLetter {
    U(u8),
    V(u8),
    VInv(u8),
}

impl UvLetter {
    fn copy(self) -> u8 {
        match self {
            UvLetter::U(c) | UvLetter::V(c) | UvLetter::VInv(c) => c,
        }
    }

    fn rank(self) -> (u8, u8) {
        match self {
            UvLetter::U(c) => (c, 0),
            UvLetter::V(c) | UvLetter::VInv(c) => (c, 1),
        }
    }
}

impl fmt::Display for UvLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UvLetter::U(c) => write!(f, "u{c}"),
            UvLetter::V(c) => write!(f, "v{c}"),
            UvLetter::VInv(c) => write!(f, "v{c}^-1"),
        }
    }
}

/// Two braided `(u, v)` copies, copy 1 left of copy 2:
///
/// ```text
/// v_i u_i    = u_i v_i - ih v_i^2          v_i^-1 u_i = u_i v_i^-1 + ih
/// u_2 u_1    = u_1 u_2 - ih u_1 v_2 + ih v_1 u_2 - h^2 v_1 v_2
/// v_2 u_1    = u_1 v_2 - ih v_1 v_2        v_2^-1 u_1 = u_1 v_2^-1 + ih v_1 v_2^-1
/// u_2 v_1    = v_1 u_2 + ih v_1 v_2        u_2 v_1^-1 = v_1^-1 u_2 - ih v_1^-1 v_2
/// ```
///
/// and all `v` letters commute.
#[derive(Clone, Copy, Debug, Default)]
pub struct UvRules;

impl RewriteSystem for UvRules {
    type L = UvLetter;

    fn reduce_pair(&self, a: UvLetter, b: UvLetter) -> Option<Combination<UvLetter>> {
        use UvLetter::*;
        let ih = Scalar::ih();
        let t = |c: Scalar, w: &[UvLetter]| (c, w.to_vec());
        let one = Scalar::one;
        let terms = match (a, b) {
            (V(p), VInv(q)) | (VInv(p), V(q)) if p == q => vec![t(one(), &[])],
            _ if a.rank() <= b.rank() => return None,
            (V(p), U(q)) if p == q => vec![t(one(), &[b, a]), t(-ih, &[a, a])],
            (VInv(p), U(q)) if p == q => vec![t(one(), &[b, a]), t(ih, &[])],
            (U(n), U(m)) => vec![
                t(one(), &[b, a]),
                t(-&ih, &[U(m), V(n)]),
                t(ih, &[V(m), U(n)]),
                t(Scalar::term(-1, 0, 2), &[V(m), V(n)]),
            ],
            (V(n), U(m)) => vec![t(one(), &[b, a]), t(-ih, &[V(m), V(n)])],
            (VInv(n), U(m)) => vec![t(one(), &[b, a]), t(ih, &[V(m), VInv(n)])],
            (U(n), V(m)) => vec![t(one(), &[b, a]), t(ih, &[V(m), V(n)])],
            (U(n), VInv(m)) => vec![t(one(), &[b, a]), t(-ih, &[VInv(m), V(n)])],
            _ => {
                debug_assert!(a.copy() != b.copy());
                vec![t(one(), &[b, a])]
            }
        };
        Some(Combination::from_terms(terms))
    }
}

/// Letter of `Fun ⊗ P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mix<L> {
    F(FunLetter),
    P(L),
}

impl<L: fmt::Display> fmt::Display for Mix<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mix::F(l) => write!(f, "{l}"),
            Mix::P(l) => write!(f, "{l}"),
        }
    }
}

/// Rules of `Fun ⊗ P` given the rules of `P`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MixedRules<R>(pub R);

fn lift<M: Letter, L: Letter>(c: &Combination<L>, f: impl Fn(L) -> M) -> Combination<M> {
    c.map_letters(|l| Combination::letter(f(l)))
}

impl<R: RewriteSystem> RewriteSystem for MixedRules<R> {
    type L = Mix<R::L>;

    fn reduce_pair(&self, a: Self::L, b: Self::L) -> Option<Combination<Self::L>> {
        match (a, b) {
            (Mix::F(x), Mix::F(y)) => FunRules.reduce_pair(x, y).map(|c| lift(&c, Mix::F)),
            (Mix::P(x), Mix::P(y)) => self.0.reduce_pair(x, y).map(|c| lift(&c, Mix::P)),
            (Mix::P(_), Mix::F(_)) => Some(Combination::word(vec![b, a])),
            (Mix::F(_), Mix::P(_)) => None,
        }
    }
}

/// Every relation of `P` among the letters in `letters` is mapped to zero by
/// the coaction `delta` (given on generators). Returns one report entry per
/// relation.
fn coaction_preserves<R: RewriteSystem + Copy>(
    rules: R,
    letters: &[R::L],
    delta: impl Fn(R::L) -> Combination<Mix<R::L>>,
    label: &str,
    rep: &mut Report,
) where
    R::L: fmt::Display,
{
    let mixed = Normalizer::new(MixedRules(rules));
    for &a in letters {
        for &b in letters {
            let Some(rhs) = rules.reduce_pair(a, b) else { continue };
            let rel = Combination::word(vec![a, b]).sub(&rhs);
            let image = mixed.normal_form(&rel.map_letters(&delta));
            rep.zero(SUITE, format!("{label}: coaction preserves {a}{b} relation"), &image, image.is_zero());
        }
    }
}

/// Linear coaction `w -> A⊗w + B⊗w'`, `w' -> C⊗w + D⊗w'`.
fn linear_coaction<L: Letter>(first: L, second: L) -> impl Fn(L) -> Combination<Mix<L>> {
    move |l| {
        let (p, q) = if l == first {
            (FunLetter::A, FunLetter::B)
        } else if l == second {
            (FunLetter::C, FunLetter::D)
        } else {
            panic!("coaction is only defined on the linear generators");
        };
        Combination::from_terms([
            (Scalar::one(), vec![Mix::F(p), Mix::P(first)]),
            (Scalar::one(), vec![Mix::F(q), Mix::P(second)]),
        ])
    }
}

/// Exact checks of the `(r, s)` coaction, the change to `(x, y)`, and the
/// braided `z_1, z_2` relation.
pub fn coaction_check_rs() -> Report {
    use RsLetter::*;
    let mut rep = Report::new();
    let rs = Normalizer::new(RsRules);
    let w = |l: &[RsLetter]| Combination::word(l.to_vec());

    // x = r s^-1 + ih/2, y = s^-2 satisfy [x, y] = -2ih y
    let half_ih = &Scalar::ih() * &Scalar::ratio(1, 2);
    let x = w(&[R, SInv]).add(&Combination::scalar(half_ih));
    let y = w(&[SInv, SInv]);
    let comm = rs.normal_form(&x.concat(&y).sub(&y.concat(&x)));
    let target = rs.normal_form(&y).scale(&Scalar::term(0, -2, 1));
    let r = comm.sub(&target);
    rep.zero(SUITE, "rs plane: [x, y] = -2ih y for x = r s^-1 + ih/2, y = s^-2", &r, r.is_zero());

    // [Δr, Δs] - ih (Δs)^2 = 0
    let delta = linear_coaction(R, S);
    let mixed = Normalizer::new(MixedRules(RsRules));
    let dr = delta(R);
    let ds = delta(S);
    let expr = dr.commutator(&ds).sub(&ds.concat(&ds).scale(&Scalar::ih()));
    let r = mixed.normal_form(&expr);
    rep.zero(SUITE, "rs coaction: [Δr, Δs] - ih (Δs)^2 = 0", &r, r.is_zero());
    coaction_preserves(RsRules, &[R, S], delta, "rs plane", &mut rep);

    // braided copies
    use UvLetter::*;
    let uv = Normalizer::new(UvRules);
    let z = |c: u8| Combination::word(vec![U(c), VInv(c)]);
    let (z1, z2) = (z(1), z(2));
    let lhs = uv.normal_form(&z1.commutator(&z2));
    let rhs = uv.normal_form(&z1.sub(&z2).scale(&Scalar::term(0, 2, 1)));
    let r = lhs.sub(&rhs);
    rep.zero(SUITE, "braided copies: [z1, z2] = 2ih (z1 - z2)", &r, r.is_zero());

    let gens = [U(1), V(1), U(2), V(2)];
    let delta_uv = move |l: UvLetter| match l {
        U(c) | V(c) => linear_coaction(U(c), V(c))(l),
        VInv(_) => panic!("coaction checked on polynomial generators only"),
    };
    coaction_preserves(UvRules, &gens, delta_uv, "braided copies", &mut rep);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coaction_checks_pass() {
        let r = coaction_check_rs();
        assert!(r.all_passed(), "{r}");
        assert!(r.len() >= 6);
    }
}
