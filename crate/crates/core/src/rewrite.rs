//! Word rewriting over a fixed alphabet with [`Scalar`] coefficients.
//!
//! Every algebra in the crate is presented by ordering rules on adjacent
//! letters: a pair `a b` that is out of order is replaced by a linear
//! combination of words. A word with no reducible adjacent pair is normal.
//!
//! Three independent reduction routes are provided. The memoized
//! right-insertion [`Normalizer`] is the fast path used for products; the
//! [`Strategy::Leftmost`] and [`Strategy::Rightmost`] reducers rewrite whole
//! words naively and exist so confluence can be checked by comparison.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug};
use std::hash::Hash;

use crate::scalar::Scalar;

/// A letter of some presented algebra.
pub trait Letter: Copy + Ord + Hash + Debug {}
impl<T: Copy + Ord + Hash + Debug> Letter for T {}

/// Formal linear combination of words (the free algebra).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Combination<L: Letter> {
    terms: BTreeMap<Vec<L>, Scalar>,
}

impl<L: Letter> Default for Combination<L> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<L: Letter> Combination<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Vec<L>) -> Self {
        let mut c = Self::zero();
        c.add_term(w, Scalar::one());
        c
    }

    pub fn letter(l: L) -> Self {
        Self::word(vec![l])
    }

    pub fn scalar(s: Scalar) -> Self {
        let mut c = Self::zero();
        c.add_term(Vec::new(), s);
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Scalar, Vec<L>)>) -> Self {
        let mut c = Self::zero();
        for (s, w) in terms {
            c.add_term(w, s);
        }
        c
    }

    pub fn add_term(&mut self, w: Vec<L>, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &s;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, s);
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

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<L>, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Vec<L>, Scalar)> {
        self.terms.into_iter()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (c * s, w.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    /// Free (concatenation) product.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    /// Free commutator `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.concat(other).sub(&other.concat(self))
    }

    /// Apply a letter map that reverses word order and conjugates
    /// coefficients: the shape of every star structure in the crate.
    pub fn antilinear_reverse(&self, f: impl Fn(L) -> Combination<L>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Combination::scalar(c.conj());
            for l in w.iter().rev() {
                acc = acc.concat(&f(*l));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Extend a letter map multiplicatively (free algebra homomorphism).
    pub fn map_letters<M: Letter>(&self, f: impl Fn(L) -> Combination<M>) -> Combination<M> {
        let mut out = Combination::zero();
        for (w, c) in &self.terms {
            let mut acc = Combination::scalar(c.clone());
            for l in w {
                acc = acc.concat(&f(*l));
            }
            out = out.add(&acc);
        }
        out
    }
}

impl<L: Letter + fmt::Display> fmt::Display for Combination<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let word: Vec<String> = w.iter().map(|l| l.to_string()).collect();
            match (word.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{}", c.fmt_factor())?,
                (false, true) => write!(f, "{}", word.join("*"))?,
                (false, false) => {
                    let fac = c.fmt_factor();
                    if fac.starts_with('(') {
                        write!(f, "{fac}*{}", word.join("*"))?
                    } else {
                        write!(f, "({fac})*{}", word.join("*"))?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ordering rules on adjacent letters.
pub trait RewriteSystem {
    type L: Letter;

    /// Replacement for the adjacent pair `a b`, or `None` when the pair is
    /// already in normal order. Every replacement must decrease the
    /// system's documented termination measure.
    fn reduce_pair(&self, a: Self::L, b: Self::L) -> Option<Combination<Self::L>>;

    fn is_normal(&self, w: &[Self::L]) -> bool {
        w.windows(2).all(|p| self.reduce_pair(p[0], p[1]).is_none())
    }
}

/// Position choice for whole-word reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Guard against a rule set that fails to terminate.
const STEP_LIMIT: usize = 50_000_000;

/// Reduce by rewriting one redex at a time at the chosen end of each word.
pub fn reduce<R: RewriteSystem>(
    sys: &R,
    input: &Combination<R::L>,
    strategy: Strategy,
) -> Combination<R::L> {
    // keyed by (length, word) so the longest word is always popped first
    let mut pending: BTreeMap<(usize, Vec<R::L>), Scalar> =
        input.terms.iter().map(|(w, c)| ((w.len(), w.clone()), c.clone())).collect();
    let mut done = Combination::zero();
    let mut steps = 0usize;
    while let Some(((_, w), c)) = pending.pop_last() {
        steps += 1;
        assert!(steps < STEP_LIMIT, "rewriting did not terminate");
        let positions = 0..w.len().saturating_sub(1);
        let found = match strategy {
            Strategy::Leftmost => positions
                .into_iter()
                .find_map(|i| sys.reduce_pair(w[i], w[i + 1]).map(|r| (i, r))),
            Strategy::Rightmost => positions
                .rev()
                .find_map(|i| sys.reduce_pair(w[i], w[i + 1]).map(|r| (i, r))),
        };
        match found {
            None => done.add_term(w, c),
            Some((i, rep)) => {
                for (mid, cm) in rep.iter() {
                    let mut nw = Vec::with_capacity(w.len() + mid.len());
                    nw.extend_from_slice(&w[..i]);
                    nw.extend_from_slice(mid);
                    nw.extend_from_slice(&w[i + 2..]);
                    let coeff = &c * cm;
                    let nw = (nw.len(), nw);
                    match pending.get_mut(&nw) {
                        Some(v) => {
                            *v += &coeff;
                            if v.is_zero() {
                                pending.remove(&nw);
                            }
                        }
                        None => {
                            if !coeff.is_zero() {
                                pending.insert(nw, coeff);
                            }
                        }
                    }
                }
            }
        }
    }
    done
}

/// Memoized normal-form engine: inserts letters one at a time on the right
/// of an already normal word.
type Cache<L> = RefCell<HashMap<(Vec<L>, L), Combination<L>>>;

pub struct Normalizer<R: RewriteSystem> {
    sys: R,
    cache: Cache<R::L>,
}

impl<R: RewriteSystem> Normalizer<R> {
    pub fn new(sys: R) -> Self {
        Normalizer { sys, cache: RefCell::new(HashMap::new()) }
    }

    pub fn system(&self) -> &R {
        &self.sys
    }

    /// Normal form of `w · l` for a normal word `w`.
    pub fn append_letter(&self, w: &[R::L], l: R::L) -> Combination<R::L> {
        let Some(&last) = w.last() else {
            return Combination::letter(l);
        };
        let Some(rep) = self.sys.reduce_pair(last, l) else {
            let mut nw = w.to_vec();
            nw.push(l);
            return Combination::word(nw);
        };
        let key = (w.to_vec(), l);
        if let Some(hit) = self.cache.borrow().get(&key) {
            return hit.clone();
        }
        let prefix = &w[..w.len() - 1];
        let mut out = Combination::zero();
        for (mid, c) in rep.iter() {
            let part = self.append_word(&Combination::word(prefix.to_vec()), mid);
            out = out.add(&part.scale(c));
        }
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    /// Normal form of `base · word` for a normal `base`.
    pub fn append_word(&self, base: &Combination<R::L>, word: &[R::L]) -> Combination<R::L> {
        let mut acc = base.clone();
        for &l in word {
            let mut next = Combination::zero();
            for (w, c) in acc.iter() {
                next = next.add(&self.append_letter(w, l).scale(c));
            }
            acc = next;
        }
        acc
    }

    pub fn normal_form(&self, c: &Combination<R::L>) -> Combination<R::L> {
        let mut out = Combination::zero();
        for (w, s) in c.iter() {
            out = out.add(&self.append_word(&Combination::one(), w).scale(s));
        }
        out
    }

    /// Product of two normal combinations.
    pub fn mul(&self, a: &Combination<R::L>, b: &Combination<R::L>) -> Combination<R::L> {
        let mut out = Combination::zero();
        for (wb, cb) in b.iter() {
            out = out.add(&self.append_word(a, wb).scale(cb));
        }
        out
    }

    pub fn clear_cache(&self) {
        self.cache.borrow_mut().clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Weyl algebra `b a = a b + 1` as a minimal system.
    struct Weyl;
    impl RewriteSystem for Weyl {
        type L = u8;
        fn reduce_pair(&self, a: u8, b: u8) -> Option<Combination<u8>> {
            (a == 1 && b == 0).then(|| {
                Combination::from_terms([(Scalar::one(), vec![0, 1]), (Scalar::one(), vec![])])
            })
        }
    }

    #[test]
    fn strategies_agree_on_weyl() {
        let w = Combination::word(vec![1, 1, 0, 1, 0, 0]);
        let a = reduce(&Weyl, &w, Strategy::Leftmost);
        let b = reduce(&Weyl, &w, Strategy::Rightmost);
        let c = Normalizer::new(Weyl).normal_form(&w);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.iter().all(|(w, _)| Weyl.is_normal(w)));
    }

    #[test]
    fn weyl_ba_squared() {
        // b a^2 = a^2 b + 2a
        let n = Normalizer::new(Weyl);
        let r = n.normal_form(&Combination::word(vec![1, 0, 0]));
        let expect = Combination::from_terms([
            (Scalar::one(), vec![0, 0, 1]),
            (Scalar::int(2), vec![0]),
        ]);
        assert_eq!(r, expect);
    }
}
