//! The fundamental braiding matrix `R^{ab}_{cd}` (row `2a+b`, column `2c+d`,
//! index 0 for `r`/`ξ` and 1 for `s`/`η`).

use crate::hopf::coaction::{RsLetter, RsRules};
use crate::report::Report;
use crate::rewrite::{Combination, Normalizer};
use crate::scalar::Scalar;

const SUITE: &str = "rmatrix";

/// Dense square matrix over [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![Scalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let n = self.n * o.n;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        out.set(i * o.n + k, j * o.n + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Entries that differ from `o`, rendered for witnesses.
    pub fn diff_witness(&self, o: &Self) -> Option<String> {
        let bad: Vec<String> = (0..self.n * self.n)
            .filter(|&k| self.data[k] != o.data[k])
            .map(|k| format!("[{},{}]: {} vs {}", k / self.n, k % self.n, self.data[k], o.data[k]))
            .collect();
        (!bad.is_empty()).then(|| bad.join("; "))
    }
}

/// The triangular braiding matrix of the h-deformation.
pub fn r_hat() -> Matrix {
    let ih = Scalar::ih();
    let h2 = Scalar::term(-1, 0, 2);
    let o = Scalar::one;
    let z = Scalar::zero;
    let rows = [
        [o(), -&ih, ih.clone(), h2],
        [z(), z(), o(), ih.clone()],
        [z(), o(), z(), -&ih],
        [z(), z(), z(), o()],
    ];
    let mut m = Matrix::zeros(4);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// `r^a ξ^b = ξ^b r^a + [r^a, ξ^b]` from the explicit commutators, as a
/// coefficient vector over `ξ^c r^d`.
fn explicit_r_xi(a: usize, b: usize) -> [Scalar; 4] {
    let ih = Scalar::ih();
    let o = Scalar::one;
    let z = Scalar::zero;
    match (a, b) {
        // [r, ξ] = -ih ξ s + ih η r - h^2 η s
        (0, 0) => [o(), -&ih, ih, Scalar::term(-1, 0, 2)],
        // [r, η] = ih η s
        (0, 1) => [z(), z(), o(), ih],
        // [s, ξ] = -ih η s
        (1, 0) => [z(), o(), z(), -ih],
        // [s, η] = 0
        _ => [z(), z(), z(), o()],
    }
}

/// `ξ^a ξ^b` as a multiple of `ξ η` using `ξ^2 = ih ξη`, `ηξ = -ξη`, `η^2 = 0`.
fn two_form_value(a: usize, b: usize) -> Scalar {
    match (a, b) {
        (0, 0) => Scalar::ih(),
        (0, 1) => Scalar::one(),
        (1, 0) => Scalar::int(-1),
        _ => Scalar::zero(),
    }
}

pub fn rmatrix_checks() -> Report {
    let mut rep = Report::new();
    let r = r_hat();
    let id4 = Matrix::identity(4);
    rep.exact(SUITE, "R^2 = 1", r.mul(&r).diff_witness(&id4));

    let id2 = Matrix::identity(2);
    let r12 = r.kron(&id2);
    let r23 = id2.kron(&r);
    let lhs = r12.mul(&r23).mul(&r12);
    let rhs = r23.mul(&r12).mul(&r23);
    rep.exact(SUITE, "braid equation R12 R23 R12 = R23 R12 R23", lhs.diff_witness(&rhs));

    // r^a r^b = R^{ab}_{cd} r^c r^d in the (r, s) plane
    let rs = Normalizer::new(RsRules);
    let coord = [RsLetter::R, RsLetter::S];
    for a in 0..2 {
        for b in 0..2 {
            let mut rel = Combination::word(vec![coord[a], coord[b]]);
            for c in 0..2 {
                for d in 0..2 {
                    let k = r.get(2 * a + b, 2 * c + d);
                    rel = rel.sub(&Combination::word(vec![coord[c], coord[d]]).scale(k));
                }
            }
            let res = rs.normal_form(&rel);
            rep.zero(SUITE, format!("coordinate relation ({a},{b}) from R"), &res, res.is_zero());
        }
    }

    for a in 0..2 {
        for b in 0..2 {
            let explicit = explicit_r_xi(a, b);
            let bad: Vec<String> = (0..4)
                .filter(|&k| &explicit[k] != r.get(2 * a + b, k))
                .map(|k| format!("coefficient {k}: {} vs {}", explicit[k], r.get(2 * a + b, k)))
                .collect();
            rep.exact(
                SUITE,
                format!("coordinate-differential commutator ({a},{b}) from R"),
                (!bad.is_empty()).then(|| bad.join("; ")),
            );
            let mut total = two_form_value(a, b);
            for c in 0..2 {
                for d in 0..2 {
                    total += &(r.get(2 * a + b, 2 * c + d) * &two_form_value(c, d));
                }
            }
            rep.zero(SUITE, format!("differential quadratic relation ({a},{b}) from -R"), &total, total.is_zero());
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rmatrix_checks_pass() {
        let r = rmatrix_checks();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.len(), 14);
    }

    #[test]
    fn a_perturbed_matrix_fails() {
        let mut r = r_hat();
        r.set(0, 3, Scalar::zero());
        assert_ne!(r.mul(&r), Matrix::identity(4));
    }
}
