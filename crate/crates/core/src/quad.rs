//! Composite Gauss-Legendre quadrature and an averaging accelerator for
//! alternating panel sums.

use std::num::NonZeroUsize;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    pub fn new(points: usize) -> Self {
        let n = NonZeroUsize::new(points.max(1)).expect("nonzero");
        let gl = GaussLegendre::new(n);
        Self { pairs: gl.as_node_weight_pairs().to_vec() }
    }

    /// Shared 20-point rule.
    pub fn standard() -> &'static Rule {
        static RULE: OnceLock<Rule> = OnceLock::new();
        RULE.get_or_init(|| Rule::new(20))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        self.pairs.iter().map(move |&(x, w)| (c + r * x, r * w))
    }

    /// Integral over one panel.
    pub fn panel<T>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T
    where
        T: Add<Output = T> + Mul<f64, Output = T> + Default,
    {
        self.mapped(a, b).fold(T::default(), |acc, (x, w)| acc + f(x) * w)
    }

    /// Integral over `[a, b]` split into `panels` equal panels.
    pub fn composite<T>(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> T) -> T
    where
        T: Add<Output = T> + Mul<f64, Output = T> + Default,
    {
        let n = panels.max(1);
        let w = (b - a) / n as f64;
        (0..n).fold(T::default(), |acc, i| {
            let lo = a + w * i as f64;
            acc + self.panel(lo, lo + w, &mut f)
        })
    }
}

/// Limit of the series whose partial sums are `partial`, estimated by
/// averaging adjacent partial sums `levels` times. This is linear in the
/// terms, so sums of integrands accelerate to sums of limits.
pub fn averaged_limit<T>(partial: &[T], levels: usize) -> T
where
    T: Add<Output = T> + Mul<f64, Output = T> + Copy,
{
    assert!(!partial.is_empty(), "no partial sums");
    let mut row = partial.to_vec();
    for _ in 0..levels.min(partial.len() - 1) {
        row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    *row.last().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = Rule::new(5);
        let v: f64 = r.panel(0.0, 2.0, |x| x.powi(9));
        assert!((v - 102.4).abs() < 1e-12);
    }

    #[test]
    fn composite_gaussian() {
        let v: f64 = Rule::standard().composite(-10.0, 10.0, 8, |x| (-x * x).exp());
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn averaging_sums_alternating_series() {
        // 1 - 1/2 + 1/3 - ... = ln 2
        let mut s = 0.0;
        let partial: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        assert!((averaged_limit(&partial, 12) - 2f64.ln()).abs() < 1e-9);
    }
}
