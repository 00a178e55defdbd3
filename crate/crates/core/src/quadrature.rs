//! Gauss–Legendre quadrature.
//!
//! Nodes are found by Newton iteration on the three-term Legendre recurrence,
//! which is accurate to a few ulps for the rule sizes used here (up to a few
//! thousand points).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "a quadrature rule needs at least one point");
        let mut nodes = vec![0.0; points];
        let mut weights = vec![0.0; points];
        let n = points as f64;
        // Roots are symmetric; solve for the upper half and mirror.
        for i in 0..points.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(points, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(points, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[points - 1 - i] = -x;
            weights[points - 1 - i] = w;
        }
        if points % 2 == 1 {
            nodes[points / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Maps the rule onto [lo, hi] and yields (x, w) pairs.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        lo: f64,
        hi: f64,
        mut f: F,
    ) -> Complex64 {
        self.mapped(lo, hi).map(|(x, w)| f(x) * w).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A rule and its point-doubled companion, for repeated convergence-checked
/// integrals over many integrands.
#[derive(Clone, Debug)]
pub struct DoublingRule {
    coarse: GaussLegendre,
    fine: GaussLegendre,
}

impl DoublingRule {
    pub fn new(points: usize) -> Self {
        Self {
            coarse: GaussLegendre::new(points),
            fine: GaussLegendre::new(2 * points),
        }
    }

    /// Integrates with both rules; fails if the results differ by more than
    /// `tolerance` (absolute, scaled by max(1, |I|)). Returns the finer value.
    pub fn integrate<F>(
        &self,
        what: &str,
        lo: f64,
        hi: f64,
        tolerance: f64,
        mut f: F,
    ) -> Result<Complex64>
    where
        F: FnMut(f64) -> Complex64,
    {
        let coarse = self.coarse.integrate_complex(lo, hi, &mut f);
        let fine = self.fine.integrate_complex(lo, hi, &mut f);
        let change = (fine - coarse).norm();
        if change > tolerance * fine.norm().max(1.0) {
            return Err(Error::QuadratureNotConverged {
                what: what.to_owned(),
                change,
            });
        }
        Ok(fine)
    }
}

/// Integrates with `points` nodes and again with twice as many; fails if the two
/// results differ by more than `tolerance` (absolute, scaled by max(1, |I|)).
pub fn integrate_converged<F>(
    what: &str,
    lo: f64,
    hi: f64,
    points: usize,
    tolerance: f64,
    f: F,
) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    DoublingRule::new(points).integrate(what, lo, hi, tolerance, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 64, 257, 1024] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(6);
        for k in 0..12 {
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            let want = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((got - want).abs() < 1e-14, "x^{k}: {got} vs {want}");
        }
    }

    #[test]
    fn oscillatory_integrand() {
        let rule = GaussLegendre::new(128);
        let got = rule.integrate(0.0, PI, |x| (40.0 * x).sin().powi(2));
        assert!((got - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn doubling_check_flags_underresolved_rule() {
        let err = integrate_converged("test", 0.0, 1.0, 4, 1e-12, |x| {
            Complex64::new((60.0 * x).cos(), 0.0)
        });
        assert!(matches!(err, Err(Error::QuadratureNotConverged { .. })));
    }
}
