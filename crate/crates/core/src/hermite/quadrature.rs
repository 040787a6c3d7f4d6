use serde::{Deserialize, Serialize};

use super::functions::hermite_functions_at;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureKind {
    /// Gauss-Hermite rule for the weight `e^{-x^2}`.
    GaussHermite,
    /// Uniform trapezoid rule on `[-L, L]`.
    Trapezoid,
}

/// One-dimensional quadrature rule.
///
/// `weights` integrate against the rule's weight function (`e^{-x^2}` for
/// Gauss-Hermite, 1 for trapezoid). `scaled_weights` integrate plain functions:
/// for Gauss-Hermite they are `w_i e^{x_i^2}`, which stay representable at
/// orders where `w_i` itself underflows.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i g(x_i)`, integrating `g` against the rule's weight.
    pub fn integrate_weighted(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    /// `sum_i (w_i / weight(x_i)) F(x_i)`, integrating `F` directly.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Number of eigenvalues of the Jacobi matrix of `e^{-x^2}` (size `order`) below `x`.
fn sturm_count(order: usize, x: f64) -> usize {
    let mut q = -x;
    let mut count = usize::from(q < 0.0);
    for k in 1..order {
        let b2 = k as f64 / 2.0;
        let qq = if q == 0.0 {
            f64::EPSILON * (1.0 + x.abs())
        } else {
            q
        };
        q = -x - b2 / qq;
        count += usize::from(q < 0.0);
    }
    count
}

/// Gauss-Hermite rule of the given order for the weight `e^{-x^2}`.
///
/// Nodes are bracketed by Sturm-sequence bisection on the Jacobi matrix and
/// polished by Newton steps on `h_order`; weights come from the Christoffel
/// formula `w_i e^{x_i^2} = 1 / (order * h_{order-1}(x_i)^2)`.
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let n = order;
    let bound = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let half = n / 2;
    // Positive roots are indices (n - half)..n in ascending order.
    let mut positive = Vec::with_capacity(half);
    let mut buf = vec![0.0; n + 1];
    for k in (n - half)..n {
        let (mut lo, mut hi) = (0.0_f64, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(n, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..3 {
            hermite_functions_at(x, &mut buf);
            let value = buf[n];
            let deriv = (2.0 * n as f64).sqrt() * buf[n - 1] - x * value;
            if deriv == 0.0 {
                break;
            }
            let step = value / deriv;
            if !step.is_finite() || (x - step) < lo - 1e-8 || (x - step) > hi + 1e-8 {
                break;
            }
            x -= step;
        }
        positive.push(x);
    }

    let mut nodes = Vec::with_capacity(n);
    nodes.extend(positive.iter().rev().map(|x| -x));
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(positive.iter().copied());

    let mut scaled_weights = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &x in &nodes {
        hermite_functions_at(x, &mut buf[..n]);
        let h = buf[n - 1];
        let sw = 1.0 / (n as f64 * h * h);
        scaled_weights.push(sw);
        weights.push(sw * (-x * x).exp());
    }
    Ok(QuadratureRule {
        kind: QuadratureKind::GaussHermite,
        nodes,
        weights,
        scaled_weights,
    })
}

/// Uniform trapezoid rule with `points` nodes on `[-half_width, half_width]`.
pub fn trapezoid_rule(half_width: f64, points: usize) -> Result<QuadratureRule> {
    if points < 2 {
        return Err(Error::invalid("trapezoid rule needs at least two nodes"));
    }
    let spacing = 2.0 * half_width / (points - 1) as f64;
    let nodes: Vec<f64> = (0..points)
        .map(|i| -half_width + i as f64 * spacing)
        .collect();
    let mut weights = vec![spacing; points];
    weights[0] *= 0.5;
    weights[points - 1] *= 0.5;
    Ok(QuadratureRule {
        kind: QuadratureKind::Trapezoid,
        nodes,
        scaled_weights: weights.clone(),
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_hermite_rule(0), Err(Error::ZeroOrder)));
    }

    #[test]
    fn one_point_rule() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_hermite_rule(2).unwrap();
        let node = 0.5_f64.sqrt();
        assert!((r.nodes[0] + node).abs() < 1e-15);
        assert!((r.nodes[1] - node).abs() < 1e-15);
        for w in &r.weights {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_positive_and_sum_to_sqrt_pi() {
        for order in [3, 10, 57, 200] {
            let r = gauss_hermite_rule(order).unwrap();
            assert!(r.weights.iter().all(|&w| w >= 0.0));
            assert!(r.scaled_weights.iter().all(|&w| w > 0.0));
            let total: f64 = r.weights.iter().sum();
            assert!(
                (total - PI.sqrt()).abs() < 1e-12 * PI.sqrt(),
                "order {order}"
            );
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomial_degree_2m_minus_1() {
        let m = 12;
        let r = gauss_hermite_rule(m).unwrap();
        // int x^{2k} e^{-x^2} = Gamma(k + 1/2)
        let mut gamma = PI.sqrt();
        for k in 0..m {
            let got = r.integrate_weighted(|x| x.powi(2 * k as i32));
            assert!(((got - gamma) / gamma).abs() < 1e-12, "k = {k}");
            gamma *= k as f64 + 0.5;
            let odd = r.integrate_weighted(|x| x.powi(2 * k as i32 + 1));
            assert!(odd.abs() < 1e-10);
        }
    }

    #[test]
    fn high_order_rule_is_finite() {
        let r = gauss_hermite_rule(1100).unwrap();
        assert!(r.nodes.iter().all(|x| x.is_finite()));
        assert!(r.scaled_weights.iter().all(|w| w.is_finite() && *w > 0.0));
        // Orthonormality of h_0 and h_5 through the scaled weights.
        let h0 = |x: f64| super::super::functions::hermite_function(0, x);
        let got = r.integrate(|x| h0(x) * h0(x));
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_basic() {
        let r = trapezoid_rule(1.0, 3).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 0.0, 1.0]);
        assert_eq!(r.weights, vec![0.5, 1.0, 0.5]);
        assert_eq!(r.kind, QuadratureKind::Trapezoid);
    }
}
