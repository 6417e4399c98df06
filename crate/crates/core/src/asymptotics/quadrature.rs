//! Double-precision quadrature: tanh-sinh / exp-sinh (double exponential) and
//! Gauss-Legendre with node doubling.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    DoubleExponential,
    GaussLegendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub scheme: QuadratureScheme,
    /// Upper bound on integrand evaluations at the finest level.
    pub nodes: usize,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            scheme: QuadratureScheme::DoubleExponential,
            nodes: 1000,
            tolerance: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn gauss_legendre() -> Self {
        Self {
            scheme: QuadratureScheme::GaussLegendre,
            ..Self::default()
        }
    }

    pub fn is_valid(&self) -> bool {
        self.tolerance > 0.0 && self.tolerance.is_finite() && self.nodes >= 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub estimated_error: f64,
    /// Nodes used by the accepted level.
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct NotConverged {
    pub nodes: usize,
    pub estimated_error: f64,
    pub value: f64,
}

fn converged(current: f64, previous: f64, tolerance: f64) -> bool {
    (current - previous).abs() <= tolerance * current.abs()
}

/// Integrates `f` over `[0, inf)`.
pub(crate) fn half_line<F>(f: F, config: &QuadratureConfig) -> Result<QuadratureResult, NotConverged>
where
    F: Fn(f64) -> f64,
{
    match config.scheme {
        QuadratureScheme::DoubleExponential => exp_sinh(&f, config),
        QuadratureScheme::GaussLegendre => {
            // u = x / (1 - x) on [0, 1)
            let mapped = |x: f64| {
                let one_minus = 1.0 - x;
                let value = f(x / one_minus) / (one_minus * one_minus);
                if value.is_finite() {
                    value
                } else {
                    0.0
                }
            };
            gauss_legendre(&mapped, 0.0, 1.0, config)
        }
    }
}

/// Integrates `f` over `[a, b]`.
pub(crate) fn interval<F>(
    f: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult, NotConverged>
where
    F: Fn(f64) -> f64,
{
    match config.scheme {
        QuadratureScheme::DoubleExponential => tanh_sinh(&f, a, b, config),
        QuadratureScheme::GaussLegendre => gauss_legendre(&f, a, b, config),
    }
}

/// Trapezoidal sums in the DE variable, halving the step until two levels
/// agree. `term(s)` returns the transformed integrand times the Jacobian.
fn double_exponential<T>(term: T, config: &QuadratureConfig) -> Result<QuadratureResult, NotConverged>
where
    T: Fn(f64) -> f64,
{
    const S_MAX: f64 = 3.5;
    let mut h = 0.5;
    let mut previous: Option<f64> = None;
    loop {
        let k_max = (S_MAX / h).ceil() as i64;
        let nodes = (2 * k_max + 1) as usize;
        let mut sum = 0.0;
        for k in -k_max..=k_max {
            let value = term(k as f64 * h);
            if value.is_finite() {
                sum += value;
            }
        }
        let estimate = sum * h;
        if let Some(prev) = previous {
            let error = (estimate - prev).abs();
            if converged(estimate, prev, config.tolerance) {
                return Ok(QuadratureResult {
                    value: estimate,
                    estimated_error: error,
                    nodes,
                });
            }
            if 2 * nodes > config.nodes {
                return Err(NotConverged {
                    nodes,
                    estimated_error: error,
                    value: estimate,
                });
            }
        }
        previous = Some(estimate);
        h /= 2.0;
    }
}

fn exp_sinh<F>(f: &F, config: &QuadratureConfig) -> Result<QuadratureResult, NotConverged>
where
    F: Fn(f64) -> f64,
{
    double_exponential(
        |s| {
            let u = (FRAC_PI_2 * s.sinh()).exp();
            if u == 0.0 || !u.is_finite() {
                return 0.0;
            }
            f(u) * FRAC_PI_2 * s.cosh() * u
        },
        config,
    )
}

fn tanh_sinh<F>(f: &F, a: f64, b: f64, config: &QuadratureConfig) -> Result<QuadratureResult, NotConverged>
where
    F: Fn(f64) -> f64,
{
    let half = 0.5 * (b - a);
    double_exponential(
        |s| {
            let inner = FRAC_PI_2 * s.sinh();
            let cosh_inner = inner.cosh();
            // distance from the nearer endpoint, computed without cancellation
            let gap = 1.0 / ((inner.abs().exp()) * cosh_inner);
            if gap == 0.0 {
                return 0.0;
            }
            let x = if s < 0.0 {
                a + half * gap
            } else {
                b - half * gap
            };
            let weight = FRAC_PI_2 * s.cosh() / (cosh_inner * cosh_inner);
            f(x) * half * weight
        },
        config,
    )
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub(crate) fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let p_prev = if n == 1 { 1.0 } else { p0 };
            derivative = n as f64 * (x * p - p_prev) / (x * x - 1.0);
            let step = p / derivative;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.push((x, weight));
    }
    rule
}

fn gauss_legendre<F>(f: &F, a: f64, b: f64, config: &QuadratureConfig) -> Result<QuadratureResult, NotConverged>
where
    F: Fn(f64) -> f64,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let apply = |n: usize| -> f64 {
        legendre_rule(n)
            .into_iter()
            .map(|(x, w)| w * f(centre + half * x))
            .sum::<f64>()
            * half
    };
    let mut n = 8;
    let mut previous = apply(n);
    loop {
        let next = 2 * n;
        let estimate = apply(next);
        let error = (estimate - previous).abs();
        if converged(estimate, previous, config.tolerance) {
            return Ok(QuadratureResult {
                value: estimate,
                estimated_error: error,
                nodes: next,
            });
        }
        if 2 * next > config.nodes {
            return Err(NotConverged {
                nodes: next,
                estimated_error: error,
                value: estimate,
            });
        }
        previous = estimate;
        n = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let rule = legendre_rule(5);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 9 is exact for 5 points
        let x8: f64 = rule.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((x8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn exp_sinh_gamma_half_integer() {
        // Gamma(3/2) = sqrt(pi)/2
        let r = half_line(|u| u.sqrt() * (-u).exp(), &QuadratureConfig::default()).unwrap();
        let exact = std::f64::consts::PI.sqrt() / 2.0;
        assert!((r.value - exact).abs() / exact < 1e-12, "{r:?}");
        assert!(r.nodes <= 400);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let r = interval(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn gauss_legendre_smooth_interval() {
        let r = interval(f64::sin, 0.0, std::f64::consts::PI, &QuadratureConfig::gauss_legendre())
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadratureConfig {
            scheme: QuadratureScheme::GaussLegendre,
            nodes: 40,
            tolerance: 1e-14,
        };
        let err = interval(|x| x.abs().sqrt(), -1.0, 1.0, &cfg).unwrap_err();
        assert!(err.nodes <= 40);
        assert!(err.estimated_error > 0.0);
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let r = half_line(|_| 0.0, &QuadratureConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
