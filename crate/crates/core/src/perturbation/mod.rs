//! Exact Rayleigh-Schrodinger coefficients for the ground state of
//! `H = p^2 + x^2/4 + g x^3`.
//!
//! Writing `psi = exp(-x^2/4) * sum_k g^k P_k(x)` turns the eigenvalue
//! problem into a triangular recursion for the polynomials `P_k`:
//!
//! ```text
//! -P_k'' + x P_k' + x^3 P_{k-1} = sum_{j=1..k} E_j P_{k-j},   P_k(0) = 0 (k >= 1)
//! ```
//!
//! which is solved coefficient by coefficient from degree `3k` down to 1; the
//! constant term then fixes `E_k = -2 [x^2] P_k`. With `g = i*lambda` the
//! physical series is `E - 1/2 = sum_n b_n lambda^(2n)` where
//! `b_n = (-1)^n E_{2n}`.

mod cache;

pub use cache::{read_cache, write_cache, CACHE_MAGIC};

use std::path::PathBuf;

use dashu::base::Sign;
use dashu::integer::IBig;
use dashu::rational::RBig;
use rayon::prelude::*;
use thiserror::Error;

/// Identifier written into cache headers.
pub const HAMILTONIAN_TAG: &str = "p2+x2/4+i*l*x3";

/// Default ceiling on the number of `b_n` computed in one call.
pub const DEFAULT_ORDER_CEILING: usize = 200;

#[derive(Debug, Error)]
pub enum PerturbationError {
    #[error("requested order {requested} exceeds the configured ceiling {ceiling}")]
    OrderLimit { requested: usize, ceiling: usize },
    #[error("odd-order energy correction E_{order} is nonzero")]
    OddOrderNonzero { order: usize },
    #[error("coefficient b_{n} is not an integer")]
    NonIntegral { n: usize },
    #[error("sign alternation broken at n = {n}")]
    SignAlternation { n: usize },
    #[error("coefficient b_{n} is zero")]
    ZeroCoefficient { n: usize },
    #[error("cache {path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("cache {path} is tagged {found:?}, expected {expected:?}")]
    HeaderMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Exact coefficients `b_1..b_N` of `E(lambda) - 1/2 = sum b_n lambda^(2n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationSeries {
    coefficients: Vec<IBig>,
    hamiltonian_tag: String,
}

impl PerturbationSeries {
    /// Wraps a list of `b_1..b_N`, checking the sign pattern
    /// `sign(b_n) = (-1)^(n+1)`.
    pub fn new(coefficients: Vec<IBig>) -> Result<Self, PerturbationError> {
        validate_signs(&coefficients)?;
        Ok(Self {
            coefficients,
            hamiltonian_tag: HAMILTONIAN_TAG.to_string(),
        })
    }

    pub fn max_order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[IBig] {
        &self.coefficients
    }

    /// `b_n`, 1-based.
    pub fn b(&self, n: usize) -> Option<&IBig> {
        n.checked_sub(1).and_then(|i| self.coefficients.get(i))
    }

    /// Unperturbed energy `E_0 = 1/2`.
    pub fn e0(&self) -> RBig {
        RBig::from_parts(IBig::ONE, 2u8.into())
    }

    pub fn hamiltonian_tag(&self) -> &str {
        &self.hamiltonian_tag
    }

    /// Coefficients of the once-subtracted series `[E - 1/2]/lambda^2`
    /// in powers of `t = lambda^2`, i.e. `c_n = b_{n+1}`.
    pub fn subtracted_series(&self) -> Vec<RBig> {
        self.coefficients.iter().cloned().map(RBig::from).collect()
    }

    /// Keeps only the first `order` coefficients.
    pub fn truncated(&self, order: usize) -> Self {
        Self {
            coefficients: self.coefficients[..order.min(self.coefficients.len())].to_vec(),
            hamiltonian_tag: self.hamiltonian_tag.clone(),
        }
    }
}

fn validate_signs(coefficients: &[IBig]) -> Result<(), PerturbationError> {
    for (i, b) in coefficients.iter().enumerate() {
        let n = i + 1;
        let expected = if n % 2 == 1 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        if *b == IBig::ZERO {
            return Err(PerturbationError::ZeroCoefficient { n });
        }
        if b.sign() != expected {
            return Err(PerturbationError::SignAlternation { n });
        }
    }
    Ok(())
}

/// Polynomials `P_0..P_k` and corrections `E_1..E_k` of the recursion in
/// powers of the cubic coupling `g`.
#[derive(Clone, Debug)]
pub struct RecursionState {
    /// `polynomials[k][m]` is the coefficient of `x^m` in `P_k`; length `3k + 1`.
    polynomials: Vec<Vec<RBig>>,
    /// `energies[k]` is `E_k`; `energies[0]` is the unperturbed `1/2`.
    energies: Vec<RBig>,
}

impl Default for RecursionState {
    fn default() -> Self {
        Self::new()
    }
}

impl RecursionState {
    pub fn new() -> Self {
        Self {
            polynomials: vec![vec![RBig::ONE]],
            energies: vec![RBig::from_parts(IBig::ONE, 2u8.into())],
        }
    }

    /// Highest order computed so far.
    pub fn order(&self) -> usize {
        self.polynomials.len() - 1
    }

    pub fn polynomial(&self, k: usize) -> Option<&[RBig]> {
        self.polynomials.get(k).map(Vec::as_slice)
    }

    /// `E_k` for `k >= 1` (and `E_0 = 1/2`).
    pub fn energy(&self, k: usize) -> Option<&RBig> {
        self.energies.get(k)
    }

    /// Computes `P_{k}` and `E_{k}` for `k = order() + 1`.
    pub fn advance(&mut self) {
        let k = self.order() + 1;
        let degree = 3 * k;
        let previous = &self.polynomials[k - 1];
        let polynomials = &self.polynomials;
        let energies = &self.energies;

        // Everything on the right except the (m+2)(m+1) a_{k,m+2} term, which
        // couples the unknowns and is handled in the descending sweep.
        let sources: Vec<RBig> = (0..=degree)
            .into_par_iter()
            .map(|m| {
                let mut acc = RBig::ZERO;
                if m >= 3 {
                    if let Some(a) = previous.get(m - 3) {
                        acc -= a;
                    }
                }
                for j in 1..k {
                    let e = &energies[j];
                    if e.is_zero() {
                        continue;
                    }
                    if let Some(a) = polynomials[k - j].get(m) {
                        if !a.is_zero() {
                            acc += e * a;
                        }
                    }
                }
                acc
            })
            .collect();

        let mut coeffs = vec![RBig::ZERO; degree + 1];
        for m in (1..=degree).rev() {
            let mut value = sources[m].clone();
            if m + 2 <= degree {
                let factor = RBig::from(((m + 2) * (m + 1)) as u64);
                value += factor * &coeffs[m + 2];
            }
            coeffs[m] = value / RBig::from(m as u64);
        }
        // Constant term: -2 a_{k,2} = E_k (P_j(0) = 0 for j >= 1).
        let energy = RBig::from(-2) * &coeffs[2];
        self.polynomials.push(coeffs);
        self.energies.push(energy);
    }
}

/// Limits guarding against runaway requests; coefficient sizes grow
/// super-factorially with the order.
#[derive(Clone, Copy, Debug)]
pub struct RecursionLimits {
    pub order_ceiling: usize,
}

impl Default for RecursionLimits {
    fn default() -> Self {
        Self {
            order_ceiling: DEFAULT_ORDER_CEILING,
        }
    }
}

/// Computes `b_1..b_{max_order}` with the default order ceiling.
pub fn compute_coefficients(max_order: usize) -> Result<PerturbationSeries, PerturbationError> {
    compute_coefficients_with(max_order, RecursionLimits::default())
}

pub fn compute_coefficients_with(
    max_order: usize,
    limits: RecursionLimits,
) -> Result<PerturbationSeries, PerturbationError> {
    if max_order > limits.order_ceiling {
        return Err(PerturbationError::OrderLimit {
            requested: max_order,
            ceiling: limits.order_ceiling,
        });
    }
    let mut state = RecursionState::new();
    let mut coefficients = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        state.advance();
        let odd = state.order();
        if !state.energies[odd].is_zero() {
            return Err(PerturbationError::OddOrderNonzero { order: odd });
        }
        state.advance();
        let even = &state.energies[state.order()];
        if !even.is_int() {
            return Err(PerturbationError::NonIntegral { n });
        }
        let mut b = even.numerator().clone();
        if n % 2 == 1 {
            b = -b;
        }
        coefficients.push(b);
    }
    PerturbationSeries::new(coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_order_is_empty_with_half() {
        let series = compute_coefficients(0).unwrap();
        assert!(series.coefficients().is_empty());
        assert_eq!(series.e0(), RBig::from_parts(IBig::ONE, 2u8.into()));
        assert_eq!(series.hamiltonian_tag(), HAMILTONIAN_TAG);
    }

    #[test]
    fn first_two_coefficients() {
        let series = compute_coefficients(2).unwrap();
        assert_eq!(series.coefficients(), &[IBig::from(11), IBig::from(-930)]);
    }

    #[test]
    fn polynomial_degrees_and_parity() {
        let mut state = RecursionState::new();
        for _ in 0..9 {
            state.advance();
        }
        for k in 1..=9 {
            let p = state.polynomial(k).unwrap();
            assert_eq!(p.len(), 3 * k + 1);
            assert!(!p[3 * k].is_zero(), "P_{k} must have degree exactly 3k");
            assert!(p[0].is_zero());
            // P_k has the parity of k.
            for (m, a) in p.iter().enumerate() {
                if (m + k) % 2 == 1 {
                    assert!(a.is_zero(), "P_{k} has a wrong-parity term x^{m}");
                }
            }
        }
        // E_1 = 0, E_2 = -11 for the cubic coupling g.
        assert!(state.energy(1).unwrap().is_zero());
        assert_eq!(state.energy(2).unwrap(), &RBig::from(-11));
    }

    #[test]
    fn order_ceiling_is_enforced() {
        let err = compute_coefficients_with(5, RecursionLimits { order_ceiling: 4 }).unwrap_err();
        assert!(matches!(
            err,
            PerturbationError::OrderLimit {
                requested: 5,
                ceiling: 4
            }
        ));
    }

    #[test]
    fn series_rejects_broken_alternation() {
        let err = PerturbationSeries::new(vec![IBig::from(11), IBig::from(930)]).unwrap_err();
        assert!(matches!(err, PerturbationError::SignAlternation { n: 2 }));
        let err = PerturbationSeries::new(vec![IBig::from(-11)]).unwrap_err();
        assert!(matches!(err, PerturbationError::SignAlternation { n: 1 }));
    }

    #[test]
    fn truncation_keeps_prefix() {
        let series = compute_coefficients(6).unwrap();
        let short = series.truncated(3);
        assert_eq!(short.coefficients(), &series.coefficients()[..3]);
        assert_eq!(series.b(1), Some(&IBig::from(11)));
        assert_eq!(series.b(0), None);
        assert_eq!(series.b(7), None);
    }
}
