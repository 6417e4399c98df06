//! Exact-rational Padé approximants of the once-subtracted energy
//! `[E(lambda) - 1/2]/lambda^2 = sum_n c_n t^n` with `t = lambda^2` and
//! `c_n = b_{n+1}`.
//!
//! `[N/M]` denotes numerator degree `N` over denominator degree `M`, matching
//! the series through `t^(N+M)`. The ladder collects the diagonal `[N/N]` and
//! the first subdiagonal `[N/N+1]` sequences at one point `t`.

pub mod bareiss;
mod polynomial;
mod stieltjes;

pub use polynomial::RationalPolynomial;
pub use stieltjes::{
    stieltjes_check, ChainVerdict, LadderFamily, LadderIndex, LadderPair, StieltjesReport,
};

use dashu::rational::RBig;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::Fixed;
use crate::perturbation::PerturbationSeries;

/// Default number of fractional digits for reported Padé values.
pub const DEFAULT_PRECISION: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadeError {
    #[error("[{num_degree}/{den_degree}] needs {needed} series coefficients, {available} available")]
    InsufficientCoefficients {
        num_degree: usize,
        den_degree: usize,
        needed: usize,
        available: usize,
    },
    #[error("[{num_degree}/{den_degree}] denominator system is singular and inconsistent (rank {rank})")]
    SingularSystem {
        num_degree: usize,
        den_degree: usize,
        rank: usize,
    },
    #[error("[{num_degree}/{den_degree}] has a pole at t = {t}")]
    Pole {
        num_degree: usize,
        den_degree: usize,
        t: String,
    },
}

/// `numerator(t) / denominator(t)` with `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeApproximant {
    num_degree: usize,
    den_degree: usize,
    numerator: RationalPolynomial,
    denominator: RationalPolynomial,
}

impl PadeApproximant {
    pub fn num_degree(&self) -> usize {
        self.num_degree
    }

    pub fn den_degree(&self) -> usize {
        self.den_degree
    }

    pub fn numerator(&self) -> &RationalPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &RationalPolynomial {
        &self.denominator
    }

    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, t: &RBig) -> Result<RBig, PadeError> {
        let den = self.denominator.evaluate(t);
        if den.is_zero() {
            return Err(PadeError::Pole {
                num_degree: self.num_degree,
                den_degree: self.den_degree,
                t: t.to_string(),
            });
        }
        Ok(self.numerator.evaluate(t) / den)
    }

    /// Value at `t` correctly rounded to `precision` fractional digits.
    pub fn evaluate(&self, t: &RBig, precision: usize) -> Result<Fixed, PadeError> {
        Ok(Fixed::from_rational(&self.evaluate_exact(t)?, precision))
    }

    /// Exact value at the complex point `re + i*im`, as `(re, im)`.
    pub fn evaluate_complex(&self, re: &RBig, im: &RBig) -> Result<(RBig, RBig), PadeError> {
        let (nr, ni) = self.numerator.evaluate_complex(re, im);
        let (dr, di) = self.denominator.evaluate_complex(re, im);
        let norm = &dr * &dr + &di * &di;
        if norm.is_zero() {
            return Err(PadeError::Pole {
                num_degree: self.num_degree,
                den_degree: self.den_degree,
                t: format!("{re} + {im}i"),
            });
        }
        // (nr + i ni)(dr - i di) / |d|^2
        let real = (&nr * &dr + &ni * &di) / &norm;
        let imag = (&ni * &dr - &nr * &di) / &norm;
        Ok((real, imag))
    }

    /// First `count` Taylor coefficients of `numerator / denominator`.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<RBig> {
        // denominator(0) = 1, so the long division needs no inversion.
        let mut out: Vec<RBig> = Vec::with_capacity(count);
        for k in 0..count {
            let mut value = self.numerator.coefficient(k);
            for j in 1..=k.min(self.den_degree) {
                let q = self.denominator.coefficient(j);
                if !q.is_zero() {
                    value -= q * &out[k - j];
                }
            }
            out.push(value);
        }
        out
    }
}

/// Builds the `[num_degree/den_degree]` approximant of `sum c_n t^n`.
///
/// The denominator `1 + q_1 t + ... + q_M t^M` solves
/// `sum_{j=0..M} q_j c_{k-j} = 0` for `k = N+1..N+M`; the numerator is the
/// truncated product of the denominator with the series.
pub fn build_pade(
    series: &[RBig],
    num_degree: usize,
    den_degree: usize,
) -> Result<PadeApproximant, PadeError> {
    let needed = num_degree + den_degree + 1;
    if series.len() < needed {
        return Err(PadeError::InsufficientCoefficients {
            num_degree,
            den_degree,
            needed,
            available: series.len(),
        });
    }
    let coeff = |i: isize| -> RBig {
        if i < 0 {
            RBig::ZERO
        } else {
            series[i as usize].clone()
        }
    };

    let (n, m) = (num_degree as isize, den_degree as isize);
    let matrix: Vec<Vec<RBig>> = (1..=m)
        .map(|row| (1..=m).map(|col| coeff(n + row - col)).collect())
        .collect();
    let rhs: Vec<RBig> = (1..=m).map(|row| -coeff(n + row)).collect();
    let solution = bareiss::solve(&matrix, &rhs).map_err(|e| PadeError::SingularSystem {
        num_degree,
        den_degree,
        rank: e.rank,
    })?;

    let mut q = Vec::with_capacity(den_degree + 1);
    q.push(RBig::ONE);
    q.extend(solution.values);
    let numerator: Vec<RBig> = (0..=num_degree)
        .map(|k| {
            (0..=k.min(den_degree)).fold(RBig::ZERO, |acc, j| acc + &q[j] * &series[k - j])
        })
        .collect();

    Ok(PadeApproximant {
        num_degree,
        den_degree,
        numerator: RationalPolynomial::new(numerator),
        denominator: RationalPolynomial::new(q),
    })
}

/// Diagonal `[N/N]` and subdiagonal `[N/N+1]` values for `N = 0..=depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadeLadder {
    #[serde(serialize_with = "serialize_rational")]
    pub t: RBig,
    pub depth: usize,
    pub precision: usize,
    pub diagonal: Vec<Fixed>,
    pub subdiagonal: Vec<Fixed>,
}

fn serialize_rational<S: serde::Serializer>(value: &RBig, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl PadeLadder {
    /// CSV with columns `N,diag,subdiag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,diag,subdiag\n");
        for (n, (d, s)) in self.diagonal.iter().zip(&self.subdiagonal).enumerate() {
            out.push_str(&format!("{n},{d},{s}\n"));
        }
        out
    }
}

/// Diagonal and subdiagonal approximants for every `N` up to `depth`.
pub fn ladder_approximants(
    series: &[RBig],
    depth: usize,
) -> Result<Vec<(PadeApproximant, PadeApproximant)>, PadeError> {
    let needed = 2 * depth + 2;
    if series.len() < needed {
        return Err(PadeError::InsufficientCoefficients {
            num_degree: depth,
            den_degree: depth + 1,
            needed,
            available: series.len(),
        });
    }
    (0..=depth)
        .into_par_iter()
        .map(|n| Ok((build_pade(series, n, n)?, build_pade(series, n, n + 1)?)))
        .collect()
}

/// Ladder for arbitrary series coefficients `c_0, c_1, ...`.
pub fn ladder_from_coefficients(
    series: &[RBig],
    t: &RBig,
    depth: usize,
    precision: usize,
) -> Result<PadeLadder, PadeError> {
    let pairs = ladder_approximants(series, depth)?;
    let values: Vec<(Fixed, Fixed)> = pairs
        .par_iter()
        .map(|(diag, sub)| Ok((diag.evaluate(t, precision)?, sub.evaluate(t, precision)?)))
        .collect::<Result<_, PadeError>>()?;
    let (diagonal, subdiagonal) = values.into_iter().unzip();
    Ok(PadeLadder {
        t: t.clone(),
        depth,
        precision,
        diagonal,
        subdiagonal,
    })
}

/// Ladder of the once-subtracted ground-state energy at `t = lambda^2`.
pub fn ladder(
    series: &PerturbationSeries,
    t: &RBig,
    depth: usize,
    precision: usize,
) -> Result<PadeLadder, PadeError> {
    ladder_from_coefficients(&series.subtracted_series(), t, depth, precision)
}

/// Padé-summed ground-state energies at coupling `lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyEstimate {
    #[serde(serialize_with = "serialize_rational")]
    pub lambda: RBig,
    pub depth: usize,
    pub precision: usize,
    /// `lambda^2 [K/K](lambda^2) + 1/2`
    pub diag_energy: Fixed,
    /// `lambda^2 [K/K+1](lambda^2) + 1/2`
    pub offdiag_energy: Fixed,
    pub average: Fixed,
}

pub fn energy_estimate(
    series: &PerturbationSeries,
    lambda: &RBig,
    depth: usize,
    precision: usize,
) -> Result<EnergyEstimate, PadeError> {
    let coefficients = series.subtracted_series();
    let needed = 2 * depth + 2;
    if coefficients.len() < needed {
        return Err(PadeError::InsufficientCoefficients {
            num_degree: depth,
            den_degree: depth + 1,
            needed,
            available: coefficients.len(),
        });
    }
    let t = lambda * lambda;
    let half = series.e0();
    let (diag, offdiag) = rayon::join(
        || build_pade(&coefficients, depth, depth),
        || build_pade(&coefficients, depth, depth + 1),
    );
    let diag = &t * diag?.evaluate_exact(&t)? + &half;
    let offdiag = &t * offdiag?.evaluate_exact(&t)? + &half;
    let average = (&diag + &offdiag) / RBig::from(2);
    Ok(EnergyEstimate {
        lambda: lambda.clone(),
        depth,
        precision,
        diag_energy: Fixed::from_rational(&diag, precision),
        offdiag_energy: Fixed::from_rational(&offdiag, precision),
        average: Fixed::from_rational(&average, precision),
    })
}
