use dashu::rational::RBig;

/// Dense polynomial in `t` with exact rational coefficients, lowest power
/// first. Trailing zeros are trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coefficients: Vec<RBig>,
}

impl RationalPolynomial {
    pub fn new(mut coefficients: Vec<RBig>) -> Self {
        while coefficients.last().is_some_and(RBig::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![RBig::ONE])
    }

    pub fn coefficients(&self) -> &[RBig] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficient of `t^power` (zero beyond the degree).
    pub fn coefficient(&self, power: usize) -> RBig {
        self.coefficients.get(power).cloned().unwrap_or(RBig::ZERO)
    }

    pub fn evaluate(&self, t: &RBig) -> RBig {
        self.coefficients
            .iter()
            .rev()
            .fold(RBig::ZERO, |acc, c| acc * t + c)
    }

    /// Evaluates at the complex point `re + i*im`, returning `(re, im)` of the
    /// result, exactly.
    pub fn evaluate_complex(&self, re: &RBig, im: &RBig) -> (RBig, RBig) {
        self.coefficients
            .iter()
            .rev()
            .fold((RBig::ZERO, RBig::ZERO), |(ar, ai), c| {
                let nr = &ar * re - &ai * im + c;
                let ni = &ar * im + &ai * re;
                (nr, ni)
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![RBig::ZERO; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> RationalPolynomial {
        RationalPolynomial::new(cs.iter().map(|&c| RBig::from(c)).collect())
    }

    #[test]
    fn trims_and_reports_degree() {
        assert_eq!(poly(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(poly(&[0, 0]).degree(), None);
        assert!(poly(&[]).is_zero());
    }

    #[test]
    fn horner_matches_expansion() {
        let p = poly(&[1, -3, 2]);
        assert_eq!(p.evaluate(&RBig::from(5)), RBig::from(36));
        // (1 - 3z + 2z^2) at z = i: 1 - 2 - 3i
        let (re, im) = p.evaluate_complex(&RBig::ZERO, &RBig::ONE);
        assert_eq!((re, im), (RBig::from(-1), RBig::from(-3)));
    }

    #[test]
    fn product_of_linear_factors() {
        assert_eq!(poly(&[1, 1]).mul(&poly(&[-1, 1])), poly(&[-1, 0, 1]));
        assert!(poly(&[1]).mul(&poly(&[])).is_zero());
    }
}
