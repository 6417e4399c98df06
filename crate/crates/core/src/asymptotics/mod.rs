//! Large-order behaviour of the coefficients `b_n`: leading and WKB-corrected
//! growth predictions, Richardson extrapolation, the dispersion integral over
//! the discontinuity on the negative `t` axis, `Im E` for the real unstable
//! potential and the bounce action.

mod quadrature;

use dashu::base::Sign;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{HighPrecision, Precision, Real};
use crate::perturbation::PerturbationSeries;

pub use quadrature::{QuadratureConfig, QuadratureResult, QuadratureScheme};

/// Numerators and denominators of the WKB correction coefficients.
const WKB_COEFFICIENTS: [(&str, &str); 7] = [
    ("169", "120"),
    ("44507", "28800"),
    ("9563539", "1920000"),
    ("189244716209", "8294400000"),
    ("42943442679817", "331776000000"),
    ("342541916236654541", "398131200000000"),
    ("933142404651555165943", "143327232000000000"),
];

pub const MAX_WKB_DEPTH: usize = WKB_COEFFICIENTS.len();

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("n must be at least 1")]
    ZeroIndex,
    #[error("WKB depth {depth} exceeds the {max} known corrections")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("WKB prediction at n = {n} needs n >= depth + 1 (depth {depth})")]
    Domain { n: usize, depth: usize },
    #[error("sequence of length {length} is too short for order-{order} extrapolation")]
    InsufficientLength { length: usize, order: usize },
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },
    #[error("series of order {order} is too short for a growth report (need 2)")]
    SeriesTooShort { order: usize },
    #[error("invalid quadrature configuration")]
    InvalidQuadrature,
    #[error("quadrature did not converge: estimated error {estimated_error:e} with {nodes} nodes")]
    Quadrature { nodes: usize, estimated_error: f64 },
}

impl From<quadrature::NotConverged> for AsymptoticsError {
    fn from(err: quadrature::NotConverged) -> Self {
        AsymptoticsError::Quadrature {
            nodes: err.nodes,
            estimated_error: err.estimated_error,
        }
    }
}

/// The bracketed `1/n` correction series multiplying the leading growth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WkbGrowthModel {
    coefficients: Vec<RBig>,
    depth: usize,
}

impl WkbGrowthModel {
    pub fn new(depth: usize) -> Result<Self, AsymptoticsError> {
        if depth > MAX_WKB_DEPTH {
            return Err(AsymptoticsError::DepthTooLarge {
                depth,
                max: MAX_WKB_DEPTH,
            });
        }
        let coefficients = WKB_COEFFICIENTS
            .iter()
            .map(|(num, den)| {
                RBig::from_parts(num.parse::<IBig>().unwrap(), den.parse::<UBig>().unwrap())
            })
            .collect();
        Ok(Self {
            coefficients,
            depth,
        })
    }

    pub fn coefficients(&self) -> &[RBig] {
        &self.coefficients
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `1 - sum_d c_d / ((n-1/2)(n-3/2)...(n-(2d-1)/2))`, exactly.
    pub fn bracket(&self, n: usize) -> Result<RBig, AsymptoticsError> {
        if n < self.depth + 1 {
            return Err(AsymptoticsError::Domain {
                n,
                depth: self.depth,
            });
        }
        let mut total = RBig::ONE;
        let mut product = RBig::ONE;
        for (d, coefficient) in self.coefficients[..self.depth].iter().enumerate() {
            product *= RBig::from_parts(IBig::from(2 * n - 2 * d - 1), UBig::from(2u8));
            total -= coefficient / &product;
        }
        Ok(total)
    }
}

/// `(2n-1)!!`
fn double_factorial_odd(n: usize) -> IBig {
    (1..=n).fold(IBig::ONE, |acc, k| acc * IBig::from(2 * k - 1))
}

fn sign_factor(n: usize) -> IBig {
    if n % 2 == 1 {
        IBig::ONE
    } else {
        -IBig::ONE
    }
}

fn leading_value(n: usize, ctx: &Precision) -> Real {
    // 60^(n+1/2) (2pi)^(-3/2) Gamma(n+1/2), Gamma(n+1/2) = (2n-1)!! sqrt(pi) / 2^n
    let exact = RBig::from_parts(
        sign_factor(n) * IBig::from(60u8).pow(n) * double_factorial_odd(n),
        UBig::from(2u8).pow(n),
    );
    let pi = ctx.pi();
    let two_pi = ctx.int(2) * &pi;
    let root = (ctx.int(60) * pi).sqrt();
    ctx.rational(&exact) * root / (two_pi.clone() * two_pi.sqrt())
}

/// `(-1)^(n+1) 60^(n+1/2) (2 pi)^(-3/2) Gamma(n+1/2)` to `precision` digits.
pub fn leading_growth_prediction(n: usize, precision: usize) -> Result<HighPrecision, AsymptoticsError> {
    if n == 0 {
        return Err(AsymptoticsError::ZeroIndex);
    }
    let ctx = Precision::digits(precision);
    Ok(ctx.wrap(leading_value(n, &ctx)))
}

/// Leading prediction times the WKB bracket truncated after `depth` terms.
pub fn wkb_growth_prediction(
    n: usize,
    depth: usize,
    precision: usize,
) -> Result<HighPrecision, AsymptoticsError> {
    if n == 0 {
        return Err(AsymptoticsError::ZeroIndex);
    }
    let bracket = WkbGrowthModel::new(depth)?.bracket(n)?;
    let ctx = Precision::digits(precision);
    Ok(ctx.wrap(leading_value(n, &ctx) * ctx.rational(&bracket)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    #[serde(serialize_with = "serialize_display")]
    pub b_n: IBig,
    pub leading_prediction: HighPrecision,
    pub wkb_prediction: HighPrecision,
    /// Truncation depth used for this row, `min(depth, n - 1)`.
    pub wkb_depth: usize,
    pub leading_ratio: HighPrecision,
    pub wkb_ratio: HighPrecision,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub depth: usize,
    pub precision: usize,
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn leading_ratios(&self) -> Vec<HighPrecision> {
        self.rows.iter().map(|r| r.leading_ratio.clone()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,b_n,leading_prediction,wkb_prediction,wkb_depth,leading_ratio,wkb_ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n,
                r.b_n,
                r.leading_prediction,
                r.wkb_prediction,
                r.wkb_depth,
                r.leading_ratio,
                r.wkb_ratio
            ));
        }
        out
    }
}

/// Tabulates both growth predictions and their ratios to `b_n` for every
/// coefficient in the series. Rows with `n <= depth` use depth `n - 1`.
pub fn growth_report(
    series: &PerturbationSeries,
    depth: usize,
    precision: usize,
) -> Result<GrowthReport, AsymptoticsError> {
    if series.max_order() < 2 {
        return Err(AsymptoticsError::SeriesTooShort {
            order: series.max_order(),
        });
    }
    WkbGrowthModel::new(depth)?;
    let ctx = Precision::digits(precision);
    let rows = series
        .coefficients()
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let n = i + 1;
            let wkb_depth = depth.min(n - 1);
            let bracket = WkbGrowthModel::new(wkb_depth)?.bracket(n)?;
            let leading = leading_value(n, &ctx);
            let wkb = leading.clone() * ctx.rational(&bracket);
            let b_real = ctx.int(b.clone());
            Ok(GrowthRow {
                n,
                b_n: b.clone(),
                leading_ratio: ctx.wrap(leading.clone() / &b_real),
                wkb_ratio: ctx.wrap(wkb.clone() / &b_real),
                leading_prediction: ctx.wrap(leading),
                wkb_prediction: ctx.wrap(wkb),
                wkb_depth,
            })
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()?;
    Ok(GrowthReport {
        depth,
        precision,
        rows,
    })
}

fn factorial(k: usize) -> UBig {
    (1..=k).fold(UBig::ONE, |acc, j| acc * UBig::from(j))
}

/// Order-`r` Richardson extrapolant of a sequence `s_1, s_2, ...` whose
/// corrections run in powers of `1/n`, built from its last `r + 1` terms.
pub fn richardson_extrapolate(
    sequence: &[HighPrecision],
    order: usize,
) -> Result<HighPrecision, AsymptoticsError> {
    if sequence.len() <= order {
        return Err(AsymptoticsError::InsufficientLength {
            length: sequence.len(),
            order,
        });
    }
    let digits = sequence.iter().map(HighPrecision::digits).max().unwrap_or(0);
    let ctx = Precision::digits(digits);
    let first = sequence.len() - order;
    let mut total = ctx.int(0);
    for k in 0..=order {
        let n = first + k;
        let mut weight = RBig::from_parts(
            IBig::from(n).pow(order),
            factorial(k) * factorial(order - k),
        );
        if (k + order) % 2 == 1 {
            weight = -weight;
        }
        total += sequence[n - 1].value().clone() * ctx.rational(&weight);
    }
    Ok(ctx.wrap(total))
}

fn require_positive(value: &RBig, what: &'static str) -> Result<(), AsymptoticsError> {
    if value.sign() == Sign::Positive && *value != RBig::ZERO {
        Ok(())
    } else {
        Err(AsymptoticsError::NonPositive { what })
    }
}

/// Leading small-`t` discontinuity `D(-t) = -exp(-1/(60t)) / (2 sqrt(2 pi t))`.
pub fn discontinuity(t: &RBig, precision: usize) -> Result<HighPrecision, AsymptoticsError> {
    require_positive(t, "t")?;
    let ctx = Precision::digits(precision);
    let t_real = ctx.rational(t);
    let exponent = ctx.rational(&(RBig::ONE / (RBig::from(60u8) * t)));
    let root = (ctx.int(2) * ctx.pi() * &t_real).sqrt();
    Ok(ctx.wrap(-(-exponent).exp() / (ctx.int(2) * root)))
}

/// Double-precision form of [`discontinuity`], used as a quadrature integrand.
pub fn discontinuity_f64(t: f64) -> f64 {
    -(-1.0 / (60.0 * t)).exp() / (2.0 * (2.0 * std::f64::consts::PI * t).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DispersionMoment {
    pub n: usize,
    /// `(1/pi) int_0^inf D(-t) t^(-n-1) dt` with `D` as supplied.
    pub value: f64,
    pub magnitude: f64,
    pub quadrature: QuadratureResult,
}

/// Evaluates the dispersion integral after the substitution `u = 1/(60t)`:
/// `(60^n / pi) int_0^inf D(-1/(60u)) u^(n-1) du`.
pub fn dispersion_moment<D>(
    n: usize,
    discontinuity: D,
    config: &QuadratureConfig,
) -> Result<DispersionMoment, AsymptoticsError>
where
    D: Fn(f64) -> f64,
{
    if n == 0 {
        return Err(AsymptoticsError::ZeroIndex);
    }
    if !config.is_valid() {
        return Err(AsymptoticsError::InvalidQuadrature);
    }
    let scale = 60f64.powi(n as i32) / std::f64::consts::PI;
    let integrand = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        discontinuity(1.0 / (60.0 * u)) * u.powi(n as i32 - 1)
    };
    let result = quadrature::half_line(integrand, config)?;
    let quadrature = QuadratureResult {
        value: result.value * scale,
        estimated_error: result.estimated_error * scale,
        nodes: result.nodes,
    };
    Ok(DispersionMoment {
        n,
        value: quadrature.value,
        magnitude: quadrature.value.abs(),
        quadrature,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImEnergy {
    pub value: HighPrecision,
    /// The value is nonzero but rounds to zero in double precision.
    pub below_f64_range: bool,
}

/// Leading `Im E(eps) = exp(-1/(60 eps^2)) / ((2 pi)^(3/2) eps)`.
pub fn im_energy(epsilon: &RBig, precision: usize) -> Result<ImEnergy, AsymptoticsError> {
    require_positive(epsilon, "epsilon")?;
    let ctx = Precision::digits(precision);
    let exponent = ctx.rational(&bounce_closed_form(epsilon));
    let two_pi = ctx.int(2) * ctx.pi();
    let value = (-exponent).exp() / (two_pi.clone() * two_pi.sqrt() * ctx.rational(epsilon));
    let below = value.to_f64().value() == 0.0;
    Ok(ImEnergy {
        value: ctx.wrap(value),
        below_f64_range: below,
    })
}

/// `S_0 = 1/(60 eps^2)`.
pub fn bounce_closed_form(epsilon: &RBig) -> RBig {
    RBig::ONE / (RBig::from(60u8) * epsilon * epsilon)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BounceAction {
    #[serde(serialize_with = "serialize_display")]
    pub epsilon: RBig,
    pub numeric: f64,
    #[serde(serialize_with = "serialize_display")]
    pub closed_form: RBig,
    pub relative_difference: f64,
    pub quadrature: QuadratureResult,
}

/// `2 int_0^(1/(4 eps)) sqrt(x^2/4 - eps x^3) dx` by quadrature in `theta`
/// with `x = sin^2(theta) / (4 eps)`, alongside the closed form.
pub fn bounce_action(epsilon: &RBig, config: &QuadratureConfig) -> Result<BounceAction, AsymptoticsError> {
    require_positive(epsilon, "epsilon")?;
    if !config.is_valid() {
        return Err(AsymptoticsError::InvalidQuadrature);
    }
    let eps = epsilon.to_f64().value();
    let turning = 1.0 / (4.0 * eps);
    let integrand = |theta: f64| {
        let (sin, cos) = theta.sin_cos();
        let x = turning * sin * sin;
        let radicand = (0.25 * x * x - eps * x * x * x).max(0.0);
        radicand.sqrt() * 2.0 * turning * sin * cos
    };
    let result = quadrature::interval(integrand, 0.0, std::f64::consts::FRAC_PI_2, config)?;
    let numeric = 2.0 * result.value;
    let closed_form = bounce_closed_form(epsilon);
    let exact = closed_form.to_f64().value();
    Ok(BounceAction {
        epsilon: epsilon.clone(),
        numeric,
        relative_difference: (numeric - exact).abs() / exact,
        closed_form,
        quadrature: QuadratureResult {
            value: numeric,
            estimated_error: 2.0 * result.estimated_error,
            nodes: result.nodes,
        },
    })
}
