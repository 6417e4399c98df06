use std::io::Write;

use dashu::rational::RBig;
use num_complex::Complex64;
use ptcubic_core::asymptotics::{
    bounce_action, discontinuity_f64, dispersion_moment, growth_report, im_energy,
    leading_growth_prediction, GrowthReport, QuadratureConfig, QuadratureResult,
};
use ptcubic_core::numeric::{Fixed, HighPrecision};
use ptcubic_core::pade::{energy_estimate, ladder, stieltjes_check, EnergyEstimate, PadeLadder, StieltjesReport};
use ptcubic_core::spectral::{solve_ground_energy, ShootingConfig};
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::render::{emit, Table};
use crate::source::load_series;
use crate::{schema, serialize_display};

/// Dispatches `config` and writes its output to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    config.validate()?;
    match config.command {
        Command::Coeffs => coeffs(config, out),
        Command::Pade => pade(config, out),
        Command::Energy => energy(config, out),
        Command::Shoot => shoot(config, out),
        Command::Growth => growth(config, out),
        Command::Dispersion => dispersion(config, out),
        Command::Bounce => bounce(config, out),
        Command::Verify => {
            let report = crate::verify::verify(&crate::verify::VerifyConfig::from_run(config));
            report.write(config.format, out)
        }
    }
}

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    #[serde(serialize_with = "serialize_display")]
    b_n: dashu::integer::IBig,
}

#[derive(Serialize)]
struct CoeffsDocument {
    schema: String,
    hamiltonian: String,
    order: usize,
    coefficients: Vec<CoefficientRow>,
}

fn coeffs(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (series, _) = load_series(config.order, config.cache_path.as_deref())?;
    let mut table = Table::new(&["n", "b_n"]);
    let mut rows = Vec::new();
    for (i, b) in series.coefficients().iter().enumerate() {
        table.push(vec![(i + 1).to_string(), b.to_string()]);
        rows.push(CoefficientRow { n: i + 1, b_n: b.clone() });
    }
    let document = CoeffsDocument {
        schema: schema("coeffs"),
        hamiltonian: series.hamiltonian_tag().to_string(),
        order: series.max_order(),
        coefficients: rows,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct LadderRecord {
    #[serde(serialize_with = "serialize_display")]
    lambda: RBig,
    ladder: PadeLadder,
    stieltjes: StieltjesReport,
}

#[derive(Serialize)]
struct PadeDocument {
    schema: String,
    order: usize,
    depth: usize,
    /// Fractional decimal digits of every ladder value.
    precision: usize,
    ladders: Vec<LadderRecord>,
}

fn pade(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (series, _) = load_series(config.order, config.cache_path.as_deref())?;
    let mut table = Table::new(&["lambda", "t", "N", "diag", "subdiag"]);
    let mut ladders = Vec::new();
    for lambda in &config.lambdas {
        let t = lambda * lambda;
        let values = ladder(&series, &t, config.depth, config.precision)?;
        for (n, (d, s)) in values.diagonal.iter().zip(&values.subdiagonal).enumerate() {
            table.push(vec![
                lambda.to_string(),
                t.to_string(),
                n.to_string(),
                d.to_string(),
                s.to_string(),
            ]);
        }
        ladders.push(LadderRecord {
            lambda: lambda.clone(),
            stieltjes: stieltjes_check(&values),
            ladder: values,
        });
    }
    let document = PadeDocument {
        schema: schema("pade"),
        order: series.max_order(),
        depth: config.depth,
        precision: config.precision,
        ladders,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct EnergyDocument {
    schema: String,
    order: usize,
    depth: usize,
    precision: usize,
    energies: Vec<EnergyEstimate>,
}

fn energy(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (series, _) = load_series(config.order, config.cache_path.as_deref())?;
    let mut table = Table::new(&["lambda", "diag_energy", "offdiag_energy", "average"]);
    let mut energies = Vec::new();
    for lambda in &config.lambdas {
        let e = energy_estimate(&series, lambda, config.depth, config.precision)?;
        table.push(vec![
            lambda.to_string(),
            e.diag_energy.to_string(),
            e.offdiag_energy.to_string(),
            e.average.to_string(),
        ]);
        energies.push(e);
    }
    let document = EnergyDocument {
        schema: schema("energy"),
        order: series.max_order(),
        depth: config.depth,
        precision: config.precision,
        energies,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct ShootRecord {
    #[serde(serialize_with = "serialize_display")]
    lambda: RBig,
    re_energy: f64,
    im_energy: f64,
    residual: f64,
    iterations: usize,
    /// Starting energy: the Padé average at depth K, or 1/2 when the series is too short.
    guess: Fixed,
    domain_radius: f64,
}

#[derive(Serialize)]
struct ShootDocument {
    schema: String,
    /// Energies are IEEE-754 binary64 values.
    number_format: &'static str,
    config: ShootingConfig,
    results: Vec<ShootRecord>,
}

fn shoot(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let series = if config.order >= 2 * config.depth + 2 {
        Some(load_series(config.order, config.cache_path.as_deref())?.0)
    } else {
        None
    };
    let base = ShootingConfig::default();
    let mut table = Table::new(&["lambda", "re_energy", "im_energy", "residual", "iterations"]);
    let mut results = Vec::new();
    for lambda in &config.lambdas {
        let guess = match &series {
            Some(series) => energy_estimate(series, lambda, config.depth, config.precision)?.average,
            None => Fixed::from_rational(&RBig::from_parts(1.into(), 2u8.into()), config.precision),
        };
        let start = Complex64::new(guess.to_f64(), 0.0);
        let result = solve_ground_energy(lambda.to_f64().value(), &base.with_guess(start))?;
        table.push(vec![
            lambda.to_string(),
            format!("{:e}", result.energy.re),
            format!("{:e}", result.energy.im),
            format!("{:e}", result.residual),
            result.iterations.to_string(),
        ]);
        results.push(ShootRecord {
            lambda: lambda.clone(),
            re_energy: result.energy.re,
            im_energy: result.energy.im,
            residual: result.residual,
            iterations: result.iterations,
            guess,
            domain_radius: result.domain_radius,
        });
    }
    let document = ShootDocument {
        schema: schema("shoot"),
        number_format: "binary64",
        config: base,
        results,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct GrowthDocument {
    schema: String,
    /// Significant decimal digits of every prediction and ratio.
    precision: usize,
    report: GrowthReport,
}

fn growth(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (series, _) = load_series(config.order, config.cache_path.as_deref())?;
    let report = growth_report(&series, config.depth, config.precision)?;
    let mut table = Table::new(&[
        "n",
        "b_n",
        "leading_prediction",
        "wkb_prediction",
        "wkb_depth",
        "leading_ratio",
        "wkb_ratio",
    ]);
    for r in &report.rows {
        table.push(vec![
            r.n.to_string(),
            r.b_n.to_string(),
            r.leading_prediction.to_string(),
            r.wkb_prediction.to_string(),
            r.wkb_depth.to_string(),
            r.leading_ratio.to_string(),
            r.wkb_ratio.to_string(),
        ]);
    }
    let document = GrowthDocument {
        schema: schema("growth"),
        precision: config.precision,
        report,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct DispersionRecord {
    n: usize,
    value: f64,
    magnitude: f64,
    closed_form: HighPrecision,
    relative_difference: f64,
    quadrature: QuadratureResult,
}

#[derive(Serialize)]
struct DispersionDocument {
    schema: String,
    /// Significant digits of `closed_form`; quadrature values are binary64.
    precision: usize,
    quadrature: QuadratureConfig,
    moments: Vec<DispersionRecord>,
}

fn dispersion(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let quadrature = QuadratureConfig::default();
    let mut table = Table::new(&[
        "n",
        "value",
        "magnitude",
        "closed_form",
        "relative_difference",
        "nodes",
        "estimated_error",
    ]);
    let mut moments = Vec::new();
    for n in 1..=config.order {
        let moment = dispersion_moment(n, discontinuity_f64, &quadrature)?;
        let closed = leading_growth_prediction(n, config.precision)?;
        let closed_abs = closed.to_f64().abs();
        let relative = (moment.magnitude - closed_abs).abs() / closed_abs;
        let closed_text = closed.to_string().trim_start_matches('-').to_string();
        table.push(vec![
            n.to_string(),
            format!("{:e}", moment.value),
            format!("{:e}", moment.magnitude),
            closed_text,
            format!("{relative:e}"),
            moment.quadrature.nodes.to_string(),
            format!("{:e}", moment.quadrature.estimated_error),
        ]);
        let magnitude = if closed.signum() < 0 {
            HighPrecision::new(-closed.into_value(), config.precision)
        } else {
            closed
        };
        moments.push(DispersionRecord {
            n,
            value: moment.value,
            magnitude: moment.magnitude,
            closed_form: magnitude,
            relative_difference: relative,
            quadrature: moment.quadrature,
        });
    }
    let document = DispersionDocument {
        schema: schema("dispersion"),
        precision: config.precision,
        quadrature,
        moments,
    };
    emit(out, config.format, &table, &document)
}

#[derive(Serialize)]
struct BounceRecord {
    #[serde(serialize_with = "serialize_display")]
    epsilon: RBig,
    #[serde(serialize_with = "serialize_display")]
    closed_form: RBig,
    numeric: f64,
    relative_difference: f64,
    quadrature: QuadratureResult,
    im_energy: HighPrecision,
    im_energy_below_f64_range: bool,
}

#[derive(Serialize)]
struct BounceDocument {
    schema: String,
    /// Significant digits of `im_energy`; `numeric` is binary64.
    precision: usize,
    quadrature: QuadratureConfig,
    results: Vec<BounceRecord>,
}

fn bounce(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let quadrature = QuadratureConfig::default();
    let mut table = Table::new(&[
        "epsilon",
        "closed_form",
        "numeric",
        "relative_difference",
        "nodes",
        "im_energy",
    ]);
    let mut results = Vec::new();
    for eps in &config.epsilons {
        let action = bounce_action(eps, &quadrature)?;
        let im = im_energy(eps, config.precision)?;
        table.push(vec![
            eps.to_string(),
            action.closed_form.to_string(),
            format!("{:e}", action.numeric),
            format!("{:e}", action.relative_difference),
            action.quadrature.nodes.to_string(),
            im.value.to_string(),
        ]);
        results.push(BounceRecord {
            epsilon: eps.clone(),
            closed_form: action.closed_form,
            numeric: action.numeric,
            relative_difference: action.relative_difference,
            quadrature: action.quadrature,
            im_energy: im.value,
            im_energy_below_f64_range: im.below_f64_range,
        });
    }
    let document = BounceDocument {
        schema: schema("bounce"),
        precision: config.precision,
        quadrature,
        results,
    };
    emit(out, config.format, &table, &document)
}
