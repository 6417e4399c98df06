//! Ground-state energies of `-psi'' + (x^2/4 + i*lambda*x^3) psi = E psi` by
//! shooting along the real axis.
//!
//! Both half-line solutions start deep in the classically forbidden region
//! with decaying WKB data and are integrated inward to the matching point.
//! The eigenvalue condition is the vanishing of the Wronskian-type matching
//! determinant `D(E) = psi_L psi'_R - psi'_L psi_R`, found by complex secant
//! iteration.

mod ode;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use ode::{integrate, OdeFailure, StepControl};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid shooting configuration: {0}")]
    InvalidConfig(String),
    #[error("x = {x}: not in the asymptotic region (Re sqrt(Q) = {re_sqrt_q})")]
    Domain { x: f64, re_sqrt_q: f64 },
    #[error("|psi| exceeded the overflow ceiling at x = {x}")]
    Overflow { x: f64 },
    #[error("integrator gave up at x = {x}: {reason}")]
    Integration { x: f64, reason: &'static str },
    #[error("no convergence after {iterations} iterations (last E = {last_energy}, |D| = {residual:e})")]
    NoConvergence {
        iterations: usize,
        last_energy: Complex64,
        residual: f64,
    },
    #[error("energy iterate {energy} left the search region |E| <= {bound}")]
    BasinEscape { energy: Complex64, bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShootingConfig {
    /// Integration endpoints `+-L`; `None` picks `L` from the WKB action.
    pub domain_radius: Option<f64>,
    /// Local error tolerance per integration step.
    pub step_tolerance: f64,
    pub match_point: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub energy_guess: Complex64,
    pub max_iterations: usize,
    pub root_tolerance: f64,
    /// Iterates with `|E|` above this are treated as having left the basin.
    pub energy_bound: f64,
    /// Required `Re integral sqrt(Q) dx` between the turning point and `L`.
    pub decay_action: f64,
    pub renormalize: bool,
    pub max_steps: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            domain_radius: None,
            step_tolerance: 1e-12,
            match_point: 0.0,
            energy_guess: Complex64::new(0.5, 0.0),
            max_iterations: 60,
            root_tolerance: 1e-10,
            energy_bound: 50.0,
            decay_action: 40.0,
            renormalize: true,
            max_steps: 2_000_000,
        }
    }
}

impl ShootingConfig {
    pub fn with_guess(mut self, guess: Complex64) -> Self {
        self.energy_guess = guess;
        self
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |what: &str| Err(SpectralError::InvalidConfig(what.to_string()));
        if let Some(l) = self.domain_radius {
            if !(l > 0.0 && l.is_finite()) {
                return bad("domain radius must be positive");
            }
            if self.match_point.abs() >= l {
                return bad("match point must lie inside the domain");
            }
        }
        if !(self.step_tolerance > 0.0) || !(self.root_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.decay_action > 0.0) || !(self.energy_bound > 0.0) {
            return bad("decay_action and energy_bound must be positive");
        }
        Ok(())
    }
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `psi` and `psi'` of one half-line solution at the matching point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineValues {
    pub psi: Complex64,
    pub dpsi: Complex64,
    pub steps: usize,
    pub rescalings: usize,
}

impl HalfLineValues {
    pub fn log_derivative(&self) -> Complex64 {
        self.dpsi / self.psi
    }

    fn normalized(&self) -> (Complex64, Complex64) {
        let norm = (self.psi.norm_sqr() + self.dpsi.norm_sqr()).sqrt();
        (self.psi / norm, self.dpsi / norm)
    }
}

/// `Q(x) = x^2/4 + i lambda x^3 - E`, so that `psi'' = Q psi`.
fn q_function(lambda: f64, energy: Complex64) -> impl Fn(f64) -> Complex64 {
    move |x| Complex64::new(0.25 * x * x, lambda * x * x * x) - energy
}

/// Radius `L` at which `Re integral_{x_t}^{L} sqrt(Q) dx` reaches the
/// configured action on both sides, with `x_t = 2 sqrt(Re E)` the harmonic
/// turning point.
pub fn domain_radius(lambda: f64, energy: Complex64, config: &ShootingConfig) -> f64 {
    if let Some(l) = config.domain_radius {
        return l;
    }
    const FALLBACK: f64 = 12.0;
    const LIMIT: f64 = 60.0;
    let q = q_function(lambda, energy);
    let turning = 2.0 * energy.re.max(0.0).sqrt();
    let h = 1e-3;
    let mut radius: f64 = 0.0;
    for sign in [-1.0, 1.0] {
        let f = |x: f64| q(sign * x).sqrt().re;
        let mut x = turning;
        let mut action = 0.0;
        while action < config.decay_action && x < LIMIT {
            // Simpson on [x, x + h]
            action += h / 6.0 * (f(x) + 4.0 * f(x + 0.5 * h) + f(x + h));
            x += h;
        }
        if x >= LIMIT {
            return FALLBACK.max(config.match_point.abs() + 1.0);
        }
        radius = radius.max(x);
    }
    radius.max(config.match_point.abs() + 1.0)
}

/// Integrates the decaying solution from `-L` (left) or `+L` (right) to the
/// matching point.
pub fn integrate_halfline(
    lambda: f64,
    energy: Complex64,
    side: Side,
    config: &ShootingConfig,
) -> Result<HalfLineValues, SpectralError> {
    config.validate()?;
    let radius = domain_radius(lambda, energy, config);
    let q = q_function(lambda, energy);
    let start = match side {
        Side::Left => -radius,
        Side::Right => radius,
    };
    let root = q(start).sqrt();
    if root.re <= 0.0 {
        return Err(SpectralError::Domain {
            x: start,
            re_sqrt_q: root.re,
        });
    }
    // decays outward: psi' = -sqrt(Q) psi on the right, +sqrt(Q) psi on the left
    let slope = match side {
        Side::Left => root,
        Side::Right => -root,
    };
    let one = Complex64::new(1.0, 0.0);
    let control = StepControl {
        tolerance: config.step_tolerance,
        max_steps: config.max_steps,
        renormalize_above: config.renormalize.then_some(1e100),
        overflow_ceiling: 1e250,
    };
    let traj = integrate(&q, start, config.match_point, [one, slope], &control).map_err(|e| match e {
        OdeFailure::Overflow { x } => SpectralError::Overflow { x },
        OdeFailure::StepLimit { x } => SpectralError::Integration {
            x,
            reason: "step limit reached",
        },
        OdeFailure::StepUnderflow { x } => SpectralError::Integration {
            x,
            reason: "step size underflow",
        },
    })?;
    Ok(HalfLineValues {
        psi: traj.state[0],
        dpsi: traj.state[1],
        steps: traj.accepted + traj.rejected,
        rescalings: traj.rescalings,
    })
}

/// Matching determinant with both sides normalized to `|psi|^2 + |psi'|^2 = 1`.
pub fn matching_determinant(
    lambda: f64,
    energy: Complex64,
    config: &ShootingConfig,
) -> Result<Complex64, SpectralError> {
    let (left, right) = rayon::join(
        || integrate_halfline(lambda, energy, Side::Left, config),
        || integrate_halfline(lambda, energy, Side::Right, config),
    );
    let (pl, dl) = left?.normalized();
    let (pr, dr) = right?.normalized();
    Ok(pl * dr - dl * pr)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenResult {
    pub lambda: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub energy: Complex64,
    /// `|D(E)|` at the returned energy.
    pub residual: f64,
    pub iterations: usize,
    pub domain_radius: f64,
    pub config: ShootingConfig,
}

/// Complex secant iteration on `D(E)` starting from `E_0` and `E_0 (1 + 10^-3)`.
pub fn solve_ground_energy(lambda: f64, config: &ShootingConfig) -> Result<EigenResult, SpectralError> {
    config.validate()?;
    if !lambda.is_finite() {
        return Err(SpectralError::InvalidConfig("lambda must be finite".into()));
    }
    let d = |e: Complex64| matching_determinant(lambda, e, config);

    let mut e0 = config.energy_guess;
    let mut e1 = if e0.norm() > 0.0 {
        e0 * 1.001
    } else {
        Complex64::new(1e-3, 0.0)
    };
    let mut d0 = d(e0)?;
    if d0.norm() <= config.root_tolerance {
        return Ok(result(lambda, e0, d0.norm(), 0, config));
    }
    let mut d1 = d(e1)?;
    for iteration in 1..=config.max_iterations {
        if d1.norm() <= config.root_tolerance {
            return Ok(result(lambda, e1, d1.norm(), iteration, config));
        }
        let slope = d1 - d0;
        if slope.norm() == 0.0 {
            break;
        }
        let e2 = e1 - d1 * (e1 - e0) / slope;
        if !e2.is_finite() || e2.norm() > config.energy_bound {
            return Err(SpectralError::BasinEscape {
                energy: e2,
                bound: config.energy_bound,
            });
        }
        e0 = e1;
        d0 = d1;
        e1 = e2;
        d1 = d(e1)?;
    }
    if d1.norm() <= config.root_tolerance {
        return Ok(result(lambda, e1, d1.norm(), config.max_iterations, config));
    }
    Err(SpectralError::NoConvergence {
        iterations: config.max_iterations,
        last_energy: e1,
        residual: d1.norm(),
    })
}

fn result(lambda: f64, energy: Complex64, residual: f64, iterations: usize, config: &ShootingConfig) -> EigenResult {
    EigenResult {
        lambda,
        energy,
        residual,
        iterations,
        domain_radius: domain_radius(lambda, energy, config),
        config: *config,
    }
}
