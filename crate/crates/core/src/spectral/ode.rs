//! Adaptive Dormand-Prince 5(4) integrator for `psi'' = q(x) psi` with complex
//! `q`, written as the first-order system `(psi, psi')`.

use num_complex::Complex64;

// Dormand-Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) type State = [Complex64; 2];

#[derive(Clone, Copy, Debug)]
pub(crate) struct StepControl {
    pub tolerance: f64,
    pub max_steps: usize,
    /// Rescale the state once `|psi|` exceeds this value; `None` disables it.
    pub renormalize_above: Option<f64>,
    pub overflow_ceiling: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum OdeFailure {
    Overflow { x: f64 },
    StepLimit { x: f64 },
    StepUnderflow { x: f64 },
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Trajectory {
    pub state: State,
    pub accepted: usize,
    pub rejected: usize,
    pub rescalings: usize,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (w, k) in terms {
        out[0] += k[0] * (h * w);
        out[1] += k[1] * (h * w);
    }
    out
}

/// Integrates from `x0` to `x1` (either direction).
pub(crate) fn integrate<F>(
    q: F,
    x0: f64,
    x1: f64,
    initial: State,
    control: &StepControl,
) -> Result<Trajectory, OdeFailure>
where
    F: Fn(f64) -> Complex64,
{
    let rhs = |x: f64, y: &State| -> State { [y[1], q(x) * y[0]] };
    let direction = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = initial;
    let mut h = direction * (span * 1e-3).max(1e-6);
    let mut k1 = rhs(x, &y);
    let mut out = Trajectory {
        state: y,
        accepted: 0,
        rejected: 0,
        rescalings: 0,
    };
    if span == 0.0 {
        return Ok(out);
    }

    while (x1 - x) * direction > 0.0 {
        if out.accepted + out.rejected >= control.max_steps {
            return Err(OdeFailure::StepLimit { x });
        }
        if (x + h - x1) * direction > 0.0 {
            h = x1 - x;
        }
        if h.abs() < 1e-14 * span {
            return Err(OdeFailure::StepUnderflow { x });
        }

        let k2 = rhs(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            x + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let next = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(x + h, &next);
        let err = axpy(
            &[Complex64::new(0.0, 0.0); 2],
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );

        let mut ratio: f64 = 0.0;
        for i in 0..2 {
            let scale = control.tolerance * (1.0 + y[i].norm().max(next[i].norm()));
            ratio = ratio.max(err[i].norm() / scale);
        }

        if ratio <= 1.0 {
            x += h;
            y = next;
            k1 = k7;
            out.accepted += 1;
            let size = y[0].norm();
            if !size.is_finite() || size > control.overflow_ceiling {
                match control.renormalize_above {
                    Some(_) if size.is_finite() => {}
                    _ => return Err(OdeFailure::Overflow { x }),
                }
            }
            if let Some(limit) = control.renormalize_above {
                if size > limit {
                    y = [y[0] / size, y[1] / size];
                    k1 = [k1[0] / size, k1[1] / size];
                    out.rescalings += 1;
                }
            }
        } else {
            out.rejected += 1;
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    out.state = y;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn control(tolerance: f64) -> StepControl {
        StepControl {
            tolerance,
            max_steps: 100_000,
            renormalize_above: Some(1e100),
            overflow_ceiling: 1e300,
        }
    }

    #[test]
    fn exponential_growth() {
        // psi'' = psi, psi(0) = 1, psi'(0) = 1 -> e^x
        let one = Complex64::new(1.0, 0.0);
        let traj = integrate(|_| one, 0.0, 5.0, [one, one], &control(1e-12)).unwrap();
        let expected = 5f64.exp();
        assert!((traj.state[0].re - expected).abs() / expected < 1e-10);
        assert!((traj.state[1].re - expected).abs() / expected < 1e-10);
    }

    #[test]
    fn oscillation_backwards() {
        // psi'' = -psi from x = 3 down to 0 with psi = sin x
        let q = Complex64::new(-1.0, 0.0);
        let start = [Complex64::new(3f64.sin(), 0.0), Complex64::new(3f64.cos(), 0.0)];
        let traj = integrate(|_| q, 3.0, 0.0, start, &control(1e-12)).unwrap();
        assert!(traj.state[0].norm() < 1e-10);
        assert!((traj.state[1].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_potential_phase() {
        // psi'' = -(1+i)^2/... use q = i: psi = exp(sqrt(i) x)
        let q = Complex64::new(0.0, 1.0);
        let root = q.sqrt();
        let one = Complex64::new(1.0, 0.0);
        let traj = integrate(|_| q, 0.0, 2.0, [one, root], &control(1e-12)).unwrap();
        let expected = (root * 2.0).exp();
        assert!((traj.state[0] - expected).norm() < 1e-10);
    }

    #[test]
    fn overflow_without_renormalization() {
        let q = Complex64::new(400.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut c = control(1e-8);
        c.renormalize_above = None;
        c.overflow_ceiling = 1e50;
        let err = integrate(|_| q, 0.0, 10.0, [one, one], &c).unwrap_err();
        assert!(matches!(err, OdeFailure::Overflow { .. }));
        // With rescaling the same run completes.
        c.renormalize_above = Some(1e40);
        let traj = integrate(|_| q, 0.0, 10.0, [one, one], &c).unwrap();
        assert!(traj.rescalings > 0);
        assert!(((traj.state[1] / traj.state[0]).re - 20.0).abs() < 1e-6);
    }
}
