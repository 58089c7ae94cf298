//! Reference numerical integration: classical fourth-order Runge-Kutta with
//! a fixed step, plus cubic Hermite sampling between grid points.
//!
//! Deterministic by construction: no adaptivity, no heuristics, bit-identical
//! trajectories for identical inputs.

use std::fmt;

use crate::model::{rhs, InitialState, ModelParams};
use crate::scalar::Real;

/// A fixed-step trajectory: strictly increasing grid starting at 0, one
/// (S, I, P) sample per grid point. The last interval may be shorter so the
/// final point lands exactly on `t_end`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    params: ModelParams<T>,
    times: Vec<T>,
    states: Vec<[T; 3]>,
    step: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegrateError<T> {
    /// `t_end` and `step` must be positive with `step <= t_end`.
    InvalidStep { t_end: T, step: T },
    /// A state component left the finite range; reports when.
    NonFinite { t: T },
}

impl<T: fmt::Display> fmt::Display for IntegrateError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrateError::InvalidStep { t_end, step } => {
                write!(f, "invalid step {step} for t_end {t_end}")
            }
            IntegrateError::NonFinite { t } => {
                write!(f, "state became non-finite at t = {t}")
            }
        }
    }
}

impl<T: fmt::Debug + fmt::Display> std::error::Error for IntegrateError<T> {}

#[derive(Clone, Debug, PartialEq)]
pub enum SampleError<T> {
    OutOfRange { t: T, t_end: T },
}

impl<T: fmt::Display> fmt::Display for SampleError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::OutOfRange { t, t_end } => {
                write!(f, "sample time {t} outside [0, {t_end}]")
            }
        }
    }
}

impl<T: fmt::Debug + fmt::Display> std::error::Error for SampleError<T> {}

fn rk4_step<T: Real>(params: &ModelParams<T>, y: [T; 3], h: T) -> [T; 3] {
    let half = T::lit(0.5);
    let sixth = T::one() / T::int(6);
    let two = T::int(2);

    let add = |y: [T; 3], k: [T; 3], f: T| [y[0] + f * k[0], y[1] + f * k[1], y[2] + f * k[2]];
    let k1 = rhs(params, y);
    let k2 = rhs(params, add(y, k1, half * h));
    let k3 = rhs(params, add(y, k2, half * h));
    let k4 = rhs(params, add(y, k3, h));

    let mut next = y;
    for d in 0..3 {
        next[d] = y[d] + h * sixth * (k1[d] + two * k2[d] + two * k3[d] + k4[d]);
    }
    next
}

/// Integrate the model over `[0, t_end]` with the given fixed step.
pub fn integrate<T: Real>(
    params: &ModelParams<T>,
    ics: &InitialState<T>,
    t_end: T,
    step: T,
) -> Result<Trajectory<T>, IntegrateError<T>> {
    let positive = |x: T| !x.is_nan() && x > T::zero();
    if !positive(t_end) || !positive(step) || step > t_end {
        return Err(IntegrateError::InvalidStep { t_end, step });
    }

    let mut times = vec![T::zero()];
    let mut states = vec![[ics.s0, ics.i0, ics.p0]];
    let mut t = T::zero();
    let mut k: usize = 0;

    while t < t_end {
        let next_grid = T::from_usize(k + 1).expect("step count in scalar range") * step;
        let t_next = if next_grid < t_end { next_grid } else { t_end };
        let y = rk4_step(params, states[k], t_next - t);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFinite { t: t_next });
        }
        times.push(t_next);
        states.push(y);
        t = t_next;
        k += 1;
    }

    Ok(Trajectory {
        params: *params,
        times,
        states,
        step,
    })
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[[T; 3]] {
        &self.states
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn t_end(&self) -> T {
        *self.times.last().expect("trajectory never empty")
    }

    pub fn final_state(&self) -> [T; 3] {
        *self.states.last().expect("trajectory never empty")
    }

    /// State at an arbitrary `t` in `[0, t_end]`: stored sample when `t` is a
    /// grid point, cubic Hermite between the bracketing points otherwise,
    /// with slopes from the model right-hand side.
    pub fn sample(&self, t: T) -> Result<[T; 3], SampleError<T>> {
        let t_end = self.t_end();
        if t.is_nan() || t < T::zero() || t > t_end {
            return Err(SampleError::OutOfRange { t, t_end });
        }
        let upper = self.times.partition_point(|&grid_t| grid_t <= t);
        // partition_point >= 1 since times[0] = 0 <= t
        let i = upper - 1;
        if self.times[i] == t {
            return Ok(self.states[i]);
        }

        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let theta = (t - t0) / h;
        let y0 = self.states[i];
        let y1 = self.states[i + 1];
        let f0 = rhs(&self.params, y0);
        let f1 = rhs(&self.params, y1);

        let one = T::one();
        let two = T::int(2);
        let three = T::int(3);
        let t2 = theta * theta;
        let t3 = t2 * theta;
        let h00 = two * t3 - three * t2 + one;
        let h10 = t3 - two * t2 + theta;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;

        let mut out = [T::zero(); 3];
        for d in 0..3 {
            out[d] = h00 * y0[d] + h10 * h * f0[d] + h01 * y1[d] + h11 * h * f1[d];
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> (ModelParams<f64>, InitialState<f64>) {
        (
            ModelParams {
                r: 0.1,
                k: 0.3,
                c1: 0.1,
                c2: 0.2,
                delta: 0.1,
                e: 0.1,
                d1: 0.2,
                d2: 0.2,
            },
            InitialState {
                s0: 0.01,
                i0: 0.01,
                p0: 0.01,
            },
        )
    }

    fn decoupled() -> (ModelParams<f64>, InitialState<f64>) {
        let (mut params, ics) = baseline();
        params.delta = 0.0;
        params.c1 = 0.0;
        params.c2 = 0.0;
        params.k = f64::INFINITY;
        (params, ics)
    }

    #[test]
    fn first_sample_is_the_initial_state_exactly() {
        let (params, ics) = baseline();
        let traj = integrate(&params, &ics, 1.0, 0.1).unwrap();
        assert_eq!(traj.states()[0], [0.01, 0.01, 0.01]);
        assert_eq!(traj.times()[0], 0.0);
        assert_eq!(traj.sample(0.0).unwrap(), [0.01, 0.01, 0.01]);
    }

    #[test]
    fn final_point_lands_exactly_on_t_end() {
        let (params, ics) = baseline();
        for (t_end, step) in [(1.0, 0.1), (1.0, 0.3), (10.0, 1e-3), (0.55, 0.1)] {
            let traj = integrate(&params, &ics, t_end, step).unwrap();
            assert_eq!(traj.t_end(), t_end, "t_end={t_end} step={step}");
        }
    }

    #[test]
    fn decoupled_linear_growth_is_near_exact_per_variable() {
        let (params, ics) = decoupled();
        let traj = integrate(&params, &ics, 1.0, 0.1).unwrap();
        let [s, i, p] = traj.final_state();
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        assert!(rel(s, 0.01 * (0.1f64).exp()) < 1e-9);
        assert!(rel(i, 0.01 * (-0.2f64).exp()) < 1e-9);
        assert!(rel(p, 0.01 * (-0.2f64).exp()) < 1e-9);
    }

    #[test]
    fn step_larger_than_t_end_is_rejected() {
        let (params, ics) = baseline();
        assert!(matches!(
            integrate(&params, &ics, 1.0, 2.0),
            Err(IntegrateError::InvalidStep { .. })
        ));
    }

    #[test]
    fn grid_point_samples_are_bit_exact() {
        let (params, ics) = baseline();
        let traj = integrate(&params, &ics, 2.0, 0.25).unwrap();
        for (idx, &t) in traj.times().iter().enumerate() {
            assert_eq!(traj.sample(t).unwrap(), traj.states()[idx]);
        }
    }

    #[test]
    fn midpoint_sampling_tracks_the_closed_form_in_the_decoupled_case() {
        let (params, ics) = decoupled();
        let traj = integrate(&params, &ics, 1.0, 0.1).unwrap();
        let t = 0.35;
        let [s, i, p] = traj.sample(t).unwrap();
        assert!((s - 0.01 * (0.1 * t).exp()).abs() < 1e-8);
        assert!((i - 0.01 * (-0.2 * t).exp()).abs() < 1e-8);
        assert!((p - 0.01 * (-0.2 * t).exp()).abs() < 1e-8);
    }

    #[test]
    fn out_of_range_sampling_is_rejected() {
        let (params, ics) = baseline();
        let traj = integrate(&params, &ics, 1.0, 0.1).unwrap();
        assert!(traj.sample(-0.1).is_err());
        assert!(traj.sample(1.01).is_err());
    }

    #[test]
    fn two_runs_are_bit_identical() {
        let (params, ics) = baseline();
        let a = integrate(&params, &ics, 5.0, 1e-2).unwrap();
        let b = integrate(&params, &ics, 5.0, 1e-2).unwrap();
        assert_eq!(a, b);
    }
}
