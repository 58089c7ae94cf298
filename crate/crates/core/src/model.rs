//! The three-species eco-epidemic model: susceptible prey S, infected prey
//! I, and a predator P that consumes both.
//!
//! ```text
//! dS/dt = r S (1 - (S + I)/K) - c1 S P - delta S I
//! dI/dt = delta S I - c2 I P - d1 I
//! dP/dt = e (c1 S + c2 I) P - d2 P
//! ```
//!
//! Infection spreads by mass action within the prey; both prey classes
//! share the carrying capacity K.

use crate::scalar::Real;

/// The eight nonnegative rate constants of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    /// Prey growth rate r.
    pub r: T,
    /// Carrying capacity K for the total (susceptible + infected) prey.
    pub k: T,
    /// Predator search efficiency c1 on susceptible prey.
    pub c1: T,
    /// Predator search efficiency c2 on infected prey.
    pub c2: T,
    /// Disease transmission rate delta.
    pub delta: T,
    /// Conversion efficiency e of consumed prey into predator growth.
    pub e: T,
    /// Mortality rate d1 of infected prey (disease-related death included).
    pub d1: T,
    /// Mortality rate d2 of the predator.
    pub d2: T,
}

/// Strictly positive initial populations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState<T> {
    pub s0: T,
    pub i0: T,
    pub p0: T,
}

/// Outcome of [`validate`]: hard constraint violations and soft advisories.
///
/// The parameter set is usable iff `errors` is empty; warnings flag modeling
/// assumptions that do not hold and parameter coincidences that make
/// closed-form series denominators vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Check parameters and initial state; never fails, always reports.
pub fn validate<T: Real>(params: &ModelParams<T>, ics: &InitialState<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let zero = T::zero();

    // NaN fails every comparison, so it lands in the error branch too
    for (name, value) in [
        ("r", params.r),
        ("K", params.k),
        ("d1", params.d1),
        ("d2", params.d2),
    ] {
        if value.is_nan() || value <= zero {
            report.errors.push(format!("{name} must be positive"));
        }
    }
    for (name, value) in [
        ("c1", params.c1),
        ("c2", params.c2),
        ("delta", params.delta),
        ("e", params.e),
    ] {
        if value.is_nan() || value < zero {
            report.errors.push(format!("{name} must be nonnegative"));
        }
    }
    for (name, value) in [("S0", ics.s0), ("I0", ics.i0), ("P0", ics.p0)] {
        if value.is_nan() || value <= zero {
            report.errors.push(format!("{name} must be positive"));
        }
    }

    if params.c1 >= params.c2 {
        report.warnings.push(
            "c1 >= c2: susceptible prey is modeled as harder to catch than infected prey"
                .to_string(),
        );
    }
    if !(params.e > zero && params.e < T::one()) {
        report
            .warnings
            .push("e outside (0, 1): conversion efficiency is usually a proper fraction".into());
    }
    for (relation, denominator, coincides) in [
        ("r = d1", "(r - d1)", params.r == params.d1),
        ("r = d2", "(r - d2)", params.r == params.d2),
        ("r = 2*d1", "(r - 2*d1)", params.r == params.d1 + params.d1),
        ("r = 2*d2", "(r - 2*d2)", params.r == params.d2 + params.d2),
        (
            "r = d1 + d2",
            "(r - d1 - d2)",
            params.r == params.d1 + params.d2,
        ),
    ] {
        if coincides {
            report.warnings.push(format!(
                "{relation}: series denominator {denominator} vanishes"
            ));
        }
    }

    report
}

/// Right-hand side of the model at `state = (S, I, P)`.
pub fn rhs<T: Real>(params: &ModelParams<T>, state: [T; 3]) -> [T; 3] {
    let [s, i, p] = state;
    let ds =
        params.r * s * (T::one() - (s + i) / params.k) - params.c1 * s * p - params.delta * s * i;
    let di = params.delta * s * i - params.c2 * i * p - params.d1 * i;
    let dp = params.e * (params.c1 * s + params.c2 * i) * p - params.d2 * p;
    [ds, di, dp]
}
