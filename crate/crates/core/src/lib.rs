//! Closed-form perturbation solver for a three-species eco-epidemic model
//! (susceptible prey, infected prey, predator).
//!
//! The crate provides four cooperating pieces:
//!
//! - [`algebra`]: exact arithmetic and linear-ODE integration over finite
//!   sums of `c * t^m * e^{lambda t}`, with exponents kept on an integer
//!   lattice over the model's linear rates (r, -d1, -d2);
//! - [`engine`]: the order-by-order perturbation recursion producing the
//!   closed-form expansion to any truncation order;
//! - [`paper`]: the published order-2 series with its 23 printed constants,
//!   implemented verbatim, plus an audit comparing each constant against the
//!   engine-derived coefficient of the same exponent;
//! - [`oracle`]: a fixed-step fourth-order Runge-Kutta reference integrator
//!   for numeric comparison.
//!
//! All numeric routines are generic over the scalar type ([`scalar::Real`]);
//! the aliases below pin the common widths.

pub mod algebra;
pub mod engine;
pub mod model;
pub mod oracle;
pub mod paper;
pub mod scalar;

pub use algebra::{integrate_linear_ode, ExpPolySeries, ExpPolyTerm, RateVector};
pub use engine::{zeroth_order, AssembledSolution, HpmExpansion};
pub use model::{rhs, validate, InitialState, ModelParams, ValidationReport};
pub use oracle::{integrate, Trajectory};
pub use paper::{
    audit, evaluate_paper_series, paper_coefficients, paper_series, AuditReport, PaperCoefficients,
    ResonantParameters, Verdict,
};
pub use scalar::Real;

pub type Params64 = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
pub type State64 = InitialState<f64>;
pub type State32 = InitialState<f32>;
pub type Series64 = ExpPolySeries<f64>;
pub type Series32 = ExpPolySeries<f32>;
pub type Expansion64 = HpmExpansion<f64>;
pub type Expansion32 = HpmExpansion<f32>;
pub type Trajectory64 = Trajectory<f64>;
pub type Trajectory32 = Trajectory<f32>;
