//! Exact closed-form algebra over finite sums of terms `c * t^m * e^{lambda t}`.
//!
//! Every perturbation order of the model lives in this function class, with
//! `lambda` always an integer combination of the three linear rates
//! (r, -d1, -d2). Exponents are therefore kept on an integer lattice
//! ([`RateVector`]): products add lattice vectors, like terms merge by exact
//! lattice equality, and resonance in [`integrate_linear_ode`] is detected by
//! lattice equality alone. Floats enter only when a series is evaluated or a
//! particular-solution denominator is formed — so two rates that merely
//! coincide numerically (say d1 = d2) are never confused.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::model::ModelParams;
use crate::scalar::Real;

/// Integer exponent vector over the rate basis (r, -d1, -d2).
///
/// The numeric rate is `a*r - b*d1 - c*d2`; equality is component-wise
/// integer equality, never float comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RateVector {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl RateVector {
    pub const ZERO: RateVector = RateVector::new(0, 0, 0);
    /// Rate of the susceptible zeroth-order mode `e^{r t}`.
    pub const R: RateVector = RateVector::new(1, 0, 0);
    /// Rate of the infected zeroth-order mode `e^{-d1 t}`.
    pub const NEG_D1: RateVector = RateVector::new(0, 1, 0);
    /// Rate of the predator zeroth-order mode `e^{-d2 t}`.
    pub const NEG_D2: RateVector = RateVector::new(0, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        RateVector { a, b, c }
    }

    /// Numeric value `a*r - b*d1 - c*d2`. The one place the lattice meets
    /// floats.
    pub fn value<T: Real>(&self, params: &ModelParams<T>) -> T {
        let of = |n: i64| T::from_i64(n).expect("small lattice component");
        of(self.a) * params.r - of(self.b) * params.d1 - of(self.c) * params.d2
    }

    /// Symbolic form such as `2r-d1` or `-d1-2d2`; `0` for the zero vector.
    pub fn symbol(&self) -> String {
        let mut out = String::new();
        let push = |mult: i64, name: &str, out: &mut String| {
            if mult == 0 {
                return;
            }
            if mult > 0 && !out.is_empty() {
                out.push('+');
            }
            if mult == -1 {
                out.push('-');
            } else if mult != 1 {
                out.push_str(&mult.to_string());
            }
            out.push_str(name);
        };
        push(self.a, "r", &mut out);
        push(-self.b, "d1", &mut out);
        push(-self.c, "d2", &mut out);
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for RateVector {
    type Output = RateVector;
    fn add(self, rhs: RateVector) -> RateVector {
        RateVector::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl Sub for RateVector {
    type Output = RateVector;
    fn sub(self, rhs: RateVector) -> RateVector {
        RateVector::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl Neg for RateVector {
    type Output = RateVector;
    fn neg(self) -> RateVector {
        RateVector::new(-self.a, -self.b, -self.c)
    }
}

impl fmt::Display for RateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

/// One term `coeff * t^power * e^{rate t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpPolyTerm<T> {
    pub coeff: T,
    pub power: u32,
    pub rate: RateVector,
}

/// Finite sum of exp-poly terms in canonical form: at most one term per
/// `(power, rate)` key and no exactly-zero coefficients.
///
/// The map representation keeps the series canonical under every operation;
/// zero tests are exact (`== 0`), tolerances live only at evaluation and
/// comparison boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolySeries<T> {
    terms: BTreeMap<(RateVector, u32), T>,
}

impl<T: Real> Default for ExpPolySeries<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> ExpPolySeries<T> {
    /// The empty (zero) series.
    pub fn zero() -> Self {
        ExpPolySeries {
            terms: BTreeMap::new(),
        }
    }

    /// Single-term series `coeff * t^power * e^{rate t}`.
    pub fn term(coeff: T, power: u32, rate: RateVector) -> Self {
        let mut series = Self::zero();
        series.add_term(coeff, power, rate);
        series
    }

    /// Collect an arbitrary term list into canonical form: like keys merge,
    /// exact-zero coefficients drop.
    pub fn from_terms<I: IntoIterator<Item = ExpPolyTerm<T>>>(terms: I) -> Self {
        let mut series = Self::zero();
        for term in terms {
            series.add_term(term.coeff, term.power, term.rate);
        }
        series
    }

    /// Re-collect; idempotent and evaluation-preserving.
    pub fn collect(&self) -> Self {
        Self::from_terms(self.iter())
    }

    /// Merge one term in, keeping the canonical-form invariants.
    pub fn add_term(&mut self, coeff: T, power: u32, rate: RateVector) {
        if coeff == T::zero() {
            return;
        }
        let entry = self.terms.entry((rate, power)).or_insert_with(T::zero);
        *entry = *entry + coeff;
        if *entry == T::zero() {
            self.terms.remove(&(rate, power));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in (rate, power) key order.
    pub fn iter(&self) -> impl Iterator<Item = ExpPolyTerm<T>> + '_ {
        self.terms
            .iter()
            .map(|(&(rate, power), &coeff)| ExpPolyTerm { coeff, power, rate })
    }

    /// Coefficient of `t^power * e^{rate t}`, zero when absent.
    pub fn coefficient(&self, power: u32, rate: RateVector) -> T {
        self.terms
            .get(&(rate, power))
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// The distinct exponent vectors present.
    pub fn rate_set(&self) -> std::collections::BTreeSet<RateVector> {
        self.terms.keys().map(|&(rate, _)| rate).collect()
    }

    /// Numeric value at time `t` for the given parameters.
    pub fn evaluate(&self, params: &ModelParams<T>, t: T) -> T {
        let mut acc = T::zero();
        for term in self.iter() {
            let rate = term.rate.value(params);
            acc = acc + term.coeff * t.powi(term.power as i32) * (rate * t).exp();
        }
        acc
    }

    /// Value at `t = 0`: the exact sum of the power-zero coefficients.
    pub fn evaluate_at_zero(&self) -> T {
        self.terms
            .iter()
            .filter(|((_, power), _)| *power == 0)
            .fold(T::zero(), |acc, (_, &coeff)| acc + coeff)
    }

    /// Term-wise product; rates add on the lattice, powers add.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut product = Self::zero();
        for f in self.iter() {
            for g in other.iter() {
                product.add_term(f.coeff * g.coeff, f.power + g.power, f.rate + g.rate);
            }
        }
        product
    }

    /// Scalar multiple.
    pub fn scaled(&self, factor: T) -> Self {
        let mut scaled = Self::zero();
        for term in self.iter() {
            scaled.add_term(term.coeff * factor, term.power, term.rate);
        }
        scaled
    }

    /// Sum of two series.
    pub fn plus(&self, other: &Self) -> Self {
        let mut sum = self.clone();
        for term in other.iter() {
            sum.add_term(term.coeff, term.power, term.rate);
        }
        sum
    }

    /// Difference of two series.
    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-T::one()))
    }

    /// Exact term-wise derivative. The `lambda * c` part folds the numeric
    /// rate into the coefficient, so the result depends on `params`.
    pub fn differentiate(&self, params: &ModelParams<T>) -> Self {
        let mut derivative = Self::zero();
        for term in self.iter() {
            derivative.add_term(term.coeff * term.rate.value(params), term.power, term.rate);
            if term.power > 0 {
                derivative.add_term(term.coeff * T::int(term.power), term.power - 1, term.rate);
            }
        }
        derivative
    }
}

/// Solve `y' + a y = forcing` with `y(0) = y0`, exactly, where `decay`
/// encodes `a` on the rate lattice (`decay.value(params) == a`).
///
/// Each forcing term `c t^m e^{lambda t}` contributes:
/// - if `lambda != -a` on the lattice, the exponential-polynomial particular
///   solution `q(t) e^{lambda t}` with `deg q = m`, coefficients solved by
///   back-substitution from the highest power down;
/// - if `lambda = -a` (resonance), the secular term
///   `c t^{m+1} e^{lambda t} / (m+1)`.
///
/// A homogeneous term `kappa e^{-a t}` then matches the initial value.
/// Resonance is decided by lattice equality only: numerically coincident but
/// lattice-distinct rates take the non-resonant branch (and an exactly
/// vanishing denominator there reflects parameters flagged by validation).
pub fn integrate_linear_ode<T: Real>(
    decay: RateVector,
    forcing: &ExpPolySeries<T>,
    y0: T,
    params: &ModelParams<T>,
) -> ExpPolySeries<T> {
    let homogeneous_rate = -decay;
    let mut solution = ExpPolySeries::zero();

    for term in forcing.iter() {
        let shift = term.rate + decay; // lambda + a on the lattice
        if shift == RateVector::ZERO {
            solution.add_term(
                term.coeff / T::int(term.power + 1),
                term.power + 1,
                term.rate,
            );
        } else {
            let denom = shift.value(params);
            // q' + denom*q = c t^m, solved from q_m = c/denom downward via
            // q_{j-1} = -j q_j / denom.
            let mut q = term.coeff / denom;
            solution.add_term(q, term.power, term.rate);
            let mut j = term.power;
            while j > 0 {
                q = -(T::int(j)) * q / denom;
                j -= 1;
                solution.add_term(q, j, term.rate);
            }
        }
    }

    let kappa = y0 - solution.evaluate_at_zero();
    solution.add_term(kappa, 0, homogeneous_rate);
    solution
}
