//! Perturbation-order recursion for the model, carried out entirely in
//! exp-poly closed form.
//!
//! The operator split keeps `d/dt - r`, `d/dt + d1`, `d/dt + d2` as the
//! linear parts; every quadratic interaction is forcing one order down. The
//! zeroth order is the three bare exponentials; order k >= 1 solves a linear
//! ODE whose forcing is the order-(k-1) convolution of the quadratic terms.
//! Corrections carry zero initial values, so the assembled truncation
//! returns the initial data exactly at t = 0.
//!
//! Particular-solution denominators are integer combinations of (r, d1, d2)
//! that are nonzero on the lattice but can vanish numerically for special
//! parameter sets; validation warns about the combinations reachable through
//! order 2. Deeper orders bring in further combinations — d1 = 2r, say,
//! enters at order 3 (and holds for the reference parameter set) — and
//! extending across such a coincidence yields non-finite coefficients.

use crate::algebra::{integrate_linear_ode, ExpPolySeries, RateVector};
use crate::model::{rhs, InitialState, ModelParams};
use crate::scalar::Real;

/// Decay tags of the three linear operators, on the rate lattice:
/// `y' + a y` with `a = -r`, `+d1`, `+d2` respectively.
pub const DECAY_S: RateVector = RateVector::new(-1, 0, 0);
pub const DECAY_I: RateVector = RateVector::new(0, -1, 0);
pub const DECAY_P: RateVector = RateVector::new(0, 0, -1);

/// The expansion S = sum_k S_k, I = sum_k I_k, P = sum_k P_k, each component
/// an [`ExpPolySeries`], indexed by perturbation order.
#[derive(Clone, Debug, PartialEq)]
pub struct HpmExpansion<T> {
    s: Vec<ExpPolySeries<T>>,
    i: Vec<ExpPolySeries<T>>,
    p: Vec<ExpPolySeries<T>>,
}

/// Component-wise sum of orders 0..=N, collected to canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledSolution<T> {
    pub s: ExpPolySeries<T>,
    pub i: ExpPolySeries<T>,
    pub p: ExpPolySeries<T>,
}

impl<T: Real> HpmExpansion<T> {
    /// Order-0 expansion: `S(0) e^{rt}`, `I(0) e^{-d1 t}`, `P(0) e^{-d2 t}`.
    pub fn new(ics: &InitialState<T>) -> Self {
        let (s0, i0, p0) = zeroth_order(ics);
        HpmExpansion {
            s: vec![s0],
            i: vec![i0],
            p: vec![p0],
        }
    }

    /// Highest computed order.
    pub fn order(&self) -> usize {
        self.s.len() - 1
    }

    pub fn s_terms(&self) -> &[ExpPolySeries<T>] {
        &self.s
    }

    pub fn i_terms(&self) -> &[ExpPolySeries<T>] {
        &self.i
    }

    pub fn p_terms(&self) -> &[ExpPolySeries<T>] {
        &self.p
    }

    /// Right-hand sides of the order-k linear systems, from the convolution
    /// rule over ordered index pairs i + j = k - 1:
    ///
    /// ```text
    /// S_k: -(r/K) sum S_i S_j - (r/K) sum S_i I_j - delta sum S_i I_j - c1 sum S_i P_j
    /// I_k:  delta sum S_i I_j - c2 sum I_i P_j
    /// P_k:  e c1  sum S_i P_j + e c2 sum I_i P_j
    /// ```
    ///
    /// Panics if `k == 0` (the zeroth order has no forcing) or if the
    /// expansion is not complete through order k - 1.
    pub fn order_k_forcing(&self, params: &ModelParams<T>, k: usize) -> [ExpPolySeries<T>; 3] {
        assert!(k >= 1, "order 0 has no forcing");
        assert!(
            k <= self.order() + 1,
            "forcing at order {k} needs the expansion through order {}",
            k - 1
        );
        let conv = |xs: &[ExpPolySeries<T>], ys: &[ExpPolySeries<T>]| {
            let mut acc = ExpPolySeries::zero();
            for idx in 0..k {
                acc = acc.plus(&xs[idx].multiply(&ys[k - 1 - idx]));
            }
            acc
        };
        let ss = conv(&self.s, &self.s);
        let si = conv(&self.s, &self.i);
        let sp = conv(&self.s, &self.p);
        let ip = conv(&self.i, &self.p);

        let neg_r_over_k = -(params.r / params.k);
        let s_forcing = ss
            .scaled(neg_r_over_k)
            .plus(&si.scaled(neg_r_over_k))
            .plus(&si.scaled(-params.delta))
            .plus(&sp.scaled(-params.c1));
        let i_forcing = si.scaled(params.delta).plus(&ip.scaled(-params.c2));
        let p_forcing = sp
            .scaled(params.e * params.c1)
            .plus(&ip.scaled(params.e * params.c2));
        [s_forcing, i_forcing, p_forcing]
    }

    /// Append the next order: integrate the order-k forcing through the
    /// per-variable linear operators with zero initial values.
    pub fn extend(&mut self, params: &ModelParams<T>) {
        let k = self.order() + 1;
        let [fs, fi, fp] = self.order_k_forcing(params, k);
        self.s
            .push(integrate_linear_ode(DECAY_S, &fs, T::zero(), params));
        self.i
            .push(integrate_linear_ode(DECAY_I, &fi, T::zero(), params));
        self.p
            .push(integrate_linear_ode(DECAY_P, &fp, T::zero(), params));
    }

    /// Extend until order `n` is available.
    pub fn extend_to(&mut self, params: &ModelParams<T>, n: usize) {
        while self.order() < n {
            self.extend(params);
        }
    }

    /// Sum orders 0..=n into one collected series per variable.
    ///
    /// Panics if `n` exceeds the computed order.
    pub fn assemble(&self, n: usize) -> AssembledSolution<T> {
        assert!(
            n <= self.order(),
            "assemble({n}) requested but only order {} is computed",
            self.order()
        );
        let sum = |parts: &[ExpPolySeries<T>]| {
            parts[..=n]
                .iter()
                .fold(ExpPolySeries::zero(), |acc, part| acc.plus(part))
        };
        AssembledSolution {
            s: sum(&self.s),
            i: sum(&self.i),
            p: sum(&self.p),
        }
    }
}

/// Solutions of the unperturbed linear system, as single-term series on the
/// lattice basis.
pub fn zeroth_order<T: Real>(
    ics: &InitialState<T>,
) -> (ExpPolySeries<T>, ExpPolySeries<T>, ExpPolySeries<T>) {
    (
        ExpPolySeries::term(ics.s0, 0, RateVector::R),
        ExpPolySeries::term(ics.i0, 0, RateVector::NEG_D1),
        ExpPolySeries::term(ics.p0, 0, RateVector::NEG_D2),
    )
}

impl<T: Real> AssembledSolution<T> {
    pub fn evaluate(&self, params: &ModelParams<T>, t: T) -> [T; 3] {
        [
            self.s.evaluate(params, t),
            self.i.evaluate(params, t),
            self.p.evaluate(params, t),
        ]
    }

    /// Defect of the truncation: term-wise analytic derivative minus the
    /// model right-hand side at the truncation's own value.
    pub fn residual(&self, params: &ModelParams<T>, t: T) -> [T; 3] {
        let value = self.evaluate(params, t);
        let f = rhs(params, value);
        [
            self.s.differentiate(params).evaluate(params, t) - f[0],
            self.i.differentiate(params).evaluate(params, t) - f[1],
            self.p.differentiate(params).evaluate(params, t) - f[2],
        ]
    }
}
