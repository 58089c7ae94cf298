//! Property tests for the exp-poly algebra: multiplication homomorphism,
//! exact linear-ODE integration, collection, and resonance handling.

use ecoepi_hpm::algebra::{integrate_linear_ode, ExpPolySeries, ExpPolyTerm, RateVector};
use ecoepi_hpm::ModelParams;
use proptest::prelude::*;

/// Rates with no small integer relation between r, d1, d2, so no lattice-
/// distinct exponent combination evaluates to zero in the boxes used here.
fn params() -> ModelParams<f64> {
    ModelParams {
        r: 0.13,
        k: 0.3,
        c1: 0.1,
        c2: 0.2,
        delta: 0.1,
        e: 0.1,
        d1: 0.29,
        d2: 0.41,
    }
}

fn arb_rate() -> impl Strategy<Value = RateVector> {
    (0..=2i64, 0..=2i64, 0..=2i64).prop_map(|(a, b, c)| RateVector::new(a, b, c))
}

fn arb_term() -> impl Strategy<Value = ExpPolyTerm<f64>> {
    (-2.0..2.0f64, 0..=2u32, arb_rate()).prop_map(|(coeff, power, rate)| ExpPolyTerm {
        coeff,
        power,
        rate,
    })
}

fn arb_series(max_terms: usize) -> impl Strategy<Value = ExpPolySeries<f64>> {
    prop::collection::vec(arb_term(), 0..=max_terms).prop_map(ExpPolySeries::from_terms)
}

const DECAYS: [RateVector; 3] = [
    RateVector::new(-1, 0, 0),
    RateVector::new(0, -1, 0),
    RateVector::new(0, 0, -1),
];

/// A decay tag and a forcing whose particular-solution denominators are
/// bounded away from zero, keeping coefficient amplification moderate.
/// Lattice-resonant terms (zero shift) are allowed; they divide by nothing.
fn arb_ode_instance() -> impl Strategy<Value = (usize, ExpPolySeries<f64>)> {
    (0..3usize, arb_series(6)).prop_filter("denominator too small", |(which, forcing)| {
        let p = params();
        forcing.iter().all(|term| {
            let shift = term.rate + DECAYS[*which];
            shift == RateVector::ZERO || shift.value(&p).abs() >= 0.05
        })
    })
}

proptest! {
    #[test]
    fn multiplication_is_an_evaluation_homomorphism(
        f in arb_series(4),
        g in arb_series(4),
        t in 0.0..5.0f64,
    ) {
        let p = params();
        let product = f.multiply(&g).evaluate(&p, t);
        let pointwise = f.evaluate(&p, t) * g.evaluate(&p, t);
        prop_assert!(
            (product - pointwise).abs() <= 1e-10 * (1.0 + pointwise.abs()),
            "product {product} vs pointwise {pointwise}"
        );
    }

    #[test]
    fn multiplication_commutes(f in arb_series(4), g in arb_series(4)) {
        // term-wise products commute exactly, so the maps are identical
        prop_assert_eq!(f.multiply(&g), g.multiply(&f));
    }

    #[test]
    fn collect_is_idempotent_and_evaluation_preserving(
        terms in prop::collection::vec(arb_term(), 0..10),
        t in 0.0..3.0f64,
    ) {
        let p = params();
        let collected = ExpPolySeries::from_terms(terms.clone());
        prop_assert_eq!(collected.collect(), collected.clone());

        let raw: f64 = terms
            .iter()
            .map(|term| term.coeff * t.powi(term.power as i32) * (term.rate.value(&p) * t).exp())
            .sum();
        let scale = terms.iter().map(|term| term.coeff.abs()).sum::<f64>();
        prop_assert!(
            (collected.evaluate(&p, t) - raw).abs() <= 1e-12 * (1.0 + scale * (1.5 * t).exp()),
            "collected {} vs raw {}",
            collected.evaluate(&p, t),
            raw
        );
    }

    #[test]
    fn no_zero_coefficients_survive_collection(terms in prop::collection::vec(arb_term(), 0..10)) {
        let collected = ExpPolySeries::from_terms(terms);
        prop_assert!(collected.iter().all(|term| term.coeff != 0.0));
    }

    #[test]
    fn integration_meets_its_initial_value(
        (which, forcing) in arb_ode_instance(),
        y0 in -2.0..2.0f64,
    ) {
        let p = params();
        let decay = DECAYS[which];
        let y = integrate_linear_ode(decay, &forcing, y0, &p);
        // coefficients can sit orders of magnitude above y0; measure the
        // defect against their scale
        let scale: f64 = y.iter().map(|term| term.coeff.abs()).sum();
        prop_assert!((y.evaluate(&p, 0.0) - y0).abs() <= 1e-12 * (1.0 + scale));
    }

    #[test]
    fn integration_solves_the_ode_identically(
        (which, forcing) in arb_ode_instance(),
        y0 in -2.0..2.0f64,
    ) {
        let p = params();
        let decay = DECAYS[which];
        let a = decay.value(&p);
        let y = integrate_linear_ode(decay, &forcing, y0, &p);
        let y_prime = y.differentiate(&p);

        for sample in 0..20 {
            let t = 2.0 * sample as f64 / 19.0;
            // residual of y' + a y - forcing, with the derivative taken
            // term-wise
            let residual = y_prime.evaluate(&p, t) + a * y.evaluate(&p, t)
                - forcing.evaluate(&p, t);
            prop_assert!(residual.abs() <= 1e-8, "residual {residual} at t={t}");

            // and the term-wise derivative cross-checked by central
            // finite differences
            let h = 1e-6;
            let fd = (y.evaluate(&p, t + h) - y.evaluate(&p, t - h)) / (2.0 * h);
            let analytic = y_prime.evaluate(&p, t);
            prop_assert!(
                (fd - analytic).abs()
                    <= 1e-5 * (1.0 + analytic.abs() + y.evaluate(&p, t).abs()),
                "fd {fd} vs analytic {analytic} at t={t}"
            );
        }
    }

    #[test]
    fn resonant_forcing_gains_exactly_one_power_of_t(
        coeff in 0.1..2.0f64,
        power in 0..=2u32,
        which in 0..3usize,
    ) {
        let p = params();
        let decay = [
            RateVector::new(-1, 0, 0),
            RateVector::new(0, -1, 0),
            RateVector::new(0, 0, -1),
        ][which];
        let homogeneous = RateVector::new(-decay.a, -decay.b, -decay.c);
        let forcing = ExpPolySeries::term(coeff, power, homogeneous);
        let y = integrate_linear_ode(decay, &forcing, 0.0, &p);
        let secular = y.coefficient(power + 1, homogeneous);
        prop_assert!((secular - coeff / (power + 1) as f64).abs() <= 1e-15);
        // no term beyond the secular power
        prop_assert!(y.iter().all(|term| term.power <= power + 1));
    }
}

#[test]
fn numerically_equal_but_lattice_distinct_rates_never_merge_or_resonate() {
    // d1 == d2 exactly; the (0,1,0) and (0,0,1) directions still differ
    let mut p = params();
    p.d2 = p.d1;
    let mut series = ExpPolySeries::term(1.0, 0, RateVector::NEG_D1);
    series.add_term(2.0, 0, RateVector::NEG_D2);
    assert_eq!(series.len(), 2, "numeric coincidence must not merge terms");

    let decay = RateVector::new(0, -1, 0); // +d1
    let forcing = ExpPolySeries::term(1.0, 0, RateVector::NEG_D2);
    let y = integrate_linear_ode(decay, &forcing, 0.0, &p);
    assert!(
        y.iter().all(|term| term.power == 0),
        "resonance is a lattice property, not a float one"
    );
}

#[test]
fn polynomial_forcing_particular_solution_is_exact() {
    // y' + a y = c t^2 e^{lambda t} has particular solution
    // e^{lambda t} (c/d t^2 - 2c/d^2 t + 2c/d^3) with d = lambda + a
    let p = params();
    let decay = RateVector::new(0, -1, 0); // a = d1
    let lambda = RateVector::new(1, 0, 0);
    let c = 0.7;
    let d = lambda.value(&p) + p.d1;
    let y = integrate_linear_ode(decay, &ExpPolySeries::term(c, 2, lambda), 0.0, &p);
    assert!((y.coefficient(2, lambda) - c / d).abs() < 1e-15);
    assert!((y.coefficient(1, lambda) + 2.0 * c / (d * d)).abs() < 1e-14);
    assert!((y.coefficient(0, lambda) - 2.0 * c / (d * d * d)).abs() < 1e-13);
}
