//! Shared fixtures for the integration tests.
#![allow(dead_code)] // each test target compiles this module separately

use ecoepi_hpm::{InitialState, ModelParams};
use rand::Rng;

/// The reference comparison setup.
pub fn baseline() -> (ModelParams<f64>, InitialState<f64>) {
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

/// Random valid parameters with the three linear rates kept away from the
/// series-denominator coincidences (r = d1, r = d2 and friends).
pub fn non_resonant_draw<R: Rng>(rng: &mut R) -> (ModelParams<f64>, InitialState<f64>) {
    loop {
        let params = ModelParams {
            r: rng.gen_range(0.05..0.5),
            k: rng.gen_range(0.1..1.0),
            c1: rng.gen_range(0.01..0.5),
            c2: rng.gen_range(0.01..0.5),
            delta: rng.gen_range(0.01..0.5),
            e: rng.gen_range(0.01..0.9),
            d1: rng.gen_range(0.05..0.6),
            d2: rng.gen_range(0.05..0.6),
        };
        let gaps: [f64; 8] = [
            params.r - params.d1,
            params.r - params.d2,
            params.d1 - params.d2,
            params.r - 2.0 * params.d1,
            params.r - 2.0 * params.d2,
            params.r - params.d1 - params.d2,
            2.0 * params.r - params.d1,
            2.0 * params.r - params.d2,
        ];
        if gaps.iter().all(|g| g.abs() > 0.02) {
            let ics = InitialState {
                s0: rng.gen_range(0.005..0.05),
                i0: rng.gen_range(0.005..0.05),
                p0: rng.gen_range(0.005..0.05),
            };
            return (params, ics);
        }
    }
}
