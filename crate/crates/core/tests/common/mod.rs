//! Generators shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use roughfn::function::{Builtin, RealFunction};

/// Period-1 trigonometric polynomial of degree 1..=3 with coefficients in [−1, 1].
pub fn trig_poly() -> impl Strategy<Value = Builtin> {
    (1usize..=3).prop_flat_map(|deg| {
        (
            -1.0..1.0f64,
            prop::collection::vec(-1.0..1.0f64, deg),
            prop::collection::vec(-1.0..1.0f64, deg),
        )
            .prop_map(|(constant, cos, sin)| Builtin::TrigPoly { constant, cos, sin })
    })
}

/// Period-1 step `0` on `[0, c]`, `h` on `(c, 1]`.
pub fn step() -> impl Strategy<Value = Builtin> {
    (0.1..0.9f64, -2.0..2.0f64).prop_map(|(c, h)| Builtin::Step { c, h })
}

/// A trig polynomial or a step.
pub fn builtin_g() -> impl Strategy<Value = RealFunction> {
    prop_oneof![trig_poly(), step()].prop_map(RealFunction::from)
}

/// Dyadic abscissae `i/2^20` in `[0, 1)`: every `bⁿx` with integer `b` and
/// the period reduction in between is then computed exactly, so two
/// evaluations that should share a chain of arguments really do.
pub fn dyadic_points(count: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u32..(1 << 20), count).prop_map(|v| {
        v.into_iter()
            .map(|i| i as f64 / (1u32 << 20) as f64)
            .collect()
    })
}
