//! Float helpers that work without `std`.

pub(crate) use libm::{cos, fabs as abs, floor, round, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// Wraps an angle into `(-pi, pi]`.
pub(crate) fn wrap_angle(angle: f64) -> f64 {
    let mut wrapped = angle - TAU * floor((angle + PI) / TAU);
    if wrapped <= -PI {
        wrapped += TAU;
    }
    wrapped
}

pub(crate) fn max(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

pub(crate) fn min(a: f64, b: f64) -> f64 {
    if a <= b {
        a
    } else {
        b
    }
}
