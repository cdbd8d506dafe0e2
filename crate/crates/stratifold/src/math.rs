//! Small floating-point helpers shared by the numeric model.

pub const TAU: f64 = core::f64::consts::TAU;

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Wrap an angle into `[0, TAU)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta - TAU * libm::floor(theta / TAU);
    // Rounding can land exactly on TAU; fold that back to 0.
    if t >= TAU {
        t - TAU
    } else if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Distance between two angles along the circle, always in `[0, TAU/2]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = abs(wrap_angle(a) - wrap_angle(b));
    if d > TAU / 2.0 {
        TAU - d
    } else {
        d
    }
}
