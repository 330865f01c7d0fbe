//! Thin wrappers over `libm` so the crate builds without `std` and every
//! platform evaluates transcendentals identically (outputs are meant to be
//! bit-reproducible per seed).

pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Integer power by repeated squaring; exact for powers of two bases.
pub(crate) fn powi(base: f64, exp: i32) -> f64 {
    let mut e = exp.unsigned_abs();
    let mut b = base;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    if exp < 0 {
        1.0 / acc
    } else {
        acc
    }
}
