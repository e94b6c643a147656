//! Thin wrappers over [`libm`] plus the gamma function.
//!
//! All transcendental evaluation in the crate funnels through this module so
//! that `no_std` builds and test builds execute the identical code paths.

pub use core::f64::consts::PI;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Integer power by repeated multiplication.
pub fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Relative difference |a - b| / max(|a|, |b|), zero when both vanish.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = if libm::fabs(a) > libm::fabs(b) {
        libm::fabs(a)
    } else {
        libm::fabs(b)
    };
    if scale == 0.0 {
        0.0
    } else {
        libm::fabs(a - b) / scale
    }
}

/// Lanczos coefficients for g = 7, n = 9.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments, accurate to about 1e-13 relative.
pub fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection, only hit for arguments below 1/2
        return PI / (libm::sin(PI * x) * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + 7.5;
    sqrt(2.0 * PI) * powf(t, z + 0.5) * exp(-t) * a
}

/// Volume of the unit ball in dimension `n`.
///
/// Even dimensions use the exact factorial formula pi^(n/2)/(n/2)!; odd
/// dimensions go through the Lanczos gamma.
pub fn unit_ball_volume(n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if n.is_multiple_of(2) {
        let half = n / 2;
        let mut fact = 1.0;
        for k in 1..=half {
            fact *= k as f64;
        }
        powi(PI, half) / fact
    } else {
        powf(PI, n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
    }
}
