//! Log-gamma and digamma for real and complex arguments.
//!
//! Lanczos (g = 7, 9 terms) below |z| = 10 and the Stirling series above it.
//! Complex arguments left of Re z = 1/2 go through the reflection formula
//! with an overflow-free `ln sin(pi z)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
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

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_CUTOFF: f64 = 10.0;

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain {
            what: "log_gamma",
            value: x.as_f64(),
        });
    }
    Ok(lgamma(x))
}

/// Unchecked `ln Γ(x)`; the caller guarantees `x > 0`.
pub(crate) fn lgamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // ln Γ(x) = ln Γ(x + 1) - ln x keeps small arguments accurate
        return lgamma(x + T::one()) - x.ln();
    }
    if x >= T::lit(STIRLING_CUTOFF) {
        return stirling(x);
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    half * (T::TAU()).ln() + (z + half) * t.ln() - t + acc.ln()
}

fn stirling<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    let mut pow = inv;
    for &c in STIRLING_COEF.iter() {
        series = series + T::lit(c) * pow;
        pow = pow * inv2;
    }
    (x - half) * x.ln() - x + half * T::TAU().ln() + series
}

/// Digamma ψ(x) for `x > 0`.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain {
            what: "digamma",
            value: x.as_f64(),
        });
    }
    Ok(psi(x))
}

pub(crate) fn psi<T: Real>(mut x: T) -> T {
    let mut shift = T::zero();
    let cutoff = T::lit(10.0);
    while x < cutoff {
        shift = shift - x.recip();
        x = x + T::one();
    }
    let inv2 = (x * x).recip();
    // -sum B_{2k} / (2k x^{2k})
    let tail = inv2
        * (T::lit(-1.0 / 12.0)
            + inv2
                * (T::lit(1.0 / 120.0)
                    + inv2
                        * (T::lit(-1.0 / 252.0)
                            + inv2
                                * (T::lit(1.0 / 240.0)
                                    + inv2 * (T::lit(-1.0 / 132.0) + inv2 * T::lit(691.0 / 32_760.0))))));
    shift + x.ln() - T::lit(0.5) / x + tail
}

/// Trigamma ψ'(x) for `x > 0`.
pub(crate) fn trigamma<T: Real>(mut x: T) -> T {
    let mut acc = T::zero();
    let cutoff = T::lit(10.0);
    while x < cutoff {
        acc = acc + (x * x).recip();
        x = x + T::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    // 1/x + 1/(2x²) + Σ B_{2k} / x^{2k+1}
    let tail = inv2
        * inv
        * (T::lit(1.0 / 6.0)
            + inv2
                * (T::lit(-1.0 / 30.0)
                    + inv2 * (T::lit(1.0 / 42.0) + inv2 * (T::lit(-1.0 / 30.0) + inv2 * T::lit(5.0 / 66.0)))));
    acc + inv + T::lit(0.5) * inv2 + tail
}

/// `ln Γ(z)` on the complex plane away from the poles.
///
/// Only the real part is branch-independent; the imaginary part is correct
/// modulo `2π`, which is all that exponentiation needs.
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        let one = Complex::new(T::one(), T::zero());
        return Complex::new(T::PI().ln(), T::zero()) - ln_sin_pi(z) - ln_gamma_complex(one - z);
    }
    if z.norm() >= T::lit(STIRLING_CUTOFF) {
        let inv = z.inv();
        let inv2 = inv * inv;
        let mut series = Complex::new(T::zero(), T::zero());
        let mut pow = inv;
        for &c in STIRLING_COEF.iter() {
            series = series + pow * T::lit(c);
            pow = pow * inv2;
        }
        return (z - half) * z.ln() - z + half * T::TAU().ln() + series;
    }
    let zm = z - T::one();
    let mut acc = Complex::new(T::lit(LANCZOS_COEF[0]), T::zero());
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + (zm + T::from_usize_lossy(i)).inv() * T::lit(c);
    }
    let t = zm + T::lit(LANCZOS_G) + half;
    (zm + half) * t.ln() - t + acc.ln() + half * T::TAU().ln()
}

/// `ln sin(π z)` without overflow for large |Im z|.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    // sin(π z) has period 2 in Re z
    let shift = (z.re / two).round() * two;
    let z = Complex::new(z.re - shift, z.im);
    let pi = T::PI();
    let i = Complex::new(T::zero(), T::one());
    let ln_half = T::lit(0.5).ln();
    if z.im > T::lit(10.0) {
        let w = (i * z * pi * two).exp();
        -(i * z * pi) + Complex::new(ln_half, pi / two) + (Complex::new(T::one(), T::zero()) - w).ln()
    } else if z.im < T::lit(-10.0) {
        let w = (-(i * z * pi * two)).exp();
        i * z * pi + Complex::new(ln_half, -pi / two) + (Complex::new(T::one(), T::zero()) - w).ln()
    } else {
        (z * pi).sin().ln()
    }
}
