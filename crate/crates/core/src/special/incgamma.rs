//! Incomplete gamma functions.
//!
//! Series for `x < a + 1`, modified-Lentz continued fraction otherwise.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::gamma::lgamma;

const MAX_ITER: usize = 100_000;

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
pub fn reg_lower_inc_gamma<T: Real>(a: T, x: T) -> Result<T> {
    check(a, x, "reg_lower_inc_gamma")?;
    Ok(inc_gamma_pair(a, x).0)
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_upper_inc_gamma<T: Real>(a: T, x: T) -> Result<T> {
    check(a, x, "reg_upper_inc_gamma")?;
    Ok(inc_gamma_pair(a, x).1)
}

/// Upper incomplete gamma `Γ(p, x) = Γ(p) Q(p, x)`.
pub fn upper_inc_gamma<T: Real>(p: T, x: T) -> Result<T> {
    check(p, x, "upper_inc_gamma")?;
    Ok((lgamma(p) + inc_gamma_pair(p, x).1.ln()).exp())
}

/// Lower incomplete gamma `γ(a, x) = Γ(a) P(a, x)`.
pub fn lower_inc_gamma<T: Real>(a: T, x: T) -> Result<T> {
    check(a, x, "lower_inc_gamma")?;
    Ok((lgamma(a) + inc_gamma_pair(a, x).0.ln()).exp())
}

/// Complementary error function, via `erfc(x) = Q(1/2, x²)` for `x ≥ 0`.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let q = inc_gamma_pair(T::lit(0.5), x * x).1;
    if x >= T::zero() {
        q
    } else {
        T::lit(2.0) - q
    }
}

fn check<T: Real>(a: T, x: T, what: &'static str) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::Domain {
            what,
            value: a.as_f64(),
        });
    }
    if !(x >= T::zero()) || x.is_nan() {
        return Err(Error::Domain {
            what,
            value: x.as_f64(),
        });
    }
    Ok(())
}

/// `(P(a, x), Q(a, x))` with whichever one is small computed directly.
pub(crate) fn inc_gamma_pair<T: Real>(a: T, x: T) -> (T, T) {
    if x <= T::zero() {
        return (T::zero(), T::one());
    }
    inc_gamma_pair_ln(a, x.ln())
}

/// [`inc_gamma_pair`] at `x = e^{ln_x}`; keeps `P` accurate when `x`
/// underflows but `x^a` does not.
pub(crate) fn inc_gamma_pair_ln<T: Real>(a: T, ln_x: T) -> (T, T) {
    let zero = T::zero();
    let one = T::one();
    if ln_x == T::neg_infinity() {
        return (zero, one);
    }
    let x = ln_x.exp();
    if x == T::infinity() {
        return (one, zero);
    }
    let log_prefactor = a * ln_x - x - lgamma(a);
    if x < a + one {
        let p = series(a, x, log_prefactor);
        (p, one - p)
    } else {
        let q = continued_fraction(a, x, log_prefactor);
        (one - q, q)
    }
}

fn series<T: Real>(a: T, x: T, log_prefactor: T) -> T {
    let eps = T::epsilon();
    let mut ap = a;
    let mut term = a.recip();
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        term = term * x / ap;
        sum = sum + term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    (log_prefactor + sum.ln()).exp().min(T::one())
}

fn continued_fraction<T: Real>(a: T, x: T, log_prefactor: T) -> T {
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let one = T::one();
    let two = T::lit(2.0);
    let mut b = x + one - a;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::from_usize_lossy(i);
        let an = -fi * (fi - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h = h * delta;
        if (delta - one).abs() < eps {
            break;
        }
    }
    (log_prefactor + h.ln()).exp().min(T::one())
}
