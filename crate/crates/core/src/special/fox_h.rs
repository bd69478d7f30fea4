//! Fox H and Meijer G functions of a positive real argument, evaluated
//! as Mellin–Barnes integrals along a vertical line.
//!
//! With Θ(s) the usual gamma ratio, the line `Re s = σ` gives
//! `H(z) = (1/π) ∫₀^∞ Re[Θ(σ+it) z^{-σ-it}] dt` for real parameters.
//! σ is placed at the minimum over the admissible strip of
//! `φ(σ) = ln|Θ(σ)| − σ ln z`, where the integrand is least oscillatory.

use num_complex::Complex;

use super::gamma::ln_gamma_complex;
use super::quad::{adaptive_quad, QuadratureConfig};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orders and coefficient pairs of `H^{m,n}_{p,q}`. `p` and `q` are the
/// lengths of `upper` (pairs `(a_j, A_j)`) and `lower` (pairs `(b_j, B_j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec<T> {
    m: usize,
    n: usize,
    upper: Vec<(T, T)>,
    lower: Vec<(T, T)>,
    strip: (T, T),
}

impl<T: Real> FoxHSpec<T> {
    pub fn new(m: usize, n: usize, upper: Vec<(T, T)>, lower: Vec<(T, T)>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return Err(Error::InvalidSpec(format!(
                "orders m={m}, n={n} exceed q={}, p={}",
                lower.len(),
                upper.len()
            )));
        }
        for &(c, k) in upper.iter().chain(lower.iter()) {
            if !c.is_finite() || !k.is_finite() || !(k > T::zero()) {
                return Err(Error::InvalidSpec(format!(
                    "coefficient pair ({c}, {k}) must be finite with positive scale"
                )));
            }
        }
        let lo = lower[..m]
            .iter()
            .map(|&(b, bb)| -b / bb)
            .fold(T::neg_infinity(), T::max);
        let hi = upper[..n]
            .iter()
            .map(|&(a, aa)| (T::one() - a) / aa)
            .fold(T::infinity(), T::min);
        if !(lo < hi) {
            return Err(Error::InvalidSpec(format!(
                "pole families overlap: left poles reach {lo}, right poles start at {hi}"
            )));
        }
        let sum = |v: &[(T, T)]| v.iter().fold(T::zero(), |acc, &(_, k)| acc + k);
        let alpha = sum(&upper[..n]) - sum(&upper[n..]) + sum(&lower[..m]) - sum(&lower[m..]);
        if !(alpha > T::zero()) {
            return Err(Error::InvalidSpec(format!(
                "integrand does not decay along vertical lines (alpha = {alpha})"
            )));
        }
        Ok(Self {
            m,
            n,
            upper,
            lower,
            strip: (lo, hi),
        })
    }

    /// Meijer G orders with all scale coefficients equal to one.
    pub fn meijer(m: usize, n: usize, a: &[T], b: &[T]) -> Result<Self> {
        Self::new(
            m,
            n,
            a.iter().map(|&x| (x, T::one())).collect(),
            b.iter().map(|&x| (x, T::one())).collect(),
        )
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.upper.len(), self.lower.len())
    }

    /// Open interval of admissible contour abscissae.
    pub fn strip(&self) -> (T, T) {
        self.strip
    }

    fn ln_theta(&self, s: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let mut acc = Complex::new(T::zero(), T::zero());
        for (j, &(b, bb)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc = acc + ln_gamma_complex(s * bb + b);
            } else {
                acc = acc - ln_gamma_complex(one - s * bb - b);
            }
        }
        for (j, &(a, aa)) in self.upper.iter().enumerate() {
            if j < self.n {
                acc = acc + ln_gamma_complex(one - s * aa - a);
            } else {
                acc = acc - ln_gamma_complex(s * aa + a);
            }
        }
        acc
    }

    fn phi(&self, sigma: T, ln_z: T) -> T {
        let v = self.ln_theta(Complex::new(sigma, T::zero())).re - sigma * ln_z;
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    }

    fn abscissa(&self, ln_z: T) -> T {
        let (lo, hi) = self.strip;
        let f = |s: T| self.phi(s, ln_z);
        let span = T::lit(8.0);
        let (mut a, mut b) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo, lo + span),
            (false, true) => (hi - span, hi),
            (false, false) => (-span, span),
        };
        // stretch an open side until φ turns upward
        let limit = T::lit(1e7);
        if !hi.is_finite() {
            while (b - a) < limit && f(b) < f(b - (b - a) * T::lit(0.01)) {
                b = b + (b - a);
            }
        }
        if !lo.is_finite() {
            while (b - a) < limit && f(a) < f(a + (b - a) * T::lit(0.01)) {
                a = a - (b - a);
            }
        }
        let grid = 96;
        let step = (b - a) / T::from_usize_lossy(grid);
        let node = |k: usize| a + step * T::from_usize_lossy(k);
        let mut best = 1;
        let mut best_v = f(node(1));
        for k in 2..grid {
            let v = f(node(k));
            if v < best_v {
                best = k;
                best_v = v;
            }
        }
        // golden-section refinement inside the neighbouring grid cells
        let (mut x0, mut x3) = (node(best - 1), node(best + 1));
        let g = T::lit(0.618_033_988_749_894_9);
        let mut x1 = x3 - g * (x3 - x0);
        let mut x2 = x0 + g * (x3 - x0);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 < f2 {
                x3 = x2;
                x2 = x1;
                f2 = f1;
                x1 = x3 - g * (x3 - x0);
                f1 = f(x1);
            } else {
                x0 = x1;
                x1 = x2;
                f1 = f2;
                x2 = x0 + g * (x3 - x0);
                f2 = f(x2);
            }
            if (x3 - x0).abs() <= T::epsilon().sqrt() * (T::one() + x1.abs()) {
                break;
            }
        }
        let s = (x1 + x2) * T::lit(0.5);
        if s > lo && s < hi {
            s
        } else {
            node(best)
        }
    }
}

/// Evaluates `H^{m,n}_{p,q}[z]` for real `z > 0`.
pub fn fox_h<T: Real>(spec: &FoxHSpec<T>, z: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    fox_h_scaled(spec, z, T::zero(), cfg)
}

/// Evaluates `e^{-shift} · H^{m,n}_{p,q}[z]`. Tolerances refer to the scaled
/// value, so terms such as `H / Γ(a)` stay representable for large `a`.
pub fn fox_h_scaled<T: Real>(spec: &FoxHSpec<T>, z: T, shift: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::Domain {
            what: "Fox H argument",
            value: z.as_f64(),
        });
    }
    fox_h_ln_arg(spec, z.ln(), shift, cfg)
}

/// Evaluates `e^{-shift} · H^{m,n}_{p,q}[e^{ln_z}]`, for arguments outside
/// the floating-point range.
pub fn fox_h_ln_arg<T: Real>(spec: &FoxHSpec<T>, ln_z: T, shift: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    cfg.validate()?;
    if !ln_z.is_finite() {
        return Err(Error::Domain {
            what: "Fox H log-argument",
            value: ln_z.as_f64(),
        });
    }
    let sigma = spec.abscissa(ln_z);
    let l0 = spec.phi(sigma, ln_z);
    if !l0.is_finite() {
        return Err(Error::Convergence {
            what: "Fox H contour placement",
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    let exponent = |t: T| spec.ln_theta(Complex::new(sigma, t)) - Complex::new(sigma, t) * ln_z - l0;
    let integrand = |t: T| {
        let w = exponent(t);
        if w.re < T::lit(-700.0) {
            T::zero()
        } else {
            w.re.exp() * w.im.cos()
        }
    };
    let envelope = |t: T| exponent(t).re.exp();

    // width of the central peak
    let mut w0 = T::lit(1e-8);
    while w0 < T::lit(1e8) && envelope(w0) > T::lit(0.5) {
        w0 = w0 * T::lit(2.0);
    }

    let out_scale = (l0 - shift).exp() / T::PI();
    let abs_target = if out_scale > T::zero() && out_scale.is_finite() {
        cfg.abs_tol / out_scale
    } else {
        cfg.abs_tol
    };
    let mut total = T::zero();
    let mut t = T::zero();
    let mut h = w0;
    let mut quiet = 0;
    for _ in 0..4000 {
        let target = abs_target.max(cfg.rel_tol * total.abs());
        let panel_cfg = QuadratureConfig {
            abs_tol: (target * T::lit(0.01)).max(T::min_positive_value()),
            rel_tol: cfg.rel_tol * T::lit(0.1),
            max_subdivisions: cfg.max_subdivisions,
        };
        let panel = adaptive_quad(integrand, t, t + h, &panel_cfg)?;
        total = total + panel;
        t = t + h;
        h = h * T::lit(1.25);
        let target = abs_target.max(cfg.rel_tol * total.abs());
        if panel.abs() < target * T::lit(0.1) && envelope(t) * h < target * T::lit(0.1) {
            quiet += 1;
            if quiet >= 2 {
                return finish(total * out_scale);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence {
        what: "Fox H contour truncation",
        estimate: (total * out_scale).as_f64(),
        error_bound: (envelope(t) * h * out_scale).as_f64(),
    })
}

fn finish<T: Real>(v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Convergence {
            what: "Fox H magnitude",
            estimate: v.as_f64(),
            error_bound: f64::INFINITY,
        })
    }
}

/// `H[z] = e^{ln_prefactor} · G[z']` with `ln z' = power · ln z + ln_z_offset`,
/// where `G` is a Meijer G function (all scale coefficients one).
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerReduction<T> {
    pub meijer: FoxHSpec<T>,
    pub ln_prefactor: T,
    pub power: T,
    pub ln_z_offset: T,
}

impl<T: Real> MeijerReduction<T> {
    pub fn eval_ln_arg(&self, ln_z: T, shift: T, cfg: &QuadratureConfig<T>) -> Result<T> {
        fox_h_ln_arg(
            &self.meijer,
            self.power * ln_z + self.ln_z_offset,
            shift - self.ln_prefactor,
            cfg,
        )
    }
}

impl<T: Real> FoxHSpec<T> {
    /// Rewrites the function as a Meijer G when every scale coefficient is an
    /// integer multiple of `1/r`, using Gauss's multiplication formula.
    pub fn meijer_reduction(&self, r: usize) -> Result<MeijerReduction<T>> {
        if r == 0 {
            return Err(Error::InvalidSpec("reduction denominator must be positive".into()));
        }
        let rr = T::from_usize_lossy(r);
        let ln_2pi = T::TAU().ln();
        let half = T::lit(0.5);
        let mut ln_c = rr.ln();
        let mut ln_z_offset = T::zero();
        let multiplicity = |scale: T| -> Result<usize> {
            let k = (scale * rr).round();
            if k < T::one() || (scale * rr - k).abs() > T::lit(1e-12) * k {
                return Err(Error::InvalidSpec(format!("scale {scale} is not a multiple of 1/{r}")));
            }
            Ok(k.to_usize().expect("small multiplicity"))
        };
        // Γ(β + σ k u) = (2π)^{(1-k)/2} k^{β - 1/2 + σ k u} Π_j Γ((β + j)/k + σ u)
        let mut expand = |beta: T, sigma: T, k: usize, numerator: bool| -> Vec<T> {
            let kk = T::from_usize_lossy(k);
            let sign = if numerator { T::one() } else { -T::one() };
            ln_c = ln_c + sign * ((T::one() - kk) * half * ln_2pi + (beta - half) * kk.ln());
            ln_z_offset = ln_z_offset - sign * sigma * kk * kk.ln();
            (0..k).map(|j| (beta + T::from_usize_lossy(j)) / kk).collect()
        };
        let (mut b_m, mut b_rest, mut a_n, mut a_rest) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (j, &(b, bb)) in self.lower.iter().enumerate() {
            let k = multiplicity(bb)?;
            if j < self.m {
                b_m.extend(expand(b, T::one(), k, true));
            } else {
                let g = expand(T::one() - b, -T::one(), k, false);
                b_rest.extend(g.into_iter().map(|x| T::one() - x));
            }
        }
        for (j, &(a, aa)) in self.upper.iter().enumerate() {
            let k = multiplicity(aa)?;
            if j < self.n {
                let g = expand(T::one() - a, -T::one(), k, true);
                a_n.extend(g.into_iter().map(|x| T::one() - x));
            } else {
                a_rest.extend(expand(a, T::one(), k, false));
            }
        }
        let (m, n) = (b_m.len(), a_n.len());
        b_m.extend(b_rest);
        a_n.extend(a_rest);
        Ok(MeijerReduction {
            meijer: FoxHSpec::meijer(m, n, &a_n, &b_m)?,
            ln_prefactor: ln_c,
            power: rr,
            ln_z_offset,
        })
    }
}

/// Meijer G function `G^{m,n}_{p,q}[z | a; b]` for real `z > 0`.
pub fn meijer_g<T: Real>(m: usize, n: usize, a: &[T], b: &[T], z: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    fox_h(&FoxHSpec::meijer(m, n, a, b)?, z, cfg)
}
