//! Irradiance fading models: exponential mixed with a generalized gamma
//! (EGG), with a gamma (EG), or with a lognormal (comparison baseline).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{inc_gamma_pair_ln, lgamma};

/// Mixture weights below this are treated as an absent component.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggParams<T> {
    pub omega: T,
    pub lambda: T,
    pub a: T,
    pub b: T,
    pub c: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgParams<T> {
    pub omega: T,
    pub lambda: T,
    pub alpha: T,
    pub beta: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpLognormalParams<T> {
    pub omega: T,
    pub lambda: T,
    pub mu: T,
    pub sigma2: T,
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn weight<T: Real>(omega: T) -> Result<()> {
    if omega >= T::zero() && omega <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("omega must lie in [0, 1], got {omega}")))
    }
}

impl<T: Real> EggParams<T> {
    pub fn new(omega: T, lambda: T, a: T, b: T, c: T) -> Result<Self> {
        let p = Self { omega, lambda, a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        weight(self.omega)?;
        positive("lambda", self.lambda)?;
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("c", self.c)
    }
}

impl<T: Real> EgParams<T> {
    pub fn new(omega: T, lambda: T, alpha: T, beta: T) -> Result<Self> {
        let p = Self {
            omega,
            lambda,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        weight(self.omega)?;
        positive("lambda", self.lambda)?;
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)
    }

    /// The same distribution written as an EGG with `c = 1`.
    pub fn to_egg(&self) -> EggParams<T> {
        EggParams {
            omega: self.omega,
            lambda: self.lambda,
            a: self.alpha,
            b: self.beta,
            c: T::one(),
        }
    }
}

impl<T: Real> ExpLognormalParams<T> {
    pub fn new(omega: T, lambda: T, mu: T, sigma2: T) -> Result<Self> {
        let p = Self {
            omega,
            lambda,
            mu,
            sigma2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        weight(self.omega)?;
        positive("lambda", self.lambda)?;
        if !self.mu.is_finite() {
            return Err(Error::InvalidParams(format!("mu must be finite, got {}", self.mu)));
        }
        positive("sigma2", self.sigma2)
    }
}

/// Which of the three families a model or fit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Egg,
    Eg,
    #[serde(rename = "explognormal")]
    ExpLognormal,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::Egg => "egg",
            ModelTag::Eg => "eg",
            ModelTag::ExpLognormal => "explognormal",
        })
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "egg" => Ok(ModelTag::Egg),
            "eg" => Ok(ModelTag::Eg),
            "explognormal" | "exp-lognormal" => Ok(ModelTag::ExpLognormal),
            _ => Err(Error::Config(format!(
                "unknown model '{s}' (expected egg, eg or explognormal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "lowercase")]
pub enum MixtureModel<T> {
    Egg(EggParams<T>),
    Eg(EgParams<T>),
    #[serde(rename = "explognormal")]
    ExpLognormal(ExpLognormalParams<T>),
}

/// The non-exponential lobe of a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondComponent<T> {
    GenGamma { a: T, b: T, c: T },
    Lognormal { mu: T, sigma2: T },
}

impl<T: Real> SecondComponent<T> {
    pub fn ln_pdf(&self, i: T) -> T {
        self.ln_pdf_at_log(i.ln())
    }

    /// `ln f(i)` written in terms of `ln i`, so it stays finite where `i` underflows.
    pub fn ln_pdf_at_log(&self, ln_i: T) -> T {
        match *self {
            SecondComponent::GenGamma { a, b, c } => {
                let z = c * (ln_i - b.ln());
                c.ln() + a * z - ln_i - z.exp() - lgamma(a)
            }
            SecondComponent::Lognormal { mu, sigma2 } => {
                let d = ln_i - mu;
                -ln_i - T::lit(0.5) * (T::TAU() * sigma2).ln() - d * d / (T::lit(2.0) * sigma2)
            }
        }
    }

    pub fn cdf(&self, i: T) -> T {
        if i <= T::zero() {
            return T::zero();
        }
        self.cdf_at_log(i.ln())
    }

    pub fn cdf_at_log(&self, ln_i: T) -> T {
        match *self {
            SecondComponent::GenGamma { a, b, c } => inc_gamma_pair_ln(a, c * (ln_i - b.ln())).0,
            SecondComponent::Lognormal { mu, sigma2 } => {
                let z = (ln_i - mu) / (T::lit(2.0) * sigma2).sqrt();
                T::lit(0.5) * crate::special::erfc(-z)
            }
        }
    }

    pub fn ln_moment(&self, n: T) -> T {
        match *self {
            SecondComponent::GenGamma { a, b, c } => n * b.ln() + lgamma(a + n / c) - lgamma(a),
            SecondComponent::Lognormal { mu, sigma2 } => n * mu + n * n * sigma2 * T::lit(0.5),
        }
    }

    /// Breakpoints in `t = ln i` that bracket where the lobe carries mass.
    pub fn log_breakpoints(&self) -> Vec<T> {
        match *self {
            SecondComponent::GenGamma { a, b, c } => {
                // x = (i/b)^c is unit Gamma(a); place points in u = ln x
                let us: Vec<f64> = if a >= T::one() {
                    let la = a.as_f64().ln();
                    let s = 1.0 / a.as_f64().sqrt();
                    [-12.0, -6.0, -3.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0, 6.0]
                        .iter()
                        .map(|k| la + k * s)
                        .collect()
                } else {
                    let ia = 1.0 / a.as_f64();
                    vec![-40.0 * ia, -12.0 * ia, -4.0 * ia, -ia, -1.0, 0.0, 1.0, 2.5]
                };
                us.into_iter().map(|u| b.ln() + T::lit(u) / c).collect()
            }
            SecondComponent::Lognormal { mu, sigma2 } => {
                let s = sigma2.sqrt();
                [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0]
                    .iter()
                    .map(|&k| mu + T::lit(k) * s)
                    .collect()
            }
        }
    }
}

impl<T: Real> MixtureModel<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            MixtureModel::Egg(p) => p.validate(),
            MixtureModel::Eg(p) => p.validate(),
            MixtureModel::ExpLognormal(p) => p.validate(),
        }
    }

    pub fn tag(&self) -> ModelTag {
        match self {
            MixtureModel::Egg(_) => ModelTag::Egg,
            MixtureModel::Eg(_) => ModelTag::Eg,
            MixtureModel::ExpLognormal(_) => ModelTag::ExpLognormal,
        }
    }

    pub fn omega(&self) -> T {
        match self {
            MixtureModel::Egg(p) => p.omega,
            MixtureModel::Eg(p) => p.omega,
            MixtureModel::ExpLognormal(p) => p.omega,
        }
    }

    pub fn lambda(&self) -> T {
        match self {
            MixtureModel::Egg(p) => p.lambda,
            MixtureModel::Eg(p) => p.lambda,
            MixtureModel::ExpLognormal(p) => p.lambda,
        }
    }

    pub fn second(&self) -> SecondComponent<T> {
        match *self {
            MixtureModel::Egg(p) => SecondComponent::GenGamma { a: p.a, b: p.b, c: p.c },
            MixtureModel::Eg(p) => SecondComponent::GenGamma {
                a: p.alpha,
                b: p.beta,
                c: T::one(),
            },
            MixtureModel::ExpLognormal(p) => SecondComponent::Lognormal {
                mu: p.mu,
                sigma2: p.sigma2,
            },
        }
    }

    /// EGG view of the model; `None` for the lognormal baseline.
    pub fn as_egg(&self) -> Option<EggParams<T>> {
        match *self {
            MixtureModel::Egg(p) => Some(p),
            MixtureModel::Eg(p) => Some(p.to_egg()),
            MixtureModel::ExpLognormal(_) => None,
        }
    }

    fn has_exp(&self) -> bool {
        self.omega() >= T::lit(NEGLIGIBLE_WEIGHT)
    }

    fn has_second(&self) -> bool {
        T::one() - self.omega() >= T::lit(NEGLIGIBLE_WEIGHT)
    }

    /// `(ln ω + ln f_exp(i), ln(1-ω) + ln f_2(i))`; absent lobes give `-∞`.
    pub fn ln_weighted_components(&self, i: T) -> (T, T) {
        self.ln_weighted_components_at_log(i.ln())
    }

    pub fn ln_weighted_components_at_log(&self, ln_i: T) -> (T, T) {
        self.ln_components().at_log(ln_i)
    }

    /// Log-density evaluator with the parameter-only terms computed once.
    pub fn ln_components(&self) -> LnComponents<T> {
        let ninf = T::neg_infinity();
        let ln_lambda = self.lambda().ln();
        let w_exp = if self.has_exp() {
            self.omega().ln() - ln_lambda
        } else {
            ninf
        };
        let w_second = if self.has_second() {
            (T::one() - self.omega()).ln()
        } else {
            ninf
        };
        let second = match self.second() {
            SecondComponent::GenGamma { a, b, c } => PreparedSecond::GenGamma {
                k: w_second + c.ln() - lgamma(a),
                a,
                c,
                ln_b: b.ln(),
            },
            SecondComponent::Lognormal { mu, sigma2 } => PreparedSecond::Lognormal {
                k: w_second - T::lit(0.5) * (T::TAU() * sigma2).ln(),
                mu,
                inv_two_var: (T::lit(2.0) * sigma2).recip(),
            },
        };
        LnComponents {
            w_exp,
            ln_lambda,
            w_second,
            second,
        }
    }

    /// Natural log of the density, for `i > 0`.
    pub fn ln_pdf(&self, i: T) -> Result<T> {
        check_positive(i)?;
        let (e, g) = self.ln_weighted_components(i);
        Ok(log_add(e, g))
    }

    /// Log density of `t = ln I`, i.e. `ln f(e^t) + t`. Defined for all real `t`.
    pub fn ln_density_of_log(&self, t: T) -> T {
        let (e, g) = self.ln_weighted_components_at_log(t);
        log_add(e, g) + t
    }

    pub fn pdf(&self, i: T) -> Result<T> {
        self.ln_pdf(i).map(T::exp)
    }

    pub fn cdf(&self, i: T) -> Result<T> {
        if !(i >= T::zero()) {
            return Err(Error::Domain {
                what: "cdf argument",
                value: i.as_f64(),
            });
        }
        if i == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.cdf_at_log(i.ln()))
    }

    /// CDF at `i = e^t`.
    pub fn cdf_at_log(&self, t: T) -> T {
        let mut acc = T::zero();
        if self.has_exp() {
            acc = acc + self.omega() * -(-t.exp() / self.lambda()).exp_m1();
        }
        if self.has_second() {
            acc = acc + (T::one() - self.omega()) * self.second().cdf_at_log(t);
        }
        acc.min(T::one())
    }

    /// `E[I^n]`; `n = 0` gives one.
    pub fn moment(&self, n: u32) -> T {
        self.moment_real(T::from_u32(n).expect("moment order"))
    }

    /// `E[I^s]` for real `s > -min(1, ac)`.
    pub fn moment_real(&self, s: T) -> T {
        if s == T::zero() {
            return T::one();
        }
        let mut acc = T::zero();
        if self.has_exp() {
            acc = acc + (self.omega().ln() + s * self.lambda().ln() + lgamma(s + T::one())).exp();
        }
        if self.has_second() {
            acc = acc + ((T::one() - self.omega()).ln() + self.second().ln_moment(s)).exp();
        }
        acc
    }

    /// Normalized intensity variance `E[I²]/E[I]² − 1`.
    pub fn scintillation_index(&self) -> T {
        let m1 = self.moment(1);
        self.moment(2) / (m1 * m1) - T::one()
    }

    /// Breakpoints in `t = ln i` for integrating against the density.
    pub fn log_breakpoints(&self) -> Vec<T> {
        let mut pts = Vec::new();
        if self.has_exp() {
            let l = self.lambda().ln();
            pts.extend([l - T::lit(5.0), l - T::lit(1.5), l, l + T::lit(1.0), l + T::lit(3.0)]);
        }
        if self.has_second() {
            pts.extend(self.second().log_breakpoints());
        }
        pts.retain(|p| p.is_finite());
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        pts.dedup();
        pts
    }

    /// Prepared sampler; cheaper than [`MixtureModel::sample`] in loops.
    pub fn sampler(&self) -> Sampler {
        let omega = if self.has_exp() { self.omega().as_f64() } else { 0.0 };
        let omega = if self.has_second() { omega } else { 1.0 };
        let second = match self.second() {
            SecondComponent::GenGamma { a, b, c } => {
                let a = a.as_f64();
                let small = a < 1.0;
                SecondSampler::GenGamma {
                    gamma: Gamma::new(if small { a + 1.0 } else { a }, 1.0).expect("validated shape"),
                    inv_a: if small { Some(1.0 / a) } else { None },
                    ln_b: b.as_f64().ln(),
                    inv_c: 1.0 / c.as_f64(),
                }
            }
            SecondComponent::Lognormal { mu, sigma2 } => {
                SecondSampler::Lognormal(Normal::new(mu.as_f64(), sigma2.as_f64().sqrt()).expect("validated variance"))
            }
        };
        Sampler {
            omega,
            exp: Exp::new(1.0 / self.lambda().as_f64()).expect("validated rate"),
            second,
        }
    }

    /// One irradiance draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        T::lit(self.sampler().sample(rng))
    }
}

fn check_positive<T: Real>(i: T) -> Result<()> {
    if i > T::zero() && i.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "irradiance",
            value: i.as_f64(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum PreparedSecond<T> {
    GenGamma { k: T, a: T, c: T, ln_b: T },
    Lognormal { k: T, mu: T, inv_two_var: T },
}

/// Prepared form of [`MixtureModel::ln_weighted_components_at_log`].
#[derive(Debug, Clone, Copy)]
pub struct LnComponents<T> {
    w_exp: T,
    ln_lambda: T,
    w_second: T,
    second: PreparedSecond<T>,
}

impl<T: Real> LnComponents<T> {
    /// `(ln ω + ln f_exp(e^t), ln(1-ω) + ln f_2(e^t))`.
    #[inline]
    pub fn at_log(&self, t: T) -> (T, T) {
        let ninf = T::neg_infinity();
        let e = if self.w_exp == ninf {
            ninf
        } else {
            self.w_exp - (t - self.ln_lambda).exp()
        };
        let g = if self.w_second == ninf {
            ninf
        } else {
            match self.second {
                PreparedSecond::GenGamma { k, a, c, ln_b } => {
                    let z = c * (t - ln_b);
                    k + a * z - t - z.exp()
                }
                PreparedSecond::Lognormal { k, mu, inv_two_var } => {
                    let d = t - mu;
                    k - t - d * d * inv_two_var
                }
            }
        };
        (e, g)
    }

    /// `ln f(e^t) + t`.
    #[inline]
    pub fn density_of_log(&self, t: T) -> T {
        let (e, g) = self.at_log(t);
        log_add(e, g) + t
    }
}

pub(crate) fn log_add<T: Real>(x: T, y: T) -> T {
    let m = x.max(y);
    if m == T::neg_infinity() {
        return m;
    }
    m + ((x - m).exp() + (y - m).exp()).ln()
}

#[derive(Debug, Clone, Copy)]
enum SecondSampler {
    GenGamma {
        gamma: Gamma<f64>,
        inv_a: Option<f64>,
        ln_b: f64,
        inv_c: f64,
    },
    Lognormal(Normal<f64>),
}

/// Draws irradiance values (in `f64`) from a fixed mixture.
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    omega: f64,
    exp: Exp<f64>,
    second: SecondSampler,
}

impl Distribution<f64> for Sampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        if u < self.omega {
            return self.exp.sample(rng);
        }
        match self.second {
            SecondSampler::GenGamma {
                gamma,
                inv_a,
                ln_b,
                inv_c,
            } => {
                let mut ln_g = gamma.sample(rng).ln();
                if let Some(inv_a) = inv_a {
                    // G_a = G_{a+1} U^{1/a}, kept in logs so tiny shapes do not underflow
                    let v: f64 = rng.gen();
                    ln_g += (1.0 - v).ln() * inv_a;
                }
                (ln_b + ln_g * inv_c).exp()
            }
            SecondSampler::Lognormal(n) => n.sample(rng).exp(),
        }
    }
}
