//! Link metrics under EGG fading: SNR statistics, outage, average BER and
//! ergodic capacity, each with exact and high-SNR forms.
//!
//! The instantaneous SNR is `γ = μ_r I^r` with `r = 1` (heterodyne) or
//! `r = 2` (IM/DD). For IM/DD `μ₂ = γ̄ / E[I²]`; for heterodyne `μ₁ = γ̄`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{EggParams, MixtureModel, NEGLIGIBLE_WEIGHT};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{adaptive_quad_points, fox_h_ln_arg, inc_gamma_pair, lgamma, psi, FoxHSpec, QuadratureConfig};

/// Capacity scaling constant `τ = e / (2π)`.
pub fn tau<T: Real>() -> T {
    T::E() / T::TAU()
}

pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionMode {
    /// `r = 1`
    Heterodyne,
    /// `r = 2`
    ImDd,
}

impl DetectionMode {
    pub fn r(self) -> u32 {
        match self {
            DetectionMode::Heterodyne => 1,
            DetectionMode::ImDd => 2,
        }
    }

    pub fn from_r(r: u32) -> Result<Self> {
        match r {
            1 => Ok(DetectionMode::Heterodyne),
            2 => Ok(DetectionMode::ImDd),
            _ => Err(Error::Config(format!("detection order must be 1 or 2, got {r}"))),
        }
    }
}

impl fmt::Display for DetectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionMode::Heterodyne => "het",
            DetectionMode::ImDd => "imdd",
        })
    }
}

impl FromStr for DetectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "het" | "heterodyne" => Ok(DetectionMode::Heterodyne),
            "imdd" | "im/dd" => Ok(DetectionMode::ImDd),
            _ => Err(Error::Config(format!("unknown detection '{s}' (expected imdd or het)"))),
        }
    }
}

/// Average electrical SNR `μ_r` for a given average SNR `γ̄`.
pub fn electrical_snr<T: Real>(params: &EggParams<T>, mode: DetectionMode, gamma_bar: T) -> T {
    match mode {
        DetectionMode::Heterodyne => gamma_bar,
        DetectionMode::ImDd => gamma_bar / MixtureModel::Egg(*params).moment(2),
    }
}

/// Fading parameters together with the detection mode and SNR operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    params: EggParams<T>,
    mode: DetectionMode,
    gamma_bar: T,
    mu_r: T,
    gamma_th: T,
}

impl<T: Real> LinkBudget<T> {
    pub fn new(params: EggParams<T>, mode: DetectionMode, gamma_bar: T, gamma_th: T) -> Result<Self> {
        params.validate()?;
        if !(gamma_bar > T::zero()) || !gamma_bar.is_finite() {
            return Err(Error::InvalidParams(format!(
                "average SNR must be positive, got {gamma_bar}"
            )));
        }
        if !(gamma_th > T::zero()) || !gamma_th.is_finite() {
            return Err(Error::InvalidParams(format!(
                "threshold SNR must be positive, got {gamma_th}"
            )));
        }
        Ok(Self {
            params,
            mode,
            gamma_bar,
            mu_r: electrical_snr(&params, mode, gamma_bar),
            gamma_th,
        })
    }

    /// Link at `γ̄` given in dB with unit threshold, so `γ̄/γ_th` is the
    /// normalized SNR on curve axes.
    pub fn at_db(params: EggParams<T>, mode: DetectionMode, snr_db: T) -> Result<Self> {
        Self::new(params, mode, db_to_linear(snr_db), T::one())
    }

    pub fn params(&self) -> &EggParams<T> {
        &self.params
    }

    pub fn mode(&self) -> DetectionMode {
        self.mode
    }

    pub fn r(&self) -> T {
        T::from_u32(self.mode.r()).expect("small integer")
    }

    pub fn gamma_bar(&self) -> T {
        self.gamma_bar
    }

    pub fn mu_r(&self) -> T {
        self.mu_r
    }

    pub fn gamma_th(&self) -> T {
        self.gamma_th
    }

    pub fn model(&self) -> MixtureModel<T> {
        MixtureModel::Egg(self.params)
    }

    fn has_exp(&self) -> bool {
        self.params.omega >= T::lit(NEGLIGIBLE_WEIGHT)
    }

    fn has_gg(&self) -> bool {
        T::one() - self.params.omega >= T::lit(NEGLIGIBLE_WEIGHT)
    }

    /// `ln I` at which `μ_r I^r = e^{ln_level}`.
    fn ln_i_at(&self, ln_level: T) -> T {
        (ln_level - self.mu_r.ln()) / self.r()
    }

    /// Breakpoints in `t = ln I` for fading averages, plus the transition of
    /// a kernel that switches at `μ_r I^r ≈ e^{ln_level}`.
    fn breakpoints(&self, ln_level: T) -> Vec<T> {
        let tk = self.ln_i_at(ln_level);
        let mut pts = vec![T::neg_infinity()];
        pts.extend(self.model().log_breakpoints());
        let inv_r = self.r().recip();
        for k in [-6.0, -2.0, -0.5, 0.0, 0.5, 1.5, 3.0] {
            pts.push(tk + T::lit(k) * inv_r);
        }
        pts.push(T::infinity());
        pts
    }
}

/// Unified SNR density `f_γ(γ)`.
pub fn snr_pdf<T: Real>(link: &LinkBudget<T>, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::Domain {
            what: "SNR",
            value: gamma.as_f64(),
        });
    }
    // f_γ(γ) = f_I(x) x / (r γ) with x = (γ/μ_r)^{1/r}
    let t = link.ln_i_at(gamma.ln());
    Ok((link.model().ln_density_of_log(t) - (link.r() * gamma).ln()).exp())
}

/// `P[γ ≤ gamma]`.
pub fn snr_cdf<T: Real>(link: &LinkBudget<T>, gamma: T) -> Result<T> {
    if !(gamma >= T::zero()) {
        return Err(Error::Domain {
            what: "SNR",
            value: gamma.as_f64(),
        });
    }
    if gamma == T::zero() {
        return Ok(T::zero());
    }
    Ok(link.model().cdf_at_log(link.ln_i_at(gamma.ln())))
}

/// Leading small-argument behaviour of [`snr_cdf`].
pub fn snr_cdf_asymptotic<T: Real>(link: &LinkBudget<T>, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::Domain {
            what: "SNR",
            value: gamma.as_f64(),
        });
    }
    let p = link.params;
    let r = link.r();
    let ln_g = gamma.ln() - link.mu_r.ln();
    let mut acc = T::zero();
    if link.has_exp() {
        acc = acc + (p.omega.ln() - p.lambda.ln() + ln_g / r).exp();
    }
    if link.has_gg() {
        let e = p.a * p.c / r;
        acc = acc + ((T::one() - p.omega).ln() - lgamma(p.a + T::one()) + e * (ln_g - r * p.b.ln())).exp();
    }
    Ok(acc)
}

/// `E[γ^n]`.
pub fn snr_moment<T: Real>(link: &LinkBudget<T>, n: u32) -> T {
    let p = link.params;
    let r = link.r();
    let nn = T::from_u32(n).expect("moment order");
    let mut acc = T::zero();
    if link.has_exp() {
        acc = acc + (p.omega.ln() + nn * (r * p.lambda.ln() + link.mu_r.ln()) + lgamma(r * nn + T::one())).exp();
    }
    if link.has_gg() {
        acc = acc
            + ((T::one() - p.omega).ln() + nn * (r * p.b.ln() + link.mu_r.ln()) + lgamma(r * nn / p.c + p.a)
                - lgamma(p.a))
            .exp();
    }
    acc
}

/// Outage probability `P[γ < γ_th]`.
pub fn outage<T: Real>(link: &LinkBudget<T>) -> Result<T> {
    snr_cdf(link, link.gamma_th)
}

pub fn outage_asymptotic<T: Real>(link: &LinkBudget<T>) -> Result<T> {
    snr_cdf_asymptotic(link, link.gamma_th)
}

/// Outage by integrating the SNR density up to the threshold.
pub fn outage_quadrature<T: Real>(link: &LinkBudget<T>, cfg: &QuadratureConfig<T>) -> Result<T> {
    let tk = link.ln_i_at(link.gamma_th.ln());
    let mut pts = link.breakpoints(link.gamma_th.ln());
    pts.retain(|&p| p < tk);
    pts.push(tk);
    let model = link.model().ln_components();
    adaptive_quad_points(|t: T| model.density_of_log(t).exp(), &pts, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Ook,
    Bpsk,
    Mpsk(u32),
    Mqam(u32),
}

/// Conditional-BER coefficients: `P_b(γ) = δ/(2Γ(p)) Σ_k Γ(p, q_k γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationParams<T> {
    pub delta: T,
    pub p: T,
    pub q: Vec<T>,
}

impl<T> ModulationParams<T> {
    pub fn n_terms(&self) -> usize {
        self.q.len()
    }
}

impl Modulation {
    pub fn validate(self) -> Result<()> {
        match self {
            Modulation::Ook | Modulation::Bpsk => Ok(()),
            Modulation::Mpsk(m) if m >= 4 && m.is_power_of_two() => Ok(()),
            // √M/2 terms must be a whole number
            Modulation::Mqam(m) if m >= 4 && m.is_power_of_two() && m.trailing_zeros() % 2 == 0 => Ok(()),
            Modulation::Mpsk(m) => Err(Error::Config(format!("M-PSK needs M a power of two, M >= 4; got {m}"))),
            Modulation::Mqam(m) => Err(Error::Config(format!(
                "M-QAM needs M a power of four (square constellation), M >= 4; got {m}"
            ))),
        }
    }

    /// Detection mode this scheme is defined for.
    pub fn required_mode(self) -> DetectionMode {
        match self {
            Modulation::Ook => DetectionMode::ImDd,
            _ => DetectionMode::Heterodyne,
        }
    }

    pub fn check_mode(self, mode: DetectionMode) -> Result<()> {
        self.validate()?;
        if self.required_mode() == mode {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{self} requires {} detection, not {mode} (see modulation parameter table)",
                self.required_mode()
            )))
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::Ook => f.write_str("ook"),
            Modulation::Bpsk => f.write_str("bpsk"),
            Modulation::Mpsk(m) => write!(f, "mpsk:{m}"),
            Modulation::Mqam(m) => write!(f, "mqam:{m}"),
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let order = |rest: &str| {
            rest.parse::<u32>()
                .map_err(|_| Error::Config(format!("bad constellation size in '{s}'")))
        };
        let m = match lower.split_once(':') {
            None if lower == "ook" => Modulation::Ook,
            None if lower == "bpsk" => Modulation::Bpsk,
            Some(("mpsk", rest)) => Modulation::Mpsk(order(rest)?),
            Some(("mqam", rest)) => Modulation::Mqam(order(rest)?),
            _ => {
                return Err(Error::Config(format!(
                    "unknown modulation '{s}' (expected ook, bpsk, mpsk:M or mqam:M)"
                )))
            }
        };
        m.validate()?;
        Ok(m)
    }
}

pub fn modulation_params<T: Real>(scheme: Modulation) -> Result<ModulationParams<T>> {
    scheme.validate()?;
    let half = T::lit(0.5);
    Ok(match scheme {
        Modulation::Ook => ModulationParams {
            delta: T::one(),
            p: half,
            q: vec![T::lit(0.25)],
        },
        Modulation::Bpsk => ModulationParams {
            delta: T::one(),
            p: half,
            q: vec![T::one()],
        },
        Modulation::Mpsk(m) => {
            let log2m = m.trailing_zeros().max(2);
            let n = (m / 4).max(1);
            let mm = T::from_u32(m).expect("order");
            ModulationParams {
                delta: T::lit(2.0) / T::from_u32(log2m).expect("small"),
                p: half,
                q: (1..=n)
                    .map(|k| {
                        let s = (T::from_u32(2 * k - 1).expect("small") * T::PI() / mm).sin();
                        s * s
                    })
                    .collect(),
            }
        }
        Modulation::Mqam(m) => {
            let log2m = T::from_u32(m.trailing_zeros()).expect("small");
            let mm = T::from_u32(m).expect("order");
            let n = 1u32 << (m.trailing_zeros() / 2 - 1);
            ModulationParams {
                delta: T::lit(4.0) / log2m * (T::one() - mm.sqrt().recip()),
                p: half,
                q: (1..=n)
                    .map(|k| {
                        let j = T::from_u32(2 * k - 1).expect("small");
                        T::lit(3.0) * j * j / (T::lit(2.0) * (mm - T::one()))
                    })
                    .collect(),
            }
        }
    })
}

/// Which evaluation produces an exact metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactRoute {
    Quadrature,
    #[serde(rename = "foxh")]
    FoxH,
}

impl fmt::Display for ExactRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExactRoute::Quadrature => "quadrature",
            ExactRoute::FoxH => "foxh",
        })
    }
}

impl FromStr for ExactRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadrature" | "quad" => Ok(ExactRoute::Quadrature),
            "foxh" | "fox-h" => Ok(ExactRoute::FoxH),
            _ => Err(Error::Config(format!(
                "unknown route '{s}' (expected quadrature or foxh)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions<T> {
    pub primary: ExactRoute,
    /// Also evaluate the other route and record it.
    pub cross_check: bool,
    pub quad: QuadratureConfig<T>,
    /// Relative disagreement above which the closed form is rejected.
    pub agreement: T,
}

impl<T: Real> Default for ExactOptions<T> {
    fn default() -> Self {
        Self {
            primary: ExactRoute::Quadrature,
            cross_check: false,
            quad: QuadratureConfig::relative(T::lit(1e-10)),
            agreement: T::lit(1e-6),
        }
    }
}

/// An exact metric with provenance of the number reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactValue<T> {
    pub value: T,
    pub route: ExactRoute,
    pub quadrature: Option<T>,
    pub fox_h: Option<T>,
    /// The Fox-H route was requested but failed or disagreed with quadrature.
    pub fell_back: bool,
}

fn resolve<T: Real>(
    opts: &ExactOptions<T>,
    quad: impl FnOnce() -> Result<T>,
    fox: impl FnOnce() -> Result<T>,
) -> Result<ExactValue<T>> {
    match opts.primary {
        ExactRoute::Quadrature => {
            let q = quad()?;
            let f = if opts.cross_check { fox().ok() } else { None };
            Ok(ExactValue {
                value: q,
                route: ExactRoute::Quadrature,
                quadrature: Some(q),
                fox_h: f,
                fell_back: false,
            })
        }
        ExactRoute::FoxH => {
            let f = fox().ok();
            let q = quad()?;
            match f {
                Some(f) if (f - q).abs() <= opts.agreement * q.abs() => Ok(ExactValue {
                    value: f,
                    route: ExactRoute::FoxH,
                    quadrature: Some(q),
                    fox_h: Some(f),
                    fell_back: false,
                }),
                _ => Ok(ExactValue {
                    value: q,
                    route: ExactRoute::Quadrature,
                    quadrature: Some(q),
                    fox_h: f,
                    fell_back: true,
                }),
            }
        }
    }
}

/// Exact average BER, by the route selected in `opts`.
pub fn avg_ber<T: Real>(link: &LinkBudget<T>, modulation: Modulation, opts: &ExactOptions<T>) -> Result<ExactValue<T>> {
    modulation.check_mode(link.mode)?;
    resolve(
        opts,
        || avg_ber_quadrature(link, modulation, &opts.quad),
        || avg_ber_fox_h(link, modulation, &opts.quad),
    )
}

/// Average of the conditional BER over the fading density by adaptive quadrature.
pub fn avg_ber_quadrature<T: Real>(
    link: &LinkBudget<T>,
    modulation: Modulation,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    modulation.check_mode(link.mode)?;
    let mp = modulation_params::<T>(modulation)?;
    let model = link.model().ln_components();
    let r = link.r();
    let ln_mu = link.mu_r.ln();
    let mut total = T::zero();
    for &q in &mp.q {
        let ln_qmu = q.ln() + ln_mu;
        let f = |t: T| {
            let x = (ln_qmu + r * t).exp();
            inc_gamma_pair(mp.p, x).1 * model.density_of_log(t).exp()
        };
        total = total + adaptive_quad_points(f, &link.breakpoints(-q.ln()), cfg)?;
    }
    Ok(mp.delta * T::lit(0.5) * total)
}

fn ber_specs<T: Real>(p: T, r: T, a: T, c: T) -> Result<FoxHSpec<T>> {
    FoxHSpec::new(
        1,
        2,
        vec![(T::one(), T::one()), (T::one() - p, c / r)],
        vec![(a, T::one()), (T::zero(), T::one())],
    )
}

/// Average BER from its Fox-H closed form. For `c = 1` the H functions are
/// rewritten as Meijer G functions first.
pub fn avg_ber_fox_h<T: Real>(link: &LinkBudget<T>, modulation: Modulation, cfg: &QuadratureConfig<T>) -> Result<T> {
    modulation.check_mode(link.mode)?;
    let mp = modulation_params::<T>(modulation)?;
    let pr = link.params;
    let r = link.r();
    let reduce = pr.c == T::one();
    let eval = |spec: FoxHSpec<T>, ln_z: T, shift: T| -> Result<T> {
        if reduce {
            spec.meijer_reduction(link.mode.r() as usize)?
                .eval_ln_arg(ln_z, shift, cfg)
        } else {
            fox_h_ln_arg(&spec, ln_z, shift, cfg)
        }
    };
    let mut total = T::zero();
    for &q in &mp.q {
        let ln_qmu = q.ln() + link.mu_r.ln();
        if link.has_exp() {
            let ln_z = -pr.lambda.ln() - ln_qmu / r;
            total = total + eval(ber_specs(mp.p, r, T::one(), T::one())?, ln_z, -pr.omega.ln())?;
        }
        if link.has_gg() {
            let ln_z = -pr.c * pr.b.ln() - pr.c / r * ln_qmu;
            let shift = lgamma(pr.a) - (T::one() - pr.omega).ln();
            total = total + eval(ber_specs(mp.p, r, pr.a, pr.c)?, ln_z, shift)?;
        }
    }
    Ok(mp.delta / (T::lit(2.0) * lgamma(mp.p).exp()) * total)
}

/// High-SNR approximation of the average BER.
pub fn avg_ber_asymptotic<T: Real>(link: &LinkBudget<T>, modulation: Modulation) -> Result<T> {
    modulation.check_mode(link.mode)?;
    let mp = modulation_params::<T>(modulation)?;
    let pr = link.params;
    let r = link.r();
    let mut total = T::zero();
    for &q in &mp.q {
        let ln_qmu = q.ln() + link.mu_r.ln();
        if link.has_exp() {
            total = total + (pr.omega.ln() + lgamma(mp.p + r.recip()) - (r * pr.lambda.ln() + ln_qmu) / r).exp();
        }
        if link.has_gg() {
            let e = pr.a * pr.c / r;
            total = total
                + ((T::one() - pr.omega).ln() - lgamma(pr.a + T::one()) + lgamma(mp.p + e)
                    - e * (r * pr.b.ln() + ln_qmu))
                    .exp();
        }
    }
    Ok(mp.delta / (T::lit(2.0) * lgamma(mp.p).exp()) * total)
}

/// Conditional BER at instantaneous SNR `gamma`.
pub fn conditional_ber<T: Real>(mp: &ModulationParams<T>, gamma: T) -> T {
    let s =
        mp.q.iter()
            .fold(T::zero(), |acc, &q| acc + inc_gamma_pair(mp.p, q * gamma).1);
    mp.delta * T::lit(0.5) * s
}

/// Ergodic capacity `E[ln(1 + τγ)]` in nats, by the route selected in `opts`.
pub fn ergodic_capacity<T: Real>(link: &LinkBudget<T>, opts: &ExactOptions<T>) -> Result<ExactValue<T>> {
    resolve(
        opts,
        || capacity_quadrature(link, &opts.quad),
        || capacity_fox_h(link, &opts.quad),
    )
}

/// `ln(1 + e^y)` without overflow.
pub(crate) fn softplus<T: Real>(y: T) -> T {
    if y > T::lit(35.0) {
        y + (-y).exp()
    } else {
        y.exp().ln_1p()
    }
}

pub fn capacity_quadrature<T: Real>(link: &LinkBudget<T>, cfg: &QuadratureConfig<T>) -> Result<T> {
    let model = link.model().ln_components();
    let r = link.r();
    let ln_tmu = tau::<T>().ln() + link.mu_r.ln();
    let f = |t: T| softplus(ln_tmu + r * t) * model.density_of_log(t).exp();
    adaptive_quad_points(f, &link.breakpoints(-tau::<T>().ln()), cfg)
}

pub fn capacity_fox_h<T: Real>(link: &LinkBudget<T>, cfg: &QuadratureConfig<T>) -> Result<T> {
    let pr = link.params;
    let r = link.r();
    let ln_tmu = tau::<T>().ln() + link.mu_r.ln();
    let reduce = pr.c == T::one();
    let eval = |spec: FoxHSpec<T>, ln_z: T, shift: T| -> Result<T> {
        if reduce {
            spec.meijer_reduction(link.mode.r() as usize)?
                .eval_ln_arg(ln_z, shift, cfg)
        } else {
            fox_h_ln_arg(&spec, ln_z, shift, cfg)
        }
    };
    let mut total = T::zero();
    if link.has_exp() {
        let spec = FoxHSpec::new(
            2,
            1,
            vec![(T::zero(), r.recip())],
            vec![(T::zero(), T::one()), (T::zero(), r.recip())],
        )?;
        total = total + eval(spec, -pr.lambda.ln() - ln_tmu / r, -pr.omega.ln())?;
    }
    if link.has_gg() {
        let k = pr.c / r;
        let spec = FoxHSpec::new(
            3,
            1,
            vec![(T::zero(), k), (T::one(), T::one())],
            vec![(pr.a, T::one()), (T::zero(), T::one()), (T::zero(), k)],
        )?;
        let ln_z = -pr.c * pr.b.ln() - k * ln_tmu;
        total = total + eval(spec, ln_z, lgamma(pr.a) - (T::one() - pr.omega).ln())?;
    }
    Ok(total)
}

/// High-SNR capacity from the derivative of the SNR moments at zero.
pub fn capacity_asymptotic<T: Real>(link: &LinkBudget<T>) -> T {
    let pr = link.params;
    let r = link.r();
    let ln_mu = link.mu_r.ln();
    let mut acc = tau::<T>().ln();
    if link.has_exp() {
        acc = acc + pr.omega * (r * pr.lambda.ln() + ln_mu + r * psi(T::one()));
    }
    if link.has_gg() {
        acc = acc + (T::one() - pr.omega) * (r * pr.b.ln() + ln_mu + r / pr.c * psi(pr.a));
    }
    acc
}
