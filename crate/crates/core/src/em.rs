//! Maximum-likelihood fitting of the mixture models by expectation–maximization.
//!
//! Works in `f64` only. Samples are sorted once up front, so results do not
//! depend on input order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{log_add, EgParams, EggParams, ExpLognormalParams, MixtureModel, ModelTag};
use crate::error::{Error, Result};
use crate::special::{brent, golden_min, lgamma, psi, trigamma};

/// Responsibility mass below which a component is left unchanged by the M-step.
const MASS_FLOOR: f64 = 1e-9;
const C_BRACKET: (f64, f64) = (1e-2, 1e3);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitStrategy {
    /// Weight one half; both lobes from moments of the whole sample.
    Moments,
    /// Exponential lobe from the lowest 20 %, second lobe from moments of the rest.
    QuantileSplit,
    UserSupplied(MixtureModel<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    /// Stop once no parameter moves by more than this between iterations.
    pub epsilon: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub init: InitStrategy,
    pub seed: u64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_iters: 500,
            restarts: 1,
            init: InitStrategy::QuantileSplit,
            seed: 0,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.restarts < 1 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if let InitStrategy::UserSupplied(m) = &self.init {
            m.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponsibilitySummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: MixtureModel<f64>,
    /// Observed-data log-likelihood at the initial point and after each iteration.
    pub loglik_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub responsibilities: ResponsibilitySummary,
    pub scintillation_index: f64,
    /// Index of the restart that produced this report.
    pub restart: usize,
    pub warnings: Vec<String>,
}

impl FitReport {
    pub fn loglik(&self) -> f64 {
        *self.loglik_trace.last().expect("trace holds the initial value")
    }
}

fn check_samples(samples: &[f64]) -> Result<()> {
    for (index, &value) in samples.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Data { index, value });
        }
    }
    Ok(())
}

/// Posterior probability that each sample came from the exponential lobe.
pub fn e_step(samples: &[f64], model: &MixtureModel<f64>) -> Result<Vec<f64>> {
    check_samples(samples)?;
    model.validate()?;
    let ln_x: Vec<f64> = samples.iter().map(|x| x.ln()).collect();
    Ok(e_pass(&ln_x, model).0)
}

/// Responsibilities and log-likelihood in one sweep over `ln I`.
fn e_pass(ln_x: &[f64], model: &MixtureModel<f64>) -> (Vec<f64>, f64) {
    let mut ll = 0.0;
    let lc = model.ln_components();
    let resp = ln_x
        .iter()
        .map(|&t| {
            let (e, g) = lc.at_log(t);
            let tot = log_add(e, g);
            ll += tot;
            if tot == f64::NEG_INFINITY {
                0.5
            } else {
                (e - tot).exp()
            }
        })
        .collect();
    (resp, ll)
}

pub fn log_likelihood(samples: &[f64], model: &MixtureModel<f64>) -> Result<f64> {
    check_samples(samples)?;
    model.validate()?;
    Ok(samples.iter().map(|&x| model.ln_pdf(x).expect("checked sample")).sum())
}

/// `ω = mean(γ)`.
pub fn update_omega(responsibilities: &[f64]) -> f64 {
    responsibilities.iter().sum::<f64>() / responsibilities.len() as f64
}

/// Exponential-scale update `λ = Σγ I / Σγ`.
pub fn m_step_exp(samples: &[f64], responsibilities: &[f64]) -> Result<f64> {
    let mass: f64 = responsibilities.iter().sum();
    if !(mass > 0.0) {
        return Err(Error::Degenerate("exponential lobe has no responsibility mass".into()));
    }
    let num: f64 = samples.iter().zip(responsibilities).map(|(x, g)| g * x).sum();
    if cfg!(feature = "sample-sum-lambda") {
        Ok(num / samples.iter().sum::<f64>())
    } else {
        Ok(num / mass)
    }
}

/// Weighted sufficient statistics for the second lobe, with `ln I` shifted
/// by its maximum so that `I^c` never overflows.
struct Weighted<'a> {
    ln_x: &'a [f64],
    w: Vec<f64>,
    total: f64,
    shift: f64,
    mean_l: f64,
}

impl<'a> Weighted<'a> {
    fn new(ln_x: &'a [f64], responsibilities: &[f64]) -> Result<Self> {
        let w: Vec<f64> = responsibilities.iter().map(|g| 1.0 - g).collect();
        let total: f64 = w.iter().sum();
        if !(total > MASS_FLOOR) {
            return Err(Error::Degenerate("second lobe has no responsibility mass".into()));
        }
        let shift = ln_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean_l = ln_x.iter().zip(&w).map(|(t, w)| w * (t - shift)).sum::<f64>() / total;
        Ok(Self {
            ln_x,
            w,
            total,
            shift,
            mean_l,
        })
    }

    fn mean_ln(&self) -> f64 {
        self.mean_l + self.shift
    }

    /// `(a(c), ln b(c), h(c), dh/d ln c)` from the θ and c stationarity
    /// conditions; the root of `h` is the shape update.
    fn profile(&self, c: f64) -> Option<(f64, f64, f64, f64)> {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (t, w) in self.ln_x.iter().zip(&self.w) {
            let l = t - self.shift;
            let e = w * (c * l).exp();
            s0 += e;
            s1 += e * l;
            s2 += e * l * l;
        }
        let m1 = s1 / s0;
        let d = m1 - self.mean_l;
        if !(d > 0.0 && s0 > 0.0) {
            return None;
        }
        let a = 1.0 / (c * d);
        let ln_theta = (s0 / (a * self.total)).ln();
        let h = psi(a) - c * self.mean_l + ln_theta;
        let da = -a * a * (d + c * (s2 / s0 - m1 * m1));
        let dh = c * (da * (trigamma(a) - 1.0 / a) + d);
        Some((a, self.shift + ln_theta / c, h, dh))
    }

    /// [`Weighted::q_gg`] at a stationary `(a, b)` for the given `c`, where
    /// `Σ w (x/b)^c = a W` removes the pass over the data.
    fn q_profile(&self, a: f64, ln_b: f64, c: f64) -> f64 {
        let m = self.mean_ln();
        self.total * (c.ln() - lgamma(a) + a * c * (m - ln_b) - m - a)
    }

    /// Weighted expected complete-data log-likelihood of a GG lobe.
    fn q_gg(&self, a: f64, ln_b: f64, c: f64) -> f64 {
        let k = c.ln() - lgamma(a);
        self.ln_x
            .iter()
            .zip(&self.w)
            .map(|(&t, &w)| {
                let z = c * (t - ln_b);
                w * (k + a * z - t - z.exp())
            })
            .sum()
    }
}

fn solve_c(stats: &Weighted, hint: Option<f64>) -> Result<f64> {
    let h = |c: f64| stats.profile(c).map_or(f64::NAN, |p| p.2);
    let mut brackets = Vec::new();
    if let Some(c0) = hint {
        brackets.push((c0 / 2.0, c0 * 2.0));
    }
    let (mut lo, mut hi) = C_BRACKET;
    for _ in 0..5 {
        brackets.push((lo, hi));
        lo /= 10.0;
        hi *= 10.0;
    }
    for (lo, hi) in brackets {
        let (hl, hh) = (h(lo), h(hi));
        if hl.is_finite() && hh.is_finite() && hl.signum() != hh.signum() {
            // root in ln c: the profile varies on a log scale
            return brent(|u| h(u.exp()), lo.ln(), hi.ln(), 1e-13, 200).map(f64::exp);
        }
    }
    Err(Error::MStep("could not bracket the power-shape equation".into()))
}

/// Newton iteration on `h` in `ln c` from a warm start; `None` hands over to
/// the bracketing search.
fn newton_c(stats: &Weighted, c0: f64) -> Option<[f64; 3]> {
    let mut u = c0.ln();
    let (_, _, mut h, mut dh) = stats.profile(c0)?;
    for _ in 0..30 {
        if !(h.is_finite() && dh.is_finite()) || dh == 0.0 {
            return None;
        }
        let step = (h / dh).clamp(-0.5, 0.5);
        u -= step;
        let (a, ln_b, h_new, dh_new) = stats.profile(u.exp())?;
        if step.abs() < 1e-12 {
            return admissible(a, ln_b, u.exp());
        }
        if h_new.abs() > h.abs() {
            return None;
        }
        h = h_new;
        dh = dh_new;
    }
    None
}

fn gg_from_c(stats: &Weighted, c: f64) -> Option<[f64; 3]> {
    let (a, ln_b, _, _) = stats.profile(c)?;
    admissible(a, ln_b, c)
}

fn admissible(a: f64, ln_b: f64, c: f64) -> Option<[f64; 3]> {
    let b = ln_b.exp();
    (a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0).then_some([a, b, c])
}

/// Generalized-gamma M-step. Returns `(a, b, c)` maximizing the weighted
/// expected log-likelihood with weights `1 - γ`; never returns a triple with
/// lower objective than `previous`.
pub fn m_step_gg(samples: &[f64], responsibilities: &[f64], previous: Option<[f64; 3]>) -> Result<[f64; 3]> {
    check_samples(samples)?;
    let ln_x: Vec<f64> = samples.iter().map(|x| x.ln()).collect();
    gg_step(&ln_x, responsibilities, previous)
}

fn gg_step(ln_x: &[f64], responsibilities: &[f64], previous: Option<[f64; 3]>) -> Result<[f64; 3]> {
    let stats = Weighted::new(ln_x, responsibilities)?;
    let q = |p: &[f64; 3]| stats.q_gg(p[0], p[1].ln(), p[2]);
    let q_prev = previous.map(|p| q(&p)).unwrap_or(f64::NEG_INFINITY);
    let root = previous.and_then(|p| newton_c(&stats, p[2])).or_else(|| {
        solve_c(&stats, previous.map(|p| p[2]))
            .ok()
            .and_then(|c| gg_from_c(&stats, c))
    });
    if let Some(p) = root {
        // the profile objective is exact up to rounding of the sums
        if stats.q_profile(p[0], p[1].ln(), p[2]) >= q_prev - 1e-12 * q_prev.abs() {
            return Ok(p);
        }
    }
    // bounded maximization of the profile over ln c
    let neg = |u: f64| gg_from_c(&stats, u.exp()).map_or(f64::INFINITY, |p| -q(&p));
    let u = golden_min(neg, C_BRACKET.0.ln(), C_BRACKET.1.ln(), 1e-10);
    let mut best = previous;
    let mut best_q = q_prev;
    for cand in [root, gg_from_c(&stats, u.exp())].into_iter().flatten() {
        let v = q(&cand);
        if v > best_q {
            best = Some(cand);
            best_q = v;
        }
    }
    best.ok_or_else(|| Error::MStep("no admissible generalized-gamma update".into()))
}

/// Weighted gamma ML step `(α, β)` for the EG model.
fn gamma_step(ln_x: &[f64], responsibilities: &[f64], previous: Option<[f64; 2]>) -> Result<[f64; 2]> {
    let stats = Weighted::new(ln_x, responsibilities)?;
    let mean_x = ln_x.iter().zip(&stats.w).map(|(t, w)| w * t.exp()).sum::<f64>() / stats.total;
    let s = mean_x.ln() - stats.mean_ln();
    if !(s > 1e-14) {
        return Err(Error::Degenerate("gamma lobe has zero log-spread".into()));
    }
    // ln α − ψ(α) decreases from +∞ to 0
    let f = |u: f64| {
        let a = u.exp();
        a.ln() - psi(a) - s
    };
    let (mut lo, mut hi) = (-10.0, 10.0);
    while f(lo) < 0.0 && lo > -700.0 {
        lo -= 10.0;
    }
    while f(hi) > 0.0 && hi < 700.0 {
        hi += 10.0;
    }
    let alpha = brent(f, lo, hi, 1e-13, 200)?.exp();
    let cand = [alpha, mean_x / alpha];
    let q = |p: &[f64; 2]| stats.q_gg(p[0], p[1].ln(), 1.0);
    match previous {
        Some(p) if q(&p) > q(&cand) => Ok(p),
        _ => Ok(cand),
    }
}

fn lognormal_step(ln_x: &[f64], responsibilities: &[f64]) -> Result<[f64; 2]> {
    let stats = Weighted::new(ln_x, responsibilities)?;
    let mu = stats.mean_ln();
    let var = ln_x
        .iter()
        .zip(&stats.w)
        .map(|(t, w)| w * (t - mu).powi(2))
        .sum::<f64>()
        / stats.total;
    if !(var > 0.0) {
        return Err(Error::Degenerate("lognormal lobe has zero log-variance".into()));
    }
    Ok([mu, var])
}

fn params_vec(m: &MixtureModel<f64>) -> Vec<f64> {
    match *m {
        MixtureModel::Egg(p) => vec![p.omega, p.lambda, p.a, p.b, p.c],
        MixtureModel::Eg(p) => vec![p.omega, p.lambda, p.alpha, p.beta],
        MixtureModel::ExpLognormal(p) => vec![p.omega, p.lambda, p.mu, p.sigma2],
    }
}

fn m_step(xs: &[f64], ln_x: &[f64], resp: &[f64], cur: &MixtureModel<f64>) -> Result<MixtureModel<f64>> {
    let omega = update_omega(resp);
    let exp_mass: f64 = resp.iter().sum();
    let second_mass = resp.len() as f64 - exp_mass;
    let lambda = if exp_mass > MASS_FLOOR {
        m_step_exp(xs, resp)?
    } else {
        cur.lambda()
    };
    let live = second_mass > MASS_FLOOR;
    Ok(match *cur {
        MixtureModel::Egg(p) => {
            let [a, b, c] = if live {
                gg_step(ln_x, resp, Some([p.a, p.b, p.c]))?
            } else {
                [p.a, p.b, p.c]
            };
            MixtureModel::Egg(EggParams { omega, lambda, a, b, c })
        }
        MixtureModel::Eg(p) => {
            let [alpha, beta] = if live {
                gamma_step(ln_x, resp, Some([p.alpha, p.beta]))?
            } else {
                [p.alpha, p.beta]
            };
            MixtureModel::Eg(EgParams {
                omega,
                lambda,
                alpha,
                beta,
            })
        }
        MixtureModel::ExpLognormal(p) => {
            let [mu, sigma2] = if live {
                lognormal_step(ln_x, resp)?
            } else {
                [p.mu, p.sigma2]
            };
            MixtureModel::ExpLognormal(ExpLognormalParams {
                omega,
                lambda,
                mu,
                sigma2,
            })
        }
    })
}

fn raw_moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    (xs.iter().sum::<f64>() / n, xs.iter().map(|x| x * x).sum::<f64>() / n)
}

/// Second-lobe parameters by matching moments of `xs`.
fn second_by_moments(tag: ModelTag, xs: &[f64]) -> Result<Vec<f64>> {
    let (m1, m2) = raw_moments(xs);
    let var = m2 - m1 * m1;
    match tag {
        ModelTag::Egg => {
            // c = 2: E[I²] = b² a and m1²/m2 = Γ(a+½)² / (a Γ(a)²)
            let ln_target = (m1 * m1 / m2).ln();
            // the log ratio rises from -∞ to 0; above a ≈ e^12 lgamma rounding swamps it
            let ln_ratio = |u: f64| {
                let a = u.exp();
                2.0 * (lgamma(a + 0.5) - lgamma(a)) - a.ln() - ln_target
            };
            let (lo, hi) = (-20.0, 12.0);
            let a = if ln_ratio(hi) <= 0.0 {
                hi.exp()
            } else {
                brent(ln_ratio, lo, hi, 1e-12, 200).map(f64::exp).unwrap_or(1.0)
            };
            Ok(vec![a, (m2 / a).sqrt(), 2.0])
        }
        ModelTag::Eg => {
            if !(var > 0.0) {
                return Err(Error::Degenerate("samples have zero variance".into()));
            }
            Ok(vec![m1 * m1 / var, var / m1])
        }
        ModelTag::ExpLognormal => {
            let n = xs.len() as f64;
            let mu = xs.iter().map(|x| x.ln()).sum::<f64>() / n;
            let v = xs.iter().map(|x| (x.ln() - mu).powi(2)).sum::<f64>() / n;
            if !(v > 0.0) {
                return Err(Error::Degenerate("samples have zero log-variance".into()));
            }
            Ok(vec![mu, v])
        }
    }
}

fn assemble(tag: ModelTag, omega: f64, lambda: f64, s: &[f64]) -> MixtureModel<f64> {
    match tag {
        ModelTag::Egg => MixtureModel::Egg(EggParams {
            omega,
            lambda,
            a: s[0],
            b: s[1],
            c: s[2],
        }),
        ModelTag::Eg => MixtureModel::Eg(EgParams {
            omega,
            lambda,
            alpha: s[0],
            beta: s[1],
        }),
        ModelTag::ExpLognormal => MixtureModel::ExpLognormal(ExpLognormalParams {
            omega,
            lambda,
            mu: s[0],
            sigma2: s[1],
        }),
    }
}

fn initial_model(sorted: &[f64], tag: ModelTag, init: &InitStrategy) -> Result<MixtureModel<f64>> {
    let model = match init {
        InitStrategy::UserSupplied(m) => {
            if m.tag() != tag {
                return Err(Error::Config(format!("initial model is {} but fitting {tag}", m.tag())));
            }
            *m
        }
        InitStrategy::QuantileSplit => {
            let k = ((sorted.len() as f64 * 0.2).round() as usize).clamp(1, sorted.len() - 2);
            let (lower, upper) = sorted.split_at(k);
            let lambda = lower.iter().sum::<f64>() / k as f64;
            assemble(tag, 0.2, lambda, &second_by_moments(tag, upper)?)
        }
        InitStrategy::Moments => {
            let (m1, _) = raw_moments(sorted);
            assemble(tag, 0.5, 0.5 * m1, &second_by_moments(tag, sorted)?)
        }
    };
    model.validate()?;
    Ok(model)
}

fn perturb(model: &MixtureModel<f64>, seed: u64, restart: usize) -> MixtureModel<f64> {
    if restart == 0 {
        return *model;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let mut z = || -> f64 {
        let n: f64 = StandardNormal.sample(&mut rng);
        0.3 * n
    };
    let v = params_vec(model);
    let omega = (v[0] * z().exp()).clamp(0.01, 0.99);
    let lambda = v[1] * z().exp();
    let s: Vec<f64> = match model.tag() {
        ModelTag::ExpLognormal => vec![v[2] + z(), v[3] * z().exp()],
        _ => v[2..].iter().map(|x| x * z().exp()).collect(),
    };
    assemble(model.tag(), omega, lambda, &s)
}

fn run(sorted: &[f64], ln_x: &[f64], start: MixtureModel<f64>, cfg: &EmConfig, restart: usize) -> Result<FitReport> {
    let mut model = start;
    let (mut resp, ll0) = e_pass(ln_x, &model);
    let mut trace = vec![ll0];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        let next = m_step(sorted, ln_x, &resp, &model)?;
        next.validate()?;
        let (r, ll) = e_pass(ln_x, &next);
        let change = params_vec(&model)
            .iter()
            .zip(params_vec(&next))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        model = next;
        resp = r;
        trace.push(ll);
        iterations += 1;
        if change <= cfg.epsilon {
            converged = true;
            break;
        }
    }
    if !trace.last().expect("non-empty").is_finite() {
        return Err(Error::FitFailure("log-likelihood is not finite".into()));
    }
    let (lo, hi) = resp.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &g| {
        (lo.min(g), hi.max(g))
    });
    Ok(FitReport {
        model,
        loglik_trace: trace,
        iterations,
        converged,
        responsibilities: ResponsibilitySummary {
            mean: update_omega(&resp),
            min: lo,
            max: hi,
        },
        scintillation_index: model.scintillation_index(),
        restart,
        warnings: Vec::new(),
    })
}

/// Fits the requested model family. Restarts run in parallel; the report with
/// the highest final log-likelihood wins, ties going to the lowest restart.
pub fn fit(samples: &[f64], tag: ModelTag, cfg: &EmConfig) -> Result<FitReport> {
    cfg.validate()?;
    check_samples(samples)?;
    if samples.len() < 3 {
        return Err(Error::FitFailure(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let ln_x: Vec<f64> = sorted.iter().map(|x| x.ln()).collect();
    let base = initial_model(&sorted, tag, &cfg.init)?;
    let outcomes: Vec<Result<FitReport>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run(&sorted, &ln_x, perturb(&base, cfg.seed, r), cfg, r))
        .collect();
    let mut best: Option<FitReport> = None;
    let mut failures = Vec::new();
    for (r, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(rep) => {
                if best.as_ref().is_none_or(|b| rep.loglik() > b.loglik()) {
                    best = Some(rep);
                }
            }
            Err(e) => failures.push(format!("restart {r}: {e}")),
        }
    }
    let mut report = best.ok_or_else(|| Error::FitFailure(failures.join("; ")))?;
    if samples.len() < 100 {
        report
            .warnings
            .push(format!("only {} samples; estimates may be unreliable", samples.len()));
    }
    if !report.converged {
        report
            .warnings
            .push(format!("no convergence within {} iterations", cfg.max_iters));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(model: &MixtureModel<f64>, n: usize, seed: u64) -> Vec<f64> {
        let s = model.sampler();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| s.sample(&mut rng)).collect()
    }

    fn row1() -> MixtureModel<f64> {
        MixtureModel::Egg(EggParams::new(0.2130, 0.3291, 1.4299, 1.1817, 17.1984).unwrap())
    }

    #[test]
    fn symmetric_responsibility() {
        // exponential with λ = 1 and a GG equal to it (a = c = 1, b = 1)
        let m = MixtureModel::Egg(EggParams::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap());
        for g in e_step(&[0.3, 1.0, 4.0], &m).unwrap() {
            assert!((g - 0.5).abs() < 1e-14);
        }
        let m = MixtureModel::Egg(EggParams::new(1.0, 1.0, 2.0, 1.0, 3.0).unwrap());
        assert!(e_step(&[0.3, 1.0], &m).unwrap().iter().all(|&g| g == 1.0));
    }

    #[test]
    fn mean_responsibility_matches_weight() {
        let xs = draws(&row1(), 100_000, 5);
        let g = e_step(&xs, &row1()).unwrap();
        assert!((update_omega(&g) / 0.2130 - 1.0).abs() < 0.02);
    }

    #[test]
    fn e_step_reports_bad_sample() {
        match e_step(&[1.0, -2.0], &row1()) {
            Err(Error::Data { index, value }) => assert_eq!((index, value), (1, -2.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omega_and_lambda_updates() {
        assert!((update_omega(&[0.2, 0.4, 0.6]) - 0.4).abs() < 1e-15);
        assert_eq!(update_omega(&[1.0, 1.0]), 1.0);
        assert_eq!(update_omega(&[0.0, 0.0]), 0.0);
        let xs = [1.0, 2.0, 6.0];
        if !cfg!(feature = "sample-sum-lambda") {
            assert!((m_step_exp(&xs, &[0.5, 0.5, 0.5]).unwrap() - 3.0).abs() < 1e-15);
            assert!((m_step_exp(&xs, &[1.0, 1.0, 0.0]).unwrap() - 1.5).abs() < 1e-15);
        }
        assert!(m_step_exp(&xs, &[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn exponential_scale_recovered() {
        let m = MixtureModel::Egg(EggParams::new(1.0, 0.3, 1.0, 1.0, 1.0).unwrap());
        let xs = draws(&m, 100_000, 9);
        if !cfg!(feature = "sample-sum-lambda") {
            let lam = m_step_exp(&xs, &vec![1.0; xs.len()]).unwrap();
            assert!((lam / 0.3 - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn gg_step_recovers_gamma() {
        let m = MixtureModel::Egg(EggParams::new(0.0, 1.0, 2.0, 1.0, 1.0).unwrap());
        let xs = draws(&m, 100_000, 13);
        let [a, b, c] = m_step_gg(&xs, &vec![0.0; xs.len()], None).unwrap();
        assert!(
            (a / 2.0 - 1.0).abs() < 0.05 && (b - 1.0).abs() < 0.05 && (c - 1.0).abs() < 0.1,
            "{a} {b} {c}"
        );
    }

    #[test]
    fn gg_step_weighted_recovery() {
        let m = row1();
        let xs = draws(&m, 100_000, 17);
        let g = e_step(&xs, &m).unwrap();
        let [a, b, c] = m_step_gg(&xs, &g, None).unwrap();
        for (got, want) in [(a, 1.4299), (b, 1.1817), (c, 17.1984)] {
            assert!((got / want - 1.0).abs() < 0.1, "{got} vs {want}");
        }
    }

    #[test]
    fn profile_objective_matches_direct_sum() {
        let xs = draws(&row1(), 20_000, 8);
        let g = e_step(&xs, &row1()).unwrap();
        let ln_x: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let stats = Weighted::new(&ln_x, &g).unwrap();
        for c in [3.0, 17.0, 40.0] {
            let (a, ln_b, _, _) = stats.profile(c).unwrap();
            let direct = stats.q_gg(a, ln_b, c);
            assert!((stats.q_profile(a, ln_b, c) - direct).abs() < 1e-9 * direct.abs());
        }
    }

    #[test]
    fn gg_step_is_local_optimum() {
        let m = MixtureModel::Egg(EggParams::new(0.0, 1.0, 1.7, 0.8, 2.5).unwrap());
        let xs = draws(&m, 20_000, 19);
        let half = vec![0.5; xs.len()];
        let p = m_step_gg(&xs, &half, None).unwrap();
        let ln_x: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let stats = Weighted::new(&ln_x, &half).unwrap();
        let q0 = stats.q_gg(p[0], p[1].ln(), p[2]);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let f = |rng: &mut ChaCha8Rng| 1.0 + rng.gen_range(-0.05..0.05);
            let q = stats.q_gg(p[0] * f(&mut rng), (p[1] * f(&mut rng)).ln(), p[2] * f(&mut rng));
            assert!(q <= q0);
        }
    }

    #[test]
    fn log_likelihood_basics() {
        let m = MixtureModel::Egg(EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap());
        assert!((log_likelihood(&[1.0], &m).unwrap() + 1.0).abs() < 1e-15);
        let xs = draws(&row1(), 1000, 29);
        let mut rev = xs.clone();
        rev.reverse();
        let a = log_likelihood(&xs, &row1()).unwrap();
        let b = log_likelihood(&rev, &row1()).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn fit_recovers_row1() {
        let xs = draws(&row1(), 100_000, 31);
        let rep = fit(&xs, ModelTag::Egg, &EmConfig::default()).unwrap();
        assert!((rep.model.omega() - 0.2130).abs() < 0.03, "{:?}", rep.model);
        assert!((rep.model.lambda() / 0.3291 - 1.0).abs() < 0.1, "{:?}", rep.model);
        assert!((rep.scintillation_index / 0.1484 - 1.0).abs() < 0.05);
        for w in rep.loglik_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-9 * w[0].abs());
        }
    }

    #[test]
    fn fit_is_order_invariant() {
        let xs = draws(&row1(), 5_000, 37);
        let mut rev = xs.clone();
        rev.reverse();
        let cfg = EmConfig {
            max_iters: 50,
            ..EmConfig::default()
        };
        let a = fit(&xs, ModelTag::Egg, &cfg).unwrap();
        let b = fit(&rev, ModelTag::Egg, &cfg).unwrap();
        assert_eq!(a.model, b.model);
    }

    #[test]
    fn eg_and_lognormal_variants_fit() {
        let eg = MixtureModel::Eg(EgParams::new(0.3, 0.2, 4.0, 0.3).unwrap());
        let xs = draws(&eg, 50_000, 41);
        let rep = fit(&xs, ModelTag::Eg, &EmConfig::default()).unwrap();
        assert!(matches!(rep.model, MixtureModel::Eg(_)));
        assert!((rep.scintillation_index / eg.scintillation_index() - 1.0).abs() < 0.05);
        let rep = fit(&xs, ModelTag::ExpLognormal, &EmConfig::default()).unwrap();
        assert!(matches!(rep.model, MixtureModel::ExpLognormal(_)));
    }

    #[test]
    fn config_validation() {
        let bad = EmConfig {
            restarts: 0,
            ..EmConfig::default()
        };
        assert!(fit(&[1.0, 2.0, 3.0], ModelTag::Egg, &bad).is_err());
        assert!(fit(&[1.0, 2.0], ModelTag::Egg, &EmConfig::default()).is_err());
    }
}
