//! Monte Carlo estimates of outage, average BER and ergodic capacity.
//!
//! Draws are split into chunks; chunk `k` uses the ChaCha8 stream `k` of the
//! configured seed, so results do not depend on how rayon schedules chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::performance::{conditional_ber, modulation_params, tau, LinkBudget, Modulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_samples: 1_000_000,
            seed: 0,
            chunk_size: 1 << 16,
        }
    }
}

impl SimConfig {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: u64,
}

impl SimEstimate {
    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0 {
            return self;
        }
        if self.n == 0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let w = o.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + o.m2 + d * d * self.n as f64 * w,
        }
    }
}

/// Mean of `f(I)` over `n_samples` draws of `source`.
pub fn simulate_mean<S, F>(source: &S, cfg: &SimConfig, f: F) -> Result<SimEstimate>
where
    S: Distribution<f64> + Sync,
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    let chunks = cfg.n_samples.div_ceil(cfg.chunk_size);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k);
            let len = cfg.chunk_size.min(cfg.n_samples - k * cfg.chunk_size);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(f(source.sample(&mut rng)));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    Ok(SimEstimate {
        estimate: total.mean,
        std_error: (var / total.n as f64).sqrt(),
        n: total.n,
    })
}

/// `γ = μ_r I^r` for a draw `I`.
fn snr_of(link: &LinkBudget<f64>) -> impl Fn(f64) -> f64 + Sync {
    let mu = link.mu_r();
    let r = link.mode().r();
    move |i| if r == 1 { mu * i } else { mu * i * i }
}

pub fn simulate_outage_with<S>(source: &S, link: &LinkBudget<f64>, cfg: &SimConfig) -> Result<SimEstimate>
where
    S: Distribution<f64> + Sync,
{
    let snr = snr_of(link);
    let th = link.gamma_th();
    let mut est = simulate_mean(source, cfg, |i| if snr(i) < th { 1.0 } else { 0.0 })?;
    // binomial form of the standard error
    let p = est.estimate;
    est.std_error = (p * (1.0 - p) / est.n as f64).sqrt();
    Ok(est)
}

pub fn simulate_ber_with<S>(
    source: &S,
    link: &LinkBudget<f64>,
    modulation: Modulation,
    cfg: &SimConfig,
) -> Result<SimEstimate>
where
    S: Distribution<f64> + Sync,
{
    modulation.check_mode(link.mode())?;
    let mp = modulation_params::<f64>(modulation)?;
    let snr = snr_of(link);
    simulate_mean(source, cfg, |i| conditional_ber(&mp, snr(i)))
}

pub fn simulate_capacity_with<S>(source: &S, link: &LinkBudget<f64>, cfg: &SimConfig) -> Result<SimEstimate>
where
    S: Distribution<f64> + Sync,
{
    let snr = snr_of(link);
    let t = tau::<f64>();
    simulate_mean(source, cfg, |i| (t * snr(i)).ln_1p())
}

/// Fraction of fading draws with `μ_r I^r < γ_th`.
pub fn simulate_outage(link: &LinkBudget<f64>, cfg: &SimConfig) -> Result<SimEstimate> {
    simulate_outage_with(&link.model().sampler(), link, cfg)
}

/// Average of the conditional BER over fading draws (no bit-level noise).
pub fn simulate_ber(link: &LinkBudget<f64>, modulation: Modulation, cfg: &SimConfig) -> Result<SimEstimate> {
    simulate_ber_with(&link.model().sampler(), link, modulation, cfg)
}

/// Average of `ln(1 + τγ)` in nats.
pub fn simulate_capacity(link: &LinkBudget<f64>, cfg: &SimConfig) -> Result<SimEstimate> {
    simulate_capacity_with(&link.model().sampler(), link, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::EggParams;
    use crate::performance::{outage, DetectionMode};
    use rand::Rng;

    struct PointMass(f64);

    impl Distribution<f64> for PointMass {
        fn sample<R: Rng + ?Sized>(&self, _: &mut R) -> f64 {
            self.0
        }
    }

    fn row1_link(db: f64) -> LinkBudget<f64> {
        let p = EggParams::new(0.2130, 0.3291, 1.4299, 1.1817, 17.1984).unwrap();
        LinkBudget::at_db(p, DetectionMode::ImDd, db).unwrap()
    }

    #[test]
    fn deterministic_across_chunking_runs() {
        let link = row1_link(20.0);
        let cfg = SimConfig {
            n_samples: 100_003,
            seed: 9,
            chunk_size: 4096,
        };
        let a = simulate_capacity(&link, &cfg).unwrap();
        let b = simulate_capacity(&link, &cfg).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.n, 100_003);
    }

    #[test]
    fn point_mass_gives_kernel_value() {
        let link = LinkBudget::new(
            EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap(),
            DetectionMode::ImDd,
            40.0,
            1.0,
        )
        .unwrap();
        let mp = modulation_params::<f64>(Modulation::Ook).unwrap();
        let est = simulate_ber_with(&PointMass(0.7), &link, Modulation::Ook, &SimConfig::new(1000, 1)).unwrap();
        let gamma = link.mu_r() * 0.49;
        assert!((est.estimate - conditional_ber(&mp, gamma)).abs() < 1e-15);
        assert!(est.std_error < 1e-15);
    }

    #[test]
    fn standard_error_halves_with_four_times_the_draws() {
        let link = row1_link(30.0);
        let a = simulate_capacity(&link, &SimConfig::new(200_000, 3)).unwrap();
        let b = simulate_capacity(&link, &SimConfig::new(800_000, 3)).unwrap();
        let ratio = a.std_error / b.std_error;
        assert!((ratio / 2.0 - 1.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn outage_estimate_near_analytic() {
        let link = row1_link(20.0);
        let est = simulate_outage(&link, &SimConfig::new(1_000_000, 4)).unwrap();
        let exact = outage(&link).unwrap();
        assert!(est.agrees_with(exact, 4.0), "{est:?} vs {exact}");
    }

    #[test]
    fn incompatible_modulation_rejected() {
        let link = row1_link(20.0);
        assert!(simulate_ber(&link, Modulation::Bpsk, &SimConfig::new(10, 0)).is_err());
        assert!(SimConfig::new(0, 0).validate().is_err());
    }
}
