//! Goodness-of-fit scores: CDF mean-square error and histogram R².

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::MixtureModel;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bin counts chosen by the Freedman–Diaconis rule are clamped to this range.
pub const AUTO_BINS: (usize, usize) = (20, 200);

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalCdf<T> {
    /// `(#samples ≤ x) / n`.
    pub fn eval(&self, x: T) -> T {
        let k = self.sorted.partition_point(|&s| s <= x);
        T::from_usize_lossy(k) / T::from_usize_lossy(self.sorted.len())
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

pub fn empirical_cdf<T: Real>(samples: &[T]) -> Result<EmpiricalCdf<T>> {
    if samples.is_empty() {
        return Err(Error::Config("empirical CDF needs at least one sample".into()));
    }
    Ok(EmpiricalCdf {
        sorted: sorted_finite(samples)?,
    })
}

fn sorted_finite<T: Real>(samples: &[T]) -> Result<Vec<T>> {
    if let Some((index, v)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Data {
            index,
            value: v.as_f64(),
        });
    }
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(s)
}

/// Mean squared distance between model CDF and the empirical CDF over the
/// sorted samples, with the empirical value at the i-th point taken as
/// `(i - 0.5) / N`.
pub fn mse_cdf<T: Real>(samples: &[T], model: &MixtureModel<T>) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::Config("MSE needs at least one sample".into()));
    }
    let sorted = sorted_finite(samples)?;
    let n = T::from_usize_lossy(sorted.len());
    let half = T::lit(0.5);
    let mut acc = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let fe = (T::from_usize_lossy(i + 1) - half) / n;
        let d = model.cdf(x.max(T::zero()))? - fe;
        acc = acc + d * d;
    }
    Ok(acc / n)
}

/// Bin-count selection for [`build_histogram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bins {
    Auto,
    Fixed(usize),
}

impl fmt::Display for Bins {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bins::Auto => f.write_str("auto"),
            Bins::Fixed(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for Bins {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Bins::Auto);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(Bins::Fixed(m)),
            _ => Err(Error::Config(format!(
                "bins must be a positive integer or 'auto', got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub densities: Vec<T>,
    pub counts: Vec<u64>,
}

impl<T: Real> Histogram<T> {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> impl Iterator<Item = T> + '_ {
        self.bin_edges.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5))
    }

    /// CSV with header `edge_lo,edge_hi,density,count`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "edge_lo,edge_hi,density,count")?;
        for (k, w) in self.bin_edges.windows(2).enumerate() {
            writeln!(out, "{:e},{:e},{:e},{}", w[0], w[1], self.densities[k], self.counts[k])?;
        }
        Ok(())
    }
}

/// Freedman–Diaconis bin count, clamped to [`AUTO_BINS`].
pub fn freedman_diaconis<T: Real>(sorted: &[T]) -> usize {
    let n = sorted.len();
    let q = |p: f64| {
        // linear interpolation between order statistics
        let pos = p * (n - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        let f = T::lit(pos - lo as f64);
        sorted[lo] + (sorted[hi] - sorted[lo]) * f
    };
    let iqr = (q(0.75) - q(0.25)).as_f64();
    let range = (sorted[n - 1] - sorted[0]).as_f64();
    let width = 2.0 * iqr / (n as f64).cbrt();
    let raw = if width > 0.0 {
        (range / width).ceil()
    } else {
        f64::INFINITY
    };
    (raw.min(AUTO_BINS.1 as f64) as usize).max(AUTO_BINS.0)
}

/// Equal-width histogram over `[min, max]`, normalized as a density.
pub fn build_histogram<T: Real>(samples: &[T], bins: Bins) -> Result<Histogram<T>> {
    if samples.len() < 2 {
        return Err(Error::Histogram("need at least two samples".into()));
    }
    let sorted = sorted_finite(samples)?;
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if !(hi > lo) {
        return Err(Error::Histogram("all samples are equal".into()));
    }
    let m = match bins {
        Bins::Auto => freedman_diaconis(&sorted),
        Bins::Fixed(0) => return Err(Error::Histogram("bin count must be positive".into())),
        Bins::Fixed(m) => m,
    };
    let width = (hi - lo) / T::from_usize_lossy(m);
    let mut bin_edges: Vec<T> = (0..m).map(|k| lo + width * T::from_usize_lossy(k)).collect();
    bin_edges.push(hi);
    let mut counts = vec![0u64; m];
    for &x in &sorted {
        let k = ((x - lo) / width).floor().to_usize().unwrap_or(m - 1).min(m - 1);
        counts[k] += 1;
    }
    let n = T::from_usize_lossy(sorted.len());
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, w)| T::from_u64(c).expect("count fits") / (n * (w[1] - w[0])))
        .collect();
    Ok(Histogram {
        bin_edges,
        densities,
        counts,
    })
}

/// `1 - SS_err / SS_tot` with the model density evaluated at bin centers.
pub fn r_square<T: Real>(hist: &Histogram<T>, model: &MixtureModel<T>) -> Result<T> {
    let predicted = hist.centers().map(|x| model.pdf(x)).collect::<Result<Vec<T>>>()?;
    r_square_values(&hist.densities, &predicted)
}

/// R² of predicted against measured values.
pub fn r_square_values<T: Real>(measured: &[T], predicted: &[T]) -> Result<T> {
    if measured.is_empty() || measured.len() != predicted.len() {
        return Err(Error::UndefinedScore(
            "measured and predicted lengths differ or are empty".into(),
        ));
    }
    let mean = measured.iter().copied().sum::<T>() / T::from_usize_lossy(measured.len());
    let ss_tot: T = measured.iter().map(|&f| (f - mean) * (f - mean)).sum();
    if !(ss_tot > T::zero()) {
        return Err(Error::UndefinedScore("histogram densities have zero variance".into()));
    }
    let ss_err: T = measured.iter().zip(predicted).map(|(&f, &p)| (f - p) * (f - p)).sum();
    Ok(T::one() - ss_err / ss_tot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::EggParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp};

    fn row1() -> MixtureModel<f64> {
        MixtureModel::Egg(EggParams::new(0.2130, 0.3291, 1.4299, 1.1817, 17.1984).unwrap())
    }

    #[test]
    fn empirical_cdf_steps() {
        let f = empirical_cdf(&[3.0_f64, 1.0, 2.0]).unwrap();
        assert!((f.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(3.5), 1.0);
        assert!(empirical_cdf::<f64>(&[]).is_err());
    }

    #[test]
    fn histogram_edges_and_normalization() {
        let h = build_histogram(&[0.0_f64, 1.0], Bins::Fixed(2)).unwrap();
        assert_eq!(h.bin_edges, vec![0.0, 0.5, 1.0]);
        assert_eq!(h.counts, vec![1, 1]);
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let h = build_histogram(&xs, Bins::Fixed(37)).unwrap();
        let mass: f64 = h
            .densities
            .iter()
            .zip(h.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(h.counts.iter().sum::<u64>(), 1000);
        assert!(matches!(
            build_histogram(&[2.0_f64, 2.0, 2.0], Bins::Auto),
            Err(Error::Histogram(_))
        ));
    }

    #[test]
    fn auto_bins_for_exponential_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = Exp::new(1.0).unwrap();
        let xs: Vec<f64> = (0..100_000).map(|_| e.sample(&mut rng)).collect();
        let h = build_histogram(&xs, Bins::Auto).unwrap();
        assert!((AUTO_BINS.0..=AUTO_BINS.1).contains(&h.n_bins()));
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // independent evaluation of the rule from numpy-style quantiles
        let q = |p: f64| {
            let pos = p * (sorted.len() - 1) as f64;
            let (i, f) = (pos.floor() as usize, pos.fract());
            sorted[i] * (1.0 - f) + sorted[i + 1] * f
        };
        let width = 2.0 * (q(0.75) - q(0.25)) / (sorted.len() as f64).powf(1.0 / 3.0);
        let expect = (((sorted[sorted.len() - 1] - sorted[0]) / width).ceil() as usize).clamp(20, 200);
        assert_eq!(h.n_bins(), expect);
    }

    #[test]
    fn r_square_limits() {
        let m = [1.0_f64, 2.0, 4.0, 3.0];
        assert_eq!(r_square_values(&m, &m).unwrap(), 1.0);
        let mean = [2.5_f64; 4];
        assert!(r_square_values(&m, &mean).unwrap().abs() < 1e-15);
        assert!(matches!(
            r_square_values(&[1.0_f64, 1.0], &[1.0, 2.0]),
            Err(Error::UndefinedScore(_))
        ));
    }

    #[test]
    fn mse_zero_when_model_matches_plotting_positions() {
        // an exponential with lambda = 1 has F(x) = 1 - e^{-x}; put samples at
        // the inverse of the plotting positions
        let n = 50;
        let xs: Vec<f64> = (1..=n).map(|i| -(1.0 - (i as f64 - 0.5) / n as f64).ln()).collect();
        let m = MixtureModel::Egg(EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap());
        assert!(mse_cdf(&xs, &m).unwrap() < 1e-28);
    }

    #[test]
    fn self_fit_scores() {
        let m = row1();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = m.sampler();
        let xs: Vec<f64> = (0..100_000).map(|_| s.sample(&mut rng)).collect();
        let h = build_histogram(&xs, Bins::Fixed(50)).unwrap();
        let r2 = r_square(&h, &m).unwrap();
        let mse = mse_cdf(&xs, &m).unwrap();
        assert!(r2 > 0.97 && r2 <= 1.0, "{r2}");
        assert!(mse < 5e-5, "{mse}");
        let EggParams { omega, lambda, a, b, c } = m.as_egg().unwrap();
        let off = MixtureModel::Egg(EggParams::new(omega, lambda, a, 2.0 * b, c).unwrap());
        assert!(r_square(&h, &off).unwrap() < r2);
        assert!(mse_cdf(&xs, &off).unwrap() > mse);
    }

    #[test]
    fn csv_export() {
        let h = build_histogram(&[0.0_f64, 1.0, 1.0], Bins::Fixed(2)).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "edge_lo,edge_hi,density,count");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].ends_with(",2"));
    }

    #[test]
    fn bins_parse() {
        assert_eq!("auto".parse::<Bins>().unwrap(), Bins::Auto);
        assert_eq!("50".parse::<Bins>().unwrap(), Bins::Fixed(50));
        assert!("0".parse::<Bins>().is_err());
        assert!("x".parse::<Bins>().is_err());
    }
}
