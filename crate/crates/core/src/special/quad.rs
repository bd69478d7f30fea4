//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! Infinite ends are mapped onto `[0, 1)` with `x = a + s / (1 - s)`.
//! All segments share one priority queue keyed by error estimate, so
//! breakpoints only seed the initial partition.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerances and subdivision budget for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureConfig<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !(self.rel_tol > T::zero()) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    /// Tight relative tolerance with a negligible absolute floor, for
    /// integrals whose value may be many orders of magnitude below one.
    pub fn relative(rel_tol: T) -> Self {
        Self {
            abs_tol: T::min_positive_value(),
            rel_tol,
            max_subdivisions: 4000,
        }
    }
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-10),
            max_subdivisions: 2000,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_278,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Map<T> {
    Finite,
    /// x = origin + s / (1 - s)
    Upper(T),
    /// x = origin - s / (1 - s)
    Lower(T),
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    map: Map<T>,
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub error: T,
}

/// Integrates `f` over `(lo, hi)`; either end may be infinite.
pub fn adaptive_quad<T, F>(f: F, lo: T, hi: T, cfg: &QuadratureConfig<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    adaptive_quad_points(f, &[lo, hi], cfg)
}

/// Integrates `f` over `(points[0], points[last])`, seeding the partition
/// with the interior breakpoints. Unsorted or duplicate points are tolerated.
pub fn adaptive_quad_points<T, F>(f: F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate(f, points, cfg).map(|e| e.value)
}

/// Same as [`adaptive_quad_points`] but also returns the error bound.
pub fn integrate<T, F>(f: F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<QuadEstimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Config("need at least two integration limits".into()));
    }
    let mut pts: Vec<T> = points.iter().copied().filter(|p| !p.is_nan()).collect();
    let (first, last) = (points[0], points[points.len() - 1]);
    if first.is_nan() || last.is_nan() {
        return Err(Error::Config("NaN integration limit".into()));
    }
    let flip = last < first;
    let (lo, hi) = if flip { (last, first) } else { (first, last) };
    pts.retain(|&p| p >= lo && p <= hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    pts.dedup();

    let mut heap = BinaryHeap::new();
    let mut settled = QuadEstimate {
        value: T::zero(),
        error: T::zero(),
    };
    if pts.len() < 2 {
        return Ok(settled);
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg = match (a.is_infinite(), b.is_infinite()) {
            (false, false) => (Map::Finite, a, b),
            (false, true) => (Map::Upper(a), T::zero(), T::one()),
            (true, false) => (Map::Lower(b), T::zero(), T::one()),
            (true, true) => {
                // both infinite: split at zero
                heap.push(kronrod(&f, Map::Lower(T::zero()), T::zero(), T::one())?);
                (Map::Upper(T::zero()), T::zero(), T::one())
            }
        };
        heap.push(kronrod(&f, seg.0, seg.1, seg.2)?);
    }

    let total = |heap: &BinaryHeap<Segment<T>>, settled: &QuadEstimate<T>| {
        heap.iter()
            .fold((settled.value, settled.error), |(v, e), s| (v + s.value, e + s.error))
    };

    let mut subdivisions = heap.len();
    loop {
        let (value, error) = total(&heap, &settled);
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol || heap.is_empty() {
            let value = if flip { -value } else { value };
            return Ok(QuadEstimate { value, error });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                estimate: if flip { -value } else { value }.as_f64(),
                error_bound: error.as_f64(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = (worst.lo + worst.hi) * T::lit(0.5);
        let width = worst.hi - worst.lo;
        if width <= T::epsilon() * T::lit(64.0) * (worst.lo.abs() + worst.hi.abs()).max(T::min_positive_value()) {
            // cannot bisect any further; keep its contribution as is
            settled.value = settled.value + worst.value;
            settled.error = settled.error + worst.error;
            continue;
        }
        heap.push(kronrod(&f, worst.map, worst.lo, mid)?);
        heap.push(kronrod(&f, worst.map, mid, worst.hi)?);
        subdivisions += 1;
    }
}

fn eval<T: Real, F: Fn(T) -> T>(f: &F, map: Map<T>, s: T) -> Result<T> {
    let v = match map {
        Map::Finite => f(s),
        Map::Upper(a) => {
            let d = T::one() - s;
            let x = a + s / d;
            if x.is_infinite() {
                T::zero()
            } else {
                f(x) / (d * d)
            }
        }
        Map::Lower(b) => {
            let d = T::one() - s;
            let x = b - s / d;
            if x.is_infinite() {
                T::zero()
            } else {
                f(x) / (d * d)
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            what: "integrand",
            value: s.as_f64(),
        })
    }
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, map: Map<T>, lo: T, hi: T) -> Result<Segment<T>> {
    let half = T::lit(0.5);
    let center = (lo + hi) * half;
    let half_len = (hi - lo) * half;
    let fc = eval(f, map, center)?;
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = T::zero();
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = eval(f, map, center - dx)?;
        let f2 = eval(f, map, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half_len.abs();
    let value = res_k * half_len;
    res_abs = res_abs * scale;
    res_asc = res_asc * scale;
    let mut error = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && error != T::zero() {
        error = res_asc * T::one().min((T::lit(200.0) * error / res_asc).powf(T::lit(1.5)));
    }
    let eps50 = T::epsilon() * T::lit(50.0);
    if res_abs > T::min_positive_value() / eps50 {
        error = error.max(eps50 * res_abs);
    }
    Ok(Segment {
        map,
        lo,
        hi,
        value,
        error,
    })
}
