mod common;

use common::{rel, row1, salty_165, strong};
use eggfit::channel::EggParams;
use eggfit::montecarlo::{simulate_ber, simulate_capacity, simulate_outage, SimConfig};
use eggfit::performance::{
    avg_ber_quadrature, capacity_quadrature, outage, snr_cdf, DetectionMode, LinkBudget, Modulation,
};
use eggfit::special::QuadratureConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quad() -> QuadratureConfig<f64> {
    QuadratureConfig::relative(1e-10)
}

#[test]
fn outage_marker_at_sixty_db() {
    let link = LinkBudget::at_db(strong().params(), DetectionMode::ImDd, 60.0).unwrap();
    let est = simulate_outage(&link, &SimConfig::new(10_000_000, 60)).unwrap();
    let exact = outage(&link).unwrap();
    assert!(est.agrees_with(exact, 3.0), "{est:?} vs {exact}");
    assert!(rel(est.estimate, 1.0597e-2) < 0.05, "{}", est.estimate);
}

#[test]
fn ook_ber_marker_at_forty_db() {
    let link = LinkBudget::at_db(salty_165().params(), DetectionMode::ImDd, 40.0).unwrap();
    let est = simulate_ber(&link, Modulation::Ook, &SimConfig::new(10_000_000, 40)).unwrap();
    let exact = avg_ber_quadrature(&link, Modulation::Ook, &quad()).unwrap();
    assert!(est.agrees_with(exact, 3.0), "{est:?} vs {exact}");
    assert!(rel(est.estimate, 2.700660e-2) < 0.05, "{}", est.estimate);
}

#[test]
fn ook_ber_tracks_quadrature_over_snr() {
    let params = salty_165().params();
    let at30 = LinkBudget::at_db(params, DetectionMode::ImDd, 30.0).unwrap();
    let est = simulate_ber(&at30, Modulation::Ook, &SimConfig::new(10_000_000, 30)).unwrap();
    let exact = avg_ber_quadrature(&at30, Modulation::Ook, &quad()).unwrap();
    assert!(rel(est.estimate, exact) < 5e-3, "{est:?} vs {exact}");
    for k in 0..10 {
        let link = LinkBudget::at_db(params, DetectionMode::ImDd, 6.0 * k as f64).unwrap();
        let est = simulate_ber(&link, Modulation::Ook, &SimConfig::new(1_000_000, k)).unwrap();
        let exact = avg_ber_quadrature(&link, Modulation::Ook, &quad()).unwrap();
        assert!(est.agrees_with(exact, 3.0), "{} dB: {est:?} vs {exact}", 6 * k);
    }
}

#[test]
fn capacity_marker_at_thirty_db() {
    let link = LinkBudget::at_db(row1().params(), DetectionMode::ImDd, 30.0).unwrap();
    let est = simulate_capacity(&link, &SimConfig::new(10_000_000, 7)).unwrap();
    let exact = capacity_quadrature(&link, &quad()).unwrap();
    assert!(est.agrees_with(exact, 3.0), "{est:?} vs {exact}");
    assert!(rel(est.estimate, exact) < 5e-3);
    let z = (5.5646 - exact) / est.std_error;
    assert!(
        z.abs() <= 3.0,
        "marker lies {z:.2} standard errors from the exact value"
    );
}

#[test]
fn random_links_agree_with_analytic() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..20u64 {
        let p = EggParams::new(
            rng.gen_range(0.05..0.9),
            rng.gen_range(0.1..1.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..10.0),
        )
        .unwrap();
        let mode = if k % 2 == 0 {
            DetectionMode::ImDd
        } else {
            DetectionMode::Heterodyne
        };
        let link = LinkBudget::at_db(p, mode, rng.gen_range(0.0..40.0)).unwrap();
        let cfg = SimConfig::new(400_000, 100 + k);
        let o = simulate_outage(&link, &cfg).unwrap();
        let exact = snr_cdf(&link, link.gamma_th()).unwrap();
        assert!(o.agrees_with(exact, 3.0), "link {k} outage: {o:?} vs {exact}");
        let c = simulate_capacity(&link, &cfg).unwrap();
        let exact = capacity_quadrature(&link, &quad()).unwrap();
        assert!(c.agrees_with(exact, 3.0), "link {k} capacity: {c:?} vs {exact}");
    }
}

#[test]
fn three_sigma_coverage() {
    let link = LinkBudget::at_db(row1().params(), DetectionMode::ImDd, 15.0).unwrap();
    let o = outage(&link).unwrap();
    let b = avg_ber_quadrature(&link, Modulation::Ook, &quad()).unwrap();
    let c = capacity_quadrature(&link, &quad()).unwrap();
    let mut hits = [0u32; 3];
    for seed in 0..100 {
        let cfg = SimConfig::new(100_000, 5000 + seed);
        hits[0] += simulate_outage(&link, &cfg).unwrap().agrees_with(o, 3.0) as u32;
        hits[1] += simulate_ber(&link, Modulation::Ook, &cfg).unwrap().agrees_with(b, 3.0) as u32;
        hits[2] += simulate_capacity(&link, &cfg).unwrap().agrees_with(c, 3.0) as u32;
    }
    assert!(hits.iter().all(|&h| h >= 97), "{hits:?}");
}

#[test]
fn zero_threshold_never_outage() {
    let link = LinkBudget::new(row1().params(), DetectionMode::ImDd, 100.0, 1e-300).unwrap();
    let est = simulate_outage(&link, &SimConfig::new(100_000, 1)).unwrap();
    assert_eq!(est.estimate, 0.0);
    assert_eq!(est.std_error, 0.0);
}
