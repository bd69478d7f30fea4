use std::fmt::Write as _;
use std::path::Path;

use eggfit::channel::{EggParams, MixtureModel};
use eggfit::em::{self, EmConfig};
use eggfit::gof::{build_histogram, mse_cdf, r_square, Bins};
use eggfit::montecarlo::{self, SimConfig, SimEstimate};
use eggfit::performance::{self, db_to_linear, DetectionMode, ExactOptions, ExactValue, LinkBudget, Modulation};
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::io::{parse_inline_params, parse_samples, read_bytes, sha256_hex, write_output};
use crate::report::{GofBlock, Report};
use crate::{FitArgs, GofArgs, LinkArgs, Metric, ParamSource, PerfArgs, SimulateArgs, SynthArgs, Unit};

fn read_text(path: &Path) -> CliResult<(String, Vec<u8>)> {
    let bytes = read_bytes(path)?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| CliError::input(format!("{}: not UTF-8 text", path.display())))?;
    Ok((text, bytes))
}

fn load_samples(path: &Path) -> CliResult<(Vec<f64>, String)> {
    let (text, bytes) = read_text(path)?;
    Ok((parse_samples(&text, &path.display().to_string())?, sha256_hex(&bytes)))
}

fn load_report(path: &Path) -> CliResult<Report> {
    let (text, _) = read_text(path)?;
    Report::from_json(&text, &path.display().to_string())
}

fn load_model(src: &ParamSource) -> CliResult<MixtureModel<f64>> {
    match (&src.report, &src.params) {
        (Some(path), _) => Ok(load_report(path)?.model),
        (None, Some(inline)) => Ok(MixtureModel::Egg(parse_inline_params(inline)?)),
        (None, None) => Err(CliError::input("one of --report or --params is required")),
    }
}

fn load_egg(src: &ParamSource) -> CliResult<EggParams<f64>> {
    let model = load_model(src)?;
    model.as_egg().ok_or_else(|| {
        CliError::input(format!(
            "link metrics need an egg or eg model; the report holds {}",
            model.tag()
        ))
    })
}

fn score(samples: &[f64], model: &MixtureModel<f64>, bins: Bins) -> CliResult<GofBlock> {
    let hist = build_histogram(samples, bins)?;
    Ok(GofBlock {
        mse: mse_cdf(samples, model)?,
        r2: r_square(&hist, model)?,
        bins: hist.n_bins(),
    })
}

pub fn fit(a: FitArgs) -> CliResult<()> {
    let (samples, digest) = load_samples(&a.input)?;
    let cfg = EmConfig {
        epsilon: a.eps,
        max_iters: a.max_iter,
        restarts: a.restarts,
        seed: a.seed,
        ..EmConfig::default()
    };
    cfg.validate()?;
    let rep = em::fit(&samples, a.model, &cfg)?;
    for w in &rep.warnings {
        eprintln!("eggfit: warning: {w}");
    }
    let report = Report {
        model: rep.model,
        scintillation_index: rep.scintillation_index,
        loglik: rep.loglik(),
        iterations: rep.iterations,
        converged: rep.converged,
        gof: score(&samples, &rep.model, a.bins)?,
        em_config: cfg,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: digest,
    };
    write_output(a.output.as_deref(), report.to_json().as_bytes())
}

pub fn gof(a: GofArgs) -> CliResult<()> {
    let (samples, _) = load_samples(&a.input)?;
    let report = load_report(&a.report)?;
    let block = score(&samples, &report.model, a.bins)?;
    let mut text = serde_json::to_string_pretty(&block).expect("gof block serializes");
    text.push('\n');
    write_output(a.output.as_deref(), text.as_bytes())
}

pub fn synth(a: SynthArgs) -> CliResult<()> {
    if a.n == 0 {
        return Err(CliError::input("--n must be at least 1"));
    }
    let model = load_model(&a.source)?;
    let sampler = model.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut text = String::with_capacity(a.n * 24 + 16);
    text.push_str("irradiance\n");
    for _ in 0..a.n {
        let _ = writeln!(text, "{:e}", sampler.sample(&mut rng));
    }
    write_output(a.output.as_deref(), text.as_bytes())
}

/// The modulation a BER request resolves to, checked against the detection mode.
fn modulation_for(link: &LinkArgs, metric: Metric) -> CliResult<Option<Modulation>> {
    if metric != Metric::Ber {
        return Ok(None);
    }
    let m = link.modulation.unwrap_or(match link.detection {
        DetectionMode::ImDd => Modulation::Ook,
        DetectionMode::Heterodyne => Modulation::Bpsk,
    });
    m.check_mode(link.detection)?;
    Ok(Some(m))
}

fn links(link: &LinkArgs, params: EggParams<f64>) -> CliResult<Vec<(f64, LinkBudget<f64>)>> {
    link.snr_db
        .points()
        .into_iter()
        .map(|db| {
            Ok((
                db,
                LinkBudget::new(params, link.detection, db_to_linear(db), link.gamma_th)?,
            ))
        })
        .collect()
}

fn unit_scale(metric: Metric, unit: Unit) -> f64 {
    match (metric, unit) {
        (Metric::Capacity, Unit::Bits) => std::f64::consts::LOG2_E,
        _ => 1.0,
    }
}

fn note_fallback(db: f64, v: &ExactValue<f64>) {
    if v.fell_back {
        eprintln!("eggfit: warning: at {db} dB the Fox-H value was unavailable or disagreed with quadrature; reporting quadrature");
    }
}

pub fn perf(a: PerfArgs) -> CliResult<()> {
    let params = load_egg(&a.link.source)?;
    let modulation = modulation_for(&a.link, a.metric)?;
    let opts = ExactOptions {
        primary: a.route,
        ..ExactOptions::default()
    };
    let scale = unit_scale(a.metric, a.link.unit);
    let mut csv = String::from("snr_db,value,kind\n");
    for (db, link) in links(&a.link, params)? {
        let (exact, asym) = match (a.metric, modulation) {
            (Metric::Outage, _) => (performance::outage(&link)?, performance::outage_asymptotic(&link)?),
            (Metric::Ber, Some(m)) => {
                let v = performance::avg_ber(&link, m, &opts)?;
                note_fallback(db, &v);
                (v.value, performance::avg_ber_asymptotic(&link, m)?)
            }
            (Metric::Capacity, _) => {
                let v = performance::ergodic_capacity(&link, &opts)?;
                note_fallback(db, &v);
                (v.value, performance::capacity_asymptotic(&link))
            }
            (Metric::Ber, None) => unreachable!("BER always resolves a modulation"),
        };
        let _ = writeln!(csv, "{db},{:e},exact", exact * scale);
        if a.asymptotic {
            let _ = writeln!(csv, "{db},{:e},asymptotic", asym * scale);
        }
    }
    write_output(a.link.output.as_deref(), csv.as_bytes())
}

pub fn simulate(a: SimulateArgs) -> CliResult<()> {
    let params = load_egg(&a.link.source)?;
    let modulation = modulation_for(&a.link, a.metric)?;
    let cfg = SimConfig::new(a.samples, a.seed);
    cfg.validate()?;
    let scale = unit_scale(a.metric, a.link.unit);
    let mut csv = String::from("snr_db,value,kind,se\n");
    for (db, link) in links(&a.link, params)? {
        let est: SimEstimate = match (a.metric, modulation) {
            (Metric::Outage, _) => montecarlo::simulate_outage(&link, &cfg)?,
            (Metric::Ber, Some(m)) => montecarlo::simulate_ber(&link, m, &cfg)?,
            (Metric::Capacity, _) => montecarlo::simulate_capacity(&link, &cfg)?,
            (Metric::Ber, None) => unreachable!("BER always resolves a modulation"),
        };
        let _ = writeln!(
            csv,
            "{db},{:e},simulated,{:e}",
            est.estimate * scale,
            est.std_error * scale
        );
    }
    write_output(a.link.output.as_deref(), csv.as_bytes())
}
