use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::value::RawValue;

use super::{
    float, opt_float, CmdResult, EstimateArgs, EstimateKind, Failure, SampleArgs, EXIT_FAILED,
    EXIT_OK,
};
use crate::haar::{AngleSampler, Sampler, SamplerKind};
use crate::moments::{
    mc_exp_series, mc_trace_ah, mc_trace_power_integral, mc_zonal_splitting, parse_square_matrix,
    DiagonalSpec, McConfig, MomentReport, SeriesReport,
};
use crate::partitions::Partition;
use crate::symfunc::to_f64;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EstimateDoc {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<usize>,
    n: usize,
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<Partition>,
    exact_value: String,
    exact_value_float: Box<RawValue>,
    mc_estimate: Box<RawValue>,
    mc_std_err: Box<RawValue>,
    z_score: Box<RawValue>,
    samples: u64,
    resampled: u64,
    seed: u64,
    sampler: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<SeriesDoc>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SeriesDoc {
    max_degree: usize,
    partial_sum: String,
    value: Box<RawValue>,
    tail_bound: Box<RawValue>,
    terms: Vec<String>,
}

fn diagonal(flag: &str, text: &str) -> Result<DiagonalSpec, Failure> {
    text.parse()
        .map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn check_n(n: Option<usize>, actual: usize) -> Result<(), Failure> {
    match n {
        Some(n) if n != actual => Err(Failure::usage(format!(
            "--n {n} does not match the {actual} eigenvalues given"
        ))),
        _ => Ok(()),
    }
}

fn sampler_name(kind: SamplerKind) -> &'static str {
    match kind {
        SamplerKind::Angles => "angles",
        SamplerKind::GramSchmidt => "gram-schmidt",
    }
}

pub(super) fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> CmdResult {
    let config = McConfig {
        samples: args.samples,
        seed: args.seed,
        threads: args.threads,
        sampler: args.sampler.into(),
    };
    if args.samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let needs_b = || {
        args.b
            .as_deref()
            .ok_or_else(|| Failure::usage("--B is required for this estimate"))
            .and_then(|b| diagonal("B", b))
    };

    let mut doc = EstimateDoc {
        kind: "",
        f: None,
        n: 0,
        a: args.a.clone(),
        b: None,
        kappa: None,
        exact_value: String::new(),
        exact_value_float: float(0.0),
        mc_estimate: float(0.0),
        mc_std_err: float(0.0),
        z_score: float(0.0),
        samples: 0,
        resampled: 0,
        seed: args.seed,
        sampler: sampler_name(config.sampler),
        series: None,
    };

    let report: MomentReport = match args.kind {
        EstimateKind::TracePower | EstimateKind::ZonalSplit | EstimateKind::ExpSeries => {
            let a = diagonal("A", &args.a)?;
            let b = needs_b()?;
            if a.n() != b.n() {
                return Err(Failure::usage(format!(
                    "--A has {} eigenvalues but --B has {}",
                    a.n(),
                    b.n()
                )));
            }
            check_n(args.n, a.n())?;
            doc.n = a.n();
            doc.b = Some(b.to_string());
            doc.a = a.to_string();
            match args.kind {
                EstimateKind::TracePower => {
                    doc.kind = "trace-power";
                    doc.f = Some(args.f);
                    mc_trace_power_integral(&a, &b, args.f, &config)?
                }
                EstimateKind::ZonalSplit => {
                    doc.kind = "zonal-split";
                    let kappa: Partition = args
                        .kappa
                        .as_deref()
                        .ok_or_else(|| Failure::usage("--kappa is required for zonal-split"))?
                        .parse()?;
                    let r = mc_zonal_splitting(&kappa, &a, &b, &config)?;
                    doc.kappa = Some(kappa);
                    r
                }
                _ => {
                    doc.kind = "exp-series";
                    let (series, r) = mc_exp_series(&a, &b, args.max_degree, &config)?;
                    doc.series = Some(series_doc(args.max_degree, &series));
                    r
                }
            }
        }
        EstimateKind::TraceAh => {
            doc.kind = "trace-AH";
            doc.f = Some(args.f);
            let a = parse_square_matrix(&args.a)?;
            check_n(args.n, a.len())?;
            doc.n = a.len();
            mc_trace_ah(&a, args.f, &config)?
        }
    };

    let z = report.z_score();
    doc.exact_value = report.exact_value.to_string();
    doc.exact_value_float = float(to_f64(&report.exact_value));
    doc.mc_estimate = float(report.mc_estimate);
    doc.mc_std_err = float(report.mc_std_err);
    doc.z_score = opt_float(z);
    doc.samples = report.samples;
    doc.resampled = report.resampled;

    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    out.write_all(text.as_bytes())?;

    match (args.max_z, z) {
        (Some(limit), Some(z)) if z.abs() <= limit => Ok(EXIT_OK),
        (Some(_), _) => Ok(EXIT_FAILED),
        (None, _) => Ok(EXIT_OK),
    }
}

fn series_doc(max_degree: usize, s: &SeriesReport) -> SeriesDoc {
    SeriesDoc {
        max_degree,
        partial_sum: s.partial_sum.to_string(),
        value: float(s.value),
        tail_bound: opt_float(s.tail_bound),
        terms: s.terms.iter().map(|t| t.to_string()).collect(),
    }
}

#[derive(Serialize)]
struct SampleDoc {
    n: usize,
    seed: u64,
    sampler: &'static str,
    samples: Vec<SampleEntry>,
}

#[derive(Serialize)]
struct SampleEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    angles: Option<Vec<Box<RawValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflections: Option<Vec<bool>>,
    matrix: Vec<Vec<Box<RawValue>>>,
}

pub(super) fn cmd_sample(args: &SampleArgs, out: &mut dyn Write) -> CmdResult {
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let kind: SamplerKind = args.sampler.into();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let angle_sampler = AngleSampler::new(args.n);
    let sampler = Sampler::new(kind, args.n);
    let matrix_rows = |q: &crate::haar::OrthoMatrix| {
        (0..args.n)
            .map(|i| (0..args.n).map(|j| float(q.get(i, j))).collect())
            .collect()
    };
    let samples = (0..args.count)
        .map(|_| match kind {
            SamplerKind::Angles => {
                let a = angle_sampler.sample_angles(&mut rng);
                let q = crate::haar::realize(&a);
                SampleEntry {
                    angles: Some(a.angles().iter().map(|&t| float(t)).collect()),
                    reflections: Some(a.reflections().to_vec()),
                    matrix: matrix_rows(&q),
                }
            }
            SamplerKind::GramSchmidt => SampleEntry {
                angles: None,
                reflections: None,
                matrix: matrix_rows(&sampler.sample(&mut rng)),
            },
        })
        .collect();
    let doc = SampleDoc {
        n: args.n,
        seed: args.seed,
        sampler: sampler_name(kind),
        samples,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("samples serialize");
    text.push('\n');
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}
